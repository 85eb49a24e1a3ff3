#include "otr/cache.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include "otr/errors.hpp"

namespace otr {

namespace {

constexpr char kMagic[4] = {'O', 'T', 'R', 'C'};

void put_varint(std::string& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

std::uint64_t zigzag(std::int64_t v) { return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63); }
std::int64_t unzigzag(std::uint64_t v) { return static_cast<std::int64_t>(v >> 1) ^ -static_cast<std::int64_t>(v & 1); }

void put_bytes(std::string& out, const std::vector<unsigned char>& bytes) {
  put_varint(out, bytes.size());
  out.append(bytes.begin(), bytes.end());
}

class Reader {
 public:
  explicit Reader(const std::string& s) : s_(s) {}

  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      const auto b = static_cast<unsigned char>(byte());
      v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
      if (!(b & 0x80)) return v;
    }
    throw IoError("cache record: varint too long");
  }

  char byte() {
    if (pos_ >= s_.size()) throw IoError("cache record: truncated");
    return s_[pos_++];
  }

  std::string take(std::uint64_t length) {
    if (length > s_.size() - pos_) throw IoError("cache record: truncated");
    std::string r = s_.substr(pos_, length);
    pos_ += length;
    return r;
  }

  bool done() const { return pos_ == s_.size(); }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_record(const CorrelatorKey& key, const Laurent& value) {
  std::string out(kMagic, 4);
  put_varint(out, kCacheFormatVersion);
  put_varint(out, static_cast<std::uint64_t>(key.twice_genus));
  put_varint(out, static_cast<std::uint64_t>(key.n));
  const std::string text = value.to_string();
  put_varint(out, text.size());
  out += text;
  put_varint(out, value.terms().size());
  for (const auto& [e, c] : value.terms()) {
    for (int x : e) put_varint(out, zigzag(x));
    out.push_back(static_cast<char>(c.sign() == 0 ? 0 : c.sign() > 0 ? 1 : 2));
    put_bytes(out, magnitude_bytes(c.numerator()));
    put_bytes(out, magnitude_bytes(c.denominator()));
  }
  return out;
}

Laurent decode_record(const CorrelatorKey& key, const std::string& bytes) {
  Reader in(bytes);
  if (in.take(4) != std::string(kMagic, 4)) throw IoError("cache record: bad magic");
  if (in.varint() != kCacheFormatVersion) throw IoError("cache record: unsupported version");
  const auto tg = in.varint();
  const auto n = in.varint();
  if (tg != static_cast<std::uint64_t>(key.twice_genus) || n != static_cast<std::uint64_t>(key.n))
    throw IoError("cache record: key mismatch for " + key.to_string());
  const std::string text = in.take(in.varint());
  const auto count = in.varint();
  Laurent value(correlator_variables(key.n));
  for (std::uint64_t t = 0; t < count; ++t) {
    Exponents e(static_cast<std::size_t>(key.n));
    for (auto& x : e) x = static_cast<int>(unzigzag(in.varint()));
    const char sign = in.byte();
    const std::string num = in.take(in.varint());
    const std::string den = in.take(in.varint());
    mpz_class p = from_magnitude_bytes(std::vector<unsigned char>(num.begin(), num.end()));
    const mpz_class q = from_magnitude_bytes(std::vector<unsigned char>(den.begin(), den.end()));
    if (sign == 2) p = -p;
    if (q == 0 || sign == 0 || sign > 2) throw IoError("cache record: bad coefficient");
    const Rational c = Rational::from_parts(p, q);
    if (!c.is_canonical() || c.numerator() != p || c.denominator() != q) throw IoError("cache record: coefficient not in lowest terms");
    value.add_term(e, c);
  }
  if (!in.done()) throw IoError("cache record: trailing bytes");
  if (value.terms().size() != count || value.to_string() != text)
    throw IoError("cache record: text does not match terms for " + key.to_string());
  return value;
}

std::string resolve_cache_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  const char* env = std::getenv(kCacheDirEnvironment);
  return env ? std::string(env) : std::string();
}

CorrelatorCache::CorrelatorCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create cache directory " + dir_.string() + ": " + ec.message());
}

std::filesystem::path CorrelatorCache::path_for(const CorrelatorKey& key) const {
  return dir_ / ("W_" + std::to_string(key.twice_genus) + "_" + std::to_string(key.n) + ".otrc");
}

std::optional<Laurent> CorrelatorCache::load(const CorrelatorKey& key) const {
  const auto path = path_for(key);
  std::ifstream file(path, std::ios::binary);
  if (!file) return std::nullopt;
  std::ostringstream buffer;
  buffer << file.rdbuf();
  if (file.bad()) throw IoError("cannot read " + path.string());
  return decode_record(key, buffer.str());
}

void CorrelatorCache::save(const CorrelatorKey& key, const Laurent& value) const {
  const auto path = path_for(key);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    const std::string bytes = encode_record(key, value);
    file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!file) throw IoError("cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace otr
