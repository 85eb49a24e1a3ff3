#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "otr/correlator.hpp"

namespace otr {

inline constexpr int kCacheFormatVersion = 1;
inline constexpr const char* kCacheDirEnvironment = "OTR_CACHE_DIR";

// Record layout, all integers as LEB128 varints:
//   "OTRC" version twice_genus n text_length text term_count
//   per term: n zigzag exponents, sign byte (0 zero, 1 positive, 2 negative),
//             numerator length + big-endian bytes, denominator length + big-endian bytes
std::string encode_record(const CorrelatorKey& key, const Laurent& value);
// Throws IoError on any malformed, mismatched or self-inconsistent record.
Laurent decode_record(const CorrelatorKey& key, const std::string& bytes);

// The flag value if set, else $OTR_CACHE_DIR, else empty (no cache).
std::string resolve_cache_dir(const std::string& flag_value);

// One file per key under a directory.
class CorrelatorCache {
 public:
  explicit CorrelatorCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path_for(const CorrelatorKey& key) const;

  // nullopt if absent. A damaged record is reported by IoError.
  std::optional<Laurent> load(const CorrelatorKey& key) const;
  // Writes through a temporary file and a rename.
  void save(const CorrelatorKey& key, const Laurent& value) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace otr
