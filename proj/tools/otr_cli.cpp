// Command-line front end; talks to the engine only through the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "otr.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

int exit_code(otr_status s) {
  switch (s) {
    case OTR_OK:
      return 0;
    case OTR_VERIFICATION_FAILED:
      return 1;
    case OTR_CONTRACT_ERROR:
      return 2;
    case OTR_IO_ERROR:
      return 3;
    default:
      return 4;
  }
}

int emit(const char* text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::fputs(text, stdout);
    return std::fflush(stdout) == 0 ? 0 : kExitIo;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  file << text;
  file.close();
  if (!file) {
    std::cerr << "error: cannot write " << path << "\n";
    return kExitIo;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact topological recursion for open intersection numbers"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(
      "Exit codes: 0 success, 1 verification failure, 2 usage or contract error, 3 I/O error, 4 internal error.\n"
      "Environment: OTR_CACHE_DIR sets the correlator cache directory when --cache-dir is not given.");

  int budget = 8;
  int threads = 1;
  int order = 2;
  int t_degree = 0;
  std::string cache_dir;
  std::string q_mode = "off";
  std::string format = "text";
  app.add_option("--budget", budget, "Largest 4g+n computed")->capture_default_str()->check(CLI::NonNegativeNumber);
  app.add_option("--threads", threads, "Worker threads; output does not depend on it")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--order", order, "hbar order for the quantum curve check")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app.add_option("--t-degree", t_degree, "t-series truncation for the master equations (0 derives it)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--cache-dir", cache_dir, "Directory for cached correlators (overrides OTR_CACHE_DIR)");
  app.add_option("--q", q_mode, "Q mode: off, symbolic, or a rational p/q (experimental)")->capture_default_str();
  app.add_option("--format", format, "Output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "json", "csv"}));

  auto* correlator = app.add_subcommand("correlator", "Print one correlator W_{g,n}");
  std::string genus;
  int n = 0;
  bool allow_unstable = false;
  correlator->add_option("--g", genus, "Genus as an integer or p/2")->required();
  correlator->add_option("--n", n, "Number of points")->required()->check(CLI::PositiveNumber);
  correlator->add_flag("--allow-unstable", allow_unstable, "Print unstable keys from the base table");

  auto* check = app.add_subcommand("check", "Run a verification suite");
  std::string suite;
  check->add_option("suite", suite, "constraints, master, dual, quantum-curve, q-symmetry, symmetry, homogeneity or all")
      ->required()
      ->check(CLI::IsMember(
          {"constraints", "master", "dual", "quantum-curve", "q-symmetry", "symmetry", "homogeneity", "all"}));

  auto* table = app.add_subcommand("table", "Tabulate every nonzero intersection number within budget");
  std::string table_out;
  table->add_option("-o,--output", table_out, "Write to a file instead of stdout");

  auto* exporter = app.add_subcommand("export", "Export computed data");
  std::string what = "correlators";
  std::string export_out;
  exporter->add_option("--what", what, "correlators, table, q-correlators or q-symmetry")
      ->capture_default_str()
      ->check(CLI::IsMember({"correlators", "table", "q-correlators", "q-symmetry"}));
  exporter->add_option("-o,--output", export_out, "Write to a file instead of stdout");

  app.set_version_flag("--version", std::string(otr_version()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  otr_config config;
  otr_config_init(&config);
  config.budget = budget;
  config.threads = threads;
  config.hbar_order = order;
  config.t_degree = t_degree;
  config.cache_dir = cache_dir.c_str();
  config.q_mode = q_mode.c_str();
  config.format = format == "json" ? OTR_FORMAT_JSON : format == "csv" ? OTR_FORMAT_CSV : OTR_FORMAT_TEXT;

  otr_engine* engine = nullptr;
  otr_status status = otr_engine_create(&config, &engine);
  if (status != OTR_OK) {
    std::cerr << "error: " << otr_engine_last_error(nullptr) << "\n";
    return exit_code(status);
  }

  char* out = nullptr;
  std::string path;
  if (*correlator) {
    status = otr_correlator(engine, genus.c_str(), n, allow_unstable ? 1 : 0, &out);
  } else if (*check) {
    status = otr_check(engine, suite.c_str(), &out);
  } else if (*table) {
    status = otr_table(engine, &out);
    path = table_out;
  } else {
    status = otr_export(engine, what.c_str(), &out);
    path = export_out;
  }

  int code = exit_code(status);
  if (out) {
    const int written = emit(out, path);
    if (written != 0 && code == 0) code = written;
    otr_string_free(out);
  }
  if (status != OTR_OK) {
    const char* message = otr_engine_last_error(engine);
    if (message && *message) std::cerr << (status == OTR_VERIFICATION_FAILED ? "failed: " : "error: ") << message << "\n";
  }
  otr_engine_destroy(engine);
  return code;
}
