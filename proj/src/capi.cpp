#include "otr.h"

#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>

#include "otr/engine.hpp"
#include "otr/errors.hpp"

struct otr_engine {
  otr::Engine engine;
  std::string last_error;
};

namespace {

thread_local std::string create_error;

char* duplicate(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

otr_status guarded(std::string& error, const std::function<otr_status()>& body) {
  try {
    error.clear();
    return body();
  } catch (const otr::InconsistencyError& e) {
    error = e.what();
    return OTR_VERIFICATION_FAILED;
  } catch (const otr::StructuralError& e) {
    error = e.what();
    return OTR_CONTRACT_ERROR;
  } catch (const otr::ContractError& e) {
    error = e.what();
    return OTR_CONTRACT_ERROR;
  } catch (const otr::IoError& e) {
    error = e.what();
    return OTR_IO_ERROR;
  } catch (const std::exception& e) {
    error = std::string("internal error: ") + e.what();
    return OTR_INTERNAL_ERROR;
  } catch (...) {
    error = "internal error";
    return OTR_INTERNAL_ERROR;
  }
}

otr_status produce(otr_engine* engine, char** out, const std::function<std::string()>& make) {
  if (!engine || !out) return OTR_CONTRACT_ERROR;
  *out = nullptr;
  return guarded(engine->last_error, [&] {
    *out = duplicate(make());
    return *out ? OTR_OK : OTR_INTERNAL_ERROR;
  });
}

}  // namespace

extern "C" {

void otr_config_init(otr_config* config) {
  if (!config) return;
  config->budget = 8;
  config->t_degree = 0;
  config->cache_dir = nullptr;
  config->format = OTR_FORMAT_TEXT;
  config->q_mode = nullptr;
  config->hbar_order = 2;
  config->threads = 1;
}

otr_status otr_engine_create(const otr_config* config, otr_engine** out) {
  if (!out) return OTR_CONTRACT_ERROR;
  *out = nullptr;
  return guarded(create_error, [&] {
    otr_config defaults;
    otr_config_init(&defaults);
    const otr_config& c = config ? *config : defaults;
    otr::RunConfig run;
    run.budget = c.budget;
    run.t_degree = c.t_degree;
    run.cache_dir = c.cache_dir ? c.cache_dir : "";
    switch (c.format) {
      case OTR_FORMAT_TEXT:
        run.format = otr::OutputFormat::Text;
        break;
      case OTR_FORMAT_JSON:
        run.format = otr::OutputFormat::Json;
        break;
      case OTR_FORMAT_CSV:
        run.format = otr::OutputFormat::Csv;
        break;
      default:
        throw otr::ContractError("unknown output format");
    }
    run.q_mode = otr::parse_q_mode(c.q_mode ? c.q_mode : "", &run.q_value);
    run.hbar_order = c.hbar_order;
    run.threads = c.threads;
    *out = new otr_engine{otr::Engine(run), {}};
    return OTR_OK;
  });
}

void otr_engine_destroy(otr_engine* engine) { delete engine; }

const char* otr_engine_last_error(const otr_engine* engine) {
  return engine ? engine->last_error.c_str() : create_error.c_str();
}

otr_status otr_correlator(otr_engine* engine, const char* genus, int n, int allow_unstable, char** out) {
  return produce(engine, out, [&] {
    if (!genus) throw otr::ContractError("genus is required");
    return engine->engine.correlator(otr::CorrelatorKey::parse(genus, n), allow_unstable != 0);
  });
}

otr_status otr_check(otr_engine* engine, const char* suite, char** out) {
  bool passed = true;
  const otr_status s = produce(engine, out, [&] {
    if (!suite) throw otr::ContractError("suite is required");
    const auto report = engine->engine.check(suite);
    passed = report.passed;
    if (!passed) engine->last_error = report.counterexample;
    return report.to_string();
  });
  if (s == OTR_OK && !passed) return OTR_VERIFICATION_FAILED;
  return s;
}

otr_status otr_table(otr_engine* engine, char** out) {
  return produce(engine, out, [&] { return engine->engine.render_table(); });
}

otr_status otr_export(otr_engine* engine, const char* what, char** out) {
  return produce(engine, out, [&] {
    if (!what) throw otr::ContractError("export kind is required");
    return engine->engine.export_data(what);
  });
}

void otr_string_free(char* s) { std::free(s); }

const char* otr_status_string(otr_status status) {
  switch (status) {
    case OTR_OK:
      return "ok";
    case OTR_VERIFICATION_FAILED:
      return "verification failed";
    case OTR_CONTRACT_ERROR:
      return "contract error";
    case OTR_IO_ERROR:
      return "I/O error";
    case OTR_INTERNAL_ERROR:
      return "internal error";
  }
  return "unknown status";
}

const char* otr_version(void) { return "1.0.0"; }

}  // extern "C"
