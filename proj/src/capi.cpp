#include "fracbranch/fracbranch.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <string>

#include "fracbranch/config.hpp"
#include "fracbranch/driver.hpp"
#include "fracbranch/errors.hpp"
#include "fracbranch/selftest.hpp"
#include "fracbranch/special_functions.hpp"
#include "fracbranch/wellposed.hpp"

struct fb_config {
  fracbranch::RunConfig config;
};

struct fb_profile {
  fracbranch::ProfileResult result;
};

namespace {

thread_local std::string last_error;

fb_status fail(fb_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Maps exceptions from the C++ core onto status codes.
template <class Fn>
fb_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return FB_OK;
  } catch (const fracbranch::ConfigError& e) {
    return fail(FB_ERR_CONFIG, e.what());
  } catch (const fracbranch::LimitError& e) {
    return fail(FB_ERR_LIMIT, e.what());
  } catch (const std::domain_error& e) {
    return fail(FB_ERR_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(FB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(FB_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FB_ERR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define FB_REQUIRE(cond, msg) \
  if (!(cond)) return fail(FB_ERR_INVALID_ARGUMENT, msg)

}  // namespace

extern "C" {

const char* fb_version(void) { return "0.1.0"; }

const char* fb_last_error(void) { return last_error.c_str(); }

void fb_string_free(char* s) { std::free(s); }

fb_status fb_config_load_file(const char* path, fb_config** out) {
  FB_REQUIRE(path && out, "fb_config_load_file: null argument");
  return guarded([&] { *out = new fb_config{fracbranch::load_config(path)}; });
}

fb_status fb_config_load_string(const char* json, fb_config** out) {
  FB_REQUIRE(json && out, "fb_config_load_string: null argument");
  return guarded([&] { *out = new fb_config{fracbranch::parse_config(json)}; });
}

void fb_config_free(fb_config* config) { delete config; }

fb_status fb_config_set_samples(fb_config* config, uint64_t samples) {
  FB_REQUIRE(config, "fb_config_set_samples: null config");
  if (samples == 0) return fail(FB_ERR_CONFIG, "samples: must be at least 1");
  config->config.samples = samples;
  return FB_OK;
}

fb_status fb_config_set_seed(fb_config* config, uint64_t seed) {
  FB_REQUIRE(config, "fb_config_set_seed: null config");
  config->config.seed = seed;
  return FB_OK;
}

fb_status fb_config_set_workers(fb_config* config, unsigned workers) {
  FB_REQUIRE(config, "fb_config_set_workers: null config");
  config->config.workers = fracbranch::resolve_workers(workers);
  return FB_OK;
}

fb_status fb_config_set_output(fb_config* config, const char* path) {
  FB_REQUIRE(config && path, "fb_config_set_output: null argument");
  config->config.output = path;
  return FB_OK;
}

const char* fb_config_output(const fb_config* config) { return config ? config->config.output.c_str() : ""; }

fb_status fb_solve(const fb_config* config, fb_profile** out) {
  FB_REQUIRE(config && out, "fb_solve: null argument");
  return guarded([&] {
    auto profile = std::make_unique<fb_profile>();
    profile->result = fracbranch::run_profile(config->config);
    if (!config->config.output.empty()) fracbranch::write_csv(profile->result, config->config.output);
    *out = profile.release();
  });
}

void fb_profile_free(fb_profile* profile) { delete profile; }

size_t fb_profile_size(const fb_profile* profile) { return profile ? profile->result.rows.size() : 0; }

fb_status fb_profile_get_row(const fb_profile* profile, size_t index, fb_profile_row* out) {
  FB_REQUIRE(profile && out, "fb_profile_get_row: null argument");
  FB_REQUIRE(index < profile->result.rows.size(), "fb_profile_get_row: index out of range");
  const auto& row = profile->result.rows[index];
  out->radius = row.radius;
  out->estimate = row.estimate;
  out->std_error = row.std_error;
  out->n = row.n;
  out->truncation_fraction = row.truncation_fraction;
  out->has_exact = row.exact.has_value() ? 1 : 0;
  out->exact = row.exact.value_or(0.0);
  out->abs_error = row.abs_error.value_or(0.0);
  return FB_OK;
}

fb_status fb_profile_csv(const fb_profile* profile, char** out) {
  FB_REQUIRE(profile && out, "fb_profile_csv: null argument");
  return guarded([&] { *out = copy_string(fracbranch::format_csv(profile->result)); });
}

fb_status fb_profile_write_csv(const fb_profile* profile, const char* path) {
  FB_REQUIRE(profile && path, "fb_profile_write_csv: null argument");
  const fb_status status = guarded([&] { fracbranch::write_csv(profile->result, path); });
  // Any failure while writing is an I/O failure from the caller's view.
  return status == FB_ERR_INTERNAL ? FB_ERR_IO : status;
}

fb_status fb_profile_summary(const fb_profile* profile, char** out) {
  FB_REQUIRE(profile && out, "fb_profile_summary: null argument");
  return guarded([&] { *out = copy_string(fracbranch::summary_line(profile->result)); });
}

fb_status fb_check(const fb_config* config, char** json_out) {
  FB_REQUIRE(config && json_out, "fb_check: null argument");
  return guarded([&] {
    const auto report = fracbranch::run_check(config->config);
    *json_out = copy_string(fracbranch::report_to_json(report));
  });
}

fb_status fb_selftest(char** report_out, int* passed) {
  FB_REQUIRE(report_out && passed, "fb_selftest: null argument");
  return guarded([&] {
    std::string text;
    bool all = true;
    for (const auto& check : fracbranch::run_selftest()) {
      text += (check.passed ? "PASS  " : "FAIL  ") + check.name + "  (" + check.detail + ")\n";
      all = all && check.passed;
    }
    *passed = all ? 1 : 0;
    *report_out = copy_string(text);
  });
}

fb_status fb_gamma(double x, double* out) {
  FB_REQUIRE(out, "fb_gamma: null output");
  return guarded([&] { *out = fracbranch::gamma(x); });
}

fb_status fb_hyp2f1(double a, double b, double c, double z, double* out) {
  FB_REQUIRE(out, "fb_hyp2f1: null output");
  return guarded([&] { *out = fracbranch::hyp2f1({a, b, c, z}); });
}

fb_status fb_phi_exact(const double* x, size_t d, int k, double s, double* out) {
  FB_REQUIRE(x && out && d > 0, "fb_phi_exact: null or empty argument");
  return guarded([&] {
    const fracbranch::BenchmarkParams params{k, s, static_cast<int>(d)};
    params.validate();
    *out = fracbranch::phi_exact(std::span<const double>(x, d), params);
  });
}

fb_status fb_psi_source(const double* x, size_t d, int k, double s, double* out) {
  FB_REQUIRE(x && out && d > 0, "fb_psi_source: null or empty argument");
  return guarded([&] {
    *out = fracbranch::psi_source(std::span<const double>(x, d), fracbranch::BenchmarkParams{k, s, static_cast<int>(d)});
  });
}

fb_status fb_gamma_star(const int* degrees, const double* probs, size_t count, double* s_star, double* gamma) {
  FB_REQUIRE(degrees && probs && s_star && gamma && count > 0, "fb_gamma_star: null or empty argument");
  return guarded([&] {
    fracbranch::DominatingPgf pgf;
    for (size_t i = 0; i < count; ++i) pgf.probs[degrees[i]] += probs[i];
    const auto result = fracbranch::gamma_star(pgf);
    if (result.degenerate) throw std::domain_error("gamma_star: pure degree-1 law has no defined s*");
    *s_star = result.s_star;
    *gamma = result.gamma;
  });
}

}  // extern "C"
