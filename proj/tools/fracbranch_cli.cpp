// fracbranch command line front end. Talks to the solver only through the
// C API in fracbranch.h.
//
//   fracbranch solve --config run.json [--samples N] [--seed S] [--output F] [--workers W]
//   fracbranch check --config run.json [--samples N] [--seed S] [--workers W]
//   fracbranch selftest
//
// Exit codes: 0 success, 2 configuration error, 3 runtime limit hit,
// 1 anything else.

#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fracbranch/fracbranch.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitLimit = 3;

int exit_code(fb_status status) {
  switch (status) {
    case FB_OK: return kExitOk;
    case FB_ERR_CONFIG: return kExitConfig;
    case FB_ERR_LIMIT: return kExitLimit;
    default: return kExitFailure;
  }
}

int report(fb_status status, const char* what) {
  std::cerr << "fracbranch " << what << ": " << fb_last_error() << '\n';
  return exit_code(status);
}

struct ConfigDeleter {
  void operator()(fb_config* c) const { fb_config_free(c); }
};
struct ProfileDeleter {
  void operator()(fb_profile* p) const { fb_profile_free(p); }
};
struct StringDeleter {
  void operator()(char* s) const { fb_string_free(s); }
};
using ConfigHandle = std::unique_ptr<fb_config, ConfigDeleter>;
using ProfileHandle = std::unique_ptr<fb_profile, ProfileDeleter>;
using StringHandle = std::unique_ptr<char, StringDeleter>;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> output;
};

fb_status load(const Overrides& o, ConfigHandle& handle) {
  fb_config* raw = nullptr;
  fb_status st = fb_config_load_file(o.config_path.c_str(), &raw);
  if (st != FB_OK) return st;
  handle.reset(raw);
  if (o.samples && (st = fb_config_set_samples(raw, *o.samples)) != FB_OK) return st;
  if (o.seed && (st = fb_config_set_seed(raw, *o.seed)) != FB_OK) return st;
  if (o.workers && (st = fb_config_set_workers(raw, *o.workers)) != FB_OK) return st;
  if (o.output && (st = fb_config_set_output(raw, o.output->c_str())) != FB_OK) return st;
  return FB_OK;
}

int run_solve(const Overrides& o) {
  ConfigHandle config;
  if (fb_status st = load(o, config); st != FB_OK) return report(st, "solve");
  fb_profile* raw = nullptr;
  if (fb_status st = fb_solve(config.get(), &raw); st != FB_OK) return report(st, "solve");
  ProfileHandle profile(raw);

  char* summary_raw = nullptr;
  if (fb_status st = fb_profile_summary(profile.get(), &summary_raw); st != FB_OK) return report(st, "solve");
  StringHandle summary(summary_raw);

  const std::string output = fb_config_output(config.get());
  if (output.empty()) {
    char* csv_raw = nullptr;
    if (fb_status st = fb_profile_csv(profile.get(), &csv_raw); st != FB_OK) return report(st, "solve");
    StringHandle csv(csv_raw);
    std::cout << csv.get();
    std::cerr << summary.get() << '\n';
  } else {
    std::cout << summary.get() << " output=" << output << '\n';
  }
  return kExitOk;
}

int run_check(const Overrides& o) {
  ConfigHandle config;
  if (fb_status st = load(o, config); st != FB_OK) return report(st, "check");
  char* json_raw = nullptr;
  if (fb_status st = fb_check(config.get(), &json_raw); st != FB_OK) return report(st, "check");
  StringHandle json(json_raw);
  std::cout << json.get() << '\n';
  return kExitOk;
}

int run_selftest() {
  char* text_raw = nullptr;
  int passed = 0;
  if (fb_status st = fb_selftest(&text_raw, &passed); st != FB_OK) return report(st, "selftest");
  StringHandle text(text_raw);
  std::cout << text.get();
  return passed ? kExitOk : kExitFailure;
}

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON run configuration")->required();
  cmd->add_option("--samples", o.samples, "samples per grid point");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte-Carlo solver for fractional semilinear elliptic PDEs on balls"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fb_version()));

  Overrides solve_opts;
  auto* solve = app.add_subcommand("solve", "estimate u on a radial grid and write a CSV profile");
  add_common(solve, solve_opts);
  solve->add_option("--output", solve_opts.output, "CSV output path (default: standard output)");

  Overrides check_opts;
  auto* check = app.add_subcommand("check", "evaluate the sufficient conditions for existence");
  add_common(check, check_opts);

  auto* selftest = app.add_subcommand("selftest", "run the built-in property checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (solve->parsed()) return run_solve(solve_opts);
  if (check->parsed()) return run_check(check_opts);
  if (selftest->parsed()) return run_selftest();
  return kExitFailure;
}
