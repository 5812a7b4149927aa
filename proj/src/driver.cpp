#include "fracbranch/driver.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

#include "fracbranch/benchmarks.hpp"

namespace fracbranch {
namespace {

BenchmarkKind benchmark_kind(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Dirichlet: return BenchmarkKind::Dirichlet;
    case ProblemKind::Linear: return BenchmarkKind::Linear;
    case ProblemKind::Quadratic: return BenchmarkKind::Quadratic;
    case ProblemKind::Custom: break;
  }
  throw std::logic_error("custom problems have no benchmark kind");
}

nlohmann::json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace

std::string format_number(double value) {
  std::array<char, 64> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
  return std::string(buffer.data(), end);
}

ProblemSpec build_problem(const RunConfig& config) {
  validate_config(config);
  if (config.is_benchmark()) {
    return benchmark_problem(benchmark_kind(config.problem), BenchmarkParams{config.k, config.s, config.d},
                             config.offspring_probs);
  }
  std::map<int, RadialField> coefficients;
  for (const auto& [degree, value] : config.coefficients) coefficients[degree] = RadialField::constant(value);
  return make_problem(ModelParams{config.d, config.s, config.radius}, std::move(coefficients),
                      RadialField::constant(config.phi), config.offspring_probs);
}

WalkParams walk_params_for(const RunConfig& config) {
  WalkParams params;
  params.radius = config.radius;
  params.step = config.step;
  params.coarse_factor = config.coarse_factor;
  params.law = StableLaw{config.s, config.d};
  return params;
}

TreeLimits limits_for(const RunConfig& config) { return {config.max_generation, config.max_particles}; }

ProfileResult run_profile(const RunConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  const ProblemSpec spec = build_problem(config);
  std::function<double(double)> exact;
  if (config.is_benchmark()) {
    const BenchmarkParams params{config.k, config.s, config.d};
    exact = [params](double r) { return phi_exact_radial(r, params); };
  }
  const auto points = radial_profile(spec, walk_params_for(config), limits_for(config), config.grid, config.samples,
                                     RngStream(config.seed, 0), config.workers, exact);
  ProfileResult result;
  result.degenerate_statistics = config.samples == 1;
  for (const auto& p : points) {
    ProfileRow row;
    row.radius = p.radius;
    row.estimate = p.estimate.mean;
    row.std_error = p.estimate.std_error;
    row.n = p.estimate.n;
    row.truncation_fraction = p.estimate.truncation_fraction;
    row.exact = p.exact;
    if (p.exact) row.abs_error = std::abs(p.estimate.mean - *p.exact);
    result.rows.push_back(row);
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

std::string format_csv(const ProfileResult& result) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& row : result.rows) {
    out += format_number(row.radius) + ',' + format_number(row.estimate) + ',' + format_number(row.std_error) + ',' +
           std::to_string(row.n) + ',' + format_number(row.truncation_fraction) + ',' +
           (row.exact ? format_number(*row.exact) : "") + ',' + (row.abs_error ? format_number(*row.abs_error) : "");
    out += '\n';
  }
  return out;
}

void write_csv(const ProfileResult& result, const std::filesystem::path& path) {
  const std::string text = format_csv(result);
  std::filesystem::path partial = path;
  partial += ".partial";
  try {
    {
      std::ofstream out(partial, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot open '" + partial.string() + "' for writing");
      out << text;
      out.flush();
      if (!out) throw std::runtime_error("failed writing '" + partial.string() + "'");
    }
    std::filesystem::rename(partial, path);
  } catch (...) {
    std::error_code ignored;
    std::filesystem::remove(partial, ignored);
    throw;
  }
}

std::string summary_line(const ProfileResult& result) {
  std::string line = "rows=" + std::to_string(result.rows.size());
  double max_error = -1.0;
  for (const auto& row : result.rows)
    if (row.abs_error) max_error = std::max(max_error, *row.abs_error);
  if (max_error >= 0.0) line += " max_abs_error=" + format_number(max_error);
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", result.wall_seconds);
  line += " wall_time=" + std::string(wall) + "s";
  if (result.degenerate_statistics) line += " (single sample: stderr reported as 0)";
  return line;
}

ExistenceReport run_check(const RunConfig& config) {
  const ProblemSpec spec = build_problem(config);
  return check_existence(spec, true, walk_params_for(config), config.samples, RngStream(config.seed, 0),
                         config.workers);
}

std::string report_to_json(const ExistenceReport& report) {
  nlohmann::json j;
  j["verdict"] = to_string(report.verdict);
  j["c0"] = number_or_inf(report.c0);
  j["exterior_norm"] = number_or_inf(report.exterior_norm);
  nlohmann::json norms = nlohmann::json::object();
  for (const auto& [degree, norm] : report.coefficient_norms) norms[std::to_string(degree)] = number_or_inf(norm);
  j["coefficient_norms"] = norms;
  if (report.delta) {
    j["delta"] = report.delta->value;
    j["delta_stderr"] = report.delta->std_error;
    j["delta_argmin_radius"] = report.delta->argmin_radius;
  } else {
    j["delta"] = nullptr;
    j["delta_stderr"] = nullptr;
    j["delta_argmin_radius"] = nullptr;
  }
  j["delta_used"] = report.delta_used ? nlohmann::json(*report.delta_used) : nlohmann::json(nullptr);
  if (report.gamma) {
    j["s_star"] = number_or_inf(report.gamma->s_star);
    j["gamma"] = number_or_inf(report.gamma->gamma);
    j["degenerate"] = report.gamma->degenerate;
  } else {
    j["s_star"] = nullptr;
    j["gamma"] = nullptr;
    j["degenerate"] = false;
  }
  j["p_star"] = report.p_star ? number_or_inf(*report.p_star) : nlohmann::json(nullptr);
  return j.dump(2);
}

}  // namespace fracbranch
