#include "fracbranch/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fracbranch/errors.hpp"
#include "fracbranch/estimate.hpp"

namespace fracbranch {
namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "problem", "d", "alpha", "s", "R", "k", "coefficients", "phi", "offspring_probs", "samples",
    "h", "coarse_factor", "seed", "grid", "max_generation", "max_particles", "workers", "output"};

template <class T>
T get_as(const json& doc, const std::string& key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(key, std::string("wrong type (") + e.what() + ")");
  }
}

double get_number(const json& doc, const std::string& key) {
  if (!doc.at(key).is_number()) throw ConfigError(key, "expected a number");
  return doc.at(key).get<double>();
}

std::uint64_t get_count(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    throw ConfigError(key, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::map<int, double> get_degree_map(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_object()) throw ConfigError(key, "expected an object mapping degree to value");
  std::map<int, double> out;
  for (const auto& [name, value] : v.items()) {
    int degree = -1;
    std::size_t used = 0;
    try {
      degree = std::stoi(name, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != name.size() || degree < 0) throw ConfigError(key, "degree '" + name + "' is not a non-negative integer");
    if (!value.is_number()) throw ConfigError(key, "value for degree " + name + " is not a number");
    out[degree] = value.get<double>();
  }
  return out;
}

ProblemKind parse_problem(const std::string& name) {
  if (name == "dirichlet") return ProblemKind::Dirichlet;
  if (name == "linear") return ProblemKind::Linear;
  if (name == "quadratic") return ProblemKind::Quadratic;
  if (name == "custom") return ProblemKind::Custom;
  throw ConfigError("problem", "unknown problem '" + name + "' (dirichlet, linear, quadratic, custom)");
}

}  // namespace

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Dirichlet: return "dirichlet";
    case ProblemKind::Linear: return "linear";
    case ProblemKind::Quadratic: return "quadratic";
    case ProblemKind::Custom: return "custom";
  }
  return "custom";
}

std::vector<double> default_grid(double radius) {
  std::vector<double> grid(21);
  for (int i = 0; i < 21; ++i) grid[static_cast<std::size_t>(i)] = 0.95 * radius * i / 20.0;
  return grid;
}

void validate_config(const RunConfig& c) {
  if (c.d < 1) throw ConfigError("d", "dimension must be at least 1");
  if (!(c.s > 0.0 && c.s < 1.0)) throw ConfigError("alpha", "alpha = 2s must lie in (0, 2)");
  if (c.is_benchmark() && !(c.s > 0.5)) throw ConfigError("alpha", "benchmarks require alpha in (1, 2)");
  if (!(c.radius > 0.0)) throw ConfigError("R", "radius must be positive");
  if (c.is_benchmark() && c.radius != 1.0) throw ConfigError("R", "benchmarks are posed on the unit ball");
  if (c.k < 0) throw ConfigError("k", "must be non-negative");
  if (c.samples == 0) throw ConfigError("samples", "must be at least 1");
  if (!(c.step > 0.0)) throw ConfigError("h", "must be positive");
  if (!(c.coarse_factor >= 0.0 && std::isfinite(c.coarse_factor)))
    throw ConfigError("coarse_factor", "must be a finite non-negative number");
  if (c.grid.empty()) throw ConfigError("grid", "must contain at least one radius");
  for (double r : c.grid)
    if (!(r >= 0.0 && r < c.radius)) throw ConfigError("grid", "radius " + std::to_string(r) + " outside [0, R)");
  if (c.max_generation < 0) throw ConfigError("max_generation", "must be non-negative");
  if (c.max_particles == 0) throw ConfigError("max_particles", "must be positive");
  if (c.offspring_probs) {
    for (const auto& [degree, q] : *c.offspring_probs)
      if (!(q > 0.0)) throw ConfigError("offspring_probs", "q_" + std::to_string(degree) + " must be positive");
  }
}

RunConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (!kKnownKeys.contains(key)) throw ConfigError(key, "unknown key");

  RunConfig c;
  if (!doc.contains("problem")) throw ConfigError("problem", "missing required key");
  c.problem = parse_problem(get_as<std::string>(doc, "problem"));

  if (!doc.contains("d")) throw ConfigError("d", "missing required key");
  if (!doc.at("d").is_number_integer()) throw ConfigError("d", "expected an integer");
  c.d = doc.at("d").get<int>();

  const bool has_alpha = doc.contains("alpha");
  const bool has_s = doc.contains("s");
  if (has_alpha && has_s) throw ConfigError("alpha", "give exactly one of 'alpha' and 's'");
  if (!has_alpha && !has_s) throw ConfigError("alpha", "missing; give exactly one of 'alpha' and 's'");
  if (has_alpha) {
    const double alpha = get_number(doc, "alpha");
    if (!(alpha > 0.0 && alpha < 2.0)) throw ConfigError("alpha", "must lie in (0, 2)");
    c.s = 0.5 * alpha;
  } else {
    c.s = get_number(doc, "s");
    if (!(c.s > 0.0 && c.s < 1.0)) throw ConfigError("s", "must lie in (0, 1)");
  }

  if (doc.contains("R")) c.radius = get_number(doc, "R");
  if (doc.contains("k")) {
    if (!doc.at("k").is_number_integer()) throw ConfigError("k", "expected an integer");
    c.k = doc.at("k").get<int>();
  }

  if (c.problem == ProblemKind::Custom) {
    if (!doc.contains("coefficients")) throw ConfigError("coefficients", "required for problem 'custom'");
    if (!doc.contains("phi")) throw ConfigError("phi", "required for problem 'custom'");
    c.coefficients = get_degree_map(doc, "coefficients");
    const json& phi = doc.at("phi");
    if (phi.is_string()) {
      if (phi.get<std::string>() != "zero") throw ConfigError("phi", "expected \"zero\" or a number");
      c.phi = 0.0;
    } else if (phi.is_number()) {
      c.phi = phi.get<double>();
    } else {
      throw ConfigError("phi", "expected \"zero\" or a number");
    }
  } else {
    if (doc.contains("coefficients")) throw ConfigError("coefficients", "only allowed for problem 'custom'");
    if (doc.contains("phi")) throw ConfigError("phi", "only allowed for problem 'custom'");
  }
  if (doc.contains("offspring_probs")) c.offspring_probs = get_degree_map(doc, "offspring_probs");

  if (doc.contains("samples")) c.samples = get_count(doc, "samples");
  if (doc.contains("h")) c.step = get_number(doc, "h");
  if (doc.contains("coarse_factor")) c.coarse_factor = get_number(doc, "coarse_factor");
  if (doc.contains("seed")) c.seed = get_count(doc, "seed");
  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    if (!g.is_array()) throw ConfigError("grid", "expected an array of radii");
    for (const auto& r : g) {
      if (!r.is_number()) throw ConfigError("grid", "expected numbers");
      c.grid.push_back(r.get<double>());
    }
  } else {
    c.grid = default_grid(c.radius);
  }
  if (doc.contains("max_generation")) c.max_generation = static_cast<int>(get_count(doc, "max_generation"));
  if (doc.contains("max_particles")) c.max_particles = get_count(doc, "max_particles");
  if (doc.contains("workers")) c.workers = static_cast<unsigned>(get_count(doc, "workers"));
  c.workers = resolve_workers(c.workers);
  if (doc.contains("output")) c.output = get_as<std::string>(doc, "output");

  validate_config(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace fracbranch
