#include "fracbranch/branching.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracbranch {

void ModelParams::validate() const {
  if (d < 1) throw std::invalid_argument("model: dimension must be at least 1");
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("model: s must lie in (0, 1)");
  if (!(radius > 0.0)) throw std::invalid_argument("model: radius must be positive");
}

RadialField RadialField::constant(double value) {
  RadialField f;
  f.value_ = value;
  f.label_ = std::to_string(value);
  return f;
}

RadialField RadialField::radial(std::function<double(double)> profile, std::string label) {
  RadialField f;
  f.profile_ = std::move(profile);
  f.label_ = std::move(label);
  return f;
}

double RadialField::operator()(std::span<const double> x) const {
  if (!profile_) return value_;
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return profile_(std::sqrt(r2));
}

std::optional<double> RadialField::constant_value() const {
  if (profile_) return std::nullopt;
  return value_;
}

double RadialField::sup_norm(double r_lo, double r_hi, int grid) const {
  if (!profile_) return std::abs(value_);
  double sup = 0.0;
  const int points = std::max(grid, 2);
  for (int i = 0; i < points; ++i) {
    const double r = r_lo + (r_hi - r_lo) * i / (points - 1);
    sup = std::max(sup, std::abs(profile_(r)));
  }
  return sup;
}

double ball_sup_norm(const RadialField& field, const ModelParams& model) {
  // The ball is open: stop one grid cell short of R.
  const double r_hi = model.radius * (1.0 - 1.0 / kSupNormGrid);
  return field.sup_norm(0.0, r_hi);
}

double exterior_sup_norm(const RadialField& field, const ModelParams& model) {
  return field.sup_norm(model.radius, 8.0 * model.radius);
}

void ProblemSpec::validate() const {
  model.validate();
  if (coefficients.size() != offspring_probs.size())
    throw std::invalid_argument("problem: coefficient and offspring-probability degree sets differ");
  double total = 0.0;
  for (const auto& [degree, q] : offspring_probs) {
    if (degree < 0) throw std::invalid_argument("problem: negative degree " + std::to_string(degree));
    if (!coefficients.contains(degree))
      throw std::invalid_argument("problem: no coefficient for degree " + std::to_string(degree));
    if (!(q > 0.0)) throw std::invalid_argument("problem: q_" + std::to_string(degree) + " must be positive");
    total += q;
  }
  if (!offspring_probs.empty() && std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("problem: offspring probabilities sum to " + std::to_string(total));
}

ProblemSpec make_problem(const ModelParams& model, std::map<int, RadialField> coefficients, RadialField exterior,
                         std::optional<std::map<int, double>> offspring_probs) {
  model.validate();
  ProblemSpec spec;
  spec.model = model;
  spec.exterior = std::move(exterior);

  std::map<int, double> norms;
  for (auto& [degree, field] : coefficients) {
    const double norm = ball_sup_norm(field, model);
    if (norm == 0.0) continue;
    norms[degree] = norm;
    spec.coefficients.emplace(degree, std::move(field));
  }

  if (offspring_probs) {
    for (const auto& [degree, q] : *offspring_probs) {
      if (!spec.coefficients.contains(degree)) {
        if (coefficients.contains(degree)) continue;  // dropped zero coefficient
        throw std::invalid_argument("problem: offspring probability given for unknown degree " +
                                    std::to_string(degree));
      }
      spec.offspring_probs[degree] = q;
    }
    for (const auto& [degree, field] : spec.coefficients)
      if (!spec.offspring_probs.contains(degree))
        throw std::invalid_argument("problem: missing offspring probability for degree " + std::to_string(degree));
    // Renormalize in case dropped degrees carried mass.
    double total = 0.0;
    for (const auto& [degree, q] : spec.offspring_probs) total += q;
    if (total > 0.0)
      for (auto& [degree, q] : spec.offspring_probs) q /= total;
  } else {
    double total = 0.0;
    for (const auto& [degree, norm] : norms) total += norm;
    for (const auto& [degree, norm] : norms) spec.offspring_probs[degree] = norm / total;
  }
  spec.validate();
  return spec;
}

namespace {

// Flat view of a ProblemSpec for the recursion.
struct OffspringTable {
  std::vector<int> degrees;
  std::vector<double> cumulative;
  std::vector<double> probs;
  std::vector<const RadialField*> fields;

  explicit OffspringTable(const ProblemSpec& spec) {
    double acc = 0.0;
    for (const auto& [degree, q] : spec.offspring_probs) {
      degrees.push_back(degree);
      probs.push_back(q);
      fields.push_back(&spec.coefficients.at(degree));
      acc += q;
      cumulative.push_back(acc);
    }
    if (!cumulative.empty()) cumulative.back() = 1.0;
  }

  std::size_t draw(RngStream& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
  }
};

class TreeRecursion {
 public:
  TreeRecursion(const ProblemSpec& spec, const OffspringTable& table, const TreeLimits& limits, TreeDraws& draws)
      : spec_(spec), table_(table), limits_(limits), draws_(draws) {}

  TreeSample run(std::span<const double> x) {
    std::vector<double> position(x.begin(), x.end());
    sample_.h_value = particle(position, 0);
    if (sample_.truncated) sample_.h_value = 0.0;
    return sample_;
  }

 private:
  double particle(std::vector<double>& position, int generation) {
    if (sample_.particles >= limits_.max_particles) {
      sample_.truncated = true;
      return 0.0;
    }
    ++sample_.particles;
    sample_.max_generation = std::max(sample_.max_generation, generation);

    const double clock = draws_.clock();
    if (draws_.walk(position, clock) == WalkCause::BallExit) return spec_.exterior(position);
    // Interior death with an empty degree set: the source vanishes.
    if (table_.degrees.empty()) return 0.0;

    const std::size_t index = draws_.offspring();
    double product = (*table_.fields[index])(position) / table_.probs[index];
    const int children = table_.degrees[index];
    if (product == 0.0 || children == 0) return product;
    if (generation + 1 > limits_.max_generation) {
      sample_.truncated = true;
      return 0.0;
    }
    std::vector<double> child_position(position.size());
    for (int i = 0; i < children; ++i) {
      child_position = position;
      product *= particle(child_position, generation + 1);
      if (sample_.truncated) return 0.0;
      if (product == 0.0) break;
    }
    return product;
  }

  const ProblemSpec& spec_;
  const OffspringTable& table_;
  const TreeLimits& limits_;
  TreeDraws& draws_;
  TreeSample sample_;
};

class StreamDraws final : public TreeDraws {
 public:
  StreamDraws(const Walker& walker, const OffspringTable& table, RngStream& rng)
      : walker_(walker), table_(table), rng_(rng) {}

  double clock() override { return sample_exponential_clock(rng_); }
  WalkCause walk(std::span<double> position, double clock) override {
    double duration = 0.0;
    return walker_.advance(position, clock, rng_, duration);
  }
  std::size_t offspring() override { return table_.draw(rng_); }

 private:
  const Walker& walker_;
  const OffspringTable& table_;
  RngStream& rng_;
};

void check_walk_consistency(const ProblemSpec& spec, const WalkParams& walk_params) {
  if (walk_params.law.d != spec.model.d || walk_params.law.s != spec.model.s ||
      walk_params.radius != spec.model.radius)
    throw std::invalid_argument("walk parameters do not match the problem's model (d, s, R)");
}

double norm_of(std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return std::sqrt(r2);
}

}  // namespace

int sample_offspring(const ProblemSpec& spec, RngStream& rng) {
  if (spec.offspring_probs.empty()) throw std::invalid_argument("sample_offspring: empty degree set");
  const OffspringTable table(spec);
  return table.degrees[table.draw(rng)];
}

TreeSample evaluate_tree(std::span<const double> x, const ProblemSpec& spec, const TreeLimits& limits,
                         TreeDraws& draws) {
  const OffspringTable table(spec);
  return TreeRecursion(spec, table, limits, draws).run(x);
}

TreeSample simulate_tree(std::span<const double> x, const ProblemSpec& spec, const WalkParams& walk_params,
                         const TreeLimits& limits, RngStream& rng) {
  spec.validate();
  check_walk_consistency(spec, walk_params);
  if (static_cast<int>(x.size()) != spec.model.d) throw std::invalid_argument("simulate_tree: dimension mismatch");
  if (!(norm_of(x) < spec.model.radius)) throw std::invalid_argument("simulate_tree: root must lie inside the ball");
  const Walker walker(walk_params);
  const OffspringTable table(spec);
  StreamDraws draws(walker, table, rng);
  return TreeRecursion(spec, table, limits, draws).run(x);
}

Estimate estimate_u(std::span<const double> x, const ProblemSpec& spec, const WalkParams& walk_params,
                    const TreeLimits& limits, std::uint64_t n, const RngStream& rng, unsigned workers) {
  if (n == 0) throw std::domain_error("estimate_u: sample count must be at least 1");
  spec.validate();
  check_walk_consistency(spec, walk_params);
  if (static_cast<int>(x.size()) != spec.model.d) throw std::invalid_argument("estimate_u: dimension mismatch");
  if (norm_of(x) >= spec.model.radius) {
    Estimate exterior;
    exterior.mean = spec.exterior(x);
    exterior.mean_square = exterior.mean * exterior.mean;
    return exterior;
  }
  const Walker walker(walk_params);
  const OffspringTable table(spec);
  return run_samples(n, rng, workers, [&](RngStream& stream) {
    StreamDraws draws(walker, table, stream);
    const TreeSample tree = TreeRecursion(spec, table, limits, draws).run(x);
    return SampleOutcome{tree.h_value, tree.truncated};
  });
}

std::vector<ProfilePoint> radial_profile(const ProblemSpec& spec, const WalkParams& walk_params,
                                         const TreeLimits& limits, std::span<const double> radii,
                                         std::uint64_t n, const RngStream& rng, unsigned workers,
                                         const std::function<double(double)>& exact) {
  for (double r : radii)
    if (!(r >= 0.0 && r < spec.model.radius))
      throw std::invalid_argument("radial_profile: radius " + std::to_string(r) + " is not inside the ball");
  std::vector<ProfilePoint> out;
  out.reserve(radii.size());
  std::vector<double> x(static_cast<std::size_t>(spec.model.d), 0.0);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    x[0] = radii[i];
    ProfilePoint point;
    point.radius = radii[i];
    point.estimate = estimate_u(x, spec, walk_params, limits, n, rng.substream(i * kPointStreamStride), workers);
    if (exact) point.exact = exact(radii[i]);
    out.push_back(point);
  }
  return out;
}

}  // namespace fracbranch
