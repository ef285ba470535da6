#include "hubbert/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "hubbert/error.hpp"

namespace hubbert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFallbackTemperature = 1.0;
// Adaptive step control: target acceptance band and the smallest step kept.
constexpr double kAcceptLow = 0.4;
constexpr double kAcceptHigh = 0.6;
constexpr double kMinStepFraction = 1e-12;

double evaluate(const Objective& objective, const Point3& theta) {
  const double v = objective(theta);
  return std::isnan(v) ? kInf : v;
}

double clip_open(double x, double lo, double hi) {
  const double lo_in = std::nextafter(lo, hi);
  const double hi_in = std::nextafter(hi, lo);
  return std::clamp(x, lo_in, hi_in);
}

Point3 uniform_point(const SolutionBox& box, Rng& rng) {
  Point3 p{};
  for (std::size_t i = 0; i < 3; ++i) p[i] = rng.uniform(box.lower[i], box.upper[i]);
  return p;
}

// Uniform draw in [x - h, x + h], clipped into the open box.
double perturb(double x, double h, double lo, double hi, Rng& rng) {
  return clip_open(x + h * (2.0 * rng.uniform_open() - 1.0), lo, hi);
}

Point3 propose_all(const Point3& x, const Point3& step, const SolutionBox& box, Rng& rng) {
  Point3 y{};
  for (std::size_t i = 0; i < 3; ++i) y[i] = perturb(x[i], step[i], box.lower[i], box.upper[i], rng);
  return y;
}

Point3 initial_step(const SolutionBox& box) {
  return {box.width(0) / 10.0, box.width(1) / 10.0, box.width(2) / 10.0};
}

void validate_box(const SolutionBox& box) {
  for (std::size_t i = 0; i < 3; ++i)
    if (!(box.upper[i] > box.lower[i]) || !std::isfinite(box.width(i)))
      throw DomainError("search box is degenerate in coordinate " + std::to_string(i));
}

}  // namespace

std::string_view to_string(ProposalKind kind) {
  return kind == ProposalKind::Adaptive ? "adaptive" : "temperature-scaled";
}

ProposalKind proposal_from_string(std::string_view name) {
  if (name == "adaptive") return ProposalKind::Adaptive;
  if (name == "temperature-scaled") return ProposalKind::TemperatureScaled;
  throw DomainError("unknown proposal kind '" + std::string(name) + "'");
}

std::string_view to_string(StopReason reason) {
  return reason == StopReason::Stalled ? "stalled" : "final-temperature";
}

void SAConfig::validate() const {
  if (!(p0 > 0.0 && p0 < 1.0)) throw DomainError("p0 must lie in (0, 1)");
  if (probe_count < 2) throw DomainError("probe_count must be at least 2");
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");
  if (chain_length == 0) throw DomainError("chain_length must be positive");
  if (!(t_final > 0.0)) throw DomainError("t_final must be positive");
  if (stall_window == 0) throw DomainError("stall_window must be positive");
  if (!(stall_tolerance >= 0.0)) throw DomainError("stall_tolerance must be nonnegative");
}

void VNSConfig::validate() const {
  if (k_max == 0) throw DomainError("k_max must be at least 1");
}

double initial_temperature(const Objective& objective, const SolutionBox& box,
                           std::size_t probe_count, double p0, Rng& rng) {
  if (probe_count < 2) throw DomainError("probe_count must be at least 2");
  if (!(p0 > 0.0 && p0 < 1.0)) throw DomainError("p0 must lie in (0, 1)");
  validate_box(box);
  const Point3 step = initial_step(box);
  double increase_sum = 0.0;
  std::size_t increases = 0;
  bool any_finite = false;
  for (std::size_t i = 0; i < probe_count; ++i) {
    const Point3 x = uniform_point(box, rng);
    const Point3 y = propose_all(x, step, box, rng);
    const double gx = evaluate(objective, x);
    const double gy = evaluate(objective, y);
    any_finite = any_finite || std::isfinite(gx) || std::isfinite(gy);
    if (std::isfinite(gx) && std::isfinite(gy) && gy > gx) {
      increase_sum += gy - gx;
      ++increases;
    }
  }
  if (!any_finite)
    throw InitializationError("objective is infeasible at every probe point of the search box");
  if (increases == 0) return kFallbackTemperature;
  return -(increase_sum / static_cast<double>(increases)) / std::log(p0);
}

Candidate metropolis_step(const Candidate& current, const Candidate& proposal,
                          double temperature, Rng& rng) {
  const double delta = proposal.value - current.value;
  if (delta <= 0.0) return proposal;
  if (!(delta < kInf)) return current;  // infeasible proposal, or NaN
  return rng.uniform_open() < std::exp(-delta / temperature) ? proposal : current;
}

SAResult simulated_annealing(const Objective& objective, const SolutionBox& box,
                             const SAConfig& config, std::uint64_t seed,
                             std::optional<Point3> start) {
  config.validate();
  validate_box(box);
  Rng rng(seed);
  SAResult result;
  result.initial_temperature =
      initial_temperature(objective, box, config.probe_count, config.p0, rng);
  result.evaluations = 2 * config.probe_count;

  Candidate current;
  current.theta = start ? *start : uniform_point(box, rng);
  if (!box.contains(current.theta)) throw DomainError("SA start point lies outside the box");
  current.value = evaluate(objective, current.theta);
  ++result.evaluations;
  result.best = current;

  const double t0 = result.initial_temperature;
  const Point3 base_step = initial_step(box);
  Point3 step = base_step;
  std::deque<double> recent;
  double temperature = t0;
  std::size_t coordinate = 0;

  for (;;) {
    if (config.proposal == ProposalKind::TemperatureScaled)
      for (std::size_t i = 0; i < 3; ++i) step[i] = base_step[i] * temperature / t0;

    Point3 accepted{};
    Point3 tried{};
    std::size_t accepted_total = 0;
    for (std::size_t s = 0; s < config.chain_length; ++s) {
      Candidate proposal;
      if (config.proposal == ProposalKind::Adaptive) {
        proposal.theta = current.theta;
        proposal.theta[coordinate] = perturb(current.theta[coordinate], step[coordinate],
                                             box.lower[coordinate], box.upper[coordinate], rng);
      } else {
        proposal.theta = propose_all(current.theta, step, box, rng);
      }
      proposal.value = evaluate(objective, proposal.theta);
      ++result.evaluations;

      const Candidate next = metropolis_step(current, proposal, temperature, rng);
      const bool moved = next.theta != current.theta;
      current = next;
      tried[coordinate] += 1.0;
      if (moved) {
        accepted[coordinate] += 1.0;
        ++accepted_total;
      }
      if (config.proposal == ProposalKind::Adaptive) coordinate = (coordinate + 1) % 3;
      if (current.value < result.best.value) result.best = current;

      recent.push_back(current.value);
      if (recent.size() > config.stall_window) recent.pop_front();
    }

    result.trace.push_back({temperature,
                            static_cast<double>(accepted_total) /
                                static_cast<double>(config.chain_length),
                            current.value, result.best.value, step});

    if (config.proposal == ProposalKind::Adaptive) {
      for (std::size_t i = 0; i < 3; ++i) {
        if (tried[i] == 0.0) continue;
        const double rate = accepted[i] / tried[i];
        if (rate > kAcceptHigh) step[i] *= 1.0 + 2.0 * (rate - kAcceptHigh) / (1.0 - kAcceptHigh);
        else if (rate < kAcceptLow) step[i] /= 1.0 + 2.0 * (kAcceptLow - rate) / kAcceptLow;
        step[i] = std::clamp(step[i], kMinStepFraction * box.width(i), box.width(i));
      }
    }

    if (recent.size() == config.stall_window) {
      const auto [lo, hi] = std::minmax_element(recent.begin(), recent.end());
      if (*hi - *lo <= config.stall_tolerance || *lo == *hi) {
        result.stop_reason = StopReason::Stalled;
        break;
      }
    }
    temperature *= config.gamma;
    if (temperature <= config.t_final) {
      result.stop_reason = StopReason::FinalTemperature;
      break;
    }
  }
  result.current = current;
  return result;
}

SolutionBox vns_neighborhood(const Point3& theta0, std::size_t k, const VNSConfig& config,
                             const SolutionBox& box) {
  config.validate();
  if (k < 1 || k > config.k_max)
    throw DomainError("neighbourhood index k = " + std::to_string(k) + " outside [1, k_max]");
  if (!box.contains(theta0)) throw DomainError("neighbourhood centre lies outside the box");
  if (k == config.k_max) return box;
  const double kmax = static_cast<double>(config.k_max);
  const double kk = static_cast<double>(k);
  SolutionBox n;
  for (std::size_t i = 0; i < 3; ++i) {
    const double below = (theta0[i] - box.lower[i]) / kmax;
    const double above = (box.upper[i] - theta0[i]) / kmax;
    n.lower[i] = std::max(box.lower[i], theta0[i] - kk * below);
    n.upper[i] = std::min(box.upper[i], theta0[i] + kk * above);
    // A centre a few ulps from a wall can round onto its own bound; the box
    // wall keeps it strictly inside.
    if (!(n.lower[i] < theta0[i])) n.lower[i] = box.lower[i];
    if (!(n.upper[i] > theta0[i])) n.upper[i] = box.upper[i];
  }
  return n;
}

VNSResult vns_sa(const Objective& objective, const SolutionBox& box, const SAConfig& sa_config,
                 const VNSConfig& vns_config, std::uint64_t seed) {
  sa_config.validate();
  vns_config.validate();
  VNSResult result;
  result.initial = simulated_annealing(objective, box, sa_config, seed);
  result.evaluations = result.initial.evaluations;
  Candidate incumbent = result.initial.best;

  SAConfig local_config = sa_config;
  local_config.proposal = vns_config.local_proposal;

  std::size_t k = 1;
  std::uint64_t stream = 1;
  while (k <= vns_config.k_max && stream <= vns_config.max_local_searches) {
    const SolutionBox neighborhood = vns_neighborhood(incumbent.theta, k, vns_config, box);
    const SAResult local = simulated_annealing(objective, neighborhood, local_config,
                                               substream_seed(seed, stream++), incumbent.theta);
    result.evaluations += local.evaluations;
    const bool improved = local.best.value < incumbent.value;
    result.steps.push_back({k, local.best.value, improved});
    if (improved) {
      incumbent = local.best;
      k = 1;
    } else {
      ++k;
    }
  }
  result.best = incumbent;
  return result;
}

}  // namespace hubbert
