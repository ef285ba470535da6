#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <thread>
#include <vector>

#include "hubbert/bounds.hpp"
#include "hubbert/rng.hpp"

namespace hubbert {

/// A point in the 3-dimensional search space, (eta, alpha, sigma) for the Hubbert fit.
using Point3 = std::array<double, 3>;

/// Function to minimise. May return +infinity for infeasible points.
using Objective = std::function<double(const Point3&)>;

struct Candidate {
  Point3 theta{};
  double value = 0.0;
};

/// How simulated annealing draws a neighbour of the current point.
enum class ProposalKind {
  /// Uniform in a sub-box centred at the current point with half-widths
  /// (box width / 10) * (T / T0), clipped to the box.
  TemperatureScaled,
  /// Same uniform sub-box, but the half-widths adapt after every chain to keep
  /// the acceptance rate near 1/2 (Corana et al. step control).
  Adaptive,
};

std::string_view to_string(ProposalKind kind);
ProposalKind proposal_from_string(std::string_view name);

struct SAConfig {
  double p0 = 0.9;                 ///< initial acceptance probability of a worsening move
  std::size_t probe_count = 100;   ///< moves sampled to calibrate T0
  double gamma = 0.95;             ///< geometric cooling factor
  std::size_t chain_length = 50;   ///< Metropolis steps per temperature
  double t_final = 0.1;            ///< stop once the temperature falls to this value
  std::size_t stall_window = 50;   ///< stop when this many consecutive chain values agree
  double stall_tolerance = 0.0;    ///< ... to within this absolute tolerance
  ProposalKind proposal = ProposalKind::TemperatureScaled;

  /// Throws DomainError for out-of-range settings.
  void validate() const;
};

struct VNSConfig {
  std::size_t k_max = 5;
  /// Proposal of the SA runs inside the neighbourhoods. The temperature-scaled
  /// move freezes before it resolves the optimum to statistical precision,
  /// so the refinement phase tunes its steps instead.
  ProposalKind local_proposal = ProposalKind::Adaptive;
  /// Hard cap on local searches after the initial SA run; never reached in practice.
  std::size_t max_local_searches = 500;

  void validate() const;
};

enum class StopReason { Stalled, FinalTemperature };

std::string_view to_string(StopReason reason);

/// State at the end of one temperature level.
struct LevelTrace {
  double temperature;
  double acceptance_rate;
  double current_value;
  double best_value;
  Point3 step;  ///< proposal half-widths used at this level
};

struct SAResult {
  Candidate best;     ///< best point ever visited
  Candidate current;  ///< chain state at termination
  double initial_temperature = 0.0;
  StopReason stop_reason = StopReason::FinalTemperature;
  std::size_t evaluations = 0;
  std::vector<LevelTrace> trace;
};

/// T0 = -mean(positive increases) / ln p0 over `probe_count` random moves
/// (uniform point in the box followed by one proposal draw). Falls back to 1.0
/// when no probe produced an increase. Throws InitializationError when every
/// probe evaluated to a non-finite value.
double initial_temperature(const Objective& objective, const SolutionBox& box,
                           std::size_t probe_count, double p0, Rng& rng);

/// Metropolis rule: accept improvements, accept a worsening by delta with
/// probability exp(-delta / T) using one uniform draw.
Candidate metropolis_step(const Candidate& current, const Candidate& proposal,
                          double temperature, Rng& rng);

/// Simulated annealing inside `box` with geometric cooling.
///
/// Starts from `start` when given, otherwise from a uniform random point of the
/// box. Stops after the first chain at which the last `stall_window` chain
/// values agree, or once the temperature has fallen to `t_final`.
SAResult simulated_annealing(const Objective& objective, const SolutionBox& box,
                             const SAConfig& config, std::uint64_t seed,
                             std::optional<Point3> start = std::nullopt);

/// Neighbourhood N_k(theta0): per coordinate
/// [x - k (x - lo)/k_max, x + k (hi - x)/k_max], so N_k_max is the whole box.
SolutionBox vns_neighborhood(const Point3& theta0, std::size_t k, const VNSConfig& config,
                             const SolutionBox& box);

/// One local search performed by the VNS phase.
struct VNSStep {
  std::size_t k;
  double value;   ///< best value found in N_k
  bool improved;  ///< strictly better than the incumbent
};

struct VNSResult {
  Candidate best;
  SAResult initial;  ///< the phase-1 SA run on the full box
  std::vector<VNSStep> steps;
  std::size_t evaluations = 0;
};

/// Hybrid VNS with SA as local search.
///
/// Phase 1 runs SA on the whole box. Phase 2 then runs SA in N_k(incumbent)
/// for k = 1, 2, ...; a strict improvement replaces the incumbent and resets
/// k to 1, and the search ends once k exceeds k_max. Local searches use
/// sa_config with vns_config.local_proposal as the move. Phase 1 is exactly
/// simulated_annealing(..., seed); local search i >= 1 uses substream i of `seed`.
VNSResult vns_sa(const Objective& objective, const SolutionBox& box, const SAConfig& sa_config,
                 const VNSConfig& vns_config, std::uint64_t seed);

/// Runs `run(substream_seed(seed, r))` for r = 0..runs-1 on up to `threads`
/// threads and returns the result with the smallest best.value (lowest r on
/// ties), so the outcome does not depend on scheduling.
template <class Run>
auto multi_start(std::size_t runs, std::uint64_t seed, Run&& run, unsigned threads = 0) {
  using Result = decltype(run(std::uint64_t{}));
  std::vector<std::optional<Result>> results(runs);
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  if (runs < workers) workers = static_cast<unsigned>(runs);
  if (workers <= 1) {
    for (std::size_t r = 0; r < runs; ++r) results[r].emplace(run(substream_seed(seed, r)));
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t r = w; r < runs; r += workers)
              results[r].emplace(run(substream_seed(seed, r)));
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs; ++r)
    if (results[r]->best.value < results[best]->best.value) best = r;
  return std::move(*results[best]);
}

}  // namespace hubbert
