#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "hubbert/panel.hpp"

namespace hubbert {

/// Law of X(t0): lognormal Lambda(mu0, sigma0_sq). A degenerate start at x0 is
/// the lognormal with mu0 = ln x0 and sigma0_sq = 0, so both kinds share one
/// representation and behave identically.
class InitialDistribution {
 public:
  static InitialDistribution degenerate(double x0);
  static InitialDistribution lognormal(double mu0, double sigma0_sq);

  double mu0() const noexcept { return mu0_; }
  double sigma0_sq() const noexcept { return sigma0_sq_; }
  bool is_degenerate() const noexcept { return sigma0_sq_ == 0.0; }

  /// E[X0] = exp(mu0 + sigma0_sq / 2); exactly x0 for a degenerate start.
  double mean() const noexcept;

 private:
  InitialDistribution(double mu0, double sigma0_sq, double mean)
      : mu0_(mu0), sigma0_sq_(sigma0_sq), mean_(mean) {}

  double mu0_;
  double sigma0_sq_;
  double mean_;
};

/// Hubbert diffusion dX = r(t) X dt + sigma X dW started at t0.
///
/// sigma = 0 is accepted and means the deterministic curve; it is only
/// meaningful for simulation, the transition density requires sigma > 0.
struct ProcessParams {
  double eta;
  double alpha;
  double sigma;
  InitialDistribution init;
  double t0 = 0.0;

  /// Throws DomainError on eta <= 0, alpha outside (0,1) or sigma < 0.
  void validate() const;
};

/// Log-mean and log-variance of a lognormal law.
struct LognormalLaw {
  double log_mean;
  double log_variance;
};

/// Law of X(t) given X(s) = y.
LognormalLaw transition_law(double t, double y, double s, const ProcessParams& p);

/// ln f(x, t | y, s). Requires s < t, x > 0, y > 0 and sigma > 0.
double transition_logpdf(double x, double t, double y, double s, const ProcessParams& p);

/// Mean function E[X(t)] for t >= t0.
double mean(double t, const ProcessParams& p);

/// E[X(t) | X(s) = y] for t >= s.
double conditional_mean(double t, double y, double s, double eta, double alpha);

/// Parameters (mu, Sigma) of the lognormal law of (X(t1), ..., X(tn)).
struct FiniteDimLaw {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

/// Requires strictly increasing times, all >= t0.
FiniteDimLaw finite_dim_params(const std::vector<double>& times, const ProcessParams& p);

/// Observation times shared by simulated paths; times.front() is the start t0.
class PathGrid {
 public:
  /// Throws OrderingError unless times has >= 2 strictly increasing entries.
  explicit PathGrid(std::vector<double> times);

  /// `count` points t0, t0 + step, ..., t0 + (count - 1) step.
  static PathGrid uniform(double t0, double step, std::size_t count);

  const std::vector<double>& times() const noexcept { return times_; }
  double t0() const noexcept { return times_.front(); }

  /// Every `stride`-th point starting from the first.
  PathGrid subsample(std::size_t stride) const;

 private:
  std::vector<double> times_;
};

/// Simulate n_paths sample paths on the grid with the exact solution
///   X(t) = X0 g(t, t0) exp(sigma W(t - t0) - sigma^2 (t - t0) / 2).
///
/// Path i draws from RNG substream i of `seed`: first X0 (only when the initial
/// law is non-degenerate), then one standard normal per grid step in time
/// order. The output is identical for a given seed regardless of `threads`.
/// The grid start must equal p.t0.
PanelData simulate_paths(const ProcessParams& p, const PathGrid& grid, std::size_t n_paths,
                         std::uint64_t seed, unsigned threads = 0);

}  // namespace hubbert
