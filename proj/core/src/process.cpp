#include "hubbert/process.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "hubbert/curve.hpp"
#include "hubbert/error.hpp"
#include "hubbert/rng.hpp"

namespace hubbert {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

void require_order(double earlier, double later, bool strict, const char* what) {
  if (strict ? !(earlier < later) : !(earlier <= later)) {
    std::ostringstream os;
    os << what << ": need " << earlier << (strict ? " < " : " <= ") << later;
    throw OrderingError(os.str());
  }
}

void require_positive_state(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << name << " = " << x << " is not a positive state";
    throw DomainError(os.str());
  }
}

// 2 ln((eta + alpha^s)/(eta + alpha^t)) + (ln alpha - sigma^2/2)(t - s)
double log_drift(double t, double s, double eta, double alpha, double sigma) {
  const double a_s = power(alpha, s);
  const double a_t = power(alpha, t);
  return 2.0 * std::log1p((a_s - a_t) / (eta + a_t)) +
         (std::log(alpha) - 0.5 * sigma * sigma) * (t - s);
}

}  // namespace

InitialDistribution InitialDistribution::degenerate(double x0) {
  require_positive_state(x0, "x0");
  return InitialDistribution(std::log(x0), 0.0, x0);
}

InitialDistribution InitialDistribution::lognormal(double mu0, double sigma0_sq) {
  if (!std::isfinite(mu0)) throw DomainError("mu0 must be finite");
  if (!(sigma0_sq >= 0.0) || !std::isfinite(sigma0_sq))
    throw DomainError("sigma0_sq must be a finite nonnegative variance");
  return InitialDistribution(mu0, sigma0_sq, std::exp(mu0 + 0.5 * sigma0_sq));
}

double InitialDistribution::mean() const noexcept { return mean_; }

void ProcessParams::validate() const {
  check_eta(eta);
  check_alpha(alpha);
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    std::ostringstream os;
    os << "sigma = " << sigma << " violates sigma >= 0";
    throw DomainError(os.str());
  }
  if (!std::isfinite(t0)) throw DomainError("t0 must be finite");
}

LognormalLaw transition_law(double t, double y, double s, const ProcessParams& p) {
  p.validate();
  require_order(s, t, true, "transition");
  require_positive_state(y, "y");
  return {std::log(y) + log_drift(t, s, p.eta, p.alpha, p.sigma), p.sigma * p.sigma * (t - s)};
}

double transition_logpdf(double x, double t, double y, double s, const ProcessParams& p) {
  require_positive_state(x, "x");
  if (!(p.sigma > 0.0)) throw DomainError("transition density requires sigma > 0");
  const LognormalLaw law = transition_law(t, y, s, p);
  const double lx = std::log(x);
  const double z = lx - law.log_mean;
  return -lx - 0.5 * (kLog2Pi + std::log(law.log_variance)) - z * z / (2.0 * law.log_variance);
}

double mean(double t, const ProcessParams& p) {
  p.validate();
  require_order(p.t0, t, false, "mean");
  if (t == p.t0) return p.init.mean();
  return p.init.mean() * growth_factor(t, p.t0, p.eta, p.alpha);
}

double conditional_mean(double t, double y, double s, double eta, double alpha) {
  check_eta(eta);
  check_alpha(alpha);
  require_positive_state(y, "y");
  require_order(s, t, false, "conditional mean");
  if (t == s) return y;
  return y * growth_factor(t, s, eta, alpha);
}

FiniteDimLaw finite_dim_params(const std::vector<double>& times, const ProcessParams& p) {
  p.validate();
  const auto n = static_cast<Eigen::Index>(times.size());
  FiniteDimLaw law{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ti = times[static_cast<std::size_t>(i)];
    if (i == 0) require_order(p.t0, ti, false, "finite-dimensional law");
    else require_order(times[static_cast<std::size_t>(i - 1)], ti, true, "finite-dimensional law");
    law.mean(i) = p.init.mu0() + (ti == p.t0 ? 0.0 : log_drift(ti, p.t0, p.eta, p.alpha, p.sigma));
  }
  const double s2 = p.sigma * p.sigma;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double tmin = times[static_cast<std::size_t>(std::min(i, j))];
      law.covariance(i, j) = p.init.sigma0_sq() + s2 * (tmin - p.t0);
    }
  }
  return law;
}

PathGrid::PathGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 2) throw OrderingError("path grid needs at least two times");
  for (std::size_t j = 0; j < times_.size(); ++j) {
    if (!std::isfinite(times_[j])) throw DomainError("path grid contains a non-finite time");
    if (j > 0) require_order(times_[j - 1], times_[j], true, "path grid");
  }
}

PathGrid PathGrid::uniform(double t0, double step, std::size_t count) {
  if (!(step > 0.0)) throw OrderingError("grid step must be positive");
  std::vector<double> times(count);
  // For steps like 0.1 use i / 10 so grid points are the correctly rounded decimals.
  const double per_unit = std::round(1.0 / step);
  const bool reciprocal = per_unit >= 1.0 && std::abs(per_unit * step - 1.0) < 1e-12;
  for (std::size_t i = 0; i < count; ++i) {
    const double offset = reciprocal ? static_cast<double>(i) / per_unit : static_cast<double>(i) * step;
    times[i] = t0 + offset;
  }
  return PathGrid(std::move(times));
}

PathGrid PathGrid::subsample(std::size_t stride) const {
  if (stride == 0) throw DomainError("subsample stride must be positive");
  std::vector<double> kept;
  for (std::size_t i = 0; i < times_.size(); i += stride) kept.push_back(times_[i]);
  return PathGrid(std::move(kept));
}

PanelData simulate_paths(const ProcessParams& p, const PathGrid& grid, std::size_t n_paths,
                         std::uint64_t seed, unsigned threads) {
  p.validate();
  if (n_paths == 0) throw DomainError("n_paths must be at least 1");
  if (grid.t0() != p.t0) throw OrderingError("grid must start at the process initial time t0");

  const std::vector<double>& times = grid.times();
  const std::size_t n = times.size();
  std::vector<double> factor(n);
  for (std::size_t j = 0; j < n; ++j)
    factor[j] = j == 0 ? 1.0 : growth_factor(times[j], p.t0, p.eta, p.alpha);

  std::vector<Path> paths(n_paths);
  auto simulate_one = [&](std::size_t i) {
    Rng rng(seed, i);
    double x0 = p.init.mean();
    if (!p.init.is_degenerate())
      x0 = std::exp(p.init.mu0() + std::sqrt(p.init.sigma0_sq()) * rng.normal());
    Path& path = paths[i];
    path.times = times;
    path.values.resize(n);
    path.values[0] = x0;
    double w = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
      w += std::sqrt(times[j] - times[j - 1]) * rng.normal();
      const double elapsed = times[j] - p.t0;
      path.values[j] = x0 * factor[j] * std::exp(p.sigma * w - 0.5 * p.sigma * p.sigma * elapsed);
    }
  };

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_paths));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_paths; ++i) simulate_one(i);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n_paths; i += workers) simulate_one(i);
      });
    }
  }
  return PanelData(std::move(paths));
}

}  // namespace hubbert
