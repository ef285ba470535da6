#include "hubbert/inference.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "hubbert/curve.hpp"
#include "hubbert/error.hpp"
#include "hubbert/process.hpp"

namespace hubbert {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Above this the covariance is still reported, with a warning attached.
constexpr double kIllConditioned = 1e10;

// d/dalpha of alpha^t.
double power_derivative(double alpha, double t) {
  return t == 0.0 ? 0.0 : t * power(alpha, t - 1.0);
}

struct FisherSums {
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
};

// W = alpha^t - alpha^tp, S = (eta + alpha^tp)(eta + alpha^t), and
// V = tp alpha^(tp-1) (eta + alpha^t) - t alpha^(t-1) (eta + alpha^tp):
// W/S and V/S are the eta- and alpha-derivatives of ln((eta + alpha^tp)/(eta + alpha^t)).
void pair_terms(double eta, double alpha, double tp, double t, double& w_over_s,
                double& v_over_s) {
  const double ap = power(alpha, tp);
  const double at = power(alpha, t);
  const double s = (eta + ap) * (eta + at);
  const double w = at - ap;
  const double v = power_derivative(alpha, tp) * (eta + at) - power_derivative(alpha, t) * (eta + ap);
  w_over_s = w / s;
  v_over_s = v / s;
}

FisherSums fisher_sums(const Theta& theta, const SufficientStats& stats) {
  FisherSums f;
  for (const auto& g : stats.groups()) {
    double ws = 0.0;
    double vs = 0.0;
    pair_terms(theta.eta, theta.alpha, g.t_prev, g.t, ws, vs);
    f.m1 += g.count * ws * ws / g.dt;
    f.m2 += g.count * vs * vs / g.dt;
    f.m3 += g.count * vs * ws / g.dt;
  }
  for (const auto& e : stats.endpoints()) {
    double ws = 0.0;
    double vs = 0.0;
    pair_terms(theta.eta, theta.alpha, e.t_first, e.t_last, ws, vs);
    f.x1 += e.count * ws;
    f.x2 += e.count * vs;
  }
  return f;
}

Eigen::Matrix3d nan_matrix() { return Eigen::Matrix3d::Constant(kNaN); }

}  // namespace

Eigen::Matrix3d fisher_information(const Theta& theta, const SufficientStats& stats) {
  check_eta(theta.eta);
  check_alpha(theta.alpha);
  if (!(theta.sigma > 0.0)) throw DomainError("sigma must be positive");
  const FisherSums f = fisher_sums(theta, stats);
  const double a = theta.alpha;
  const double s2 = theta.sigma * theta.sigma;
  const double z2 = stats.z2();
  const double n = static_cast<double>(stats.transition_count());

  Eigen::Matrix3d info;
  info(0, 0) = 4.0 * f.m1;
  info(0, 1) = 4.0 * f.m3 + 2.0 * f.x1 / a;
  info(0, 2) = -f.x1;
  info(1, 1) = 4.0 * f.m2 + z2 / (a * a) + 4.0 * f.x2 / a;
  info(1, 2) = -f.x2 - z2 / (2.0 * a);
  info(2, 2) = n / (2.0 * s2) + z2 / 4.0;
  info(1, 0) = info(0, 1);
  info(2, 0) = info(0, 2);
  info(2, 1) = info(1, 2);
  return info / s2;
}

Eigen::Matrix3d fisher_information_sigma(const Theta& theta, const SufficientStats& stats) {
  // d(sigma^2)/d(sigma) = 2 sigma.
  const Eigen::Vector3d jacobian(1.0, 1.0, 2.0 * theta.sigma);
  return jacobian.asDiagonal() * fisher_information(theta, stats) * jacobian.asDiagonal();
}

double condition_number(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m);
  const auto& sv = svd.singularValues();
  if (sv(2) == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / sv(2);
}

Eigen::Matrix3d asymptotic_cov(const Eigen::Matrix3d& info, double n_eff) {
  if (!(n_eff > 0.0)) throw DomainError("effective sample size must be positive");
  if (!info.allFinite()) throw ConditioningError("information matrix is not finite", kNaN);
  const double cond = condition_number(info);
  if (!(cond < 1.0 / std::numeric_limits<double>::epsilon())) {
    std::ostringstream os;
    os << "information matrix is singular to working precision (condition number " << cond << ")";
    throw ConditioningError(os.str(), cond);
  }
  Eigen::FullPivLU<Eigen::Matrix3d> lu(info);
  Eigen::Matrix3d cov = lu.inverse() / n_eff;
  return 0.5 * (cov + cov.transpose());
}

double delta_error(const Eigen::Vector3d& grad, const Eigen::Matrix3d& cov) {
  const double q = grad.dot(cov * grad);
  if (q < -1e-12) {
    std::ostringstream os;
    os << "delta-method variance is negative (" << q << "); covariance is not PSD";
    throw NumericalError(os.str());
  }
  return std::sqrt(std::max(q, 0.0));
}

std::string_view to_string(Algorithm algorithm) {
  return algorithm == Algorithm::SA ? "sa" : "vns-sa";
}

Algorithm algorithm_from_string(std::string_view name) {
  if (name == "sa") return Algorithm::SA;
  if (name == "vns-sa") return Algorithm::VnsSa;
  throw DomainError("unknown algorithm '" + std::string(name) + "' (expected sa or vns-sa)");
}

Eigen::Vector3d peak_time_gradient(double eta, double alpha) {
  check_eta(eta);
  check_alpha(alpha);
  const double la = std::log(alpha);
  return {1.0 / (eta * la), -std::log(eta) / (alpha * la * la), 0.0};
}

Eigen::Vector3d peak_value_gradient(double eta, double alpha, double y, double s) {
  check_eta(eta);
  check_alpha(alpha);
  const double a = power(alpha, s);
  const double d_eta = y * (eta + a) * (eta - a) / (4.0 * eta * eta * a);
  const double d_a = y * (eta + a) * (a - eta) / (4.0 * eta * a * a);
  return {d_eta, d_a * power_derivative(alpha, s), 0.0};
}

Eigen::Vector3d conditional_mean_gradient(double eta, double alpha, double y, double s, double t) {
  const double m = conditional_mean(t, y, s, eta, alpha);
  const double es = eta + power(alpha, s);
  const double et = eta + power(alpha, t);
  const double d_eta = 2.0 / es - 2.0 / et;
  const double d_alpha =
      2.0 * power_derivative(alpha, s) / es - 2.0 * power_derivative(alpha, t) / et + (t - s) / alpha;
  return {m * d_eta, m * d_alpha, 0.0};
}

FitResult assemble_fit(const PanelData& data, const Theta& theta, double time_shift) {
  check_eta(theta.eta);
  check_alpha(theta.alpha);
  const SufficientStats stats(data, time_shift);
  const InitialMle init = initial_mle(stats);
  FitResult r;
  r.theta = theta;
  r.time_shift = time_shift;
  r.eta_unshifted = theta.eta * power(theta.alpha, time_shift);
  r.first_time = data.first_time();
  r.mu1 = init.mu1;
  r.sigma1_sq = init.sigma1_sq;
  r.initial_mean = observed_initial_level(data);
  if (init.sigma1_sq > 0.0) r.initial_mean = std::exp(init.mu1 + 0.5 * init.sigma1_sq);
  const double s2 = theta.sigma * theta.sigma;
  r.objective_value = objective(stats, theta.eta, theta.alpha, s2);
  r.log_likelihood = log_likelihood(stats, init.mu1, init.sigma1_sq, theta.eta, theta.alpha, s2);
  r.n_eff = stats.transition_count();

  const double n = static_cast<double>(r.n_eff);
  r.information = fisher_information_sigma(theta, stats) / n;
  r.information_condition = condition_number(r.information);
  try {
    r.cov = asymptotic_cov(r.information, n);
    if (r.information_condition > kIllConditioned) {
      std::ostringstream os;
      os << "information matrix is ill-conditioned (condition number "
         << r.information_condition << "); standard errors are unreliable";
      r.warnings.push_back(os.str());
    }
  } catch (const ConditioningError& e) {
    r.cov = nan_matrix();
    r.warnings.push_back(e.what());
  }
  for (int i = 0; i < 3; ++i) r.std_errors[static_cast<std::size_t>(i)] = std::sqrt(r.cov(i, i));
  return r;
}

FitResult fit(const PanelData& data, const FitOptions& options) {
  const double k = data.first_time();
  const SufficientStats stats(data, k);
  BoxReport box = build_box(data, options.urr, options.sigma_cap);

  const Objective target = [&stats](const Point3& theta) {
    const double s2 = theta[2] * theta[2];
    if (!(s2 > 0.0)) return std::numeric_limits<double>::infinity();
    return objective(stats, theta[0], theta[1], s2);
  };

  auto run = [&](std::uint64_t seed) {
    if (options.algorithm == Algorithm::SA) {
      VNSResult r;
      r.initial = simulated_annealing(target, box.box, options.sa, seed);
      r.best = r.initial.best;
      r.evaluations = r.initial.evaluations;
      return r;
    }
    return vns_sa(target, box.box, options.sa, options.vns, seed);
  };
  if (options.restarts == 0) throw DomainError("restarts must be at least 1");
  VNSResult best = multi_start(options.restarts, options.seed, run, options.threads);

  FitResult result = assemble_fit(data, Theta::from_point(best.best.theta), k);
  result.box = std::move(box);
  result.algorithm = options.algorithm;
  result.seed = options.seed;
  result.restarts = options.restarts;
  result.evaluations = best.evaluations;
  result.phase1_value = best.initial.best.value;
  result.stop_reason = best.initial.stop_reason;
  result.trace = std::move(best.initial.trace);
  return result;
}

PeakEstimate estimate_peak(const FitResult& fit, std::optional<Conditioning> conditioning) {
  const double eta = fit.theta.eta;
  const double alpha = fit.theta.alpha;
  const double k = fit.time_shift;
  double y = fit.initial_mean;
  double reference = fit.first_time;
  if (conditioning) {
    if (!(conditioning->x_s > 0.0)) throw DomainError("conditioning value must be positive");
    y = conditioning->x_s;
    reference = conditioning->s;
  }
  const double s = reference - k;
  const double a = power(alpha, s);

  PeakEstimate out;
  out.peak_time.value = peak_time(eta, alpha) + k;
  out.peak_time.std_error = delta_error(peak_time_gradient(eta, alpha), fit.cov);
  out.peak.value = y * (eta + a) * (eta + a) / (4.0 * eta * a);
  out.peak.std_error = delta_error(peak_value_gradient(eta, alpha, y, s), fit.cov);
  out.already_passed = out.peak_time.value <= reference;
  return out;
}

Forecast forecast(const FitResult& fit, Conditioning conditioning,
                  const std::vector<double>& horizon, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
  if (!(conditioning.x_s > 0.0)) throw DomainError("conditioning value must be positive");
  const double z = boost::math::quantile(boost::math::normal(), 0.5 + 0.5 * level);
  const double k = fit.time_shift;
  const double s = conditioning.s - k;
  Forecast out{conditioning, level, {}};
  out.points.reserve(horizon.size());
  for (double time : horizon) {
    if (!(time > conditioning.s)) {
      std::ostringstream os;
      os << "forecast time " << time << " is not after the conditioning time " << conditioning.s;
      throw OrderingError(os.str());
    }
    const double t = time - k;
    const double m = conditional_mean(t, conditioning.x_s, s, fit.theta.eta, fit.theta.alpha);
    const double se = delta_error(
        conditional_mean_gradient(fit.theta.eta, fit.theta.alpha, conditioning.x_s, s, t), fit.cov);
    out.points.push_back({time, m, m - z * se, m + z * se, se});
  }
  return out;
}

}  // namespace hubbert
