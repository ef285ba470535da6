#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hubbert/bounds.hpp"
#include "hubbert/likelihood.hpp"
#include "hubbert/optimize.hpp"
#include "hubbert/panel.hpp"

namespace hubbert {

/// (eta, alpha, sigma) of the Hubbert diffusion. eta refers to the time axis
/// the parameters were estimated on (see FitResult::time_shift).
struct Theta {
  double eta;
  double alpha;
  double sigma;

  Point3 as_point() const { return {eta, alpha, sigma}; }
  static Theta from_point(const Point3& p) { return {p[0], p[1], p[2]}; }
};

/// Expected Fisher information of the whole panel in (eta, alpha, sigma^2)
/// coordinates, summed over all N - d transitions. Times are those of `stats`
/// (i.e. shifted), so theta.eta must be the shifted eta.
Eigen::Matrix3d fisher_information(const Theta& theta, const SufficientStats& stats);

/// The same information expressed in (eta, alpha, sigma) coordinates.
Eigen::Matrix3d fisher_information_sigma(const Theta& theta, const SufficientStats& stats);

/// inverse(info) / n_eff. Throws ConditioningError (with the condition number)
/// when `info` is singular to working precision.
Eigen::Matrix3d asymptotic_cov(const Eigen::Matrix3d& info, double n_eff);

/// 2-norm condition number of a symmetric 3x3 matrix.
double condition_number(const Eigen::Matrix3d& m);

/// sqrt(grad' cov grad). Throws NumericalError when the quadratic form is below -1e-12.
double delta_error(const Eigen::Vector3d& grad, const Eigen::Matrix3d& cov);

/// Estimate together with its delta-method standard error.
struct Estimate {
  double value;
  double std_error;
};

enum class Algorithm { SA, VnsSa };

std::string_view to_string(Algorithm algorithm);
Algorithm algorithm_from_string(std::string_view name);

struct FitOptions {
  std::optional<double> urr;
  double sigma_cap = kDefaultSigmaCap;
  SAConfig sa;
  VNSConfig vns;
  Algorithm algorithm = Algorithm::VnsSa;
  std::uint64_t seed = 1;
  std::size_t restarts = 1;
  unsigned threads = 0;
};

struct FitResult {
  Theta theta;                 ///< estimates on the shifted time axis
  double eta_unshifted = 0.0;  ///< eta on the original time axis, eta * alpha^k
  double time_shift = 0.0;     ///< k, the first observation time
  double mu1 = 0.0;
  double sigma1_sq = 0.0;
  double initial_mean = 0.0;   ///< estimated E[X(t1)]
  double first_time = 0.0;     ///< t1 in original time
  double objective_value = 0.0;
  double log_likelihood = 0.0;
  std::size_t n_eff = 0;       ///< N - d
  Eigen::Matrix3d information = Eigen::Matrix3d::Zero();  ///< per transition, (eta, alpha, sigma)
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();          ///< (eta, alpha, sigma)
  std::array<double, 3> std_errors{};
  double information_condition = 0.0;
  std::vector<std::string> warnings;

  // Run metadata.
  BoxReport box;
  Algorithm algorithm = Algorithm::VnsSa;
  std::uint64_t seed = 0;
  std::size_t restarts = 1;
  std::size_t evaluations = 0;
  double phase1_value = 0.0;    ///< SA result the VNS phase started from
  StopReason stop_reason = StopReason::FinalTemperature;
  std::vector<LevelTrace> trace;  ///< phase-1 SA trace of the selected run
};

/// Fills theta-dependent fields of a FitResult (likelihood, information,
/// covariance) for given parameters; used by fit() and for published values.
FitResult assemble_fit(const PanelData& data, const Theta& theta_shifted, double time_shift);

/// Shifts times by k = t1, estimates the initial law, bounds the search box,
/// minimises the objective and attaches Fisher-based standard errors.
/// Deterministic for a given seed.
FitResult fit(const PanelData& data, const FitOptions& options = {});

/// Conditioning point for conditional peak and forecasts, in original time.
struct Conditioning {
  double s;
  double x_s;
};

struct PeakEstimate {
  Estimate peak_time;  ///< original time axis
  Estimate peak;
  bool already_passed = false;  ///< peak time at or before the reference time
};

/// Plug-in peak time and peak. Unconditional mode uses E[X(t1)]; conditional
/// mode uses the observed value x_s at time s.
PeakEstimate estimate_peak(const FitResult& fit, std::optional<Conditioning> conditioning = {});

struct ForecastPoint {
  double time;
  double mean;
  double lower;
  double upper;
  double std_error;
};

struct Forecast {
  Conditioning conditioning;
  double level;
  std::vector<ForecastPoint> points;
};

/// Conditional-mean forecast with normal delta-method bands at `level`.
/// Throws OrderingError for horizon times not after s.
Forecast forecast(const FitResult& fit, Conditioning conditioning,
                  const std::vector<double>& horizon, double level = 0.95);

// Analytic gradients with respect to (eta, alpha, sigma), all on the shifted axis.
Eigen::Vector3d peak_time_gradient(double eta, double alpha);
/// Gradient of y (eta + alpha^s)^2 / (4 eta alpha^s).
Eigen::Vector3d peak_value_gradient(double eta, double alpha, double y, double s);
/// Gradient of y ((eta + alpha^s)/(eta + alpha^t))^2 alpha^(t - s).
Eigen::Vector3d conditional_mean_gradient(double eta, double alpha, double y, double s, double t);

}  // namespace hubbert
