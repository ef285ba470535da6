#pragma once

#include <utility>

namespace hubbert {

/// alpha^t evaluated as exp(t * ln alpha), so large t underflows gracefully to 0.
double power(double alpha, double t) noexcept;

/// Throws DomainError unless eta > 0.
void check_eta(double eta);
/// Throws DomainError unless 0 < alpha < 1.
void check_alpha(double alpha);

/// Parameters of a deterministic Hubbert curve through (t0, x0).
///
/// The curve is unit-agnostic: alpha is a per-time-unit decay base, so its
/// meaning depends on whatever unit the times are expressed in (years for
/// annual production series).
class CurveParams {
 public:
  /// Throws DomainError unless eta > 0, 0 < alpha < 1 and x0 > 0.
  CurveParams(double eta, double alpha, double x0, double t0);

  double eta() const noexcept { return eta_; }
  double alpha() const noexcept { return alpha_; }
  double x0() const noexcept { return x0_; }
  double t0() const noexcept { return t0_; }

  /// True when the peak lies after the initial time (0 < eta < alpha^t0).
  bool peak_after_start() const noexcept;

 private:
  double eta_;
  double alpha_;
  double x0_;
  double t0_;
};

/// Ratio x(t)/x(s) of any Hubbert curve: ((eta + alpha^s)/(eta + alpha^t))^2 alpha^(t-s).
double growth_factor(double t, double s, double eta, double alpha) noexcept;

/// Logistic curve k / (eta + alpha^t).
double logistic_value(double t, double k, double eta, double alpha);

/// Hubbert curve, the derivative of the logistic curve normalised to pass through (t0, x0).
double hubbert_value(double t, const CurveParams& p);

/// Time of the maximum, ln(eta)/ln(alpha).
double peak_time(double eta, double alpha);

/// Height of the maximum, x0 (eta + alpha^t0)^2 / (4 eta alpha^t0).
double peak_value(const CurveParams& p);

struct InflectionTimes {
  double first;   ///< before the peak
  double second;  ///< after the peak
};

/// The two inflection points, symmetric around peak_time.
InflectionTimes inflection_times(double eta, double alpha);

/// True when the first inflection point lies after t0, i.e. eta < alpha^t0 (2 - sqrt 3).
bool first_inflection_visible(double eta, double alpha, double t0);

/// Ultimate recoverable resources: the area under the whole curve (over the real line).
double urr(const CurveParams& p);

/// Integral of the curve over [from, to] in closed form.
double cumulative(const CurveParams& p, double from, double to);

/// eta of the same curve after shifting the time origin forward by k: eta * alpha^(-k).
double shift_parameters(double eta, double alpha, double k);

}  // namespace hubbert
