#include "hubbert/curve.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hubbert/error.hpp"

namespace hubbert {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;

[[noreturn]] void domain_failure(const char* name, double value, const char* requirement) {
  std::ostringstream os;
  os << name << " = " << value << " violates " << requirement;
  throw DomainError(os.str());
}

}  // namespace

double power(double alpha, double t) noexcept { return std::exp(t * std::log(alpha)); }

void check_eta(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) domain_failure("eta", eta, "eta > 0");
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) domain_failure("alpha", alpha, "0 < alpha < 1");
}

CurveParams::CurveParams(double eta, double alpha, double x0, double t0)
    : eta_(eta), alpha_(alpha), x0_(x0), t0_(t0) {
  check_eta(eta);
  check_alpha(alpha);
  if (!(x0 > 0.0) || !std::isfinite(x0)) domain_failure("x0", x0, "x0 > 0");
  if (!std::isfinite(t0)) domain_failure("t0", t0, "a finite initial time");
}

bool CurveParams::peak_after_start() const noexcept { return eta_ < power(alpha_, t0_); }

double growth_factor(double t, double s, double eta, double alpha) noexcept {
  const double ratio = (eta + power(alpha, s)) / (eta + power(alpha, t));
  return ratio * ratio * power(alpha, t - s);
}

double logistic_value(double t, double k, double eta, double alpha) {
  if (!(k > 0.0)) domain_failure("k", k, "k > 0");
  check_eta(eta);
  check_alpha(alpha);
  return k / (eta + power(alpha, t));
}

double hubbert_value(double t, const CurveParams& p) {
  if (t == p.t0()) return p.x0();
  return p.x0() * growth_factor(t, p.t0(), p.eta(), p.alpha());
}

double peak_time(double eta, double alpha) {
  check_eta(eta);
  check_alpha(alpha);
  return std::log(eta) / std::log(alpha);
}

double peak_value(const CurveParams& p) {
  const double a = power(p.alpha(), p.t0());
  const double sum = p.eta() + a;
  return p.x0() * sum * sum / (4.0 * p.eta() * a);
}

InflectionTimes inflection_times(double eta, double alpha) {
  const double t_max = peak_time(eta, alpha);
  // ln(2+sqrt3) = -ln(2-sqrt3), so the two offsets are exact negatives.
  const double offset = std::log(2.0 + kSqrt3) / std::log(alpha);
  return {t_max + offset, t_max - offset};
}

bool first_inflection_visible(double eta, double alpha, double t0) {
  check_eta(eta);
  check_alpha(alpha);
  return eta < power(alpha, t0) * (2.0 - kSqrt3);
}

double urr(const CurveParams& p) {
  const double a = power(p.alpha(), p.t0());
  const double sum = p.eta() + a;
  return -p.x0() * sum * sum / (p.eta() * a * std::log(p.alpha()));
}

double cumulative(const CurveParams& p, double from, double to) {
  const double a_from = power(p.alpha(), from);
  const double a_to = power(p.alpha(), to);
  if (std::isinf(a_from) || std::isinf(a_to))
    return p.eta() * urr(p) * (1.0 / (p.eta() + a_to) - 1.0 / (p.eta() + a_from));
  return p.eta() * urr(p) * (a_from - a_to) / ((p.eta() + a_from) * (p.eta() + a_to));
}

double shift_parameters(double eta, double alpha, double k) {
  check_eta(eta);
  check_alpha(alpha);
  if (!std::isfinite(k)) domain_failure("k", k, "a finite shift");
  return eta * power(alpha, -k);
}

}  // namespace hubbert
