#include "hubbert/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hubbert/error.hpp"

namespace hubbert {

SolutionBox SolutionBox::standard(double alpha_star, double sigma_cap) {
  if (!(alpha_star > 0.0 && alpha_star <= 1.0))
    throw DomainError("alpha_star must lie in (0, 1]");
  if (!(sigma_cap > 0.0) || !std::isfinite(sigma_cap))
    throw DomainError("sigma cap must be positive");
  return SolutionBox{{0.0, 0.0, 0.0}, {kEtaUpper, alpha_star, sigma_cap}};
}

bool SolutionBox::contains(const std::array<double, 3>& point) const {
  for (std::size_t i = 0; i < 3; ++i)
    if (!(point[i] > lower[i] && point[i] < upper[i])) return false;
  return true;
}

double alpha1(double x0, double urr) {
  if (!(x0 > 0.0)) throw DomainError("x0 must be positive");
  if (!(urr > 0.0)) throw DomainError("URR must be positive");
  return std::exp(-4.0 * x0 / urr);
}

double alpha2(double c, double urr, double t0, double tF) {
  if (!(urr > 0.0)) throw DomainError("URR must be positive");
  if (!(c > 0.0)) throw DomainError("cumulative production c must be positive");
  if (!(tF > t0)) throw OrderingError("final observation time must exceed the initial one");
  if (c >= urr) {
    std::ostringstream os;
    os << "observed cumulative production " << c << " reaches the URR estimate " << urr
       << "; the URR is inconsistent with the data";
    throw InfeasibleError(os.str());
  }
  const double m = c / urr;
  const double base = (m - 1.0) / (m + 1.0);
  return std::pow(base * base, 1.0 / (tF - t0));
}

double observed_initial_level(const PanelData& data) {
  double sum = 0.0;
  for (const Path& p : data.paths()) sum += p.values.front();
  return sum / static_cast<double>(data.path_count());
}

namespace {

double common_end(const PanelData& data) {
  double end = data.paths().front().times.back();
  for (const Path& p : data.paths()) end = std::min(end, p.times.back());
  return end;
}

double trapezoid(const Path& p, double end) {
  double area = 0.0;
  for (std::size_t j = 1; j < p.size(); ++j) {
    const double a = p.times[j - 1];
    if (a >= end) break;
    double b = p.times[j];
    double fb = p.values[j];
    if (b > end) {
      fb = p.values[j - 1] + (p.values[j] - p.values[j - 1]) * (end - a) / (b - a);
      b = end;
    }
    area += 0.5 * (p.values[j - 1] + fb) * (b - a);
  }
  return area;
}

}  // namespace

double observed_cumulative(const PanelData& data) {
  const double end = common_end(data);
  double sum = 0.0;
  for (const Path& p : data.paths()) sum += trapezoid(p, end);
  return sum / static_cast<double>(data.path_count());
}

BoxReport build_box(const PanelData& data, std::optional<double> urr, double sigma_cap) {
  BoxReport report;
  report.x0 = observed_initial_level(data);
  report.t0 = data.first_time();
  report.tF = common_end(data);
  report.cumulative = observed_cumulative(data);
  if (urr) {
    if (!(*urr > 0.0)) throw DomainError("URR must be positive");
    report.alpha1 = alpha1(report.x0, *urr);
    report.alpha2 = alpha2(report.cumulative, *urr, report.t0, report.tF);
    report.alpha_star = std::min(*report.alpha1, *report.alpha2);
    report.fallback = false;
  }
  report.box = SolutionBox::standard(report.alpha_star, sigma_cap);
  return report;
}

}  // namespace hubbert
