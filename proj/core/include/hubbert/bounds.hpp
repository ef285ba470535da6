#pragma once

#include <array>
#include <optional>

#include "hubbert/panel.hpp"

namespace hubbert {

/// Upper bound 2 - sqrt(3) on eta: the first inflection point is visible only below it.
inline constexpr double kEtaUpper = 0.26794919243112270;
/// Default upper bound on sigma.
inline constexpr double kDefaultSigmaCap = 0.1;

/// Open box (lower, upper) in (eta, alpha, sigma) coordinates.
struct SolutionBox {
  std::array<double, 3> lower{};
  std::array<double, 3> upper{};

  /// (0, 2 - sqrt 3) x (0, alpha_star) x (0, sigma_cap).
  static SolutionBox standard(double alpha_star = 1.0, double sigma_cap = kDefaultSigmaCap);

  double width(std::size_t i) const { return upper[i] - lower[i]; }
  /// Strictly inside in every coordinate.
  bool contains(const std::array<double, 3>& point) const;

  bool operator==(const SolutionBox&) const = default;
};

/// alpha_1 = exp(-4 x0 / URR).
double alpha1(double x0, double urr);

/// alpha_2 = |(M - 1)/(M + 1)|^(2/h) with M = c / URR and h = tF - t0.
///
/// For 0 < M < 1 the base is negative; the bound is the squared ratio raised to 1/h.
double alpha2(double c, double urr, double t0, double tF);

/// Trapezoidal integral of the observed values over [t1, tF], averaged over
/// paths, where tF is the earliest final time among the paths (the common
/// observation window; longer paths are linearly interpolated at tF).
double observed_cumulative(const PanelData& data);

/// Mean of the initial observations, x0.
double observed_initial_level(const PanelData& data);

struct BoxReport {
  SolutionBox box;
  std::optional<double> alpha1;
  std::optional<double> alpha2;
  double alpha_star = 1.0;
  double cumulative = 0.0;  ///< c, integral of the observed series over the window
  double x0 = 0.0;
  double t0 = 0.0;
  double tF = 0.0;
  bool fallback = true;  ///< no URR: alpha is only bounded by 1
};

/// Bounded search region for (eta, alpha, sigma).
///
/// With a URR estimate alpha_star = min(alpha_1, alpha_2); without one the
/// alpha range is the whole (0, 1). Throws InfeasibleError when the observed
/// cumulative production already reaches the URR.
BoxReport build_box(const PanelData& data, std::optional<double> urr = std::nullopt,
                    double sigma_cap = kDefaultSigmaCap);

}  // namespace hubbert
