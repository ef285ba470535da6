#pragma once

#include <cstddef>
#include <vector>

#include "hubbert/panel.hpp"

namespace hubbert {

/// Data summaries through which the log-likelihood of a panel depends on the sample.
///
/// Times are stored shifted by `time_shift` (t - k). Every eta passed to the
/// functions below refers to that shifted time axis; with k = t1 the first
/// observation sits at time 0 and alpha^t never underflows for realistic
/// calendar years.
///
/// Transitions that share the same pair of observation times (common when all
/// paths are sampled on one grid) are also aggregated into groups, so an
/// objective evaluation costs one pair of exponentials per distinct time pair
/// instead of one per transition.
class SufficientStats {
 public:
  struct Transition {
    double t_prev;
    double t;
    double dt;
    double log_ratio;  ///< ln(x_ij / x_i,j-1)
  };

  struct TransitionGroup {
    double t_prev;
    double t;
    double dt;
    double count;
    double sum_log_ratio;
  };

  struct EndpointGroup {
    double t_first;
    double t_last;
    double count;
  };

  explicit SufficientStats(const PanelData& data, double time_shift = 0.0);

  double z1() const noexcept { return z1_; }
  double z2() const noexcept { return z2_; }
  double z3() const noexcept { return z3_; }
  std::size_t observation_count() const noexcept { return n_; }
  std::size_t path_count() const noexcept { return d_; }
  std::size_t transition_count() const noexcept { return n_ - d_; }
  double time_shift() const noexcept { return time_shift_; }

  /// Sum of ln x_ij over all non-initial observations.
  double sum_log_values() const noexcept { return sum_log_values_; }
  /// Sum of ln(t_ij - t_i,j-1) over all transitions.
  double sum_log_gaps() const noexcept { return sum_log_gaps_; }
  /// ln x_i1 for every path.
  const std::vector<double>& initial_log_values() const noexcept { return initial_log_values_; }

  /// One entry per transition, N - d in total, with shifted times.
  const std::vector<Transition>& transitions() const noexcept { return transitions_; }
  const std::vector<TransitionGroup>& groups() const noexcept { return groups_; }
  const std::vector<EndpointGroup>& endpoints() const noexcept { return endpoints_; }

 private:
  double z1_ = 0.0;
  double z2_ = 0.0;
  double z3_ = 0.0;
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  double time_shift_ = 0.0;
  double sum_log_values_ = 0.0;
  double sum_log_gaps_ = 0.0;
  std::vector<double> initial_log_values_;
  std::vector<Transition> transitions_;
  std::vector<TransitionGroup> groups_;
  std::vector<EndpointGroup> endpoints_;
};

struct InitialMle {
  double mu1;
  double sigma1_sq;
};

/// Sample mean and (biased) variance of ln x_i1. For a single path: (ln x_11, 0).
InitialMle initial_mle(const PanelData& data);
InitialMle initial_mle(const SufficientStats& stats);

/// The (eta, alpha)-dependent sums Y1, Y2 and R.
struct EtaAlphaSums {
  double y1;
  double y2;
  double r;
};

/// Evaluated from the grouped transitions.
EtaAlphaSums eta_alpha_sums(const SufficientStats& stats, double eta, double alpha);
/// Same sums evaluated transition by transition; R is the telescoped sum of the T_ij.
EtaAlphaSums eta_alpha_sums_direct(const SufficientStats& stats, double eta, double alpha);

/// Exact log-likelihood of the panel.
///
/// With sigma1_sq = 0 the initial distribution is taken as degenerate and its
/// density terms are dropped, leaving the N - d transition terms. Returns
/// -infinity at numerically infeasible points.
double log_likelihood(const SufficientStats& stats, double mu1, double sigma1_sq, double eta,
                      double alpha, double sigma_sq);
double log_likelihood(const PanelData& data, double mu1, double sigma1_sq, double eta,
                      double alpha, double sigma_sq);

/// Minimisation target g(eta, alpha, sigma^2): -log_likelihood up to terms that
/// only depend on the data. Returns +infinity at numerically infeasible points,
/// including sigma_sq == 0; throws DomainError for negative or NaN sigma_sq.
double objective(const SufficientStats& stats, double eta, double alpha, double sigma_sq);
double objective(const PanelData& data, double eta, double alpha, double sigma_sq);

/// objective(theta) + log_likelihood(mu1, sigma1_sq, theta), independent of theta.
double objective_offset(const SufficientStats& stats, double mu1, double sigma1_sq);

/// sigma^2 minimising g for fixed (eta, alpha), from the first-order condition.
double profile_sigma_sq(const SufficientStats& stats, double eta, double alpha);

}  // namespace hubbert
