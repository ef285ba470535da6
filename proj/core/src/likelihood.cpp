#include "hubbert/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "hubbert/curve.hpp"
#include "hubbert/error.hpp"

namespace hubbert {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kInf = std::numeric_limits<double>::infinity();

// T = ln((eta + alpha^t_prev) / (eta + alpha^t)), written so that nearly equal
// terms keep their relative precision.
double log_ratio_term(double a_prev, double a_cur, double eta) {
  return std::log1p((a_prev - a_cur) / (eta + a_cur));
}

void check_sigma_sq(double sigma_sq) {
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq))
    throw DomainError("sigma^2 must be positive and finite");
}

// Bracketed quadratic form shared by the log-likelihood and the objective.
double quadratic_form(const SufficientStats& s, const EtaAlphaSums& sums, double alpha,
                      double sigma_sq) {
  const double c = std::log(alpha) - 0.5 * sigma_sq;
  return s.z1() + 4.0 * (sums.y1 - sums.y2) + c * (c * s.z2() - 2.0 * (s.z3() - 2.0 * sums.r));
}

// Log-density of the initial observations; zero for a degenerate start.
double initial_log_density(const SufficientStats& stats, double mu1, double sigma1_sq) {
  if (!(sigma1_sq >= 0.0)) throw DomainError("sigma1^2 must be nonnegative");
  if (sigma1_sq == 0.0) return 0.0;
  const double d = static_cast<double>(stats.path_count());
  double squares = 0.0;
  double logs = 0.0;
  for (double v : stats.initial_log_values()) {
    squares += (v - mu1) * (v - mu1);
    logs += v;
  }
  return -0.5 * d * (kLog2Pi + std::log(sigma1_sq)) - logs - squares / (2.0 * sigma1_sq);
}

}  // namespace

SufficientStats::SufficientStats(const PanelData& data, double time_shift)
    : n_(data.observation_count()), d_(data.path_count()), time_shift_(time_shift) {
  std::map<std::pair<double, double>, std::size_t> group_index;
  std::map<std::pair<double, double>, std::size_t> endpoint_index;
  transitions_.reserve(data.transition_count());
  for (const Path& p : data.paths()) {
    initial_log_values_.push_back(std::log(p.values.front()));
    z2_ += p.times.back() - p.times.front();
    z3_ += std::log(p.values.back() / p.values.front());
    for (std::size_t j = 1; j < p.size(); ++j) {
      const double t_prev = p.times[j - 1] - time_shift;
      const double t = p.times[j] - time_shift;
      const double dt = p.times[j] - p.times[j - 1];
      const double lr = std::log(p.values[j] / p.values[j - 1]);
      transitions_.push_back({t_prev, t, dt, lr});
      z1_ += lr * lr / dt;
      sum_log_values_ += std::log(p.values[j]);
      sum_log_gaps_ += std::log(dt);

      auto [it, inserted] = group_index.try_emplace({t_prev, t}, groups_.size());
      if (inserted) groups_.push_back({t_prev, t, dt, 0.0, 0.0});
      groups_[it->second].count += 1.0;
      groups_[it->second].sum_log_ratio += lr;
    }
    const double first = p.times.front() - time_shift;
    const double last = p.times.back() - time_shift;
    auto [it, inserted] = endpoint_index.try_emplace({first, last}, endpoints_.size());
    if (inserted) endpoints_.push_back({first, last, 0.0});
    endpoints_[it->second].count += 1.0;
  }
}

InitialMle initial_mle(const SufficientStats& stats) {
  const auto& logs = stats.initial_log_values();
  const double d = static_cast<double>(logs.size());
  // Identical starts must give exactly zero variance, not rounding residue.
  const auto [lo, hi] = std::minmax_element(logs.begin(), logs.end());
  if (*lo == *hi) return {*lo, 0.0};
  double mu = 0.0;
  for (double v : logs) mu += v;
  mu /= d;
  double var = 0.0;
  for (double v : logs) var += (v - mu) * (v - mu);
  return {mu, var / d};
}

InitialMle initial_mle(const PanelData& data) { return initial_mle(SufficientStats(data)); }

EtaAlphaSums eta_alpha_sums(const SufficientStats& stats, double eta, double alpha) {
  check_eta(eta);
  check_alpha(alpha);
  EtaAlphaSums sums{0.0, 0.0, 0.0};
  for (const auto& g : stats.groups()) {
    const double term = log_ratio_term(power(alpha, g.t_prev), power(alpha, g.t), eta);
    sums.y1 += g.count * term * term / g.dt;
    sums.y2 += g.sum_log_ratio * term / g.dt;
  }
  for (const auto& e : stats.endpoints())
    sums.r += e.count * log_ratio_term(power(alpha, e.t_first), power(alpha, e.t_last), eta);
  return sums;
}

EtaAlphaSums eta_alpha_sums_direct(const SufficientStats& stats, double eta, double alpha) {
  check_eta(eta);
  check_alpha(alpha);
  EtaAlphaSums sums{0.0, 0.0, 0.0};
  for (const auto& tr : stats.transitions()) {
    const double term = log_ratio_term(power(alpha, tr.t_prev), power(alpha, tr.t), eta);
    sums.y1 += term * term / tr.dt;
    sums.y2 += tr.log_ratio * term / tr.dt;
    sums.r += term;
  }
  return sums;
}

double log_likelihood(const SufficientStats& stats, double mu1, double sigma1_sq, double eta,
                      double alpha, double sigma_sq) {
  check_sigma_sq(sigma_sq);
  const EtaAlphaSums sums = eta_alpha_sums(stats, eta, alpha);
  const double transitions = static_cast<double>(stats.transition_count());
  double value = -0.5 * transitions * (kLog2Pi + std::log(sigma_sq)) - stats.sum_log_values() -
                 0.5 * stats.sum_log_gaps() -
                 quadratic_form(stats, sums, alpha, sigma_sq) / (2.0 * sigma_sq);
  value += initial_log_density(stats, mu1, sigma1_sq);
  return std::isfinite(value) ? value : -kInf;
}

double log_likelihood(const PanelData& data, double mu1, double sigma1_sq, double eta,
                      double alpha, double sigma_sq) {
  return log_likelihood(SufficientStats(data), mu1, sigma1_sq, eta, alpha, sigma_sq);
}

double objective(const SufficientStats& stats, double eta, double alpha, double sigma_sq) {
  // sigma^2 underflowing to zero is the limit where g diverges.
  if (sigma_sq == 0.0) return kInf;
  check_sigma_sq(sigma_sq);
  const EtaAlphaSums sums = eta_alpha_sums(stats, eta, alpha);
  const double transitions = static_cast<double>(stats.transition_count());
  const double value = 0.5 * transitions * std::log(sigma_sq) +
                       quadratic_form(stats, sums, alpha, sigma_sq) / (2.0 * sigma_sq);
  return std::isfinite(value) ? value : kInf;
}

double objective(const PanelData& data, double eta, double alpha, double sigma_sq) {
  return objective(SufficientStats(data), eta, alpha, sigma_sq);
}

double objective_offset(const SufficientStats& stats, double mu1, double sigma1_sq) {
  // g + L = the theta-free terms of the log-likelihood.
  const double transitions = static_cast<double>(stats.transition_count());
  double offset = -0.5 * transitions * kLog2Pi - stats.sum_log_values() - 0.5 * stats.sum_log_gaps();
  offset += initial_log_density(stats, mu1, sigma1_sq);
  return offset;
}

double profile_sigma_sq(const SufficientStats& stats, double eta, double alpha) {
  const EtaAlphaSums sums = eta_alpha_sums(stats, eta, alpha);
  const double la = std::log(alpha);
  const double b = stats.z3() - 2.0 * sums.r;
  const double a = stats.z1() + 4.0 * (sums.y1 - sums.y2) + la * la * stats.z2() - 2.0 * la * b;
  const double n = static_cast<double>(stats.transition_count());
  // Positive root of Z2 s^2 + 4 n s - 4 A = 0.
  return 2.0 * a / (n + std::sqrt(n * n + stats.z2() * a));
}

}  // namespace hubbert
