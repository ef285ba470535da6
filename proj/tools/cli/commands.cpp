#include "commands.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include <hubbert/bounds.hpp>
#include <hubbert/curve.hpp>
#include <hubbert/error.hpp>
#include <hubbert/process.hpp>

#include "dataset.hpp"
#include "format.hpp"

namespace hubbert::cli {

using nlohmann::json;

namespace {

json nullable(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

json matrix_json(const Eigen::Matrix3d& m) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
  return rows;
}

json data_json(const PanelData& data) {
  return {{"paths", data.path_count()},
          {"observations", data.observation_count()},
          {"first_time", data.first_time()},
          {"last_time", data.last_time()}};
}

json estimate_json(const Estimate& e) { return {{"value", e.value}, {"std_error", e.std_error}}; }

json peak_json(const PeakEstimate& p) {
  return {{"peak_time", estimate_json(p.peak_time)},
          {"peak", estimate_json(p.peak)},
          {"already_passed", p.already_passed}};
}

double number_or_nan(const json& v) {
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return v.get<double>();
}

}  // namespace

PanelData run_simulate(const SimulateArgs& a) {
  InitialDistribution init = InitialDistribution::degenerate(a.x0);
  if (a.sigma0_sq && *a.sigma0_sq > 0.0)
    init = InitialDistribution::lognormal(a.mu0.value_or(std::log(a.x0)), *a.sigma0_sq);
  const ProcessParams params{a.eta, a.alpha, a.sigma, init, a.t0};
  PathGrid grid = PathGrid::uniform(a.t0, a.step, a.points);
  if (a.subsample) grid = grid.subsample(a.stride);
  return simulate_paths(params, grid, a.paths, a.seed, a.threads);
}

json run_bounds(const PanelData& data, const RunConfig& config) {
  config.validate();
  const BoxReport r = build_box(data, config.urr, config.sigma_cap);
  json out = {
      {"schema_version", kSchemaVersion},
      {"command", "bounds"},
      {"config", to_json(config)},
      {"data", data_json(data)},
      {"eta_upper", r.box.upper[0]},
      {"alpha1", nullable(r.alpha1)},
      {"alpha2", nullable(r.alpha2)},
      {"alpha_star", r.alpha_star},
      {"sigma_upper", r.box.upper[2]},
      {"cumulative", r.cumulative},
      {"x0", r.x0},
      {"t0", r.t0},
      {"tF", r.tF},
      {"fallback", r.fallback},
  };
  if (r.fallback) out["note"] = "no URR given: alpha is bounded only by 1";
  return out;
}

FitOutput run_fit(const PanelData& data, const RunConfig& config,
                  std::optional<Conditioning> conditioning, unsigned threads) {
  config.validate();
  FitOptions options = config.fit_options();
  options.threads = threads;
  FitResult f = fit(data, options);

  json peaks = {{"unconditional", peak_json(estimate_peak(f))}};
  if (conditioning) {
    json c = peak_json(estimate_peak(f, conditioning));
    c["s"] = conditioning->s;
    c["x_s"] = conditioning->x_s;
    peaks["conditional"] = std::move(c);
  }
  const BoxReport& b = f.box;
  json doc = {
      {"schema_version", kSchemaVersion},
      {"command", "fit"},
      {"config", to_json(config)},
      {"data", data_json(data)},
      {"estimates",
       {{"eta", f.theta.eta},
        {"eta_unshifted", f.eta_unshifted},
        {"alpha", f.theta.alpha},
        {"sigma", f.theta.sigma},
        {"time_shift", f.time_shift}}},
      {"std_errors", {{"eta", f.std_errors[0]}, {"alpha", f.std_errors[1]}, {"sigma", f.std_errors[2]}}},
      {"initial",
       {{"mu1", f.mu1}, {"sigma1_sq", f.sigma1_sq}, {"mean", f.initial_mean}, {"first_time", f.first_time}}},
      {"objective_value", f.objective_value},
      {"log_likelihood", f.log_likelihood},
      {"n_eff", f.n_eff},
      {"information", matrix_json(f.information)},
      {"covariance", matrix_json(f.cov)},
      {"information_condition", f.information_condition},
      {"warnings", f.warnings},
      {"peak", std::move(peaks)},
      {"metadata",
       {{"algorithm", std::string(to_string(f.algorithm))},
        {"seed", f.seed},
        {"restarts", f.restarts},
        {"evaluations", f.evaluations},
        {"phase1_objective", f.phase1_value},
        {"stop_reason", std::string(to_string(f.stop_reason))},
        {"trace_levels", f.trace.size()},
        {"box",
         {{"lower", b.box.lower},
          {"upper", b.box.upper},
          {"alpha1", nullable(b.alpha1)},
          {"alpha2", nullable(b.alpha2)},
          {"alpha_star", b.alpha_star},
          {"cumulative", b.cumulative},
          {"fallback", b.fallback}}}}},
  };
  return {std::move(f), std::move(doc)};
}

void write_trace(std::ostream& out, const std::vector<LevelTrace>& trace) {
  out << "level,temperature,acceptance_rate,current_value,best_value,step_eta,step_alpha,step_sigma\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const LevelTrace& t = trace[i];
    out << i << ',' << format_number(t.temperature) << ',' << format_number(t.acceptance_rate) << ','
        << format_number(t.current_value) << ',' << format_number(t.best_value);
    for (double w : t.step) out << ',' << format_number(w);
    out << '\n';
  }
}

FitResult fit_from_json(const json& doc) {
  try {
    if (!doc.is_object() || doc.value("command", "") != "fit")
      throw ParseError("not a fit document (missing \"command\": \"fit\")");
    if (doc.at("schema_version").get<int>() != kSchemaVersion)
      throw ParseError("unsupported schema_version " + doc.at("schema_version").dump());
    FitResult f;
    const json& e = doc.at("estimates");
    f.theta = {e.at("eta").get<double>(), e.at("alpha").get<double>(), e.at("sigma").get<double>()};
    f.time_shift = e.at("time_shift").get<double>();
    f.eta_unshifted = e.at("eta_unshifted").get<double>();
    const json& init = doc.at("initial");
    f.first_time = init.at("first_time").get<double>();
    f.initial_mean = init.at("mean").get<double>();
    f.mu1 = init.at("mu1").get<double>();
    f.sigma1_sq = init.at("sigma1_sq").get<double>();
    const json& cov = doc.at("covariance");
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) f.cov(i, j) = number_or_nan(cov.at(i).at(j));
    check_eta(f.theta.eta);
    check_alpha(f.theta.alpha);
    return f;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed fit document: ") + e.what());
  } catch (const DomainError& e) {
    throw ParseError(std::string("malformed fit document: ") + e.what());
  }
}

std::vector<double> horizon(double from, double to, double step) {
  if (!(step > 0.0)) throw DomainError("forecast step must be positive");
  if (to < from) throw OrderingError("forecast end precedes its start");
  const auto n = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9));
  std::vector<double> times;
  times.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) times.push_back(from + static_cast<double>(i) * step);
  return times;
}

void write_forecast(std::ostream& out, const Forecast& fc, std::optional<int> digits) {
  out << "year,mean,lower,upper\n";
  for (const ForecastPoint& p : fc.points)
    out << format_number(p.time) << ',' << format_number(p.mean, digits) << ','
        << format_number(p.lower, digits) << ',' << format_number(p.upper, digits) << '\n';
}

}  // namespace hubbert::cli
