#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include <hubbert/inference.hpp>

#include "run_config.hpp"

namespace hubbert::cli {

inline constexpr int kSchemaVersion = 1;

struct SimulateArgs {
  double eta = 0.1;
  double alpha = 0.45;
  double sigma = 0.05;
  double x0 = 100.0;
  /// Lognormal start ln X(t0) ~ N(mu0, sigma0_sq) instead of the fixed x0.
  std::optional<double> mu0;
  std::optional<double> sigma0_sq;
  double t0 = 0.0;
  double step = 0.1;
  std::size_t points = 501;
  std::size_t paths = 50;
  bool subsample = false;
  std::size_t stride = 10;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

PanelData run_simulate(const SimulateArgs& args);

nlohmann::json run_bounds(const PanelData& data, const RunConfig& config);

struct FitOutput {
  FitResult fit;
  nlohmann::json document;
};

FitOutput run_fit(const PanelData& data, const RunConfig& config,
                  std::optional<Conditioning> conditioning = {}, unsigned threads = 0);

/// level,temperature,acceptance_rate,current_value,best_value,step_eta,step_alpha,step_sigma
void write_trace(std::ostream& out, const std::vector<LevelTrace>& trace);

/// Rebuilds the parts of a FitResult that peaks and forecasts need from a fit document.
FitResult fit_from_json(const nlohmann::json& doc);

/// Years from..to (inclusive) in steps of `step`.
std::vector<double> horizon(double from, double to, double step);

/// year,mean,lower,upper
void write_forecast(std::ostream& out, const Forecast& fc, std::optional<int> digits);

}  // namespace hubbert::cli
