// hubbert: simulate, bound, fit and forecast the Hubbert diffusion from the shell.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <hubbert/error.hpp>
#include <hubbert/inference.hpp>

#include "cli/commands.hpp"
#include "cli/dataset.hpp"
#include "cli/format.hpp"
#include "cli/run_config.hpp"

namespace {

using namespace hubbert;
using namespace hubbert::cli;

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kInputFailure = 2;

// Options shared by bounds, fit and forecast.
struct Common {
  std::string config_path;
  std::optional<double> urr;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> algorithm;
  std::optional<std::size_t> restarts;
  std::optional<double> level;
  std::string out;
  std::optional<int> digits;
  unsigned threads = 0;

  RunConfig resolve() const {
    RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (urr) c.urr = *urr;
    if (seed) c.seed = *seed;
    if (restarts) c.restarts = *restarts;
    if (level) c.level = *level;
    if (algorithm) {
      try {
        c.algorithm = algorithm_from_string(*algorithm);
      } catch (const Error& e) {
        throw ParseError(std::string("--algorithm: ") + e.what());
      }
    }
    return c;
  }
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string render(nlohmann::json doc, std::optional<int> digits) {
  if (digits) round_numbers(doc, *digits);
  return doc.dump(2) + "\n";
}

void add_output_options(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "Output file (default: stdout)");
  cmd->add_option("--digits", c.digits, "Round printed numbers to this many significant digits")
      ->check(CLI::Range(1, 17));
}

void add_config_options(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON run configuration");
  cmd->add_option("--urr", c.urr, "Estimate of the ultimately recoverable resource");
  cmd->add_option("--seed", c.seed, "Master seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimation and forecasting with the Hubbert diffusion process"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hubbert 0.1.0");

  // simulate
  SimulateArgs sim;
  std::string sim_out;
  std::optional<int> sim_digits;
  auto* simulate = app.add_subcommand("simulate", "Simulate sample paths as path_id,time,value CSV");
  simulate->add_option("--eta", sim.eta, "Curve shape parameter eta")->capture_default_str();
  simulate->add_option("--alpha", sim.alpha, "Per-unit-time decay alpha in (0,1)")->capture_default_str();
  simulate->add_option("--sigma", sim.sigma, "Diffusion coefficient")->capture_default_str();
  simulate->add_option("--x0", sim.x0, "Fixed initial value")->capture_default_str();
  simulate->add_option("--mu0", sim.mu0, "Log-mean of a lognormal initial value (default ln x0)");
  simulate->add_option("--sigma0-sq", sim.sigma0_sq, "Log-variance of a lognormal initial value");
  simulate->add_option("--t0", sim.t0, "Initial time")->capture_default_str();
  simulate->add_option("--step", sim.step, "Grid step")->capture_default_str();
  simulate->add_option("--points", sim.points, "Points per path on the fine grid")->capture_default_str();
  simulate->add_option("--paths", sim.paths, "Number of paths")->capture_default_str();
  simulate->add_flag("--subsample", sim.subsample, "Keep every --stride-th grid point");
  simulate->add_option("--stride", sim.stride, "Subsample stride")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");
  simulate->add_option("--out", sim_out, "Output file (default: stdout)");
  simulate->add_option("--digits", sim_digits, "Significant digits (default: lossless)")
      ->check(CLI::Range(1, 17));

  // bounds
  Common bnd;
  std::string bnd_data;
  auto* bounds = app.add_subcommand("bounds", "Report the search box for (eta, alpha, sigma)");
  bounds->add_option("--data", bnd_data, "Dataset CSV")->required();
  add_config_options(bounds, bnd);
  add_output_options(bounds, bnd);

  // fit
  Common fit_c;
  std::string fit_data;
  std::string trace_path;
  std::optional<double> fit_s;
  std::optional<double> fit_xs;
  auto* fit_cmd = app.add_subcommand("fit", "Maximum likelihood fit by SA or VNS-SA");
  fit_cmd->add_option("--data", fit_data, "Dataset CSV")->required();
  add_config_options(fit_cmd, fit_c);
  fit_cmd->add_option("--algorithm", fit_c.algorithm, "sa or vns-sa (default vns-sa)")
      ->check(CLI::IsMember({"sa", "vns-sa"}));
  fit_cmd->add_option("--restarts", fit_c.restarts, "Independent runs; the best is kept");
  fit_cmd->add_option("--threads", fit_c.threads, "Worker threads for restarts (0 = all cores)");
  fit_cmd->add_option("--trace", trace_path, "Write the annealing trace CSV here");
  auto* fs = fit_cmd->add_option("--cond-time", fit_s, "Time s of a conditioning observation");
  auto* fx = fit_cmd->add_option("--cond-value", fit_xs, "Observed value at --cond-time");
  fs->needs(fx);
  fx->needs(fs);
  add_output_options(fit_cmd, fit_c);

  // forecast
  Common fc;
  std::string fc_fit;
  std::string fc_data;
  std::optional<double> fc_eta;
  std::optional<double> fc_alpha;
  std::optional<double> fc_sigma;
  std::optional<double> fc_shift;
  double fc_s = 0.0;
  double fc_xs = 0.0;
  std::optional<double> fc_from;
  double fc_to = 0.0;
  double fc_step = 1.0;
  auto* forecast_cmd = app.add_subcommand("forecast", "Conditional-mean forecast with confidence bands");
  auto* from_fit = forecast_cmd->add_option("--fit", fc_fit, "Fit JSON written by 'fit'");
  auto* from_data = forecast_cmd->add_option("--data", fc_data, "Dataset CSV, used with --eta/--alpha/--sigma");
  auto* o_eta = forecast_cmd->add_option("--eta", fc_eta, "eta on the shifted time axis");
  auto* o_alpha = forecast_cmd->add_option("--alpha", fc_alpha, "alpha");
  auto* o_sigma = forecast_cmd->add_option("--sigma", fc_sigma, "sigma");
  forecast_cmd->add_option("--time-shift", fc_shift, "Time shift k of eta (default: first data time)");
  from_fit->excludes(from_data);
  from_data->needs(o_eta, o_alpha, o_sigma);
  o_eta->needs(from_data);
  o_alpha->needs(from_data);
  o_sigma->needs(from_data);
  forecast_cmd->add_option("--cond-time", fc_s, "Conditioning time s")->required();
  forecast_cmd->add_option("--cond-value", fc_xs, "Observed value at s")->required();
  forecast_cmd->add_option("--from", fc_from, "First forecast time (default s + step)");
  forecast_cmd->add_option("--to", fc_to, "Last forecast time")->required();
  forecast_cmd->add_option("--step", fc_step, "Forecast spacing")->capture_default_str();
  forecast_cmd->add_option("--level", fc.level, "Confidence level (default 0.95)");
  add_config_options(forecast_cmd, fc);
  add_output_options(forecast_cmd, fc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputFailure;
  }

  try {
    if (*simulate) {
      std::ostringstream os;
      write_dataset(os, run_simulate(sim), sim_digits);
      write_output(sim_out, os.str());
    } else if (*bounds) {
      const RunConfig config = bnd.resolve();
      write_output(bnd.out, render(run_bounds(read_dataset(bnd_data), config), bnd.digits));
    } else if (*fit_cmd) {
      const RunConfig config = fit_c.resolve();
      std::optional<Conditioning> cond;
      if (fit_s) cond = Conditioning{*fit_s, *fit_xs};
      FitOutput result = run_fit(read_dataset(fit_data), config, cond, fit_c.threads);
      if (!trace_path.empty()) {
        std::ostringstream os;
        write_trace(os, result.fit.trace);
        write_output(trace_path, os.str());
      }
      for (const auto& w : result.fit.warnings) std::cerr << "warning: " << w << "\n";
      write_output(fit_c.out, render(result.document, fit_c.digits));
    } else if (*forecast_cmd) {
      const RunConfig config = fc.resolve();
      config.validate();
      FitResult f;
      if (!fc_fit.empty()) {
        std::ifstream in(fc_fit);
        if (!in) throw IoError("cannot open fit file '" + fc_fit + "'");
        nlohmann::json doc;
        try {
          doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
          throw ParseError(fc_fit + ": " + e.what());
        }
        f = fit_from_json(doc);
      } else if (!fc_data.empty()) {
        const PanelData data = read_dataset(fc_data);
        f = assemble_fit(data, Theta{*fc_eta, *fc_alpha, *fc_sigma}, fc_shift.value_or(data.first_time()));
      } else {
        throw ParseError("forecast needs --fit, or --data with --eta, --alpha and --sigma");
      }
      const auto times = horizon(fc_from.value_or(fc_s + fc_step), fc_to, fc_step);
      const Forecast result = forecast(f, Conditioning{fc_s, fc_xs}, times, config.level);
      std::ostringstream os;
      write_forecast(os, result, fc.digits);
      write_output(fc.out, os.str());
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputFailure;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputFailure;
  } catch (const hubbert::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
  return kOk;
}
