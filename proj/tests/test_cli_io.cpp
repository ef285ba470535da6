#include <random>
#include <sstream>

#include <doctest.h>

#include <hubbert/error.hpp>
#include <hubbert/process.hpp>

#include <cli/commands.hpp>
#include <cli/dataset.hpp>
#include <cli/format.hpp>
#include <cli/run_config.hpp>

using namespace hubbert;
using namespace hubbert::cli;

namespace {

PanelData parse(const std::string& text) {
  std::istringstream in(text);
  return parse_dataset(in, "input.csv");
}

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "no error";
}

}  // namespace

TEST_CASE("dataset parsing") {
  const PanelData a = parse("path_id,time,value\nA,0,1.5\nA,1,2\nB,0,3\nB,2,4\n");
  REQUIRE(a.path_count() == 2);
  CHECK(a.path(0).values == std::vector<double>{1.5, 2.0});
  CHECK(a.path(1).times == std::vector<double>{0.0, 2.0});

  SUBCASE("CRLF, BOM, blank lines, spaces and interleaving") {
    const PanelData b = parse("\xEF\xBB\xBFpath_id,time,value\r\nA,0,1.5\r\nB,0,3\r\n\r\nA, 1 ,2\r\nB,2,4\r\n");
    CHECK(b == a);
  }
  SUBCASE("errors carry the line number") {
    CHECK(parse_error("path_id,time,value\nA,0,1\nA,1,-2\n") == "input.csv:3: value must be positive, got -2");
    CHECK(parse_error("path_id,time,value\nA,0,1\nA,1,0\n").find("input.csv:3:") == 0);
    CHECK(parse_error("path_id,time,value\nA,0,1\nA,0,2\n").find("input.csv:3: times of path 'A'") == 0);
    CHECK(parse_error("path_id,time,value\nA,0,1\nA,x,2\n").find("input.csv:3: time 'x'") == 0);
    CHECK(parse_error("path_id,time,value\nA,0,1\nA,1,2e\n").find("input.csv:3: value '2e'") == 0);
    CHECK(parse_error("path_id,time,value\nA,0,1\nA,1\n").find("input.csv:3: expected 3 fields") == 0);
    CHECK(parse_error("path_id,time,value\nA,0,1\nA,1,2,\n").find("input.csv:3: expected 3 fields") == 0);
    CHECK(parse_error("id,t,x\nA,0,1\n").find("input.csv:1: expected header") == 0);
  }
  SUBCASE("whole-file errors") {
    CHECK(parse_error("").find("empty file") != std::string::npos);
    CHECK(parse_error("path_id,time,value\n").find("no observations") != std::string::npos);
    CHECK(parse_error("path_id,time,value\nA,0,1\n").find("at least two") != std::string::npos);
    CHECK(parse_error("path_id,time,value\nA,0,1\nA,1,1\nB,1,1\nB,2,1\n").find("common first time") !=
          std::string::npos);
    CHECK(parse_error("path_id,time,value\nA,0,1\nA,1,nan\n").find("not a number") != std::string::npos);
  }
  CHECK_THROWS_AS(read_dataset("/nonexistent/data.csv"), IoError);
}

TEST_CASE("dataset round trip is lossless") {
  const ProcessParams p{0.1, 0.45, 0.05, InitialDistribution::lognormal(std::log(100.0), 0.01), 0.0};
  const PanelData data = simulate_paths(p, PathGrid::uniform(0.0, 0.1, 101), 7, 3);
  std::ostringstream out;
  write_dataset(out, data);
  CHECK(parse(out.str()) == data);

  std::ostringstream rounded;
  write_dataset(rounded, data, 4);
  const PanelData coarse = parse(rounded.str());
  CHECK(std::abs(coarse.path(2).values[50] / data.path(2).values[50] - 1.0) < 1e-3);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(2014.0) == "2014");
  CHECK(format_number(1409.4567, 5) == "1409.5");
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(gen);
    CHECK(*parse_number(format_number(v)) == v);
  }
  CHECK_FALSE(parse_number("1.0x"));
  CHECK_FALSE(parse_number(""));
  CHECK_FALSE(parse_number("inf"));
  CHECK(*parse_number(" +2.5 ") == 2.5);

  nlohmann::json doc = {{"a", 3.14159265}, {"b", {1.23456789, 7}}, {"c", "text"}};
  round_numbers(doc, 3);
  CHECK(doc["a"].get<double>() == 3.14);
  CHECK(doc["b"][0].get<double>() == 1.23);
  CHECK(doc["b"][1].get<int>() == 7);
}

TEST_CASE("run configuration") {
  const RunConfig defaults = config_from_json(nlohmann::json::object());
  CHECK_FALSE(defaults.urr);
  CHECK(defaults.sigma_cap == 0.1);
  CHECK(defaults.sa.p0 == 0.9);
  CHECK(defaults.sa.gamma == 0.95);
  CHECK(defaults.sa.chain_length == 50);
  CHECK(defaults.sa.t_final == 0.1);
  CHECK(defaults.vns.k_max == 5);
  CHECK(defaults.algorithm == Algorithm::VnsSa);

  const RunConfig c = config_from_json(nlohmann::json::parse(R"({
    "urr": 86542, "seed": 9, "restarts": 2, "level": 0.9, "algorithm": "sa",
    "sa": {"gamma": 0.9, "chain_length": 20, "proposal": "adaptive"},
    "vns": {"k_max": 3, "local_proposal": "temperature-scaled"}})"));
  CHECK(*c.urr == 86542.0);
  CHECK(c.seed == 9);
  CHECK(c.restarts == 2);
  CHECK(c.level == 0.9);
  CHECK(c.algorithm == Algorithm::SA);
  CHECK(c.sa.gamma == 0.9);
  CHECK(c.sa.chain_length == 20);
  CHECK(c.sa.proposal == ProposalKind::Adaptive);
  CHECK(c.vns.k_max == 3);
  CHECK(c.vns.local_proposal == ProposalKind::TemperatureScaled);

  SUBCASE("round trip through JSON") {
    const RunConfig back = config_from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));
    CHECK(to_json(config_from_json(to_json(defaults))) == to_json(defaults));
  }
  SUBCASE("strictness") {
    using nlohmann::json;
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"urr_typo": 1})")), ParseError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"sa": {"gama": 1}})")), ParseError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"seed": -1})")), ParseError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"urr": "big"})")), ParseError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"algorithm": "ga"})")), ParseError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"([1, 2])")), ParseError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
  }
  SUBCASE("range validation") {
    RunConfig bad = defaults;
    bad.level = 1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = defaults;
    bad.urr = -5.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = defaults;
    bad.sa.gamma = 1.5;
    CHECK_THROWS_AS(bad.validate(), DomainError);
  }
}

TEST_CASE("forecast horizon") {
  CHECK(horizon(2015, 2040, 1).size() == 26);
  CHECK(horizon(2015, 2015, 1) == std::vector<double>{2015});
  CHECK(horizon(0, 1, 0.1).size() == 11);
  CHECK_THROWS_AS(horizon(2015, 2014, 1), OrderingError);
  CHECK_THROWS_AS(horizon(2015, 2016, 0), DomainError);
}

TEST_CASE("fit documents round trip") {
  const PanelData data = simulate_paths({0.1, 0.45, 0.05, InitialDistribution::degenerate(100.0), 0.0},
                                        PathGrid::uniform(0.0, 1.0, 51), 10, 4);
  RunConfig config;
  const FitOutput out = run_fit(data, config, Conditioning{20, 300});
  const auto& doc = out.document;
  CHECK(doc["schema_version"] == kSchemaVersion);
  CHECK(doc["config"] == to_json(config));
  CHECK(doc["peak"].contains("conditional"));
  const FitResult back = fit_from_json(nlohmann::json::parse(doc.dump()));
  CHECK(back.theta.as_point() == out.fit.theta.as_point());
  CHECK(back.cov == out.fit.cov);
  CHECK(back.time_shift == out.fit.time_shift);
  const Forecast a = forecast(out.fit, Conditioning{20, 300}, {21, 25});
  const Forecast b = forecast(back, Conditioning{20, 300}, {21, 25});
  CHECK(a.points[1].mean == b.points[1].mean);
  CHECK(a.points[1].upper == b.points[1].upper);
  CHECK_THROWS_AS(fit_from_json(nlohmann::json::parse(R"({"command": "bounds"})")), ParseError);
  CHECK_THROWS_AS(fit_from_json(nlohmann::json::parse(R"({"command": "fit", "schema_version": 1})")), ParseError);
}
