#include "run_config.hpp"

#include <fstream>
#include <set>
#include <string>

#include <hubbert/error.hpp>

#include "dataset.hpp"

namespace hubbert::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items())
    if (!known.contains(key)) throw ParseError("unknown key '" + key + "' in " + where);
}

template <class T>
void read(const json& obj, const char* key, T& target, const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) throw ParseError(where + "." + key + " must be a number");
  } else {
    if (!v.is_number_unsigned()) throw ParseError(where + "." + key + " must be a nonnegative integer");
  }
  target = v.get<T>();
}

ProposalKind proposal_field(const json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(where + " must be a string");
  try {
    return proposal_from_string(v.get<std::string>());
  } catch (const Error& e) {
    throw ParseError(where + ": " + e.what());
  }
}

}  // namespace

FitOptions RunConfig::fit_options() const {
  FitOptions o;
  o.urr = urr;
  o.sigma_cap = sigma_cap;
  o.sa = sa;
  o.vns = vns;
  o.algorithm = algorithm;
  o.seed = seed;
  o.restarts = restarts;
  return o;
}

void RunConfig::validate() const {
  if (urr && !(*urr > 0.0)) throw DomainError("urr must be positive");
  if (!(sigma_cap > 0.0)) throw DomainError("sigma_cap must be positive");
  if (restarts == 0) throw DomainError("restarts must be at least 1");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("level must lie in (0, 1)");
  sa.validate();
  vns.validate();
}

RunConfig config_from_json(const json& doc) {
  RunConfig c;
  reject_unknown(doc, {"urr", "sigma_cap", "sa", "vns", "algorithm", "seed", "restarts", "level"},
                 "config");
  if (doc.contains("urr") && !doc.at("urr").is_null()) {
    double urr = 0.0;
    read(doc, "urr", urr, "config");
    c.urr = urr;
  }
  read(doc, "sigma_cap", c.sigma_cap, "config");
  read(doc, "seed", c.seed, "config");
  read(doc, "restarts", c.restarts, "config");
  read(doc, "level", c.level, "config");
  if (doc.contains("algorithm")) {
    if (!doc.at("algorithm").is_string()) throw ParseError("config.algorithm must be a string");
    try {
      c.algorithm = algorithm_from_string(doc.at("algorithm").get<std::string>());
    } catch (const Error& e) {
      throw ParseError(std::string("config.algorithm: ") + e.what());
    }
  }
  if (doc.contains("sa")) {
    const json& sa = doc.at("sa");
    reject_unknown(sa,
                   {"p0", "probe_count", "gamma", "chain_length", "t_final", "stall_window",
                    "stall_tolerance", "proposal"},
                   "config.sa");
    read(sa, "p0", c.sa.p0, "config.sa");
    read(sa, "probe_count", c.sa.probe_count, "config.sa");
    read(sa, "gamma", c.sa.gamma, "config.sa");
    read(sa, "chain_length", c.sa.chain_length, "config.sa");
    read(sa, "t_final", c.sa.t_final, "config.sa");
    read(sa, "stall_window", c.sa.stall_window, "config.sa");
    read(sa, "stall_tolerance", c.sa.stall_tolerance, "config.sa");
    if (sa.contains("proposal")) c.sa.proposal = proposal_field(sa.at("proposal"), "config.sa.proposal");
  }
  if (doc.contains("vns")) {
    const json& vns = doc.at("vns");
    reject_unknown(vns, {"k_max", "max_local_searches", "local_proposal"}, "config.vns");
    read(vns, "k_max", c.vns.k_max, "config.vns");
    read(vns, "max_local_searches", c.vns.max_local_searches, "config.vns");
    if (vns.contains("local_proposal"))
      c.vns.local_proposal = proposal_field(vns.at("local_proposal"), "config.vns.local_proposal");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    return config_from_json(doc);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

json to_json(const RunConfig& c) {
  return {
      {"urr", c.urr ? json(*c.urr) : json(nullptr)},
      {"sigma_cap", c.sigma_cap},
      {"sa",
       {{"p0", c.sa.p0},
        {"probe_count", c.sa.probe_count},
        {"gamma", c.sa.gamma},
        {"chain_length", c.sa.chain_length},
        {"t_final", c.sa.t_final},
        {"stall_window", c.sa.stall_window},
        {"stall_tolerance", c.sa.stall_tolerance},
        {"proposal", std::string(to_string(c.sa.proposal))}}},
      {"vns",
       {{"k_max", c.vns.k_max},
        {"max_local_searches", c.vns.max_local_searches},
        {"local_proposal", std::string(to_string(c.vns.local_proposal))}}},
      {"algorithm", std::string(to_string(c.algorithm))},
      {"seed", c.seed},
      {"restarts", c.restarts},
      {"level", c.level},
  };
}

}  // namespace hubbert::cli
