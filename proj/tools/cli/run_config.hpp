#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include <json.hpp>

#include <hubbert/inference.hpp>

namespace hubbert::cli {

/// Settings shared by the commands. Absent JSON keys keep the defaults below.
struct RunConfig {
  std::optional<double> urr;
  double sigma_cap = kDefaultSigmaCap;
  SAConfig sa;
  VNSConfig vns;
  Algorithm algorithm = Algorithm::VnsSa;
  std::uint64_t seed = 1;
  std::size_t restarts = 1;
  double level = 0.95;

  FitOptions fit_options() const;
  /// Throws hubbert::DomainError for out-of-range values.
  void validate() const;
};

/// Unknown keys and wrongly typed values raise ParseError.
RunConfig config_from_json(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

}  // namespace hubbert::cli
