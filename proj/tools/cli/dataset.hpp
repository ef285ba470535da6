#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include <hubbert/panel.hpp>

namespace hubbert::cli {

/// Malformed input (CSV rows, JSON documents, flag values). Exit status 2.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing or unwritable files. Exit status 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads `path_id,time,value` rows. Paths are ordered by first appearance;
/// rows of different paths may interleave. `source` names the input in messages.
PanelData parse_dataset(std::istream& in, const std::string& source);
PanelData read_dataset(const std::filesystem::path& path);

/// Writes the panel with path ids 1..d. Without `digits` every number is the
/// shortest decimal that parses back to the same double.
void write_dataset(std::ostream& out, const PanelData& data, std::optional<int> digits = {});

}  // namespace hubbert::cli
