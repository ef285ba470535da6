#include "dataset.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <hubbert/error.hpp>

#include "format.hpp"

namespace hubbert::cli {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << source << ":" << line << ": " << what;
  throw ParseError(os.str());
}

}  // namespace

PanelData parse_dataset(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::map<std::string, std::size_t> index;
  std::vector<std::string> ids;
  std::vector<Path> paths;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (!have_header) {
      if (fields != std::vector<std::string>{"path_id", "time", "value"})
        fail(source, line_no, "expected header 'path_id,time,value'");
      have_header = true;
      continue;
    }
    if (fields.size() != 3) fail(source, line_no, "expected 3 fields, found " + std::to_string(fields.size()));
    if (fields[0].empty()) fail(source, line_no, "empty path_id");
    const auto time = parse_number(fields[1]);
    if (!time) fail(source, line_no, "time '" + fields[1] + "' is not a number");
    const auto value = parse_number(fields[2]);
    if (!value) fail(source, line_no, "value '" + fields[2] + "' is not a number");
    if (!(*value > 0.0)) fail(source, line_no, "value must be positive, got " + fields[2]);

    auto [it, inserted] = index.try_emplace(fields[0], paths.size());
    if (inserted) {
      ids.push_back(fields[0]);
      paths.emplace_back();
    }
    Path& p = paths[it->second];
    if (!p.times.empty() && !(*time > p.times.back()))
      fail(source, line_no, "times of path '" + fields[0] + "' must be strictly increasing");
    p.times.push_back(*time);
    p.values.push_back(*value);
  }
  if (!have_header) throw ParseError(source + ": empty file, expected header 'path_id,time,value'");
  if (paths.empty()) throw ParseError(source + ": no observations");
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (paths[i].times.size() < 2)
      throw ParseError(source + ": path '" + ids[i] + "' needs at least two observations");
    if (paths[i].times.front() != paths[0].times.front())
      throw ParseError(source + ": path '" + ids[i] + "' starts at " +
                       format_number(paths[i].times.front()) + ", not at the common first time " +
                       format_number(paths[0].times.front()));
  }
  return PanelData(std::move(paths));
}

PanelData read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open data file '" + path.string() + "'");
  return parse_dataset(in, path.string());
}

void write_dataset(std::ostream& out, const PanelData& data, std::optional<int> digits) {
  out << "path_id,time,value\n";
  std::size_t id = 1;
  for (const Path& p : data.paths()) {
    for (std::size_t j = 0; j < p.size(); ++j)
      out << id << ',' << format_number(p.times[j], digits) << ','
          << format_number(p.values[j], digits) << '\n';
    ++id;
  }
}

}  // namespace hubbert::cli
