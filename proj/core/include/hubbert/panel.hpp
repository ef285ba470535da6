#pragma once

#include <cstddef>
#include <vector>

namespace hubbert {

/// One observed sample path.
struct Path {
  std::vector<double> times;
  std::vector<double> values;

  std::size_t size() const noexcept { return times.size(); }

  bool operator==(const Path&) const = default;
};

/// d sample paths of a positive process observed at strictly increasing times.
///
/// Every path has at least two observations, positive values, and all paths
/// share the same first observation time (the initial distribution is common
/// to all of them).
class PanelData {
 public:
  /// Validates and takes ownership. Throws OrderingError for non-increasing
  /// times or mismatched first times, DomainError for non-positive values or
  /// paths shorter than two points.
  explicit PanelData(std::vector<Path> paths);

  const std::vector<Path>& paths() const noexcept { return paths_; }
  const Path& path(std::size_t i) const { return paths_.at(i); }

  /// Number of paths, d.
  std::size_t path_count() const noexcept { return paths_.size(); }
  /// Total number of observations, N.
  std::size_t observation_count() const noexcept { return observations_; }
  /// Number of transitions, N - d.
  std::size_t transition_count() const noexcept { return observations_ - paths_.size(); }

  /// Common first observation time t1.
  double first_time() const noexcept { return paths_.front().times.front(); }
  /// Largest final observation time over all paths.
  double last_time() const noexcept;

  bool operator==(const PanelData&) const = default;

 private:
  std::vector<Path> paths_;
  std::size_t observations_ = 0;
};

}  // namespace hubbert
