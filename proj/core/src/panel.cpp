#include "hubbert/panel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hubbert/error.hpp"

namespace hubbert {

PanelData::PanelData(std::vector<Path> paths) : paths_(std::move(paths)) {
  if (paths_.empty()) throw DomainError("panel has no paths");
  const double t1 = paths_.front().times.empty() ? 0.0 : paths_.front().times.front();
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    const Path& p = paths_[i];
    std::ostringstream where;
    where << "path " << i;
    if (p.times.size() != p.values.size())
      throw DomainError(where.str() + ": times and values differ in length");
    if (p.times.size() < 2) throw DomainError(where.str() + ": needs at least two observations");
    if (p.times.front() != t1)
      throw OrderingError(where.str() + ": first time differs from the first path's");
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (!std::isfinite(p.times[j])) throw DomainError(where.str() + ": non-finite time");
      if (!(p.values[j] > 0.0) || !std::isfinite(p.values[j])) {
        std::ostringstream os;
        os << where.str() << ": value " << p.values[j] << " at index " << j << " is not positive";
        throw DomainError(os.str());
      }
      if (j > 0 && !(p.times[j] > p.times[j - 1])) {
        std::ostringstream os;
        os << where.str() << ": times not strictly increasing at index " << j;
        throw OrderingError(os.str());
      }
    }
    observations_ += p.size();
  }
}

double PanelData::last_time() const noexcept {
  double last = paths_.front().times.back();
  for (const Path& p : paths_) last = std::max(last, p.times.back());
  return last;
}

}  // namespace hubbert
