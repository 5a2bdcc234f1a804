#include "oss/profile_table.hpp"

#include <algorithm>

#include "oss/error.hpp"

namespace oss {

std::size_t CellCoordHash::operator()(const CellCoord& c) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (std::uint32_t v : c.cells) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

ProfileTable::ProfileTable(std::vector<GridSpec> grids, std::int64_t budget)
    : grids_(std::move(grids)), budget_(budget) {
  OSS_EXPECTS(grids_.size() >= 2 && grids_.size() <= 4, "profile table: 2 to 4 grids");
}

void ProfileTable::check_coord(const CellCoord& coord) const {
  for (std::size_t axis = 0; axis < coord.cells.size(); ++axis) {
    if (axis < grids_.size()) {
      OSS_EXPECTS(coord.cells[axis] < grids_[axis].cells(), "profile table: cell out of range");
    } else {
      OSS_EXPECTS(coord.cells[axis] == 0, "profile table: unused axis must be 0");
    }
  }
}

InsertOutcome ProfileTable::insert_purged(CondPerf cp) {
  check_coord(cp.coord);
  if (cp.time > budget_) return InsertOutcome::over_budget;

  auto [it, fresh] = entries_.try_emplace(cp.coord);
  if (fresh) {
    it->second = std::move(cp);
    return InsertOutcome::inserted;
  }
  CondPerf& held = it->second;
  if (cp.time < held.time || (cp.time == held.time && cp.plan < held.plan)) {
    held = std::move(cp);
    return InsertOutcome::replaced;
  }
  return InsertOutcome::rejected;
}

bool ProfileTable::could_accept(const CellCoord& coord, std::int64_t time) const {
  if (time > budget_) return false;
  auto it = entries_.find(coord);
  return it == entries_.end() || time <= it->second.time;
}

const CondPerf* ProfileTable::find(const CellCoord& coord) const {
  auto it = entries_.find(coord);
  return it == entries_.end() ? nullptr : &it->second;
}

double ProfileTable::capacity() const {
  double cap = 1.0;
  for (const auto& g : grids_) cap *= g.cells();
  return cap;
}

std::vector<const CondPerf*> ProfileTable::sorted_entries() const {
  std::vector<const CondPerf*> out;
  out.reserve(entries_.size());
  for (const auto& [_, cp] : entries_) out.push_back(&cp);
  std::sort(out.begin(), out.end(),
            [](const CondPerf* a, const CondPerf* b) { return a->coord < b->coord; });
  return out;
}

void ProfileTable::merge(ProfileTable&& other) {
  OSS_EXPECTS(grids_ == other.grids_, "profile table: merging tables with different grids");
  for (auto& [_, cp] : other.entries_) insert_purged(std::move(cp));
  other.entries_.clear();
}

bool operator==(const ProfileTable& a, const ProfileTable& b) {
  if (a.grids_ != b.grids_ || a.budget_ != b.budget_ || a.size() != b.size()) return false;
  for (const auto& [coord, cp] : a.entries_) {
    const CondPerf* other = b.find(coord);
    if (other == nullptr || other->time != cp.time || other->plan != cp.plan) return false;
  }
  return true;
}

}  // namespace oss
