/// \file profile_table.hpp
/// Reachable performance profiles stored as cell-indexed tables.
///
/// A table maps a full grid coordinate (p-cell followed by the q-cells) to the
/// cheapest observation plan known to reach it. Insertion purges on the fly:
/// an entry with strictly smaller total time dominates one at the same
/// coordinate, and at equal time the lexicographically smaller plan wins, so
/// the final contents do not depend on insertion order.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "oss/grid.hpp"
#include "oss/model.hpp"

namespace oss {

/// Cell coordinate: index 0 is the p-cell, then up to three q-cells.
struct CellCoord {
  std::array<std::uint32_t, 4> cells{};

  std::uint32_t p() const { return cells[0]; }
  std::uint32_t q(std::size_t i) const { return cells[i + 1]; }

  friend auto operator<=>(const CellCoord&, const CellCoord&) = default;
};

struct CellCoordHash {
  std::size_t operator()(const CellCoord& c) const noexcept;
};

/// Conditional performance: a plan, its total time, and the cells it reaches.
struct CondPerf {
  ObservationPlan plan;
  std::int64_t time = 0;
  CellCoord coord;
  /// Undiscretised quality values (diagnostics only).
  std::array<double, 3> q_exact{};

  std::uint32_t p_cell() const { return coord.p(); }
  std::uint32_t q_cell(std::size_t i) const { return coord.q(i); }
};

enum class InsertOutcome { inserted, replaced, rejected, over_budget };

class ProfileTable {
 public:
  /// `grids[0]` is the p grid, the rest are the q grids in coordinate order.
  ProfileTable(std::vector<GridSpec> grids, std::int64_t budget);

  InsertOutcome insert_purged(CondPerf cp);

  /// True if inserting something at `coord` with `time` could change the
  /// table (no entry yet, or the stored time is not smaller).
  bool could_accept(const CellCoord& coord, std::int64_t time) const;

  const CondPerf* find(const CellCoord& coord) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t q_arity() const { return grids_.size() - 1; }
  std::int64_t budget() const { return budget_; }
  const std::vector<GridSpec>& grids() const { return grids_; }
  const GridSpec& grid(std::size_t axis) const { return grids_[axis]; }

  /// Product of the grid sizes: the largest possible number of entries.
  double capacity() const;

  /// Entries ordered by coordinate.
  std::vector<const CondPerf*> sorted_entries() const;

  template <class F>
  void for_each(F&& fn) const {
    for (const auto& [_, cp] : entries_) fn(cp);
  }

  /// Moves every entry of `other` in through insert_purged.
  void merge(ProfileTable&& other);

  friend bool operator==(const ProfileTable& a, const ProfileTable& b);

 private:
  void check_coord(const CellCoord& coord) const;

  std::vector<GridSpec> grids_;
  std::int64_t budget_;
  std::unordered_map<CellCoord, CondPerf, CellCoordHash> entries_;
};

}  // namespace oss
