// Bottom-up compilation of per-node profile tables, shared by both solvers.
//
// A Traits type supplies the node-local combination:
//   using Quality;                              // per-subtree summary
//   static constexpr std::size_t kInside;       // q-cells before r
//   std::vector<GridSpec> grids() const;        // p, inside..., r
//   Quality child_quality(const std::array<double, kInside>&) const;  // r neutral
//   Quality local(NodeId, double p, std::uint32_t m,
//                 std::span<const Quality>, std::span<double> child_p) const;
//   std::array<double, kInside> inside(const Quality&) const;
//   double r(const Quality&) const;
//   double fold_r(double acc, double child_r) const;

#pragma once

#include <array>
#include <exception>
#include <map>
#include <optional>
#include <thread>
#include <unordered_map>
#include <vector>

#include "oss/compile.hpp"
#include "oss/model.hpp"
#include "oss/profile_table.hpp"

namespace oss::detail {

template <std::size_t K>
struct ChildGroup {
  std::array<std::uint32_t, K> cells{};
  std::array<double, K> reps{};
  std::unordered_map<std::uint32_t, std::vector<const CondPerf*>> by_p;
};

template <std::size_t K>
std::vector<ChildGroup<K>> index_child(const ProfileTable& table) {
  std::map<std::array<std::uint32_t, K>, ChildGroup<K>> groups;
  for (const CondPerf* cp : table.sorted_entries()) {
    std::array<std::uint32_t, K> key{};
    for (std::size_t j = 0; j < K; ++j) key[j] = cp->q_cell(j);
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) {
      it->second.cells = key;
      for (std::size_t j = 0; j < K; ++j) {
        it->second.reps[j] = table.grid(j + 1).representative(key[j]);
      }
    }
    it->second.by_p[cp->p_cell()].push_back(cp);
  }
  std::vector<ChildGroup<K>> out;
  out.reserve(groups.size());
  for (auto& [_, g] : groups) out.push_back(std::move(g));
  return out;
}

template <class Traits>
class NodeCompiler {
 public:
  static constexpr std::size_t K = Traits::kInside;
  using Quality = typename Traits::Quality;

  NodeCompiler(const Instance& inst, const Traits& traits, const std::vector<GridSpec>& grids,
               NodeId node, const std::vector<std::vector<ChildGroup<K>>>& children)
      : inst_(inst),
        traits_(traits),
        grids_(grids),
        node_(node),
        kids_(inst.children(node)),
        children_(children),
        pick_(children.size(), 0),
        qualities_(children.size()),
        child_p_(children.size(), 0.0),
        lists_(children.size(), nullptr),
        chosen_(children.size(), nullptr) {}

  void run(std::uint32_t p_cell, ProfileTable& out) {
    for (const auto& groups : children_) {
      if (groups.empty()) return;
    }
    const double p = grids_[0].representative(p_cell);
    const std::int64_t cost = inst_.node(node_).cost;
    for (std::uint32_t m = 0; m <= inst_.max_observations(node_); ++m) {
      const std::int64_t own_time = static_cast<std::int64_t>(m) * cost;
      if (own_time > out.budget()) break;
      std::fill(pick_.begin(), pick_.end(), 0);
      while (true) {
        combine(p_cell, p, m, own_time, out);
        if (!advance()) break;
      }
    }
  }

 private:
  bool advance() {
    for (std::size_t i = 0; i < pick_.size(); ++i) {
      if (++pick_[i] < children_[i].size()) return true;
      pick_[i] = 0;
    }
    return false;
  }

  void combine(std::uint32_t p_cell, double p, std::uint32_t m, std::int64_t own_time,
               ProfileTable& out) {
    for (std::size_t i = 0; i < children_.size(); ++i) {
      qualities_[i] = traits_.child_quality(children_[i][pick_[i]].reps);
    }
    const Quality local = traits_.local(node_, p, m, qualities_, child_p_);
    for (std::size_t i = 0; i < children_.size(); ++i) {
      const auto& by_p = children_[i][pick_[i]].by_p;
      auto it = by_p.find(grids_[0].discretize(child_p_[i]));
      if (it == by_p.end()) return;
      lists_[i] = &it->second;
    }
    const auto inside = traits_.inside(local);
    for (std::size_t j = 0; j < K; ++j) coord_.cells[j + 1] = grids_[j + 1].discretize(inside[j]);
    coord_.cells[0] = p_cell;
    inside_ = inside;
    m_ = m;
    descend(0, own_time, traits_.r(local), out);
  }

  void descend(std::size_t i, std::int64_t time, double r, ProfileTable& out) {
    if (i == lists_.size()) {
      emit(time, r, out);
      return;
    }
    const GridSpec& r_grid = grids_[K + 1];
    for (const CondPerf* cp : *lists_[i]) {
      const std::int64_t t = time + cp->time;
      if (t > out.budget()) continue;
      chosen_[i] = cp;
      descend(i + 1, t, traits_.fold_r(r, r_grid.representative(cp->q_cell(K))), out);
    }
  }

  void emit(std::int64_t time, double r, ProfileTable& out) {
    CellCoord coord = coord_;
    coord.cells[K + 1] = grids_[K + 1].discretize(r);
    if (!out.could_accept(coord, time)) return;
    CondPerf cp;
    cp.time = time;
    cp.coord = coord;
    if (m_ > 0) cp.plan.set(node_, m_);
    for (const CondPerf* child : chosen_) cp.plan.absorb(child->plan);
    for (std::size_t j = 0; j < K; ++j) cp.q_exact[j] = inside_[j];
    cp.q_exact[K] = r;
    out.insert_purged(std::move(cp));
  }

  const Instance& inst_;
  const Traits& traits_;
  const std::vector<GridSpec>& grids_;
  NodeId node_;
  std::span<const NodeId> kids_;
  const std::vector<std::vector<ChildGroup<K>>>& children_;
  std::vector<std::size_t> pick_;
  std::vector<Quality> qualities_;
  std::vector<double> child_p_;
  std::vector<const std::vector<const CondPerf*>*> lists_;
  std::vector<const CondPerf*> chosen_;
  CellCoord coord_{};
  std::array<double, K> inside_{};
  std::uint32_t m_ = 0;
};

/// Compiles every node in post-order and returns the root table. p-cells of a
/// node are split round-robin across workers, each filling a private table;
/// fragments cover disjoint p-cells so the merged result is schedule-free.
template <class Traits>
ProfileTable compile_tree(const Instance& inst, const Traits& traits, const CompileOptions& opts,
                          CompileStats* stats) {
  constexpr std::size_t K = Traits::kInside;
  const std::vector<GridSpec> grids = traits.grids();
  const std::uint32_t p_cells = grids[0].cells();
  const unsigned workers = std::max(1u, std::min(opts.threads, p_cells));

  std::vector<std::optional<ProfileTable>> tables(inst.size());
  for (NodeId s : inst.postorder()) {
    std::vector<std::vector<ChildGroup<K>>> children;
    for (NodeId c : inst.children(s)) children.push_back(index_child<K>(*tables[c.index()]));

    std::vector<ProfileTable> fragments(workers, ProfileTable(grids, inst.budget()));
    auto work = [&](unsigned w) {
      NodeCompiler<Traits> compiler(inst, traits, grids, s, children);
      for (std::uint32_t pc = w; pc < p_cells; pc += workers) compiler.run(pc, fragments[w]);
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::exception_ptr> errors(workers);
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            work(w);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& t : pool) t.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }

    ProfileTable table = std::move(fragments[0]);
    for (unsigned w = 1; w < workers; ++w) table.merge(std::move(fragments[w]));
    if (stats) stats->tables.push_back({s, table.size(), table.capacity()});
    tables[s.index()] = std::move(table);
    for (NodeId c : inst.children(s)) tables[c.index()].reset();
  }
  return std::move(*tables[kRoot.index()]);
}

/// Highest utility, then smaller time, then lexicographically smaller plan.
template <class Utility>
std::pair<const CondPerf*, double> select_best(const ProfileTable& table, Utility&& utility) {
  const CondPerf* best = nullptr;
  double best_u = -std::numeric_limits<double>::infinity();
  table.for_each([&](const CondPerf& cp) {
    const double u = utility(cp);
    if (u == -std::numeric_limits<double>::infinity()) return;
    if (best == nullptr || u > best_u ||
        (u == best_u && (cp.time < best->time || (cp.time == best->time && cp.plan < best->plan)))) {
      best = &cp;
      best_u = u;
    }
  });
  return {best, best_u};
}

}  // namespace oss::detail
