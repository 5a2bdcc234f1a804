/// \file goss.hpp
/// Gaussian observation subset selection: maximise the worst normalised log
/// posterior precision over hypothesis nodes.
///
/// Each subtree is summarised by (f, r): the precision its internal evidence
/// contributes to the subtree root, and the smallest hypothesis reward
/// inside the subtree. The external input p is the precision of the subtree
/// root given everything outside it, so p + f is its posterior precision.

#pragma once

#include <span>

#include "oss/compile.hpp"
#include "oss/grid.hpp"
#include "oss/model.hpp"
#include "oss/profile_table.hpp"
#include "oss/solution.hpp"

namespace oss {

struct GossQuality {
  double f = 0.0;
  double r = 1.0;
};

/// Squared edge weight and conditional precision of a child.
struct GaussianEdge {
  double alpha = 0.0;
  double beta = 1.0;
};

class GossGrids {
 public:
  /// p and f grids are log-projected over `range`; the r grid is plain.
  GossGrids(double eps_p, double eps_f, double eps_r, RewardRange range);

  /// eps_p = eps_f = e/max(h, 1), eps_r = e.
  static GossGrids recipe(const Instance& inst, double epsilon);

  const GridSpec& p() const { return p_; }
  const GridSpec& f() const { return f_; }
  const GridSpec& r() const { return r_; }
  const RewardRange& range() const { return range_; }

 private:
  GridSpec p_, f_, r_;
  RewardRange range_;
};

GossQuality goss_psi_leaf(double p, std::uint32_t m, const GaussianParams& node, bool hypothesis,
                          RewardRange range);

GossQuality goss_psi_internal(double p, std::uint32_t m, const GaussianParams& node,
                              bool hypothesis, std::span<const GaussianEdge> edges,
                              std::span<const GossQuality> children, std::span<double> child_p,
                              RewardRange range, MessageRule rule = MessageRule::consistent);

struct GossNodeValues {
  double p = 0.0;
  GossQuality q;
  double posterior_precision() const { return p + q.f; }
};

struct GossPlanEvaluation {
  std::vector<GossNodeValues> nodes;  ///< indexed by NodeId::index()
  double reward = 0.0;                ///< root r
};

GossPlanEvaluation goss_evaluate_plan(const Instance& inst, const ObservationPlan& plan,
                                      MessageRule rule = MessageRule::consistent);

/// Root table over (p, f, r) cells.
ProfileTable goss_compile(const Instance& inst, const GossGrids& grids,
                          const CompileOptions& opts = {}, CompileStats* stats = nullptr);

/// r representative, or -infinity when the entry is not at beta1's p-cell or
/// is over budget.
double goss_utility(const CondPerf& cp, double beta1, std::int64_t budget, const GossGrids& grids);

/// h*eps_p + h*eps_f + eps_r with h := max(h, 1).
double goss_delta_bound(const Instance& inst, const GossGrids& grids);

Solution goss_solve(const Instance& inst, const GossGrids& grids, const CompileOptions& opts = {},
                    CompileStats* stats = nullptr);
Solution goss_solve(const Instance& inst, double epsilon, const CompileOptions& opts = {},
                    CompileStats* stats = nullptr);

}  // namespace oss
