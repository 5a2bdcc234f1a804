/// \file oracle.hpp
/// Exact reference computations used to validate the solvers.
///
/// Boolean plans are scored by enumerating the joint state space and every
/// observation outcome; Gaussian plans by conditioning the joint covariance
/// on the selected observations. Neither path touches the solvers' local
/// message functions.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oss/model.hpp"
#include "oss/solution.hpp"

namespace oss {

struct OracleLimits {
  std::size_t boolean_max_nodes = 16;
  std::uint32_t boolean_max_observations = 16;
  std::size_t gaussian_max_nodes = 64;
  std::uint64_t max_plans = std::uint64_t{1} << 20;
};

/// Diagnostics from the boolean joint enumeration.
struct BooleanEvidenceReport {
  double expected_reward = 0.0;
  double outcome_probability_sum = 0.0;  ///< should be 1
  double negative_given_root_true = 0.0;   ///< Pr(all negative | X1 = 1)
  double negative_given_root_false = 0.0;  ///< Pr(all negative | X1 = 0)
  /// Pr(X_i = 1 | all negative), by NodeId::index(); 0 if that is impossible.
  std::vector<double> posterior_all_negative;
};

BooleanEvidenceReport boss_evidence_report(const Instance& inst, const ObservationPlan& plan,
                                           const OracleLimits& limits = {});

SubsetEval boss_eval_exact(const Instance& inst, const ObservationPlan& plan,
                           const OracleLimits& limits = {});

/// Posterior precision of every node, by NodeId::index().
std::vector<double> gaussian_posterior_precisions(const Instance& inst,
                                                  const ObservationPlan& plan,
                                                  const OracleLimits& limits = {});

SubsetEval goss_eval_exact(const Instance& inst, const ObservationPlan& plan,
                           const OracleLimits& limits = {});

/// Dispatches on the instance kind.
SubsetEval eval_exact(const Instance& inst, const ObservationPlan& plan,
                      const OracleLimits& limits = {});

/// Best affordable plan by exhaustive enumeration; ties go to the
/// lexicographically smallest plan.
SubsetEval brute_force_optimum(const Instance& inst, const OracleLimits& limits = {});

/// Smallest prior precision and largest fully-observed posterior precision
/// over all nodes.
struct PrecisionSpan {
  double min_precision = 0.0;
  double max_precision = 0.0;
};

PrecisionSpan gaussian_precision_span(const Instance& inst, const OracleLimits& limits = {});

/// Warnings for Gaussian instances whose conditional or reachable precisions
/// leave [low/10, 10*high]. Empty when everything is in range.
std::vector<std::string> reward_range_warnings(const Instance& inst,
                                               const OracleLimits& limits = {});

/// Plan that observes every measurable node max_obs_per_node times.
ObservationPlan full_plan(const Instance& inst);

}  // namespace oss
