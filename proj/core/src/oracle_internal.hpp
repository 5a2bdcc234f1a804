#pragma once

#include <vector>

#include "oss/model.hpp"
#include "oss/oracle.hpp"

namespace oss::detail {

/// Pr(x) for every joint assignment; bit i of x is node i+1.
struct BooleanJoint {
  BooleanJoint(const Instance& inst, const OracleLimits& limits);

  std::size_t n;
  std::vector<double> prob;
  std::vector<std::size_t> hypotheses;  // node indices
};

double boolean_expected_reward(const Instance& inst, const BooleanJoint& joint,
                               const ObservationPlan& plan);

}  // namespace oss::detail
