#include <algorithm>
#include <cmath>

#include "oracle_internal.hpp"
#include "oss/error.hpp"
#include "oss/oracle.hpp"

namespace oss {

namespace detail {

BooleanJoint::BooleanJoint(const Instance& inst, const OracleLimits& limits) : n(inst.size()) {
  if (inst.kind() != InstanceKind::boolean) {
    throw ContractViolation("boolean oracle needs a boolean instance");
  }
  if (n > limits.boolean_max_nodes) {
    throw GuardError("boolean oracle: " + std::to_string(n) + " nodes exceeds the guard of " +
                     std::to_string(limits.boolean_max_nodes));
  }
  prob.assign(std::size_t{1} << n, 0.0);
  for (std::size_t x = 0; x < prob.size(); ++x) {
    double pr = 1.0;
    for (const Node& node : inst.nodes()) {
      const auto& bp = inst.boolean(node.id);
      const bool on = (x >> node.id.index()) & 1U;
      double p1 = bp.alpha;
      if (node.parent) {
        p1 = ((x >> node.parent->index()) & 1U) ? bp.alpha : bp.beta;
      }
      pr *= on ? p1 : 1.0 - p1;
    }
    prob[x] = pr;
  }
  for (const Node& node : inst.nodes()) {
    if (node.hypothesis) hypotheses.push_back(node.id.index());
  }
}

}  // namespace detail

namespace {

struct Test {
  std::size_t local_bit;  // position among the observed nodes
  double miss;            // Pr(Y = 0 | X = 1)
  double false_alarm;     // Pr(Y = 1 | X = 0)
};

// Enumerates every outcome vector of the plan's observations against the
// joint restricted to the observed nodes.
class OutcomeEnumerator {
 public:
  OutcomeEnumerator(const Instance& inst, const detail::BooleanJoint& joint,
                    const ObservationPlan& plan) {
    std::vector<std::size_t> observed;
    for (const auto& e : plan.entries()) {
      const auto& bp = inst.boolean(e.node);
      for (std::uint32_t t = 0; t < e.count; ++t) {
        tests_.push_back({observed.size(), bp.theta, bp.zeta});
      }
      observed.push_back(e.node.index());
    }
    const std::size_t cells = std::size_t{1} << observed.size();
    const std::size_t h = joint.hypotheses.size();
    marginal_.assign(cells, 0.0);
    with_true_.assign(cells * h, 0.0);
    for (std::size_t x = 0; x < joint.prob.size(); ++x) {
      std::size_t xs = 0;
      for (std::size_t b = 0; b < observed.size(); ++b) xs |= ((x >> observed[b]) & 1U) << b;
      marginal_[xs] += joint.prob[x];
      for (std::size_t k = 0; k < h; ++k) {
        if ((x >> joint.hypotheses[k]) & 1U) with_true_[xs * h + k] += joint.prob[x];
      }
    }
    hyps_ = h;
  }

  // Calls fn(pr_e, pr_true_per_hypothesis, all_negative) for each outcome e.
  template <class F>
  void run(F&& fn) {
    std::vector<double> weight(marginal_.size(), 1.0);
    std::vector<double> joint_true(hyps_);
    recurse(0, weight, true, joint_true, fn);
  }

 private:
  template <class F>
  void recurse(std::size_t t, const std::vector<double>& weight, bool all_negative,
               std::vector<double>& joint_true, F& fn) {
    if (t == tests_.size()) {
      double pr_e = 0.0;
      std::fill(joint_true.begin(), joint_true.end(), 0.0);
      for (std::size_t xs = 0; xs < weight.size(); ++xs) {
        if (weight[xs] == 0.0) continue;
        pr_e += weight[xs] * marginal_[xs];
        for (std::size_t k = 0; k < hyps_; ++k) {
          joint_true[k] += weight[xs] * with_true_[xs * hyps_ + k];
        }
      }
      fn(pr_e, joint_true, all_negative);
      return;
    }
    const Test& test = tests_[t];
    std::vector<double> next(weight.size());
    for (int y = 0; y <= 1; ++y) {
      for (std::size_t xs = 0; xs < weight.size(); ++xs) {
        const bool on = (xs >> test.local_bit) & 1U;
        const double py1 = on ? 1.0 - test.miss : test.false_alarm;
        next[xs] = weight[xs] * (y == 1 ? py1 : 1.0 - py1);
      }
      recurse(t + 1, next, all_negative && y == 0, joint_true, fn);
    }
  }

  std::vector<Test> tests_;
  std::vector<double> marginal_;
  std::vector<double> with_true_;
  std::size_t hyps_ = 0;
};

void check_observations(const ObservationPlan& plan, const OracleLimits& limits) {
  if (plan.total_observations() > limits.boolean_max_observations) {
    throw GuardError("boolean oracle: " + std::to_string(plan.total_observations()) +
                     " observations exceeds the guard of " +
                     std::to_string(limits.boolean_max_observations));
  }
}

}  // namespace

namespace detail {

double boolean_expected_reward(const Instance& inst, const BooleanJoint& joint,
                               const ObservationPlan& plan) {
  OutcomeEnumerator outcomes(inst, joint, plan);
  double expected = 0.0;
  // sum_e Pr(e) * max_i Pr(X_i = 1 | e) = sum_e max_i Pr(X_i = 1, e)
  outcomes.run([&](double, const std::vector<double>& joint_true, bool) {
    expected += *std::max_element(joint_true.begin(), joint_true.end());
  });
  return expected;
}

}  // namespace detail

BooleanEvidenceReport boss_evidence_report(const Instance& inst, const ObservationPlan& plan,
                                           const OracleLimits& limits) {
  inst.plan_time(plan);
  check_observations(plan, limits);
  detail::BooleanJoint joint(inst, limits);

  BooleanEvidenceReport rep;
  OutcomeEnumerator outcomes(inst, joint, plan);
  double pr_negative = 0.0;
  outcomes.run([&](double pr_e, const std::vector<double>& joint_true, bool all_negative) {
    rep.outcome_probability_sum += pr_e;
    rep.expected_reward += *std::max_element(joint_true.begin(), joint_true.end());
    if (all_negative) pr_negative = pr_e;
  });

  // Quantities under the all-negative outcome, straight from the joint.
  std::vector<double> neg_and_true(inst.size(), 0.0);
  for (std::size_t x = 0; x < joint.prob.size(); ++x) {
    double like = 1.0;
    for (const auto& e : plan.entries()) {
      const auto& bp = inst.boolean(e.node);
      const bool on = (x >> e.node.index()) & 1U;
      like *= std::pow(on ? bp.theta : 1.0 - bp.zeta, static_cast<double>(e.count));
    }
    const double w = joint.prob[x] * like;
    for (std::size_t i = 0; i < inst.size(); ++i) {
      if ((x >> i) & 1U) neg_and_true[i] += w;
    }
  }
  const double prior = inst.boolean(kRoot).alpha;
  rep.negative_given_root_true = prior > 0.0 ? neg_and_true[0] / prior : 0.0;
  rep.negative_given_root_false =
      prior < 1.0 ? (pr_negative - neg_and_true[0]) / (1.0 - prior) : 0.0;
  rep.posterior_all_negative.resize(inst.size(), 0.0);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    rep.posterior_all_negative[i] = pr_negative > 0.0 ? neg_and_true[i] / pr_negative : 0.0;
  }
  return rep;
}

SubsetEval boss_eval_exact(const Instance& inst, const ObservationPlan& plan,
                           const OracleLimits& limits) {
  SubsetEval out;
  out.plan = plan;
  out.time = inst.plan_time(plan);
  check_observations(plan, limits);
  detail::BooleanJoint joint(inst, limits);
  out.exact_reward = detail::boolean_expected_reward(inst, joint, plan);
  return out;
}

}  // namespace oss
