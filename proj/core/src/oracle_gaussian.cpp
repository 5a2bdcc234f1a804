#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "oss/error.hpp"
#include "oss/operators.hpp"
#include "oss/oracle.hpp"

namespace oss {

namespace {

// Joint covariance of the linear-Gaussian tree. Means never matter here.
Eigen::MatrixXd tree_covariance(const Instance& inst) {
  const auto n = static_cast<Eigen::Index>(inst.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
  std::vector<Eigen::Index> done;
  for (NodeId id : inst.preorder()) {
    const auto i = static_cast<Eigen::Index>(id.index());
    const auto& gp = inst.gaussian(id);
    const Node& node = inst.node(id);
    if (!node.parent) {
      cov(i, i) = gp.sigma2;
    } else {
      const auto par = static_cast<Eigen::Index>(node.parent->index());
      for (Eigen::Index j : done) {
        cov(i, j) = cov(j, i) = gp.a * cov(par, j);
      }
      cov(i, i) = gp.a * gp.a * cov(par, par) + gp.sigma2;
    }
    done.push_back(i);
  }
  return cov;
}

void check_size(const Instance& inst, const OracleLimits& limits) {
  if (inst.kind() != InstanceKind::gaussian) {
    throw ContractViolation("gaussian oracle needs a gaussian instance");
  }
  if (inst.size() > limits.gaussian_max_nodes) {
    throw GuardError("gaussian oracle: " + std::to_string(inst.size()) +
                     " nodes exceeds the guard of " + std::to_string(limits.gaussian_max_nodes));
  }
}

}  // namespace

std::vector<double> gaussian_posterior_precisions(const Instance& inst,
                                                  const ObservationPlan& plan,
                                                  const OracleLimits& limits) {
  check_size(inst, limits);
  inst.plan_time(plan);
  const Eigen::MatrixXd cov = tree_covariance(inst);

  // One row per observation copy; zero-precision readings carry no information.
  std::vector<Eigen::Index> rows;
  std::vector<double> noise;
  for (const auto& e : plan.entries()) {
    const double theta = inst.gaussian(e.node).theta;
    if (theta <= 0.0) continue;
    for (std::uint32_t t = 0; t < e.count; ++t) {
      rows.push_back(static_cast<Eigen::Index>(e.node.index()));
      noise.push_back(1.0 / theta);
    }
  }

  Eigen::VectorXd var = cov.diagonal();
  if (!rows.empty()) {
    const auto k = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd syy(k, k);
    Eigen::MatrixXd sxy(cov.rows(), k);
    for (Eigen::Index a = 0; a < k; ++a) {
      sxy.col(a) = cov.col(rows[a]);
      for (Eigen::Index b = 0; b < k; ++b) syy(a, b) = cov(rows[a], rows[b]);
      syy(a, a) += noise[a];
    }
    // var(X | Y) = diag(Sxx - Sxy Syy^-1 Syx)
    Eigen::LLT<Eigen::MatrixXd> llt(syy);
    if (llt.info() != Eigen::Success) {
      throw ContractViolation("gaussian oracle: observation covariance is not positive definite");
    }
    const Eigen::MatrixXd gain = llt.solve(sxy.transpose());
    var -= (sxy.array() * gain.transpose().array()).rowwise().sum().matrix();
  }

  std::vector<double> prec(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) prec[i] = 1.0 / var(static_cast<Eigen::Index>(i));
  return prec;
}

SubsetEval goss_eval_exact(const Instance& inst, const ObservationPlan& plan,
                           const OracleLimits& limits) {
  const auto prec = gaussian_posterior_precisions(inst, plan, limits);
  const auto& rr = inst.reward_range();
  SubsetEval out;
  out.plan = plan;
  out.time = inst.plan_time(plan);
  out.exact_reward = 1.0;
  for (const Node& node : inst.nodes()) {
    if (node.hypothesis) {
      out.exact_reward = std::min(out.exact_reward, logbar(rr.low, rr.high, prec[node.id.index()]));
    }
  }
  return out;
}

ObservationPlan full_plan(const Instance& inst) {
  ObservationPlan plan;
  for (const Node& node : inst.nodes()) {
    if (node.measurable) plan.set(node.id, inst.max_obs_per_node());
  }
  return plan;
}

PrecisionSpan gaussian_precision_span(const Instance& inst, const OracleLimits& limits) {
  const auto prior = gaussian_posterior_precisions(inst, ObservationPlan{}, limits);
  const auto full = gaussian_posterior_precisions(inst, full_plan(inst), limits);
  return {*std::min_element(prior.begin(), prior.end()),
          *std::max_element(full.begin(), full.end())};
}

std::vector<std::string> reward_range_warnings(const Instance& inst, const OracleLimits& limits) {
  std::vector<std::string> out;
  if (inst.kind() != InstanceKind::gaussian) return out;
  const auto& rr = inst.reward_range();
  const double lo = rr.low / 10.0;
  const double hi = rr.high * 10.0;
  for (const Node& node : inst.nodes()) {
    const double beta = inst.gaussian(node.id).beta();
    if (beta < lo || beta > hi) {
      out.push_back("node " + std::to_string(node.id.value) + ": conditional precision " +
                    std::to_string(beta) + " outside [a/10, 10b]");
    }
  }
  const auto span = gaussian_precision_span(inst, limits);
  if (span.min_precision < lo || span.max_precision > hi) {
    out.push_back("reachable posterior precisions [" + std::to_string(span.min_precision) + ", " +
                  std::to_string(span.max_precision) + "] leave [a/10, 10b]");
  }
  return out;
}

}  // namespace oss
