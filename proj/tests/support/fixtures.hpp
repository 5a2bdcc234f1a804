/// Small hand-built instances and seeded random helpers shared by the tests.
#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "oss/generator.hpp"
#include "oss/model.hpp"

namespace oss::testing {

std::filesystem::path fixture_path(const std::string& name);

Node boolean_node(std::uint32_t id, std::optional<std::uint32_t> parent, BooleanParams params,
                  bool hypothesis, bool measurable, std::int64_t cost);
Node gaussian_node(std::uint32_t id, std::optional<std::uint32_t> parent, GaussianParams params,
                   bool hypothesis, bool measurable, std::int64_t cost);

/// One measurable hypothesis with prior `prior` and false-negative rate `theta`.
Instance single_boolean_root(double prior, double theta, std::int64_t cost, std::int64_t budget);

/// Two independent exact-test hypotheses with priors 0.6 and 0.5, unit costs.
Instance two_independent_hypotheses(std::int64_t budget);

/// Root -> child edge with alpha 0.7, beta 0.2, prior 0.6; exact test on the child.
Instance boolean_pair();

/// X1 -> X2 -> ... with unit variances, unit weights and theta = 1 observations.
Instance gaussian_chain(std::size_t n, std::int64_t budget, RewardRange range = {0.1, 100.0});

/// Independent boolean hypotheses with the given costs and priors.
Instance knapsack_instance(const std::vector<std::int64_t>& costs,
                           const std::vector<double>& priors, std::int64_t budget);

/// Random small instance; n is drawn from [n_min, n_max].
Instance random_instance(InstanceKind kind, std::mt19937_64& rng, std::size_t n_min,
                         std::size_t n_max, double zeta_max = 0.0);

/// Random affordable-or-not plan over the measurable nodes.
ObservationPlan random_plan(const Instance& inst, std::mt19937_64& rng);

/// Same instance with the Gaussian reward range widened around its precisions.
Instance with_auto_range(const Instance& inst);

}  // namespace oss::testing
