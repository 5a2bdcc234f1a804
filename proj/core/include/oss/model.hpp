/// \file model.hpp
/// Tree-shaped Bayesian network instances for observation subset selection.
///
/// An instance is an out-tree rooted at node 1. Every node carries either
/// boolean parameters (conditional probabilities of the state and of a
/// negative test) or linear-Gaussian parameters (edge weight, conditional
/// variance, observation precision). Observations are only ever made on
/// measurable nodes, each at an integer time cost, and the total cost of a
/// plan must fit an integer budget.

#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace oss {

/// Dense 1-based node identifier; node 1 is the root.
struct NodeId {
  std::uint32_t value = 0;

  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint32_t v) : value(v) {}

  constexpr std::size_t index() const { return value - 1; }
  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

inline constexpr NodeId kRoot{1};

enum class InstanceKind { boolean, gaussian };

std::string_view to_string(InstanceKind kind);

struct BooleanParams {
  double alpha = 0.0;  ///< Pr(X=1 | parent=1), or the prior at the root
  double beta = 0.0;   ///< Pr(X=1 | parent=0), or the prior at the root
  double theta = 1.0;  ///< Pr(Y=0 | X=1), false-negative rate
  double zeta = 0.0;   ///< Pr(Y=1 | X=0), false-positive rate
};

struct GaussianParams {
  double a = 0.0;       ///< edge weight to the parent (ignored at the root)
  double sigma2 = 1.0;  ///< conditional variance
  double theta = 0.0;   ///< precision of a single observation
  std::optional<double> mu;

  double alpha() const { return a * a; }
  double beta() const { return 1.0 / sigma2; }
};

struct Node {
  NodeId id;
  std::optional<NodeId> parent;
  bool hypothesis = false;
  bool measurable = false;
  std::int64_t cost = 0;
  std::variant<BooleanParams, GaussianParams> params;
};

/// Precision range over which the Gaussian reward is distinguishable.
struct RewardRange {
  double low = 0.1;
  double high = 100.0;
  friend bool operator==(const RewardRange&, const RewardRange&) = default;
};

/// Observation counts per node, kept sorted by node id with zero counts
/// omitted. Ordering is lexicographic over the (node, count) sequence.
class ObservationPlan {
 public:
  struct Entry {
    NodeId node;
    std::uint32_t count = 0;
    friend constexpr auto operator<=>(const Entry&, const Entry&) = default;
  };

  ObservationPlan() = default;

  void set(NodeId node, std::uint32_t count);
  std::uint32_t count(NodeId node) const;
  std::span<const Entry> entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::uint32_t total_observations() const;

  /// Adds all entries of `other`; the two plans must not share nodes.
  void absorb(const ObservationPlan& other);

  friend auto operator<=>(const ObservationPlan&, const ObservationPlan&) = default;
  friend bool operator==(const ObservationPlan&, const ObservationPlan&) = default;

 private:
  std::vector<Entry> entries_;
};

class Instance;

struct TreeStats {
  std::size_t n = 0;  ///< node count
  std::size_t h = 0;  ///< edges on the longest root-to-leaf path
  std::size_t c = 0;  ///< maximum number of children
  friend bool operator==(const TreeStats&, const TreeStats&) = default;
};

/// Validated, immutable problem instance.
class Instance {
 public:
  struct Spec {
    InstanceKind kind = InstanceKind::boolean;
    std::vector<Node> nodes;
    std::int64_t budget = 0;
    std::uint32_t max_obs_per_node = 1;
    double zeta_max = 0.0;               // boolean only
    RewardRange reward_range{};          // gaussian only
  };

  /// Validates `spec` and builds the tree indices. Throws ValidationError.
  explicit Instance(Spec spec);

  InstanceKind kind() const { return spec_.kind; }
  std::size_t size() const { return spec_.nodes.size(); }
  std::int64_t budget() const { return spec_.budget; }
  std::uint32_t max_obs_per_node() const { return spec_.max_obs_per_node; }
  double zeta_max() const { return spec_.zeta_max; }
  const RewardRange& reward_range() const { return spec_.reward_range; }

  std::span<const Node> nodes() const { return spec_.nodes; }
  const Node& node(NodeId id) const { return spec_.nodes[id.index()]; }
  const BooleanParams& boolean(NodeId id) const;
  const GaussianParams& gaussian(NodeId id) const;

  std::span<const NodeId> children(NodeId id) const { return children_[id.index()]; }
  /// Children before parents; siblings in ascending id order.
  std::span<const NodeId> postorder() const { return postorder_; }
  /// Parents before children.
  std::span<const NodeId> preorder() const { return preorder_; }

  /// Largest admissible observation count at `id` (0 if not measurable).
  std::uint32_t max_observations(NodeId id) const;

  /// Total cost of `plan`; throws ValidationError if the plan observes a
  /// non-measurable node or exceeds max_obs_per_node.
  std::int64_t plan_time(const ObservationPlan& plan) const;

  const Spec& spec() const { return spec_; }

 private:
  Spec spec_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<NodeId> postorder_;
  std::vector<NodeId> preorder_;
};

TreeStats tree_stats(const Instance& inst);

Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& inst);

Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);

/// Parses "2,5,5" into {2:1, 5:2}. Empty text is the empty plan.
ObservationPlan parse_subset(std::string_view text);

}  // namespace oss
