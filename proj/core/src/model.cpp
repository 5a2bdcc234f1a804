#include "oss/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "oss/error.hpp"

namespace oss {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(InstanceKind kind) {
  return kind == InstanceKind::boolean ? "boolean" : "gaussian";
}

// ---------------------------------------------------------------------------
// ObservationPlan

void ObservationPlan::set(NodeId node, std::uint32_t count) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), node,
                             [](const Entry& e, NodeId id) { return e.node < id; });
  if (it != entries_.end() && it->node == node) {
    if (count == 0) {
      entries_.erase(it);
    } else {
      it->count = count;
    }
  } else if (count > 0) {
    entries_.insert(it, Entry{node, count});
  }
}

std::uint32_t ObservationPlan::count(NodeId node) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), node,
                             [](const Entry& e, NodeId id) { return e.node < id; });
  return (it != entries_.end() && it->node == node) ? it->count : 0;
}

std::uint32_t ObservationPlan::total_observations() const {
  std::uint32_t total = 0;
  for (const auto& e : entries_) total += e.count;
  return total;
}

void ObservationPlan::absorb(const ObservationPlan& other) {
  if (other.entries_.empty()) return;
  std::vector<Entry> merged;
  merged.reserve(entries_.size() + other.entries_.size());
  std::merge(entries_.begin(), entries_.end(), other.entries_.begin(), other.entries_.end(),
             std::back_inserter(merged));
  entries_ = std::move(merged);
}

// ---------------------------------------------------------------------------
// Instance

namespace {

[[noreturn]] void invalid(NodeId id, std::string_view field, std::string_view what) {
  std::ostringstream os;
  os << "node " << id.value << ": " << field << ": " << what;
  throw ValidationError(os.str());
}

[[noreturn]] void invalid(std::string_view field, std::string_view what) {
  throw ValidationError(std::string(field) + ": " + std::string(what));
}

bool is_probability(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

void validate_boolean(const Node& node, double zeta_max) {
  const auto* bp = std::get_if<BooleanParams>(&node.params);
  if (bp == nullptr) invalid(node.id, "params", "boolean instance requires alpha/beta/theta/zeta");
  if (!is_probability(bp->alpha)) invalid(node.id, "alpha", "probability out of range");
  if (!is_probability(bp->beta)) invalid(node.id, "beta", "probability out of range");
  if (!is_probability(bp->theta)) invalid(node.id, "theta", "probability out of range");
  if (!is_probability(bp->zeta)) invalid(node.id, "zeta", "probability out of range");
  if (!node.parent && bp->alpha != bp->beta) {
    invalid(node.id, "beta", "root must have alpha equal to beta (both are the prior)");
  }
  if (!node.measurable && (bp->theta != 1.0 || bp->zeta != 0.0)) {
    invalid(node.id, "theta", "non-measurable node requires theta = 1 and zeta = 0");
  }
  if (bp->zeta > zeta_max) invalid(node.id, "zeta", "exceeds zeta_max");
  if (node.measurable && !node.hypothesis) {
    invalid(node.id, "measurable", "only hypothesis nodes may carry observations");
  }
}

void validate_gaussian(const Node& node) {
  const auto* gp = std::get_if<GaussianParams>(&node.params);
  if (gp == nullptr) invalid(node.id, "params", "gaussian instance requires a/sigma2/theta");
  if (!std::isfinite(gp->a)) invalid(node.id, "a", "must be finite");
  if (!std::isfinite(gp->sigma2) || gp->sigma2 <= 0.0) invalid(node.id, "sigma2", "must be > 0");
  if (!std::isfinite(gp->theta) || gp->theta < 0.0) invalid(node.id, "theta", "must be >= 0");
  if (gp->mu && !std::isfinite(*gp->mu)) invalid(node.id, "mu", "must be finite");
  if (!node.measurable && gp->theta != 0.0) {
    invalid(node.id, "theta", "non-measurable node requires theta = 0");
  }
}

}  // namespace

Instance::Instance(Spec spec) : spec_(std::move(spec)) {
  const std::size_t n = spec_.nodes.size();
  if (n == 0) invalid("nodes", "instance has no nodes");
  if (spec_.budget < 0) invalid("budget", "must be >= 0");
  if (spec_.max_obs_per_node < 1) invalid("max_obs_per_node", "must be >= 1");

  std::sort(spec_.nodes.begin(), spec_.nodes.end(),
            [](const Node& a, const Node& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < n; ++i) {
    const Node& node = spec_.nodes[i];
    if (node.id.value == 0 || node.id.value > n) invalid(node.id, "id", "ids must be 1..n");
    if (node.id.value != i + 1) invalid(node.id, "id", "duplicate id");
  }

  if (spec_.kind == InstanceKind::boolean) {
    if (!is_probability(spec_.zeta_max)) invalid("zeta_max", "probability out of range");
  } else {
    const auto& rr = spec_.reward_range;
    if (!(std::isfinite(rr.low) && std::isfinite(rr.high) && rr.low > 0.0 && rr.low < rr.high)) {
      invalid("reward_range", "requires 0 < a < b");
    }
  }

  bool any_hypothesis = false;
  for (const Node& node : spec_.nodes) {
    if (node.id == kRoot) {
      if (node.parent) invalid(node.id, "parent", "root must not have a parent");
    } else {
      if (!node.parent) invalid(node.id, "parent", "orphan node (only node 1 may be the root)");
      if (*node.parent == node.id) {
        invalid(node.id, "parent", "cycle at node " + std::to_string(node.id.value));
      }
      if (node.parent->value == 0 || node.parent->value > n) {
        invalid(node.id, "parent", "unknown parent " + std::to_string(node.parent->value));
      }
    }
    if (node.cost < 0) invalid(node.id, "cost", "must be >= 0");
    if (spec_.kind == InstanceKind::boolean) {
      validate_boolean(node, spec_.zeta_max);
    } else {
      validate_gaussian(node);
    }
    any_hypothesis = any_hypothesis || node.hypothesis;
  }
  if (!any_hypothesis) invalid("nodes", "at least one hypothesis node is required");

  // Every node must reach the root within n steps.
  for (const Node& node : spec_.nodes) {
    NodeId cur = node.id;
    std::size_t steps = 0;
    while (cur != kRoot) {
      cur = *spec_.nodes[cur.index()].parent;
      if (++steps > n) invalid(node.id, "parent", "cycle at node " + std::to_string(node.id.value));
    }
  }

  children_.assign(n, {});
  for (const Node& node : spec_.nodes) {
    if (node.parent) children_[node.parent->index()].push_back(node.id);
  }

  preorder_.reserve(n);
  preorder_.push_back(kRoot);
  for (std::size_t i = 0; i < preorder_.size(); ++i) {
    for (NodeId child : children_[preorder_[i].index()]) preorder_.push_back(child);
  }

  postorder_.reserve(n);
  std::vector<std::pair<NodeId, std::size_t>> stack{{kRoot, 0}};
  while (!stack.empty()) {
    auto& [id, next] = stack.back();
    const auto& kids = children_[id.index()];
    if (next < kids.size()) {
      NodeId child = kids[next++];
      stack.emplace_back(child, 0);
    } else {
      postorder_.push_back(id);
      stack.pop_back();
    }
  }
}

const BooleanParams& Instance::boolean(NodeId id) const {
  return std::get<BooleanParams>(spec_.nodes[id.index()].params);
}

const GaussianParams& Instance::gaussian(NodeId id) const {
  return std::get<GaussianParams>(spec_.nodes[id.index()].params);
}

std::uint32_t Instance::max_observations(NodeId id) const {
  return node(id).measurable ? spec_.max_obs_per_node : 0;
}

std::int64_t Instance::plan_time(const ObservationPlan& plan) const {
  std::int64_t total = 0;
  for (const auto& e : plan.entries()) {
    if (e.node.value == 0 || e.node.value > size()) {
      throw ValidationError("plan references unknown node " + std::to_string(e.node.value));
    }
    if (!node(e.node).measurable) {
      throw ValidationError("node " + std::to_string(e.node.value) + " is not measurable");
    }
    if (e.count > spec_.max_obs_per_node) {
      throw ValidationError("node " + std::to_string(e.node.value) +
                            " exceeds max_obs_per_node");
    }
    total += static_cast<std::int64_t>(e.count) * node(e.node).cost;
  }
  return total;
}

TreeStats tree_stats(const Instance& inst) {
  TreeStats s;
  s.n = inst.size();
  std::vector<std::size_t> depth(inst.size(), 0);
  for (NodeId id : inst.preorder()) {
    const auto kids = inst.children(id);
    s.c = std::max(s.c, kids.size());
    for (NodeId child : kids) {
      depth[child.index()] = depth[id.index()] + 1;
      s.h = std::max(s.h, depth[child.index()]);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

template <class T>
T take(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field \"" + key + "\"");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(where + ": field \"" + key + "\" has the wrong type");
  }
}

double take_number(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field \"" + key + "\"");
  if (!it->is_number()) throw ParseError(where + ": field \"" + key + "\" must be a number");
  return it->get<double>();
}

std::int64_t take_integer(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field \"" + key + "\"");
  if (!it->is_number_integer()) {
    throw ParseError(where + ": field \"" + key + "\" must be an integer");
  }
  return it->get<std::int64_t>();
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError(where + ": unknown field \"" + key + "\"");
    }
  }
}

Node parse_node(const json& j, InstanceKind kind) {
  if (!j.is_object()) throw ParseError("nodes: every entry must be an object");
  const std::int64_t raw_id = take_integer(j, "id", "node");
  if (raw_id < 1 || raw_id > std::numeric_limits<std::uint32_t>::max()) {
    throw ParseError("node: id must be a positive integer");
  }
  const std::string where = "node " + std::to_string(raw_id);

  Node node;
  node.id = NodeId(static_cast<std::uint32_t>(raw_id));
  auto parent = j.find("parent");
  if (parent == j.end()) throw ParseError(where + ": missing field \"parent\"");
  if (!parent->is_null()) {
    if (!parent->is_number_integer() || parent->get<std::int64_t>() < 1) {
      throw ParseError(where + ": parent must be a positive integer or null");
    }
    node.parent = NodeId(parent->get<std::uint32_t>());
  }
  node.hypothesis = take<bool>(j, "hypothesis", where);
  node.measurable = take<bool>(j, "measurable", where);
  node.cost = take_integer(j, "cost", where);

  if (kind == InstanceKind::boolean) {
    reject_unknown(j, {"id", "parent", "hypothesis", "measurable", "cost", "alpha", "beta",
                       "theta", "zeta"},
                   where);
    BooleanParams p;
    p.alpha = take_number(j, "alpha", where);
    p.beta = take_number(j, "beta", where);
    p.theta = take_number(j, "theta", where);
    p.zeta = take_number(j, "zeta", where);
    node.params = p;
  } else {
    reject_unknown(j, {"id", "parent", "hypothesis", "measurable", "cost", "a", "sigma2",
                       "theta", "mu"},
                   where);
    GaussianParams p;
    if (j.contains("a") || node.parent) p.a = take_number(j, "a", where);
    p.sigma2 = take_number(j, "sigma2", where);
    p.theta = take_number(j, "theta", where);
    if (j.contains("mu")) p.mu = take_number(j, "mu", where);
    node.params = p;
  }
  return node;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance: document must be a JSON object");

  const auto kind_text = take<std::string>(doc, "kind", "instance");
  Instance::Spec spec;
  if (kind_text == "boolean") {
    spec.kind = InstanceKind::boolean;
    reject_unknown(doc, {"kind", "budget", "max_obs_per_node", "zeta_max", "nodes"}, "instance");
    if (doc.contains("zeta_max")) spec.zeta_max = take_number(doc, "zeta_max", "instance");
  } else if (kind_text == "gaussian") {
    spec.kind = InstanceKind::gaussian;
    reject_unknown(doc, {"kind", "budget", "max_obs_per_node", "reward_range", "nodes"},
                   "instance");
    const auto& rr = doc.find("reward_range");
    if (rr == doc.end()) throw ParseError("instance: missing field \"reward_range\"");
    if (!rr->is_array() || rr->size() != 2 || !(*rr)[0].is_number() || !(*rr)[1].is_number()) {
      throw ParseError("instance: reward_range must be [a, b]");
    }
    spec.reward_range = RewardRange{(*rr)[0].get<double>(), (*rr)[1].get<double>()};
  } else {
    throw ParseError("instance: kind must be \"boolean\" or \"gaussian\"");
  }

  spec.budget = take_integer(doc, "budget", "instance");
  if (doc.contains("max_obs_per_node")) {
    const auto m = take_integer(doc, "max_obs_per_node", "instance");
    if (m < 1) throw ValidationError("max_obs_per_node: must be >= 1");
    spec.max_obs_per_node = static_cast<std::uint32_t>(m);
  }
  const auto& nodes = doc.find("nodes");
  if (nodes == doc.end() || !nodes->is_array()) throw ParseError("instance: nodes must be an array");
  for (const auto& j : *nodes) spec.nodes.push_back(parse_node(j, spec.kind));

  return Instance(std::move(spec));
}

std::string serialize_instance(const Instance& inst) {
  ordered_json doc;
  doc["kind"] = to_string(inst.kind());
  doc["budget"] = inst.budget();
  doc["max_obs_per_node"] = inst.max_obs_per_node();
  if (inst.kind() == InstanceKind::boolean) {
    doc["zeta_max"] = inst.zeta_max();
  } else {
    doc["reward_range"] = {inst.reward_range().low, inst.reward_range().high};
  }
  ordered_json nodes = ordered_json::array();
  for (const Node& node : inst.nodes()) {
    ordered_json j;
    j["id"] = node.id.value;
    j["parent"] = node.parent ? ordered_json(node.parent->value) : ordered_json(nullptr);
    j["hypothesis"] = node.hypothesis;
    j["measurable"] = node.measurable;
    j["cost"] = node.cost;
    if (const auto* bp = std::get_if<BooleanParams>(&node.params)) {
      j["alpha"] = bp->alpha;
      j["beta"] = bp->beta;
      j["theta"] = bp->theta;
      j["zeta"] = bp->zeta;
    } else {
      const auto& gp = std::get<GaussianParams>(node.params);
      j["a"] = gp.a;
      j["sigma2"] = gp.sigma2;
      j["theta"] = gp.theta;
      if (gp.mu) j["mu"] = *gp.mu;
    }
    nodes.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  return doc.dump(2) + "\n";
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize_instance(inst);
}

ObservationPlan parse_subset(std::string_view text) {
  ObservationPlan plan;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view tok = text.substr(pos, end - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    std::uint32_t id = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), id);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || id == 0) {
      throw ParseError("subset: invalid node id \"" + std::string(tok) + "\"");
    }
    plan.set(NodeId(id), plan.count(NodeId(id)) + 1);
    pos = end + 1;
  }
  return plan;
}

}  // namespace oss
