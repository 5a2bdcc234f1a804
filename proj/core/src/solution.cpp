#include "oss/solution.hpp"

#include "json.hpp"
#include "oss/error.hpp"

namespace oss {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json plan_to_json(const ObservationPlan& plan) {
  ordered_json out = ordered_json::array();
  for (const auto& e : plan.entries()) out.push_back({e.node.value, e.count});
  return out;
}

ObservationPlan plan_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("subset must be an array of [node, count] pairs");
  ObservationPlan plan;
  for (const auto& item : j) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number_unsigned() ||
        !item[1].is_number_unsigned()) {
      throw ParseError("subset entries must be [node, count] pairs");
    }
    const auto id = item[0].get<std::uint32_t>();
    const auto count = item[1].get<std::uint32_t>();
    if (id == 0) throw ParseError("subset: node ids start at 1");
    plan.set(NodeId(id), plan.count(NodeId(id)) + count);
  }
  return plan;
}

json parse_document(std::string_view text, const char* what) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": malformed JSON: " + e.what());
  }
  if (!doc.is_object()) throw ParseError(std::string(what) + ": expected an object");
  if (doc.value("format_version", 0) != kFormatVersion) {
    throw ParseError(std::string(what) + ": unsupported format_version");
  }
  return doc;
}

}  // namespace

std::string solution_to_json(const Solution& s, WriteOptions opts) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = to_string(s.kind);
  doc["subset"] = plan_to_json(s.plan);
  doc["time_used"] = s.time_used;
  doc["predicted_reward"] = s.predicted_reward;
  if (s.exact_reward) doc["exact_reward"] = *s.exact_reward;
  doc["delta_u_bound"] = s.delta_u_bound;
  ordered_json grids = ordered_json::object();
  for (const auto& [name, eps] : s.grids_used) grids[name] = eps;
  doc["grids_used"] = std::move(grids);
  doc["root_table_cells"] = s.root_table_cells;
  doc["solver_millis"] = opts.omit_timing ? 0 : s.solver_millis;
  return doc.dump(2) + "\n";
}

Solution solution_from_json(std::string_view text) {
  const json doc = parse_document(text, "solution");
  Solution s;
  try {
    const auto kind = doc.at("kind").get<std::string>();
    if (kind != "boolean" && kind != "gaussian") throw ParseError("solution: unknown kind");
    s.kind = kind == "boolean" ? InstanceKind::boolean : InstanceKind::gaussian;
    s.plan = plan_from_json(doc.at("subset"));
    s.time_used = doc.at("time_used").get<std::int64_t>();
    s.predicted_reward = doc.at("predicted_reward").get<double>();
    if (doc.contains("exact_reward")) s.exact_reward = doc.at("exact_reward").get<double>();
    s.delta_u_bound = doc.at("delta_u_bound").get<double>();
    for (const auto& [name, eps] : doc.at("grids_used").items()) {
      s.grids_used.emplace_back(name, eps.get<double>());
    }
    s.root_table_cells = doc.at("root_table_cells").get<std::size_t>();
    s.solver_millis = doc.at("solver_millis").get<std::int64_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("solution: ") + e.what());
  }
  return s;
}

std::string subset_eval_to_json(const SubsetEval& e) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["subset"] = plan_to_json(e.plan);
  doc["time"] = e.time;
  doc["exact_reward"] = e.exact_reward;
  return doc.dump(2) + "\n";
}

SubsetEval subset_eval_from_json(std::string_view text) {
  const json doc = parse_document(text, "subset evaluation");
  SubsetEval e;
  try {
    e.plan = plan_from_json(doc.at("subset"));
    e.time = doc.at("time").get<std::int64_t>();
    e.exact_reward = doc.at("exact_reward").get<double>();
  } catch (const json::exception& ex) {
    throw ParseError(std::string("subset evaluation: ") + ex.what());
  }
  return e;
}

}  // namespace oss
