#include "cli/commands.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "oss/boss.hpp"
#include "oss/error.hpp"
#include "oss/generator.hpp"
#include "oss/goss.hpp"
#include "oss/oracle.hpp"
#include "oss/solution.hpp"

namespace oss::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr double kBoundSlack = 1e-9;

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return ec == std::errc() ? std::string(buf.data(), ptr) : std::string("nan");
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path);
  file << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

MessageRule message_rule(const std::string& text) {
  try {
    return parse_message_rule(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  std::string kind = "boolean";
  std::size_t nodes = 8;
  std::size_t branching = 2;
  std::uint64_t seed = 0;
  double budget_fraction = 0.5;
  std::int64_t cost_min = 1;
  std::int64_t cost_max = 5;
  std::uint32_t max_obs = 1;
  double hypothesis_prob = 0.7;
  double measurable_prob = 0.6;
  std::optional<std::size_t> max_measurable;
  double zeta_max = 0.0;
  bool knapsack = false;
  std::vector<double> reward_range;
  std::string output;
};

void add_gen(CLI::App& app, GenArgs& a) {
  auto* cmd = app.add_subcommand("gen", "Generate a random instance");
  cmd->add_option("--kind", a.kind, "boolean or gaussian")->check(CLI::IsMember({"boolean", "gaussian"}));
  cmd->add_option("--nodes", a.nodes, "Number of nodes (>= 1)");
  cmd->add_option("--branching", a.branching, "Maximum children per node (>= 1)");
  cmd->add_option("--seed", a.seed, "Random seed");
  cmd->add_option("--budget-fraction", a.budget_fraction,
                  "Budget as a fraction of the total measurable cost");
  cmd->add_option("--cost-min", a.cost_min, "Smallest observation cost");
  cmd->add_option("--cost-max", a.cost_max, "Largest observation cost");
  cmd->add_option("--max-obs", a.max_obs, "Observations allowed per measurable node");
  cmd->add_option("--hypothesis-prob", a.hypothesis_prob, "Chance a node is a hypothesis");
  cmd->add_option("--measurable-prob", a.measurable_prob, "Chance an eligible node is measurable");
  cmd->add_option("--max-measurable", a.max_measurable, "Cap on the number of measurable nodes");
  cmd->add_option("--zeta-max", a.zeta_max, "False-positive cap (boolean)");
  cmd->add_flag("--knapsack", a.knapsack, "Independent nodes with heterogeneous costs");
  cmd->add_option("--reward-range", a.reward_range,
                  "Precision range a,b (gaussian; default derived from the instance)")
      ->delimiter(',')
      ->expected(2);
  cmd->add_option("-o,--output", a.output, "Output file (default stdout)");
}

int cmd_gen(const GenArgs& a, std::ostream& out, std::ostream& err) {
  GeneratorOptions opts;
  opts.kind = a.kind == "boolean" ? InstanceKind::boolean : InstanceKind::gaussian;
  opts.nodes = a.nodes;
  opts.branching = a.branching;
  opts.seed = a.seed;
  opts.budget_fraction = a.budget_fraction;
  opts.cost_min = a.cost_min;
  opts.cost_max = a.cost_max;
  opts.max_obs_per_node = a.max_obs;
  opts.hypothesis_probability = a.hypothesis_prob;
  opts.measurable_probability = a.measurable_prob;
  opts.max_measurable = a.max_measurable;
  opts.zeta_max = a.zeta_max;
  opts.knapsack = a.knapsack;
  if (!a.reward_range.empty()) opts.reward_range = {a.reward_range[0], a.reward_range[1]};

  std::optional<Instance> inst;
  try {
    inst.emplace(generate_instance(opts));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }

  if (inst->kind() == InstanceKind::gaussian) {
    if (a.reward_range.empty()) {
      if (inst->size() <= OracleLimits{}.gaussian_max_nodes) {
        // Keep every prior and reachable posterior precision well inside [a, b].
        const auto span = gaussian_precision_span(*inst);
        auto spec = inst->spec();
        spec.reward_range = {0.1 * span.min_precision, 2.0 * span.max_precision};
        inst.emplace(std::move(spec));
      } else {
        err << "warning: instance too large to derive a reward range; using the default\n";
      }
    }
    if (inst->size() <= OracleLimits{}.gaussian_max_nodes) {
      for (const auto& w : reward_range_warnings(*inst)) err << "warning: " << w << "\n";
    }
  }
  write_output(a.output, serialize_instance(*inst), out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// solve / compare

struct SolveArgs {
  std::string instance;
  std::string output;
  std::optional<double> epsilon;
  std::optional<double> eps_p, eps_f, eps_g, eps_r;
  bool exact_eval = false;
  unsigned threads = 1;
  std::string rule = "consistent";
  bool omit_timing = false;
};

void add_solver_flags(CLI::App* cmd, unsigned& threads, std::string& rule, bool& omit_timing) {
  cmd->add_option("--threads", threads, "Worker threads for compilation")->check(CLI::PositiveNumber);
  cmd->add_option("--message-rule", rule, "consistent (default) or alternate")
      ->check(CLI::IsMember({"consistent", "alternate"}));
  cmd->add_flag("--omit-timing", omit_timing, "Report solver time as 0 for reproducible output");
}

void add_solve(CLI::App& app, SolveArgs& a) {
  auto* cmd = app.add_subcommand("solve", "Compile the instance and select a plan");
  cmd->add_option("-i,--instance", a.instance, "Instance file")->required();
  cmd->add_option("-o,--output", a.output, "Solution file (default stdout)");
  cmd->add_option("--epsilon", a.epsilon, "Target accuracy; grid steps follow the default recipe");
  cmd->add_option("--eps-p", a.eps_p, "Explicit p grid step");
  cmd->add_option("--eps-f", a.eps_f, "Explicit f grid step");
  cmd->add_option("--eps-g", a.eps_g, "Explicit g grid step (boolean only)");
  cmd->add_option("--eps-r", a.eps_r, "Explicit r grid step");
  cmd->add_flag("--exact-eval", a.exact_eval, "Also score the chosen plan exactly");
  add_solver_flags(cmd, a.threads, a.rule, a.omit_timing);
}

void check_step(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw UsageError(std::string(name) + " must lie in (0, 1)");
}

Solution solve_with(const Instance& inst, const SolveArgs& a) {
  const bool explicit_steps = a.eps_p || a.eps_f || a.eps_g || a.eps_r;
  if (explicit_steps && a.epsilon) throw UsageError("--epsilon cannot be combined with --eps-*");
  if (inst.kind() == InstanceKind::gaussian && a.eps_g) {
    throw UsageError("--eps-g applies to boolean instances only");
  }
  CompileOptions opts;
  opts.threads = a.threads;
  opts.rule = message_rule(a.rule);

  if (!explicit_steps) {
    const double eps = a.epsilon.value_or(0.1);
    check_step(eps, "--epsilon");
    return inst.kind() == InstanceKind::boolean ? boss_solve(inst, eps, opts)
                                                : goss_solve(inst, eps, opts);
  }
  if (!a.eps_p || !a.eps_f || !a.eps_r ||
      (inst.kind() == InstanceKind::boolean && !a.eps_g)) {
    throw UsageError(inst.kind() == InstanceKind::boolean
                         ? "explicit grids need --eps-p, --eps-f, --eps-g and --eps-r"
                         : "explicit grids need --eps-p, --eps-f and --eps-r");
  }
  check_step(*a.eps_p, "--eps-p");
  check_step(*a.eps_f, "--eps-f");
  check_step(*a.eps_r, "--eps-r");
  if (inst.kind() == InstanceKind::boolean) {
    check_step(*a.eps_g, "--eps-g");
    return boss_solve(inst, BossGrids(*a.eps_p, *a.eps_f, *a.eps_g, *a.eps_r), opts);
  }
  return goss_solve(inst, GossGrids(*a.eps_p, *a.eps_f, *a.eps_r, inst.reward_range()), opts);
}

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const Instance inst = load_instance(a.instance);
  Solution s = solve_with(inst, a);
  if (a.exact_eval) s.exact_reward = eval_exact(inst, s.plan).exact_reward;
  write_output(a.output, solution_to_json(s, {.omit_timing = a.omit_timing}), out);
  return kExitOk;
}

struct CompareArgs {
  std::string instance;
  std::string output;
  std::vector<double> epsilons{0.2, 0.1, 0.05};
  unsigned threads = 1;
  std::string rule = "consistent";
  bool omit_timing = false;
};

void add_compare(CLI::App& app, CompareArgs& a) {
  auto* cmd = app.add_subcommand("compare", "Sweep epsilon and check the gap against the bound");
  cmd->add_option("-i,--instance", a.instance, "Instance file")->required();
  cmd->add_option("-o,--output", a.output, "CSV file (default stdout)");
  cmd->add_option("--epsilon-list", a.epsilons, "Comma-separated epsilons")->delimiter(',');
  add_solver_flags(cmd, a.threads, a.rule, a.omit_timing);
}

int cmd_compare(const CompareArgs& a, std::ostream& out, std::ostream& err) {
  const Instance inst = load_instance(a.instance);
  for (double eps : a.epsilons) check_step(eps, "--epsilon-list");
  const SubsetEval optimum = brute_force_optimum(inst);

  std::ostringstream csv;
  csv << "epsilon,predicted_reward,exact_reward,optimum,gap,bound,table_cells_root,solver_millis\n";
  bool violated = false;
  for (double eps : a.epsilons) {
    SolveArgs sa;
    sa.epsilon = eps;
    sa.threads = a.threads;
    sa.rule = a.rule;
    const Solution s = solve_with(inst, sa);
    const double exact = eval_exact(inst, s.plan).exact_reward;
    const double gap = optimum.exact_reward - exact;
    if (gap > s.delta_u_bound + kBoundSlack) {
      violated = true;
      err << "bound violated at epsilon " << format_double(eps) << ": gap "
          << format_double(gap) << " > " << format_double(s.delta_u_bound) << "\n";
    }
    csv << format_double(eps) << ',' << format_double(s.predicted_reward) << ','
        << format_double(exact) << ',' << format_double(optimum.exact_reward) << ','
        << format_double(gap) << ',' << format_double(s.delta_u_bound) << ','
        << s.root_table_cells << ',' << (a.omit_timing ? 0 : s.solver_millis) << '\n';
  }
  write_output(a.output, csv.str(), out);
  return violated ? kExitFailure : kExitOk;
}

// ---------------------------------------------------------------------------
// exact / eval

struct ExactArgs {
  std::string instance;
  std::string output;
};

void add_exact(CLI::App& app, ExactArgs& a) {
  auto* cmd = app.add_subcommand("exact", "Find the optimal plan by exhaustive search");
  cmd->add_option("-i,--instance", a.instance, "Instance file")->required();
  cmd->add_option("-o,--output", a.output, "Solution file (default stdout)");
}

int cmd_exact(const ExactArgs& a, std::ostream& out) {
  const Instance inst = load_instance(a.instance);
  const auto start = std::chrono::steady_clock::now();
  const SubsetEval best = brute_force_optimum(inst);
  Solution s;
  s.kind = inst.kind();
  s.plan = best.plan;
  s.time_used = best.time;
  s.predicted_reward = best.exact_reward;
  s.exact_reward = best.exact_reward;
  s.delta_u_bound = 0.0;
  s.solver_millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  write_output(a.output, solution_to_json(s), out);
  return kExitOk;
}

struct EvalArgs {
  std::string instance;
  std::optional<std::string> subset;
  std::optional<std::string> solution;
  std::string output;
};

void add_eval(CLI::App& app, EvalArgs& a) {
  auto* cmd = app.add_subcommand("eval", "Score a fixed plan exactly");
  cmd->add_option("-i,--instance", a.instance, "Instance file")->required();
  auto* subset = cmd->add_option("--subset", a.subset,
                                 "Comma-separated node ids; repeats mean repeated observations");
  auto* sol = cmd->add_option("--solution", a.solution, "Take the plan from a solution file");
  subset->excludes(sol);
  cmd->add_option("-o,--output", a.output, "Output file (default stdout)");
}

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const Instance inst = load_instance(a.instance);
  ObservationPlan plan;
  if (a.solution) {
    plan = solution_from_json(read_file(*a.solution)).plan;
  } else if (a.subset) {
    plan = parse_subset(*a.subset);
  } else {
    throw UsageError("eval needs --subset or --solution");
  }
  const std::int64_t time = inst.plan_time(plan);
  if (time > inst.budget()) {
    err << "error: budget exceeded (" << time << " > " << inst.budget() << ")\n";
    return kExitFailure;
  }
  write_output(a.output, subset_eval_to_json(eval_exact(inst, plan)), out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Budgeted observation subset selection on tree-shaped Bayesian networks", "oss"};
  app.require_subcommand(1);
  GenArgs gen;
  SolveArgs solve;
  ExactArgs exact;
  EvalArgs eval;
  CompareArgs compare;
  add_gen(app, gen);
  add_solve(app, solve);
  add_exact(app, exact);
  add_eval(app, eval);
  add_compare(app, compare);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "gen") return cmd_gen(gen, out, err);
    if (name == "solve") return cmd_solve(solve, out);
    if (name == "exact") return cmd_exact(exact, out);
    if (name == "eval") return cmd_eval(eval, out, err);
    if (name == "compare") return cmd_compare(compare, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace oss::cli
