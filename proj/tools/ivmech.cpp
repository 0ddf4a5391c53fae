#include "ivmech/binary.hpp"
#include "ivmech/error.hpp"
#include "ivmech/gen.hpp"
#include "ivmech/io.hpp"
#include "ivmech/payments.hpp"
#include "ivmech/solve.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

using namespace ivmech;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitSize = 3;
constexpr int kExitCrossCheck = 4;
constexpr int kExitNotTruthful = 5;

struct ExitWith {
  int code;
};

struct Output {
  std::string path;
  void emit(const Json& doc) const {
    std::string text = doc.dump(2) + "\n";
    if (path.empty()) {
      std::cout << text;
    } else {
      write_file(path, text);
    }
  }
};

Target parse_target(const std::string& s) {
  if (s == "value") return Target::Value;
  if (s == "cost") return Target::Cost;
  if (s == "det") return Target::Det;
  throw Error(ErrorCode::ParseError, "objective must be value, cost or det");
}

Mode parse_mode(const std::string& s) {
  if (s == "good") return Mode::Good;
  if (s == "chore") return Mode::Chore;
  throw Error(ErrorCode::ParseError, "mode must be good or chore");
}

std::vector<bool> parse_assignment(const std::string& text) {
  std::vector<bool> out;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok == "1" || tok == "T" || tok == "t" || tok == "true") {
      out.push_back(true);
    } else if (tok == "0" || tok == "F" || tok == "f" || tok == "false") {
      out.push_back(false);
    } else {
      throw Error(ErrorCode::ParseError, "assignment entries are 1/0 or T/F, got " + tok);
    }
  }
  return out;
}

Json violation_json(const ProfileSpace& sp, const MonotonicityViolation& v) {
  return Json{{"agent", v.agent + 1}, {"lower", sp.format(v.lower)}, {"higher", sp.format(v.higher)}};
}

struct Loaded {
  Instance inst;
  Ratios rho;
  LineOrdering ord;
};

Loaded load(const std::string& path) {
  auto file = parse_instance(read_file(path));
  Loaded l{file.instance, ratios_from_values(file.instance), orderings_from_instance(file.instance)};
  return l;
}

// ---------------------------------------------------------------------------

struct SolveArgs {
  std::string file, objective = "value", fast_path = "auto";
  std::optional<std::string> gamma;
  std::size_t budget = 1'000'000;
  bool decimal = false, timing = false;
  Output out;
};

int cmd_solve(const SolveArgs& a) {
  auto l = load(a.file);
  Target target = parse_target(a.objective);
  if (a.gamma) {
    if (target != Target::Det) throw Error(ErrorCode::ParseError, "--gamma applies to --objective det");
    Rational gamma = parse_rational(*a.gamma);
    Json doc{{"target", "det"}, {"gamma", to_string(gamma)}};
    std::optional<AllocationRule> rule;
    if (l.rho.k() == 2) {
      auto g = build_match_graph(l.rho, l.ord, gamma);
      auto m = hopcroft_karp(g);
      if (m.size == g.must_match.size()) rule = rule_from_matching(l.rho, l.ord, g, m);
      doc["path"] = "binary";
    } else {
      if (l.rho.space().size() > kDetProfileGuard) throw Error(ErrorCode::TooLarge, "det search guard");
      auto r = propagate_feasible(l.rho, l.ord, gamma, a.budget);
      if (r.status == PropagationStatus::Timeout) throw Error(ErrorCode::TooLarge, "propagation budget exhausted");
      rule = r.rule;
      doc["path"] = "propagation";
    }
    doc["feasible"] = rule.has_value();
    if (rule) {
      if (!is_truthful(*rule, l.ord).truthful || eval_ratio(l.rho, *rule, Objective::Value) > gamma) {
        std::cerr << "cross-check failed: witness does not meet gamma\n";
        throw ExitWith{kExitCrossCheck};
      }
      doc["allocation"] = allocation_to_json(*rule, a.decimal);
    }
    a.out.emit(doc);
    return 0;
  }
  auto report = solve(l.rho, l.ord, target, parse_fast_path(a.fast_path), a.budget);
  auto v = verify_report(l.rho, l.ord, report);
  a.out.emit(report_to_json(report, a.decimal, a.timing));
  if (!v.ok) {
    std::cerr << "cross-check failed (" << mismatch_name(v.reason) << "): " << v.detail << "\n";
    return kExitCrossCheck;
  }
  return 0;
}

struct PairArgs {
  std::string instance, allocation;
  bool decimal = false;
  Output out;
};

int cmd_verify(const PairArgs& a) {
  auto l = load(a.instance);
  auto x = parse_allocation(read_file(a.allocation));
  if (!(x.space() == l.inst.space())) throw Error(ErrorCode::InvalidInstance, "allocation shape differs from instance");
  auto t = is_truthful(x, l.ord);
  Json doc{{"truthful", t.truthful},
           {"value_ratio", to_string(eval_ratio(l.rho, x, Objective::Value))},
           {"cost_ratio", to_string(eval_ratio(l.rho, x, Objective::Cost))},
           {"deterministic", x.is_deterministic()}};
  if (t.violation) doc["violation"] = violation_json(x.space(), *t.violation);
  a.out.emit(doc);
  return t.truthful ? 0 : kExitNotTruthful;
}

int cmd_payments(const PairArgs& a) {
  auto l = load(a.instance);
  auto x = parse_allocation(read_file(a.allocation));
  if (!(x.space() == l.inst.space())) throw Error(ErrorCode::InvalidInstance, "allocation shape differs from instance");
  auto t = is_truthful(x, l.ord);
  if (!t.truthful) {
    std::cerr << "allocation is not truthful: " << violation_json(x.space(), *t.violation).dump() << "\n";
    return kExitNotTruthful;
  }
  auto p = synthesize_payments(l.inst, x);
  auto check = verify_ic_ir(l.inst, x, p);
  Json ic{{"ok", check.ok}, {"checked", check.checked}};
  if (check.violation) {
    const auto& v = *check.violation;
    ic["violation"] = {{"agent", v.agent + 1},
                       {"profile", x.space().format(v.profile)},
                       {"bid", v.bid},
                       {"individual_rationality", v.individual_rationality}};
  }
  a.out.emit(Json{{"payments", payments_to_json(p, a.decimal)}, {"ic_ir", ic}});
  return check.ok ? 0 : kExitCrossCheck;
}

struct CrossArgs {
  std::string file;
  std::size_t budget = 1'000'000;
  Output out;
};

int cmd_crosscheck(const CrossArgs& a) {
  auto l = load(a.file);
  auto cc = cross_check(l.rho, l.ord, a.budget);
  Json rows = Json::array();
  for (const auto& r : cc.rows) {
    Json row{{"target", target_name(r.target)}, {"method", r.method}, {"ratio", to_string(r.ratio)}, {"verified", r.verified}};
    if (!r.note.empty()) row["note"] = r.note;
    rows.push_back(row);
  }
  a.out.emit(Json{{"agree", cc.agree}, {"rows", rows}, {"skipped", cc.skipped}});
  return cc.agree ? 0 : kExitCrossCheck;
}

struct GenArgs {
  std::string kind;
  int n = 2, k = 3;
  std::string mode = "good";
  std::uint64_t seed = 1;
  double tie_prob = 0.2;
  std::string formula, assignment, witness;
  std::string beta = "2";
  std::optional<std::string> epsilon;
  bool sos = false;
  std::string plant = "none";
  std::size_t index = 0;
  int trials = 5000;
  Output out;
};

int cmd_gen(const GenArgs& a) {
  if (a.kind == "fig5") {
    a.out.emit(instance_to_json(gen_fig5_pair()));
  } else if (a.kind == "random") {
    a.out.emit(instance_to_json(gen_random(a.n, a.k, parse_mode(a.mode), a.seed, a.tie_prob)));
  } else if (a.kind == "fracvertex") {
    a.out.emit(allocation_to_json(find_fractional_vertex(a.trials, a.seed, a.n, a.k)));
  } else if (a.kind == "query") {
    PlantKind kind = a.plant == "l1" ? PlantKind::L1 : a.plant == "l2" ? PlantKind::L2 : PlantKind::None;
    if (a.plant != "none" && a.plant != "l1" && a.plant != "l2") throw Error(ErrorCode::ParseError, "plant is none|l1|l2");
    Rational eps = a.epsilon ? parse_rational(*a.epsilon) : Rational(1, 2);
    auto q = gen_query_adversary(a.n, a.k, kind, a.index, eps);
    Json doc = ratios_to_json(q.rho);
    Json focal = Json::array();
    for (int s : q.focal) focal.push_back(s);
    doc["meta"] = {{"focal", focal}, {"l1_size", q.l1.size()}, {"l2_size", q.l2.size()}};
    a.out.emit(doc);
  } else if (a.kind == "hardness") {
    if (a.formula.empty()) throw Error(ErrorCode::ParseError, "hardness needs --formula");
    auto phi = parse_formula(read_file(a.formula));
    Rational beta = parse_rational(a.beta);
    Rational eps = a.epsilon ? parse_rational(*a.epsilon) : default_hardness_epsilon(beta);
    if (a.sos) {
      eps = sos_hardness_epsilon(4, hardness_signals(phi));
      beta = (1 / eps + 1) / 2;
    }
    auto h = gen_hardness(phi, eps, beta);
    Json doc = a.sos ? instance_to_json(sos_values_from_ratios(h.rho, Mode::Good)) : ratios_to_json(h.rho);
    doc["meta"] = {{"k", h.k}, {"epsilon", to_string(eps)}, {"beta", to_string(beta)}, {"mapping", h.mapping()}};
    a.out.emit(doc);
    if (!a.assignment.empty()) {
      if (a.witness.empty()) throw Error(ErrorCode::ParseError, "--assignment needs --witness FILE");
      write_file(a.witness, allocation_to_json(h.witness(parse_assignment(a.assignment))).dump(2) + "\n");
    }
  } else {
    throw Error(ErrorCode::ParseError, "unknown generator " + a.kind);
  }
  return 0;
}

int exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::MalformedFormula:
      return kExitParse;
    case ErrorCode::TooLarge:
      return kExitSize;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal truthful mechanisms for interdependent values, in exact arithmetic"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* s = app.add_subcommand("solve", "Optimal ratio, witness rule and certificate");
  s->add_option("instance", solve_args.file, "instance JSON")->required();
  s->add_option("--objective", solve_args.objective, "value|cost|det");
  s->add_option("--gamma", solve_args.gamma, "det decision at this ratio");
  s->add_option("--fast-path", solve_args.fast_path, "auto|lp|duo|binary|oracle");
  s->add_option("--budget", solve_args.budget, "propagation decision budget");
  s->add_flag("--decimal", solve_args.decimal, "add display-only decimals");
  s->add_flag("--timing", solve_args.timing, "include wall time");
  s->add_option("--out", solve_args.out.path, "write JSON here instead of stdout");

  PairArgs verify_args;
  auto* v = app.add_subcommand("verify", "Truthfulness and ratios of a given allocation");
  v->add_option("instance", verify_args.instance)->required();
  v->add_option("allocation", verify_args.allocation)->required();
  v->add_option("--out", verify_args.out.path);

  PairArgs pay_args;
  auto* p = app.add_subcommand("payments", "Payments for a truthful allocation, with IC/IR check");
  p->add_option("instance", pay_args.instance)->required();
  p->add_option("allocation", pay_args.allocation)->required();
  p->add_flag("--decimal", pay_args.decimal);
  p->add_option("--out", pay_args.out.path);

  CrossArgs cross_args;
  auto* c = app.add_subcommand("crosscheck", "Run every applicable path and compare");
  c->add_option("instance", cross_args.file)->required();
  c->add_option("--budget", cross_args.budget);
  c->add_option("--out", cross_args.out.path);

  GenArgs gen_args;
  auto* g = app.add_subcommand("gen", "Instance generators");
  g->add_option("kind", gen_args.kind, "fig5|hardness|query|random|fracvertex")->required();
  g->add_option("--n", gen_args.n);
  g->add_option("--k", gen_args.k);
  g->add_option("--mode", gen_args.mode, "good|chore");
  g->add_option("--seed", gen_args.seed);
  g->add_option("--tie-prob", gen_args.tie_prob);
  g->add_option("--formula", gen_args.formula, "1-in-3 formula file");
  g->add_option("--beta", gen_args.beta);
  g->add_option("--epsilon", gen_args.epsilon);
  g->add_flag("--sos", gen_args.sos, "emit SOS values with epsilon near 1");
  g->add_option("--assignment", gen_args.assignment, "e.g. 1,0,0");
  g->add_option("--witness", gen_args.witness, "witness allocation output file");
  g->add_option("--plant", gen_args.plant, "none|l1|l2");
  g->add_option("--index", gen_args.index);
  g->add_option("--trials", gen_args.trials);
  g->add_option("--out", gen_args.out.path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (*s) return cmd_solve(solve_args);
    if (*v) return cmd_verify(verify_args);
    if (*p) return cmd_payments(pay_args);
    if (*c) return cmd_crosscheck(cross_args);
    if (*g) return cmd_gen(gen_args);
  } catch (const ExitWith& e) {
    return e.code;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e);
  }
  return 1;
}
