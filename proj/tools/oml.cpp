#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "oml/equality.hpp"
#include "oml/error.hpp"
#include "oml/interp.hpp"
#include "oml/parser.hpp"

using namespace oml;

namespace {

struct RunCfg {
  std::vector<std::string> base = {"Int", "Bool"};
  int depth = 2;
  int int_size = 2;
  int entail_depth = 100;
  size_t fix_cap = 1000;
  size_t carrier_cap = 1'000'000;
  bool structured = false;
  bool trace = false;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw OmlError("input", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

EvalCfg eval_cfg(const RunCfg& rc) {
  EvalCfg c{make_universe(rc.base, rc.depth), DomainCfg{rc.int_size, rc.carrier_cap},
            rc.entail_depth, rc.fix_cap, true, false};
  return c;
}

int fail(const RunCfg& rc, const OmlError& e) {
  if (rc.structured) {
    std::cout << "status=error\n"
              << "kind=" << e.kind << "\n";
    if (e.line) std::cout << "line=" << e.line << "\ncol=" << e.col << "\n";
    std::cout << "error=" << e.what() << "\n";
  } else {
    std::cout << "error: [" << e.kind << "] " << e.what();
    if (e.line) std::cout << " (line " << e.line << ", col " << e.col << ")";
    std::cout << "\n";
  }
  return 1;
}

int cmd_check(const RunCfg& rc, const std::string& file) {
  Program p = parse_program(slurp(file));
  TypedProgram tp = check_program(p, {}, rc.entail_depth);
  if (rc.structured) {
    std::cout << "status=accepted\n";
    for (auto& [name, cd] : tp.cx.classes) std::cout << "class." << name << "=ok\n";
    for (auto& d : tp.cx.instance_order) std::cout << "instance." << d << "=ok\n";
    for (auto& b : tp.prog.binds) std::cout << "bind." << b.name << "=" << show_scheme(b.scheme) << "\n";
  } else {
    for (auto& [name, cd] : tp.cx.classes) std::cout << "class " << name << ": ok\n";
    for (auto& d : tp.cx.instance_order) std::cout << "instance " << d << ": ok\n";
    for (auto& b : tp.prog.binds) std::cout << b.name << " : " << show_scheme(b.scheme) << "\n";
    std::cout << "accepted\n";
  }
  return 0;
}

int cmd_entail(const RunCfg& rc, const std::string& file, const std::string& goal,
               const std::vector<std::string>& assumes) {
  Program p = parse_program(slurp(file));
  ClassContext cx = build_context(p);
  Pred g = parse_pred(goal);
  PredList as;
  for (auto& a : assumes)
    for (auto& q : parse_preds(a)) as.push_back(q);
  EntailResult r = entail(cx.axioms, as, g, rc.entail_depth);
  if (!r.ok) {
    std::string why = r.why == EntailFail::NoAxiom         ? "no matching instance"
                      : r.why == EntailFail::MultipleAxioms ? "multiple matching instances"
                                                            : "depth budget exhausted";
    if (rc.structured)
      std::cout << "status=underivable\nreason=" << why << "\ndetail=" << r.detail << "\n";
    else
      std::cout << "underivable: " << why << (r.detail.empty() ? "" : ": " + r.detail) << "\n";
    return 1;
  }
  if (rc.structured)
    std::cout << "status=derivable\nwitness=" << show_witness(r.w) << "\n";
  else
    std::cout << show_witness(r.w) << "\n";
  return 0;
}

int cmd_gr(const RunCfg& rc, const std::string& file, const std::string& scheme) {
  Program p = parse_program(slurp(file));
  ClassContext cx = build_context(p);
  Scheme s = parse_scheme(scheme);
  Universe u = make_universe(rc.base, rc.depth);
  std::vector<TypePtr> keys = ground_instances(cx.axioms, {}, s, u, rc.entail_depth);
  if (rc.structured) {
    std::cout << "count=" << keys.size() << "\n";
    for (size_t i = 0; i < keys.size(); i++) std::cout << "instance." << i << "=" << show_type(keys[i]) << "\n";
  } else {
    for (auto& k : keys) std::cout << show_type(k) << "\n";
  }
  return 0;
}

int cmd_eval(const RunCfg& rc, const std::string& file, const std::string& at) {
  Program p = parse_program(slurp(file));
  TypedProgram tp = check_program(p, {}, rc.entail_depth);
  if (!tp.prog.find_bind("main")) throw OmlError("input", "program has no binding 'main'");
  Evaluator ev(tp, eval_cfg(rc));
  if (!at.empty()) {
    TypePtr t = parse_type(at);
    if (!ftv(t).empty()) throw OmlError("input", "evaluation type must be ground: " + show_type(t));
    ValuePtr v = ev.eval_bind_at("main", t);
    if (rc.structured)
      std::cout << "type=" << show_type(t) << "\nvalue=" << show_value(ev.cfg.dom, t, v) << "\n";
    else
      std::cout << show_value(ev.cfg.dom, t, v) << "\n";
    return 0;
  }
  ev.eval_all();
  const SchemeValue& sv = ev.store.at("b:main");
  if (rc.structured) {
    std::cout << "count=" << sv.size() << "\n";
    size_t i = 0;
    for (auto& [k, v] : sv) {
      std::cout << "instance." << i << ".type=" << show_type(k) << "\n"
                << "instance." << i << ".value=" << show_value(ev.cfg.dom, k, v) << "\n";
      i++;
    }
  } else {
    for (auto& [k, v] : sv)
      std::cout << show_type(k) << " = " << show_value(ev.cfg.dom, k, v) << "\n";
  }
  return 0;
}

void print_trace(const RunCfg& rc, const std::string& side, const NormResult& nr) {
  if (rc.structured) {
    for (size_t i = 0; i < nr.steps.size(); i++)
      std::cout << "trace." << side << "." << i << "=" << show_rw(nr.steps[i].rule) << "@"
                << show_path(nr.steps[i].path) << " " << show_expr(nr.steps[i].after) << "\n";
    std::cout << "normal." << side << "=" << show_expr(nr.expr)
              << (nr.complete ? "" : " (fuel exhausted)") << "\n";
  } else {
    std::cout << side << ": " << show_expr(nr.steps.empty() ? nr.expr : nr.steps.front().before)
              << "\n";
    for (auto& st : nr.steps)
      std::cout << "  " << show_rw(st.rule) << "@" << show_path(st.path) << "  ~>  "
                << show_expr(st.after) << "\n";
    if (!nr.complete) std::cout << "  (fuel exhausted)\n";
  }
}

int cmd_equiv(const RunCfg& rc, const std::string& file, const std::string& lhs,
              const std::string& rhs, const std::string& scheme) {
  Program p = parse_program(slurp(file));
  TypedProgram tp = check_program(p, {}, rc.entail_depth);
  ExprPtr a = parse_expr(lhs), b = parse_expr(rhs);
  Scheme s = parse_scheme(scheme);
  if (rc.trace) {
    print_trace(rc, "lhs", normalize(tp, a, s, rc.fix_cap, rc.entail_depth));
    print_trace(rc, "rhs", normalize(tp, b, s, rc.fix_cap, rc.entail_depth));
  }
  EquivResult r = oracle_equiv(tp, a, b, s, eval_cfg(rc));
  if (r.ok) {
    if (rc.structured)
      std::cout << "status=equal\ninstances=" << r.keys.size() << "\n";
    else
      std::cout << "equal (" << r.keys.size() << " instances)\n";
    return 0;
  }
  DomainCfg dc{rc.int_size, rc.carrier_cap};
  if (rc.structured)
    std::cout << "status=unequal\nwitness.type=" << show_type(r.key) << "\nwitness.lhs=" << r.lhs
              << "\nwitness.rhs=" << r.rhs << "\n";
  else
    std::cout << "unequal at " << show_type(r.key) << "\n  lhs = " << r.lhs << "\n  rhs = " << r.rhs
              << "\n";
  return 1;
}

int cmd_improve(const RunCfg& rc, const std::string& file, const std::string& preds) {
  Program p = parse_program(slurp(file));
  ClassContext cx = build_context(p);
  PredList ps = parse_preds(preds);
  std::vector<std::string> steps;
  PredList cur = ps;
  while (true) {
    ImprStepResult r = improve_step(cx, cur);
    if (!r.applicable) break;
    if (!r.ok) throw OmlError("improve", r.detail);
    for (auto& [v, t] : r.s.m) steps.push_back(v + ":=" + show_type(t));
    cur = r.s(cur);
    PredList dedup;
    for (auto& q : cur) {
      bool seen = false;
      for (auto& d : dedup) seen = seen || pred_eq(q, d);
      if (!seen) dedup.push_back(q);
    }
    cur = std::move(dedup);
  }
  if (rc.structured) {
    std::cout << "status=ok\n";
    for (size_t i = 0; i < steps.size(); i++) std::cout << "step." << i << "=" << steps[i] << "\n";
    std::cout << "result=" << show_preds(cur) << "\n";
  } else {
    if (steps.empty())
      std::cout << "identity\n";
    else
      for (auto& s : steps) {
        std::string v = s.substr(0, s.find(":="));
        std::cout << v << " ↦ " << s.substr(s.find(":=") + 2) << "\n";
      }
    std::cout << "result: " << show_preds(cur) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qualified-type language: checking, entailment, and finite-domain evaluation"};
  app.require_subcommand(1);
  app.fallthrough();

  RunCfg rc;
  app.add_option("--base", rc.base, "base type constructors")->delimiter(',');
  app.add_option("--depth", rc.depth, "universe arrow-nesting depth")->check(CLI::Range(0, 6));
  app.add_option("--int-size", rc.int_size, "Int carrier size")->check(CLI::Range(1, 16));
  app.add_option("--entail-depth", rc.entail_depth, "entailment depth budget")
      ->check(CLI::Range(1, 1000000));
  app.add_option("--fix-cap", rc.fix_cap, "fixpoint sweep budget")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 32));
  app.add_option("--carrier-cap", rc.carrier_cap, "largest enumerable carrier")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 62));
  app.add_flag("--structured", rc.structured, "machine-readable key=value output");
  app.add_flag("--trace", rc.trace, "print rewrite traces where applicable");

  std::string file, goal, scheme, at, lhs, rhs, preds;
  std::vector<std::string> assumes;

  CLI::App* c_check = app.add_subcommand("check", "typecheck a program");
  c_check->add_option("file", file)->required();

  CLI::App* c_entail = app.add_subcommand("entail", "derive a predicate from the program's instances");
  c_entail->add_option("file", file)->required();
  c_entail->add_option("--goal", goal, "predicate to derive")->required();
  c_entail->add_option("--assume", assumes, "assumed predicates");

  CLI::App* c_gr = app.add_subcommand("gr", "ground instances of a scheme");
  c_gr->add_option("file", file)->required();
  c_gr->add_option("--scheme", scheme, "scheme to instantiate")->required();

  CLI::App* c_eval = app.add_subcommand("eval", "evaluate the 'main' binding");
  c_eval->add_option("file", file)->required();
  c_eval->add_option("--at", at, "ground instance type");

  CLI::App* c_equiv = app.add_subcommand("equiv", "compare two terms at a scheme");
  c_equiv->add_option("file", file)->required();
  c_equiv->add_option("--lhs", lhs)->required();
  c_equiv->add_option("--rhs", rhs)->required();
  c_equiv->add_option("--scheme", scheme)->required();

  CLI::App* c_improve = app.add_subcommand("improve", "apply dependency improvement to predicates");
  c_improve->add_option("file", file)->required();
  c_improve->add_option("--preds", preds, "predicate set")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_check->parsed()) return cmd_check(rc, file);
    if (c_entail->parsed()) return cmd_entail(rc, file, goal, assumes);
    if (c_gr->parsed()) return cmd_gr(rc, file, scheme);
    if (c_eval->parsed()) return cmd_eval(rc, file, at);
    if (c_equiv->parsed()) return cmd_equiv(rc, file, lhs, rhs, scheme);
    if (c_improve->parsed()) return cmd_improve(rc, file, preds);
  } catch (const OmlError& e) {
    return fail(rc, e);
  } catch (const std::exception& e) {
    std::cout << "error: [internal] " << e.what() << "\n";
    return 1;
  }
  return 2;
}
