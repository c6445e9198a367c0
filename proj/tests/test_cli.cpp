#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oml/parser.hpp"
#include "oml/syntax.hpp"
#include "testutil.hpp"

using testutil::corpus_path;

using testutil::RunResult;

namespace {

RunResult run(const std::vector<std::string>& args) { return testutil::oml(args); }

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }
bool ends_with(const std::string& s, const std::string& p) {
  return s.size() >= p.size() && s.compare(s.size() - p.size(), p.size(), p) == 0;
}

}  // namespace

TEST_CASE("check reports classes, instances, and binding schemes") {
  RunResult r = run({"check", corpus_path("id2.oml")});
  CHECK(r.status == 0);
  CHECK(r.out ==
        "class Id2: ok\n"
        "instance dInt: ok\n"
        "instance dArr: ok\n"
        "id1 : forall t. t -> t\n"
        "main : forall t. Id2 t => t -> t\n"
        "accepted\n");

  RunResult s = run({"--structured", "check", corpus_path("id2.oml")});
  CHECK(s.status == 0);
  CHECK(s.out ==
        "status=accepted\n"
        "class.Id2=ok\n"
        "instance.dInt=ok\n"
        "instance.dArr=ok\n"
        "bind.id1=forall t. t -> t\n"
        "bind.main=forall t. Id2 t => t -> t\n");
}

TEST_CASE("check accepts every well-formed corpus program") {
  for (const char* f : {"id2.oml", "eq.oml", "elems.oml", "mu.oml", "simple.oml", "mix.oml",
                        "letpoly.oml"}) {
    CAPTURE(f);
    RunResult r = run({"check", corpus_path(f)});
    CHECK(r.status == 0);
    CHECK(ends_with(r.out, "accepted\n"));
  }
}

TEST_CASE("check rejects ill-formed programs with the offending rule") {
  RunResult overlap = run({"check", corpus_path("univ.oml")});
  CHECK(overlap.status == 1);
  CHECK(overlap.out == "error: [overlap] instances dBool and dAll overlap: Univ Bool / Univ t\n");

  RunResult ambig = run({"check", corpus_path("ambig.oml")});
  CHECK(ambig.status == 1);
  CHECK(ambig.out ==
        "error: [ambiguous] ambiguous type variable(s) {t} in forall t. (Read t, Show t) => Int -> "
        "Int\n");

  RunResult fdover = run({"check", corpus_path("elems-overlap.oml")});
  CHECK(fdover.status == 1);
  CHECK(fdover.out ==
        "error: [overlap] instances d1 and d2 agree on the sources of fundep Elems {0} ~> {1}: "
        "Elems Int Int / Elems Int Bool\n");

  RunResult uncov = run({"check", corpus_path("elems-uncovered.oml")});
  CHECK(uncov.status == 1);
  CHECK(uncov.out ==
        "error: [covering] instance dBad leaves 'u' undetermined by fundep Elems {0} ~> {1}\n");

  RunResult s = run({"--structured", "check", corpus_path("univ.oml")});
  CHECK(s.status == 1);
  CHECK(s.out ==
        "status=error\n"
        "kind=overlap\n"
        "error=instances dBool and dAll overlap: Univ Bool / Univ t\n");
}

TEST_CASE("entail prints instance witnesses and failure reasons") {
  RunResult w = run({"entail", corpus_path("id2.oml"), "--goal", "Id2 (Int -> Int)"});
  CHECK(w.status == 0);
  CHECK(w.out == testutil::gold("witness.Id2.IntInt") + "\n");

  RunResult dash = run({"entail", corpus_path("id2.oml"), "--assume", "Id2 t", "--goal", "Id2 t"});
  CHECK(dash.status == 0);
  CHECK(dash.out == "-\n");

  RunResult mixed =
      run({"entail", corpus_path("id2.oml"), "--assume", "Id2 t", "--goal", "Id2 (t -> Int)"});
  CHECK(mixed.status == 0);
  CHECK(mixed.out == "dArr(-, dInt)\n");

  RunResult no = run({"entail", corpus_path("id2.oml"), "--goal", "Id2 Bool"});
  CHECK(no.status == 1);
  CHECK(no.out == "underivable: no matching instance: no instance matches Id2 Bool\n");

  RunResult deep =
      run({"--entail-depth", "1", "entail", corpus_path("id2.oml"), "--goal", "Id2 (Int -> Int)"});
  CHECK(deep.status == 1);
  CHECK(deep.out ==
        "underivable: depth budget exhausted: depth budget exhausted at Id2 Int (needed by dArr "
        "for Id2 (Int -> Int))\n");

  RunResult s = run({"--structured", "entail", corpus_path("id2.oml"), "--goal",
                     "Id2 ((Int -> Int) -> Int -> Int)"});
  CHECK(s.status == 0);
  CHECK(s.out ==
        "status=derivable\n"
        "witness=dArr(dArr(dInt, dInt), dArr(dInt, dInt))\n");

  RunResult su = run({"--structured", "entail", corpus_path("id2.oml"), "--goal", "Id2 Bool"});
  CHECK(su.status == 1);
  CHECK(su.out ==
        "status=underivable\n"
        "reason=no matching instance\n"
        "detail=no instance matches Id2 Bool\n");
}

TEST_CASE("gr lists the ground instances of a scheme over the universe") {
  RunResult r = run({"--base", "Int", "--depth", "1", "gr", corpus_path("id2.oml"), "--scheme",
                     "forall t. Id2 t => t -> t"});
  CHECK(r.status == 0);
  CHECK(r.out == "Int -> Int\n(Int -> Int) -> Int -> Int\n");

  RunResult s = run({"--structured", "--base", "Int", "--depth", "1", "gr", corpus_path("id2.oml"),
                     "--scheme", "forall t. Id2 t => t -> t"});
  CHECK(s.status == 0);
  CHECK(s.out ==
        "count=2\n"
        "instance.0=Int -> Int\n"
        "instance.1=(Int -> Int) -> Int -> Int\n");

  // without the class constraint, every universe member is an instance
  RunResult all = run({"--base", "Int", "--depth", "2", "gr", corpus_path("id2.oml"), "--scheme",
                       "forall t. t -> t"});
  CHECK(all.status == 0);
  std::string expect;
  for (const std::string& m : testutil::split(testutil::gold("universe.Int.2.members"), "; ")) {
    oml::TypePtr t = oml::parse_type(m);
    expect += oml::show_type(oml::tarr(t, t)) + "\n";
  }
  CHECK(all.out == expect);
}

TEST_CASE("eval computes main at a requested ground instance") {
  CHECK(run({"eval", corpus_path("mu.oml"), "--at", "Int"}).out == "⊥\n");
  CHECK(run({"--base", "Int", "--depth", "1", "eval", corpus_path("simple.oml"), "--at", "Int"})
            .out == "0\n");
  CHECK(run({"eval", corpus_path("mix.oml"), "--at", "Int"}).out == "1\n");
  CHECK(run({"eval", corpus_path("eq.oml"), "--at", "Bool"}).out == "true\n");
  CHECK(run({"eval", corpus_path("letpoly.oml"), "--at", "Int"}).out == "1\n");

  RunResult table = run({"eval", corpus_path("id2.oml"), "--at", "Int -> Int"});
  CHECK(table.status == 0);
  CHECK(table.out == testutil::gold("print.id.IntInt.n2") + "\n");

  RunResult s = run({"--structured", "eval", corpus_path("id2.oml"), "--at", "Int -> Int"});
  CHECK(s.status == 0);
  CHECK(s.out == "type=Int -> Int\nvalue=" + testutil::gold("print.id.IntInt.n2") + "\n");
}

TEST_CASE("eval without a target lists every instance of main") {
  RunResult r = run({"--base", "Int", "--depth", "1", "eval", corpus_path("id2.oml")});
  CHECK(r.status == 0);
  auto lines = testutil::split(r.out, "\n");
  REQUIRE(lines.size() >= 2);
  CHECK(lines[0] == "Int -> Int = " + testutil::gold("print.id.IntInt.n2"));
  CHECK(starts_with(lines[1], "(Int -> Int) -> Int -> Int = {"));
  CHECK(ends_with(lines[1], "⊥↦⊥}"));

  RunResult s = run({"--structured", "--base", "Int", "--depth", "1", "eval", corpus_path("id2.oml")});
  CHECK(s.status == 0);
  auto slines = testutil::split(s.out, "\n");
  REQUIRE(slines.size() >= 3);
  CHECK(slines[0] == "count=2");
  CHECK(slines[1] == "instance.0.type=Int -> Int");
  CHECK(slines[2] == "instance.0.value=" + testutil::gold("print.id.IntInt.n2"));
}

TEST_CASE("eval reports precise refusals") {
  RunResult off = run({"eval", corpus_path("id2.oml"), "--at", "Int"});
  CHECK(off.status == 1);
  CHECK(off.out == "error: [eval] 'main' has no instance at Int\n");

  RunResult soff = run({"--structured", "eval", corpus_path("id2.oml"), "--at", "Int"});
  CHECK(soff.status == 1);
  CHECK(soff.out == "status=error\nkind=eval\nerror='main' has no instance at Int\n");

  RunResult bad = run({"eval", corpus_path("id2.oml"), "--at", "Int ->"});
  CHECK(bad.status == 1);
  CHECK(bad.out == "error: [parse] expected a type (line 1, col 7)\n");

  RunResult open = run({"eval", corpus_path("id2.oml"), "--at", "t -> t"});
  CHECK(open.status == 1);
  CHECK(open.out == "error: [input] evaluation type must be ground: t -> t\n");

  // seeding every instance at the default universe hits the carrier cap
  RunResult cap = run({"eval", corpus_path("id2.oml")});
  CHECK(cap.status == 1);
  CHECK(starts_with(cap.out, "error: [carrier] carrier of "));
  CHECK(ends_with(cap.out, "exceeds cap of 1000000\n"));
}

TEST_CASE("equiv compares terms instance by instance") {
  RunResult eq = run({"--base", "Int", "--depth", "1", "equiv", corpus_path("id2.oml"), "--lhs",
                      "id1", "--rhs", "main", "--scheme", "forall t. Id2 t => t -> t"});
  CHECK(eq.status == 0);
  CHECK(eq.out == "equal (2 instances)\n");

  RunResult s = run({"--structured", "--base", "Int", "--depth", "1", "equiv",
                     corpus_path("id2.oml"), "--lhs", "id1", "--rhs", "main", "--scheme",
                     "forall t. Id2 t => t -> t"});
  CHECK(s.status == 0);
  CHECK(s.out == "status=equal\ninstances=2\n");

  RunResult ne = run({"--base", "Int", "--depth", "1", "equiv", corpus_path("id2.oml"), "--lhs",
                      "\\x. x", "--rhs", "\\x. succ x", "--scheme", "Int -> Int"});
  CHECK(ne.status == 1);
  CHECK(ne.out ==
        "unequal at Int -> Int\n"
        "  lhs = " + testutil::gold("print.id.IntInt.n2") + "\n" +
        "  rhs = " + testutil::gold("print.succ.n2") + "\n");

  RunResult amb = run({"equiv", corpus_path("id2.oml"), "--lhs", "0", "--rhs", "1", "--scheme",
                       "forall t. Id2 t => Int"});
  CHECK(amb.status == 1);
  CHECK(amb.out ==
        "error: [ambiguous] cannot compare at this scheme: variable 't' is not determined by the "
        "instance type\n");
}

TEST_CASE("equiv traces the rewrite normalization of both sides") {
  RunResult tr = run({"--trace", "--base", "Int", "--depth", "1", "equiv", corpus_path("id2.oml"),
                      "--lhs", "id2", "--rhs", "\\x. x", "--scheme", "Int -> Int"});
  CHECK(tr.status == 0);
  CHECK(tr.out ==
        "lhs: id2\n"
        "  method@root  ~>  \\x. x\n"
        "rhs: \\x. x\n"
        "equal (1 instances)\n");
}

TEST_CASE("improve applies dependency improvement to a predicate set") {
  RunResult r = run({"improve", corpus_path("elems.oml"), "--preds", "(Elems c e, Elems c e2)"});
  CHECK(r.status == 0);
  CHECK(r.out == "e2 ↦ e\nresult: Elems c e\n");

  RunResult s = run({"--structured", "improve", corpus_path("elems.oml"), "--preds",
                     "(Elems c e, Elems c e2)"});
  CHECK(s.status == 0);
  CHECK(s.out == "status=ok\nstep.0=" + testutil::gold("improve.elems.pair") +
                     "\nresult=Elems c e\n");

  RunResult id = run({"improve", corpus_path("id2.oml"), "--preds", "Id2 t"});
  CHECK(id.status == 0);
  CHECK(id.out == "identity\nresult: Id2 t\n");

  RunResult clash =
      run({"improve", corpus_path("elems.oml"), "--preds", "(Elems Int Int, Elems Int Bool)"});
  CHECK(clash.status == 1);
  CHECK(clash.out ==
        "error: [improve] Elems Int Int and Elems Int Bool disagree on targets of fundep Elems "
        "{0} ~> {1}: cannot reconcile Bool with Int\n");
}

TEST_CASE("usage errors exit with a distinct status") {
  RunResult none = run({});
  CHECK(none.status == 2);
  CHECK(none.out == "A subcommand is required\nRun with --help for more information.\n");

  RunResult unknown = run({"check", corpus_path("id2.oml"), "--bogus"});
  CHECK(unknown.status == 2);
  CHECK(unknown.out.find("The following argument was not expected: --bogus") != std::string::npos);

  RunResult range = run({"--entail-depth", "0", "entail", corpus_path("id2.oml"), "--goal",
                         "Id2 Int"});
  CHECK(range.status == 2);
  CHECK(range.out.find("Value 0 not in range [1 - 1000000]") != std::string::npos);

  RunResult missing = run({"eval", corpus_path("nosuch.oml"), "--at", "Int"});
  CHECK(missing.status == 1);
  CHECK(missing.out == "error: [input] cannot open '" + corpus_path("nosuch.oml") + "'\n");

  RunResult help = run({"--help"});
  CHECK(help.status == 0);
  CHECK(starts_with(help.out,
                    "qualified-type language: checking, entailment, and finite-domain evaluation"));
}

TEST_CASE("every reporting command is deterministic across runs") {
  std::vector<std::vector<std::string>> invocations = {
      {"check", corpus_path("id2.oml")},
      {"--structured", "check", corpus_path("elems.oml")},
      {"entail", corpus_path("id2.oml"), "--goal", "Id2 ((Int -> Int) -> Int -> Int)"},
      {"--base", "Int", "--depth", "2", "gr", corpus_path("id2.oml"), "--scheme",
       "forall t. Id2 t => t -> t"},
      {"eval", corpus_path("id2.oml"), "--at", "(Int -> Int) -> Int -> Int"},
      {"--base", "Int", "--depth", "1", "eval", corpus_path("elems.oml"),
       "--at", "Int -> (Int -> Int) -> Int -> Int"},
      {"--base", "Int", "--depth", "1", "equiv", corpus_path("id2.oml"), "--lhs", "id1", "--rhs",
       "main", "--scheme", "forall t. Id2 t => t -> t"},
      {"--structured", "improve", corpus_path("elems.oml"), "--preds", "(Elems c e, Elems c e2)"},
  };
  for (const auto& args : invocations) {
    CAPTURE(args.size() ? args[0] + " " + args[1] : std::string("<none>"));
    RunResult a = run(args);
    RunResult b = run(args);
    CHECK(a.status == b.status);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
  }
}
