#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "oml/interp.hpp"
#include "oml/parser.hpp"

using namespace oml;
using clk = std::chrono::steady_clock;

// identity-class program whose deep instance exercises the big table kernels
static const char* PROG = R"(
class Id2 t where { id2 : t -> t; }
instance dInt : Id2 Int where { id2 = \x. x; }
instance dArr : forall t u. (Id2 t, Id2 u) => Id2 (t -> u) where { id2 = \f. id2 . f . id2; }
main : forall t. Id2 t => t -> t
main = id2
)";

static double bench_eval(const TypedProgram& tp, const EvalCfg& cfg, const TypePtr& key, int reps,
                         ValuePtr* out) {
  double best = 1e100;
  for (int r = 0; r < reps; r++) {
    Evaluator ev(tp, cfg);
    auto t0 = clk::now();
    ValuePtr v = ev.eval_bind_at("main", key);
    auto t1 = clk::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    *out = v;
  }
  return best;
}

int main(int argc, char** argv) {
  int reps = 3;
  std::vector<int> sizes = {2, 3, 4};
  for (int i = 1; i < argc; i++) {
    if (!std::strcmp(argv[i], "--reps") && i + 1 < argc) {
      reps = std::atoi(argv[++i]);
    } else if (!std::strcmp(argv[i], "--max-int") && i + 1 < argc) {
      sizes = {2, std::atoi(argv[++i])};
    } else {
      std::printf("usage: oml-bench [--reps N] [--max-int N]\n");
      std::printf("times the serial and OpenMP identity-table kernels and checks they agree\n");
      return std::strcmp(argv[i], "--help") && std::strcmp(argv[i], "-h") ? 2 : 0;
    }
  }

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif

  TypedProgram tp = check_program(parse_program(PROG));
  TypePtr ii = tarr(tcon("Int"), tcon("Int"));
  TypePtr key = tarr(ii, ii);  // table over the full Int->Int carrier

  std::printf("%-8s %-22s %12s %12s %9s  %s\n", "int", "instance", "serial(ms)", "openmp(ms)",
              "speedup", "match");
  for (int n : sizes) {
    EvalCfg cs{make_universe({"Int"}, 1), DomainCfg{n, 100'000'000}, 100, 1000, false, false};
    EvalCfg cp = cs;
    cp.parallel = true;
    ValuePtr vs, vp;
    double ts = bench_eval(tp, cs, key, reps, &vs);
    double tm = bench_eval(tp, cp, key, reps, &vp);
    std::printf("%-8d %-22s %12.2f %12.2f %8.2fx  %s\n", n, show_type(key).c_str(), ts, tm,
                ts / tm, val_eq(vs, vp) ? "yes" : "NO");
    if (!val_eq(vs, vp)) return 1;
  }
  return 0;
}
