// Serial vs OpenMP versions of the two parallel kernels: chase trigger
// discovery and loop-pattern enumeration.

#include <benchmark/benchmark.h>

#include "support.hpp"
#include "tgd/loops.hpp"

using namespace tgd;
using namespace tgd::test;

namespace {

std::vector<NormalTGD> chase_rules() {
  return normal(
      "e(X,Y) -> t(X,Y).\n"
      "e(X,Y), t(Y,Z) -> t(X,Z).\n"
      "t(X,Y) -> exists Z. w(Y,Z).\n"
      "w(X,Y), e(X,Z) -> u(Z,Y).\n");
}

Database chase_db(std::size_t n) {
  Gen g(1);
  Database db;
  for (std::size_t i = 0; i < 2 * n; ++i)
    db.add(Atom{"e", {C("c" + std::to_string(g.below(n))), C("c" + std::to_string(g.below(n)))}});
  return db;
}

void BM_Chase(benchmark::State& state, bool parallel) {
  auto rules = chase_rules();
  auto db = chase_db(static_cast<std::size_t>(state.range(0)));
  ChaseOptions o{6, false, 5'000'000, parallel};
  std::size_t atoms = 0;
  for (auto _ : state) {
    auto res = run_chase(db, rules, o);
    atoms = res.state.size();
    benchmark::DoNotOptimize(atoms);
  }
  state.counters["atoms"] = static_cast<double>(atoms);
}

std::vector<NormalTGD> loop_rules() {
  return normal(
      "p0(X0,X1), p1(X1) -> exists Z. p0(X1,Z).\n"
      "p0(X0,X1) -> p1(X0).\n"
      "p1(X0), p2(X0,X1) -> exists Z. p2(X1,Z).\n"
      "p2(X0,X1), p0(X1,X0) -> p1(X1).\n"
      "p2(X0,X1) -> exists Z. p0(Z,X0).\n");
}

void BM_Loops(benchmark::State& state, bool parallel) {
  auto rules = loop_rules();
  LoopEnumOptions o{static_cast<std::size_t>(state.range(0)), 2'000'000, parallel};
  std::size_t patterns = 0;
  for (auto _ : state) {
    auto res = enumerate_loop_patterns(rules, o);
    patterns = res.patterns.size();
    benchmark::DoNotOptimize(patterns);
  }
  state.counters["patterns"] = static_cast<double>(patterns);
}

}  // namespace

BENCHMARK_CAPTURE(BM_Chase, serial, false)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Chase, parallel, true)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Loops, serial, false)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Loops, parallel, true)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
