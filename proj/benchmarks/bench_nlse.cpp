#include <benchmark/benchmark.h>

#include <cmath>

#include "nlse/dsl.hpp"
#include "nlse/solver.hpp"

using namespace nlse;

namespace {

Expr corpus_lagrangian(const std::string& name) {
  auto r = parse_file(std::string(NLSE_BENCH_CORPUS) + "/" + name);
  if (!r.ok()) throw std::runtime_error(r.format_diagnostics(name));
  return *r.expr;
}

FieldGrid sech_field(int n) {
  FieldGrid g = FieldGrid::make(1, n, 40);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.coordinate(0, static_cast<int>(j));
    g.samples[j] = std::polar(1.0 / std::cosh(x), 0.3 * x);
  }
  return g;
}

const char* kFiles[] = {"gp_m2.lag", "gradient_density.lag", "log_density.lag"};

void BM_Canonicalize(benchmark::State& state) {
  const Expr l = corpus_lagrangian("gradient_density.lag");
  const Expr expanded = l * l + l;
  for (auto _ : state) benchmark::DoNotOptimize(canonicalize(expanded));
}
BENCHMARK(BM_Canonicalize);

void BM_Derive(benchmark::State& state) {
  const Expr l = corpus_lagrangian(kFiles[state.range(0)]);
  state.SetLabel(kFiles[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(derive_equation(l, 1));
}
BENCHMARK(BM_Derive)->DenseRange(0, 2);

void BM_CompiledRHS(benchmark::State& state) {
  const EvolutionEquation eq = derive_equation(corpus_lagrangian("gradient_density.lag"), 1);
  const CompiledRHS rhs = CompiledRHS::compile(eq, {{"hbar", 1}, {"m", 1}, {"a", 0.1}}, 1);
  const FieldGrid g = sech_field(static_cast<int>(state.range(0)));
  const Spectral s(g);
  const ComplexField v(g.size());
  for (auto _ : state) benchmark::DoNotOptimize(rhs.evaluate(g, v, s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CompiledRHS)->RangeMultiplier(4)->Range(64, 4096);

void BM_Step(benchmark::State& state) {
  const bool strang = state.range(1) == 0;
  const EvolutionEquation eq = derive_equation(corpus_lagrangian("gp_m2.lag"), 1);
  const CompiledRHS rhs = CompiledRHS::compile(eq, {{"hbar", 1}, {"m", 1}, {"e", 0.5}}, 1);
  FieldGrid g = sech_field(static_cast<int>(state.range(0)));
  Stepper stepper(rhs, {}, g, strang ? Method::Strang : Method::RK4);
  state.SetLabel(strang ? "strang" : "rk4");
  const double dt = strang ? 1e-4 : 1e-5;
  for (auto _ : state) stepper.step(g, dt);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Step)->ArgsProduct({{256, 1024, 4096}, {0, 1}});

}  // namespace

BENCHMARK_MAIN();
