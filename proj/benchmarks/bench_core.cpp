#include <benchmark/benchmark.h>

#include "graphfool/attack.hpp"
#include "graphfool/eval.hpp"
#include "graphfool/gcn.hpp"

namespace {

using namespace graphfool;

Graph bench_graph(std::size_t per_block) {
  return generate_sbm(per_block, 2, 0.4, 0.05, 7);
}

void BM_Normalize(benchmark::State& state) {
  const Graph g = bench_graph(state.range(0));
  const AdjacencyMatrix adj = AdjacencyMatrix::from_graph(g);
  for (auto _ : state) {
    auto n = normalize(adj);
    benchmark::DoNotOptimize(n.entries.data());
  }
  state.SetComplexityN(g.n_vertices());
}
BENCHMARK(BM_Normalize)->Arg(16)->Arg(64)->Arg(256)->Complexity();

void BM_Forward(benchmark::State& state) {
  const Graph g = bench_graph(state.range(0));
  const auto a_hat = normalize(AdjacencyMatrix::from_graph(g));
  const GcnModel model = init_model(g.features().cols(), 16, 2, 1);
  for (auto _ : state) {
    auto pass = forward(model, a_hat, g.features());
    benchmark::DoNotOptimize(pass.z.data());
  }
  state.SetComplexityN(g.n_vertices());
}
BENCHMARK(BM_Forward)->Arg(16)->Arg(64)->Arg(256)->Complexity();

void BM_AdjacencyGradient(benchmark::State& state) {
  const Graph g = bench_graph(state.range(0));
  const AdjacencyMatrix adj = AdjacencyMatrix::from_graph(g);
  const GcnModel model = init_model(g.features().cols(), 16, 2, 1);
  const AdjacencyGradientContext ctx(model, g.features(), adj);
  for (auto _ : state) {
    auto grad = ctx.logit_grad(0, 1);
    benchmark::DoNotOptimize(grad.data());
  }
  state.SetComplexityN(g.n_vertices());
}
BENCHMARK(BM_AdjacencyGradient)->Arg(16)->Arg(64)->Arg(256)->Complexity();

void BM_Train200Epochs(benchmark::State& state) {
  const Graph g = bench_graph(state.range(0));
  TrainConfig config;
  config.seed = 1;
  for (auto _ : state) {
    auto out = train(g, config);
    benchmark::DoNotOptimize(out.model.w0.data());
  }
}
BENCHMARK(BM_Train200Epochs)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_DirectAttack(benchmark::State& state) {
  const Graph g = bench_graph(state.range(0));
  TrainConfig config;
  config.seed = 1;
  const GcnModel model = train(g, config).model;
  AttackPlan plan;
  plan.target = 0;
  plan.scope = ScopeSpec{ScopeKind::direct, 1};
  plan.budget = 10;
  for (auto _ : state) {
    auto res = run_attack(model, g, plan);
    benchmark::DoNotOptimize(res.flips.data());
  }
}
BENCHMARK(BM_DirectAttack)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_GenerateSbm(benchmark::State& state) {
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto g = generate_sbm(state.range(0), 2, 0.4, 0.05, seed++);
    benchmark::DoNotOptimize(g.edges().data());
  }
  state.SetComplexityN(2 * state.range(0));
}
BENCHMARK(BM_GenerateSbm)->Arg(64)->Arg(256)->Arg(1024)->Complexity();

}  // namespace

BENCHMARK_MAIN();
