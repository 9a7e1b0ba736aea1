#include <benchmark/benchmark.h>

#include <random>

#include "wildknot/embedding.hpp"
#include "wildknot/lo_knot.hpp"
#include "wildknot/metric.hpp"
#include "wildknot/order.hpp"
#include "wildknot/tower.hpp"
#include "wildknot/transport.hpp"

using namespace wildknot;

namespace {

std::vector<Vec3> cloud(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<Vec3> v(n);
  for (auto& p : v) p = {U(rng), U(rng), U(rng)};
  return v;
}

CircleSeq random_seq(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-kPi, kPi);
  std::vector<double> v(n);
  for (auto& a : v) a = U(rng);
  return circle_seq(v);
}

void BM_Hausdorff(benchmark::State& st) {
  const auto a = cloud(st.range(0), 1), b = cloud(st.range(0), 2);
  for (auto _ : st) benchmark::DoNotOptimize(hausdorff(a, b));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_Hausdorff)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_EmbedPrefix(benchmark::State& st) {
  std::mt19937_64 rng(3);
  const auto p = random_lostar_prefix(st.range(0), rng);
  for (auto _ : st) benchmark::DoNotOptimize(embed_prefix(p, p.size()));
}
BENCHMARK(BM_EmbedPrefix)->RangeMultiplier(2)->Range(8, 256);

void BM_AssembleKnot(benchmark::State& st) {
  std::mt19937_64 rng(4);
  const auto p = random_lostar_prefix(20, rng);
  const auto s = embed_prefix(p, p.size());
  for (auto _ : st) benchmark::DoNotOptimize(assemble_lo_knot(s, st.range(0)));
}
BENCHMARK(BM_AssembleKnot)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Schedule(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(default_schedule(st.range(0)));
}
BENCHMARK(BM_Schedule)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_TowerForward(benchmark::State& st) {
  const auto model = make_tower_model(default_schedule(3));
  std::mt19937_64 rng(5);
  const TowerEvaluator ev(model, random_seq(4, rng), st.range(0));
  std::uniform_real_distribution<double> U(-kPi, kPi);
  for (auto _ : st) benchmark::DoNotOptimize(ev.core_point(U(rng)));
}
BENCHMARK(BM_TowerForward)->DenseRange(0, 2);

void BM_TowerInvert(benchmark::State& st) {
  const auto model = make_tower_model(default_schedule(2));
  std::mt19937_64 rng(6);
  const TowerEvaluator ev(model, random_seq(3, rng), st.range(0));
  const double tol = inversion_tolerance(ev);
  std::uniform_real_distribution<double> U(-kPi, kPi);
  for (auto _ : st) {
    const Vec3 p = ev.core_point(U(rng));
    benchmark::DoNotOptimize(ev.invert(p, tol));
  }
}
BENCHMARK(BM_TowerInvert)->DenseRange(0, 1);

void BM_Intertwining(benchmark::State& st) {
  const auto model = make_tower_model(default_schedule(2));
  std::mt19937_64 rng(7);
  const TransportPair tp(model, random_seq(3, rng), random_seq(3, rng));
  std::uniform_real_distribution<double> U(-kPi, kPi);
  for (auto _ : st) benchmark::DoNotOptimize(intertwining_residual(tp, 1, Vec3{0, 0, U(rng)}));
}
BENCHMARK(BM_Intertwining);

}  // namespace

BENCHMARK_MAIN();
