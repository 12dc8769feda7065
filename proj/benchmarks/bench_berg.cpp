#include <benchmark/benchmark.h>

#include <random>

#include "berg/cartan.hpp"
#include "berg/classification.hpp"
#include "berg/hartogs.hpp"

using namespace berg;

namespace {

std::vector<Jet> seeded(int vars, int order) {
  std::vector<cplx> p;
  for (int i = 0; i < vars; ++i) p.emplace_back(0.1 * (i + 1), -0.05 * i);
  return jet_seed(p, order);
}

void BM_JetProduct(benchmark::State& state) {
  const auto x = seeded(static_cast<int>(state.range(0)), 6);
  Jet a = exp(x[0] + x.back()), b = log(1.0 + x[0] * x.back());
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_JetProduct)->Arg(2)->Arg(4)->Arg(6);

void BM_JetDeterminant(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto x = seeded(2 * n, 4);
  JetMatrix M(n, x[0].space_ptr());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = (i == j ? 1.0 : 0.0) - x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(n + j)];
  for (auto _ : state) benchmark::DoNotOptimize(jet_det(M));
}
BENCHMARK(BM_JetDeterminant)->Arg(2)->Arg(3);

void BM_OracleHartogs(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto dom = CartanDomain::ball(d);
  const auto pot = hartogs_potential(base_potential(dom, 1.0), FSpec{LogType{1.0, 1.0}, 1});
  std::mt19937_64 rng(1);
  std::vector<std::vector<cplx>> zs{random_point(dom, 0.5, rng)};
  const auto pt = hartogs_points(base_potential(dom, 1.0), zs, 1, rng)[0];
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_oracle(pot, pt));
}
BENCHMARK(BM_OracleHartogs)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_OracleTypeIV5(benchmark::State& state) {
  const auto dom = CartanDomain::type_IV(5);
  const auto pot = base_potential(dom, 1.0);
  std::mt19937_64 rng(1);
  const auto z = random_point(dom, 0.5, rng);
  for (auto _ : state) benchmark::DoNotOptimize(curvature_invariants(pot, z));
}
BENCHMARK(BM_OracleTypeIV5)->Unit(benchmark::kMillisecond);

void BM_ClosedForm(benchmark::State& state) {
  const auto p = profile_xx1();
  const auto base = cartan_base_invariants(CartanDomain::ball(2), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(invariants_closed(p, 2, 1, 0.7, base));
}
BENCHMARK(BM_ClosedForm);

void BM_BergmanPoly(benchmark::State& state) {
  const auto dom = CartanDomain::type_II(6);
  const double mu = state.range(0) ? 0.5 : 1.4142135623730951;
  for (auto _ : state) benchmark::DoNotOptimize(bergman_poly(dom, mu));
}
BENCHMARK(BM_BergmanPoly)->Arg(1)->Arg(0);

void BM_FFromProfile(benchmark::State& state) {
  std::vector<double> grid;
  for (int i = 0; i <= 95; ++i) grid.push_back(-10.0 + 9.5 * i / 95.0);
  const auto p = profile_xx1();
  for (auto _ : state) benchmark::DoNotOptimize(F_from_profile(p, grid));
}
BENCHMARK(BM_FFromProfile)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
