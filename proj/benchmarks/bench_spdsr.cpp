#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "spdsr/interp.hpp"
#include "spdsr/srdist.hpp"

namespace {

using namespace spdsr;

SymMat random_spd(std::mt19937_64& rng, int p, bool pair = false) {
  std::uniform_real_distribution<double> u(0.2, 6.0), a(-1.0, 1.0);
  Vec d(p);
  for (int i = 0; i < p; ++i) d(i) = u(rng);
  if (pair) d(1) = d(0);
  const Rotation r = p == 2 ? Rotation::planar(3 * a(rng))
                            : Rotation::axis_angle(Eigen::Vector3d(a(rng), a(rng), a(rng)), 3 * a(rng));
  return SymMat::from_matrix(r.matrix() * d.asDiagonal() * r.matrix().transpose());
}

std::vector<SymMat> batch(int p, bool pair, std::size_t n) {
  std::mt19937_64 rng(7);
  std::vector<SymMat> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_spd(rng, p, pair));
  return out;
}

void BM_SymEig(benchmark::State& state) {
  const auto ms = batch(static_cast<int>(state.range(0)), false, 256);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sym_eig(ms[i++ % ms.size()]));
}
BENCHMARK(BM_SymEig)->Arg(2)->Arg(3);

void BM_SrDistance(benchmark::State& state, int p, bool x_pair, bool y_pair) {
  const auto xs = batch(p, x_pair, 64);
  auto ys = batch(p, y_pair, 65);
  ys.erase(ys.begin());
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sr_distance(xs[i % xs.size()], ys[i % ys.size()]));
    ++i;
  }
}
BENCHMARK_CAPTURE(BM_SrDistance, p2, 2, false, false);
BENCHMARK_CAPTURE(BM_SrDistance, p3_distinct, 3, false, false);
BENCHMARK_CAPTURE(BM_SrDistance, p3_pair_distinct, 3, true, false);
BENCHMARK_CAPTURE(BM_SrDistance, p3_pair_pair, 3, true, true);

void BM_Trajectory(benchmark::State& state) {
  const auto xs = batch(3, false, 16);
  const auto scheme = static_cast<Scheme>(state.range(0));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(make_trajectory(xs[i % 16], xs[(i + 1) % 16], scheme, 101));
    ++i;
  }
  state.SetLabel(std::string(to_string(scheme)));
}
BENCHMARK(BM_Trajectory)->DenseRange(0, 3);

}  // namespace

BENCHMARK_MAIN();
