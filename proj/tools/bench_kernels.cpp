// Serial vs OpenMP comparison for the sparse hot-path kernels.

#include <benchmark/benchmark.h>

#include <random>

#include "nucfw/kernels.hpp"
#include "nucfw/verify.hpp"

namespace {

using nucfw::Index;
using nucfw::kernels::Exec;

struct Fixture {
  nucfw::Observations obs;
  nucfw::ThinSvd x;
  std::vector<double> gvals;
  nucfw::Vector vec_n;
  nucfw::Vector vec_m;
};

Fixture make_fixture(Index m, Index n, std::size_t nnz, Index rank) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<nucfw::Triplet> entries;
  entries.reserve(nnz);
  std::vector<std::uint64_t> cells;
  cells.reserve(nnz);
  while (entries.size() < nnz) {
    const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(m));
    const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    const std::uint64_t key =
        static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n) + j;
    if (std::find(cells.begin(), cells.end(), key) != cells.end()) continue;
    cells.push_back(key);
    entries.push_back({i, j, gauss(rng)});
  }
  Fixture f;
  f.obs = nucfw::make_observations(m, n, std::move(entries));
  f.x = nucfw::random_thin_svd(m, n, rank, 0.5, 2.0, rng);
  f.gvals.resize(nnz);
  for (double& v : f.gvals) v = gauss(rng);
  f.vec_n = nucfw::Vector::Random(n);
  f.vec_m = nucfw::Vector::Random(m);
  return f;
}

const Fixture& fixture(int rank) {
  static const Fixture small = make_fixture(1000, 1700, 50000, 8);
  static const Fixture large = make_fixture(1000, 1700, 50000, 64);
  return rank > 8 ? large : small;
}

void bm_reconstruct(benchmark::State& state) {
  const Fixture& f = fixture(static_cast<int>(state.range(1)));
  const Exec exec = state.range(0) != 0 ? Exec::Parallel : Exec::Serial;
  std::vector<double> out(f.obs.size());
  for (auto _ : state) {
    nucfw::kernels::reconstruct(f.x, f.obs, out, exec);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(bm_reconstruct)
    ->Args({0, 8})
    ->Args({1, 8})
    ->Args({0, 64})
    ->Args({1, 64});

void bm_apply_right(benchmark::State& state) {
  const Fixture& f = fixture(8);
  const Exec exec = state.range(0) != 0 ? Exec::Parallel : Exec::Serial;
  nucfw::Vector out;
  for (auto _ : state) {
    nucfw::kernels::apply_right(f.obs, f.gvals, f.vec_n, out, exec);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(bm_apply_right)->Arg(0)->Arg(1);

void bm_apply_left(benchmark::State& state) {
  const Fixture& f = fixture(8);
  const Exec exec = state.range(0) != 0 ? Exec::Parallel : Exec::Serial;
  nucfw::Vector out;
  for (auto _ : state) {
    nucfw::kernels::apply_left(f.obs, f.gvals, f.vec_m, out, exec);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(bm_apply_left)->Arg(0)->Arg(1);

void bm_rank_one_inner(benchmark::State& state) {
  const Fixture& f = fixture(8);
  const Exec exec = state.range(0) != 0 ? Exec::Parallel : Exec::Serial;
  for (auto _ : state) {
    const double v = nucfw::kernels::rank_one_inner(f.obs, f.gvals, f.vec_m,
                                                    f.vec_n, exec);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(bm_rank_one_inner)->Arg(0)->Arg(1);

void bm_blend_half_sq(benchmark::State& state) {
  const Fixture& f = fixture(8);
  const Exec exec = state.range(0) != 0 ? Exec::Parallel : Exec::Serial;
  for (auto _ : state) {
    const double v = nucfw::kernels::blend_half_sq(
        f.obs, f.gvals, 1.25, f.vec_m, f.vec_n, -0.5, exec);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(bm_blend_half_sq)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
