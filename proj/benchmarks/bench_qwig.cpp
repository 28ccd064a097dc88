// Microbenchmarks for the hot paths: pencil eigendecomposition, the
// characteristic function, the FFT grid pipeline, moment recursion, and
// singular-set sampling. Run the binary directly; not part of ctest.

#include <benchmark/benchmark.h>

#include <vector>

#include "qwig/charfn.hpp"
#include "qwig/examples.hpp"
#include "qwig/geometry.hpp"
#include "qwig/grid.hpp"
#include "qwig/moments.hpp"
#include "qwig/operators.hpp"

using namespace qwig;

namespace {

OperatorTuple random_tuple(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Matrix> ops;
  for (int k = 0; k < n; ++k) {
    ops.push_back(random_hermitian(d, rng));
  }
  return OperatorTuple::validate(std::move(ops));
}

DensityMatrix random_state(int d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix raw = random_psd(d, rng);
  raw /= raw.trace().real();
  return DensityMatrix::validate(raw);
}

void bm_pencil(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto a = random_tuple(3, d, 1);
  Rng rng(2);
  RealVector xi(3);
  xi << rng.normal(), rng.normal(), rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(pencil(a, xi));
  }
}

void bm_char_function(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto a = random_tuple(3, d, 3);
  const auto rho = random_state(d, 4);
  Rng rng(5);
  RealVector xi(3);
  xi << rng.normal(), rng.normal(), rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(char_function(a, rho, xi));
  }
}

void bm_char_ray_eval(benchmark::State& state) {
  const auto a = random_tuple(3, 8, 6);
  const auto rho = random_state(8, 7);
  Rng rng(8);
  RealVector xi(3);
  xi << rng.normal(), rng.normal(), rng.normal();
  const CharRay ray(a, rho, xi);
  double t = 0.0;
  for (auto _ : state) {
    t += 1e-3;
    benchmark::DoNotOptimize(ray.eval(t));
  }
}

void bm_grid_2d(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto ex = make_example("pauli2");
  GridSpec spec;
  spec.lo = RealVector::Constant(2, -2.0);
  spec.hi = RealVector::Constant(2, 2.0);
  spec.samples = {n, n};
  spec.epsilon = 0.02;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_wigner_grid(ex.tuple, ex.state, spec));
  }
}

void bm_grid_3d(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto ex = make_example("pauli3");
  GridSpec spec;
  spec.lo = RealVector::Constant(3, -2.0);
  spec.hi = RealVector::Constant(3, 2.0);
  spec.samples = {n, n, n};
  spec.epsilon = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_wigner_grid(ex.tuple, ex.state, spec));
  }
}

void bm_moment_table(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  const auto a = random_tuple(2, 4, 9);
  for (auto _ : state) {
    MomentTable table(a, degree);
    Matrix sum = Matrix::Zero(4, 4);
    for (int r = 0; r <= degree; ++r) {
      for (const auto& idx : indices_of_degree(2, r)) {
        sum += table.moment(idx);
      }
    }
    benchmark::DoNotOptimize(sum);
  }
}

void bm_span_dimension(benchmark::State& state) {
  const auto a = random_tuple(2, static_cast<int>(state.range(0)), 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(weyl_span_dimension(a));
  }
}

void bm_singular_set(benchmark::State& state) {
  const auto ex = make_example("nearly-commuting");
  const int resolution = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(singular_set(ex.tuple, resolution));
  }
}

}  // namespace

BENCHMARK(bm_pencil)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(bm_char_function)->Arg(2)->Arg(4)->Arg(8);
BENCHMARK(bm_char_ray_eval);
BENCHMARK(bm_grid_2d)->Arg(64)->Arg(128);
BENCHMARK(bm_grid_3d)->Arg(32);
BENCHMARK(bm_moment_table)->Arg(4)->Arg(8);
BENCHMARK(bm_span_dimension)->Arg(4)->Arg(6);
BENCHMARK(bm_singular_set)->Arg(100)->Arg(400);

BENCHMARK_MAIN();
