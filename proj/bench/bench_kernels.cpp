// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <random>

#include "qecm/codes.hpp"
#include "qecm/kernels.hpp"
#include "qecm/linalg.hpp"
#include "qecm/protocols.hpp"

using namespace qecm;
using kernels::Exec;

namespace {

Matrix random_matrix(std::size_t dim) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Matrix m(dim);
  for (auto& x : m.data()) x = {g(rng), g(rng)};
  return m;
}

kernels::Density mixed(std::size_t n) {
  kernels::Density d(n);
  const double w = 1.0 / static_cast<double>(d.dim());
  for (std::size_t i = 0; i < d.dim(); ++i) d(i, i) = w;
  d(0, d.dim() - 1) = d(d.dim() - 1, 0) = 0.5 * w;
  return d;
}

void matmul_parallel(benchmark::State& s) {
  const auto a = random_matrix(s.range(0)), b = random_matrix(s.range(0));
  for (auto _ : s) benchmark::DoNotOptimize(matmul(a, b));
}
void matmul_reference(benchmark::State& s) {
  const auto a = random_matrix(s.range(0)), b = random_matrix(s.range(0));
  for (auto _ : s) benchmark::DoNotOptimize(matmul_serial(a, b));
}
BENCHMARK(matmul_parallel)->Arg(16)->Arg(64)->Arg(256);
BENCHMARK(matmul_reference)->Arg(16)->Arg(64)->Arg(256);

template <Exec E>
void recovery_kernel(benchmark::State& s) {
  const auto n = static_cast<std::size_t>(s.range(0));
  const auto table = kernels::ghz_table(n);
  auto rho = mixed(n);
  for (auto _ : s) {
    kernels::apply_recovery(rho, table, 1e-3, E);
    benchmark::ClobberMemory();
  }
}
BENCHMARK_TEMPLATE(recovery_kernel, Exec::serial)->DenseRange(3, 7, 2);
BENCHMARK_TEMPLATE(recovery_kernel, Exec::parallel)->DenseRange(3, 7, 2);

template <Exec E>
void dephasing_kernel(benchmark::State& s) {
  const auto n = static_cast<std::size_t>(s.range(0));
  std::vector<kernels::PauliBranch> br;
  for (std::size_t q = 1; q <= n; ++q) br.push_back({kernels::qubit_mask(q, n), 0, 1e-3});
  auto rho = mixed(n);
  for (auto _ : s) {
    kernels::apply_pauli_mixture(rho, br, E);
    benchmark::ClobberMemory();
  }
}
BENCHMARK_TEMPLATE(dephasing_kernel, Exec::serial)->DenseRange(3, 7, 2);
BENCHMARK_TEMPLATE(dephasing_kernel, Exec::parallel)->DenseRange(3, 7, 2);

ProtocolConfig corrected(std::size_t N) {
  ProtocolConfig c;
  c.omega = 0.3;
  c.T = 1.0;
  c.r = 20;
  c.gamma = 0.5;
  c.gamma_parallel = 0.01;
  c.p_error = 1e-3;
  c.N = N;
  return c;
}

// Full corrected evolution: signal-frame kernels vs dense computational-basis reference.
void evolution_kernels(benchmark::State& s) {
  const auto c = corrected(static_cast<std::size_t>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(qec_p_plus_exact(c, Exec::parallel));
}
void evolution_reference(benchmark::State& s) {
  const auto c = corrected(static_cast<std::size_t>(s.range(0)));
  const auto rec = build_syndrome_recovery(RecoveryKind::ghz, c.N);
  for (auto _ : s) benchmark::DoNotOptimize(qec_p_plus_reference(c, rec));
}
BENCHMARK(evolution_kernels)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(evolution_reference)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
