// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// Serial reference kernels against their OpenMP versions, plus the FFTW transform
// against the direct sum it replaces.

#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "hhgoct/kernels.hpp"
#include "hhgoct/spectral.hpp"

using namespace hhgoct;

namespace
{

std::vector<double> Random(std::size_t n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (double &x : v)
  {
    x = g(rng);
  }
  return v;
}

template <void (*Kernel)(std::span<const double>, std::span<double>)>
void BM_Dct1Sum(benchmark::State &state)
{
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> in = Random(n + 1, 1);
  std::vector<double> out(n + 1);
  for (auto _ : state)
  {
    Kernel(in, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <void (*Kernel)(std::span<const double>, std::span<const double>,
                         std::span<const double>, std::span<double>)>
void BM_CosineProjection(benchmark::State &state)
{
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> omega(n), times(4 * n);
  for (std::size_t j = 0; j < n; j++)
  {
    omega[j] = 0.003 * static_cast<double>(j);
  }
  for (std::size_t s = 0; s < times.size(); s++)
  {
    times[s] = 0.25 * static_cast<double>(s);
  }
  const std::vector<double> values = Random(times.size(), 2);
  std::vector<double> out(n);
  for (auto _ : state)
  {
    Kernel(omega, times, values, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_Dct1Fftw(benchmark::State &state)
{
  const int n = static_cast<int>(state.range(0));
  const TimeGrid g(1000.0, n);
  const TemporalField f{Random(n + 1, 3)};
  for (auto _ : state)
  {
    SpectralField s = Dct1Forward(f, g);
    benchmark::DoNotOptimize(s.coeffs.data());
  }
}

void BM_Dct1Direct(benchmark::State &state)
{
  const int n = static_cast<int>(state.range(0));
  const TimeGrid g(1000.0, n);
  const TemporalField f{Random(n + 1, 3)};
  for (auto _ : state)
  {
    SpectralField s = Dct1ForwardDirect(f, g);
    benchmark::DoNotOptimize(s.coeffs.data());
  }
}

}  // namespace

BENCHMARK(BM_Dct1Sum<kernels::Dct1SumSerial>)->Name("Dct1Sum/serial")->RangeMultiplier(4)->Range(256, 4096);
BENCHMARK(BM_Dct1Sum<kernels::Dct1SumParallel>)->Name("Dct1Sum/openmp")->RangeMultiplier(4)->Range(256, 4096)->UseRealTime();
BENCHMARK(BM_CosineProjection<kernels::CosineProjectionSerial>)->Name("CosineProjection/serial")->Range(256, 1024);
BENCHMARK(BM_CosineProjection<kernels::CosineProjectionParallel>)->Name("CosineProjection/openmp")->Range(256, 1024)->UseRealTime();
BENCHMARK(BM_Dct1Fftw)->Name("Dct1Forward/fftw")->RangeMultiplier(4)->Range(256, 4096);
BENCHMARK(BM_Dct1Direct)->Name("Dct1Forward/direct")->RangeMultiplier(4)->Range(256, 4096);

BENCHMARK_MAIN();
