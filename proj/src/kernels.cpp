// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hhgoct/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hhgoct::kernels
{

namespace
{

// cos(pi m / N) with m reduced mod 2N, so the argument stays small and exact.
inline double CosTable(long m, long n)
{
  m %= 2 * n;
  return std::cos(std::numbers::pi * static_cast<double>(m) / static_cast<double>(n));
}

inline double Dct1Row(std::span<const double> in, long j, long n)
{
  double acc = 0.5 * (in[0] + ((j % 2 == 0) ? in[n] : -in[n]));
  for (long k = 1; k < n; k++)
  {
    acc += in[k] * CosTable(j * k, n);
  }
  return acc;
}

void CheckSizes(std::span<const double> in, std::span<double> out)
{
  if (in.size() < 2 || out.size() != in.size())
  {
    throw std::invalid_argument("Dct1Sum: need matching sizes of at least 2");
  }
}

}  // namespace

void Dct1SumSerial(std::span<const double> in, std::span<double> out)
{
  CheckSizes(in, out);
  const long n = static_cast<long>(in.size()) - 1;
  for (long j = 0; j <= n; j++)
  {
    out[j] = Dct1Row(in, j, n);
  }
}

void Dct1SumParallel(std::span<const double> in, std::span<double> out)
{
  CheckSizes(in, out);
  const long n = static_cast<long>(in.size()) - 1;
#pragma omp parallel for schedule(static)
  for (long j = 0; j <= n; j++)
  {
    out[j] = Dct1Row(in, j, n);
  }
}

void CosineProjectionSerial(std::span<const double> omega, std::span<const double> times,
                            std::span<const double> values, std::span<double> out)
{
  if (times.size() != values.size() || out.size() != omega.size())
  {
    throw std::invalid_argument("CosineProjection: size mismatch");
  }
  for (std::size_t j = 0; j < omega.size(); j++)
  {
    double acc = 0.0;
    for (std::size_t s = 0; s < times.size(); s++)
    {
      acc += values[s] * std::cos(omega[j] * times[s]);
    }
    out[j] = acc;
  }
}

void CosineProjectionParallel(std::span<const double> omega, std::span<const double> times,
                              std::span<const double> values, std::span<double> out)
{
  if (times.size() != values.size() || out.size() != omega.size())
  {
    throw std::invalid_argument("CosineProjection: size mismatch");
  }
  const long n = static_cast<long>(omega.size());
#pragma omp parallel for schedule(static)
  for (long j = 0; j < n; j++)
  {
    double acc = 0.0;
    for (std::size_t s = 0; s < times.size(); s++)
    {
      acc += values[s] * std::cos(omega[j] * times[s]);
    }
    out[j] = acc;
  }
}

}  // namespace hhgoct::kernels
