// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hhgoct/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hhgoct/errors.hpp"
#include "hhgoct/fourier.hpp"
#include "hhgoct/kernels.hpp"

namespace hhgoct
{

namespace
{

const double kSqrt2OverPi = std::sqrt(2.0 / std::numbers::pi);

void CheckLength(std::size_t n, const TimeGrid &grid, const char *what)
{
  if (n != static_cast<std::size_t>(grid.Size()))
  {
    throw InvalidInput(std::string(what) + ": expected " + std::to_string(grid.Size()) +
                       " samples, got " + std::to_string(n));
  }
}

void CheckFinite(const std::vector<double> &v, const char *what)
{
  for (double x : v)
  {
    if (!std::isfinite(x))
    {
      throw InvalidInput(std::string(what) + ": non-finite entry");
    }
  }
}

double ForwardScale(const TimeGrid &grid)
{
  return kSqrt2OverPi * grid.Step();
}

double InverseScale(const TimeGrid &grid)
{
  return kSqrt2OverPi * grid.FrequencyStep();
}

}  // namespace

TimeGrid::TimeGrid(double duration_, int intervals_) : duration(duration_), intervals(intervals_)
{
  if (intervals < 2)
  {
    throw InvalidInput("TimeGrid: need at least 2 intervals");
  }
  if (!(duration > 0.0) || !std::isfinite(duration))
  {
    throw InvalidInput("TimeGrid: duration must be positive");
  }
}

double TimeGrid::Time(int k) const
{
  if (k == intervals)
  {
    return duration;
  }
  return duration * static_cast<double>(k) / static_cast<double>(intervals);
}

double TimeGrid::Omega(int j) const
{
  return std::numbers::pi * static_cast<double>(j) / duration;
}

double TimeGrid::MaxFrequency() const
{
  return Omega(intervals);
}

double TimeGrid::FrequencyStep() const
{
  return std::numbers::pi / duration;
}

double EndpointFactor(int k, int intervals)
{
  return (k == 0 || k == intervals) ? 0.5 : 1.0;
}

SpectralField Dct1Forward(const TemporalField &f, const TimeGrid &grid)
{
  CheckLength(f.samples.size(), grid, "Dct1Forward");
  CheckFinite(f.samples, "Dct1Forward");
  SpectralField s;
  s.coeffs.resize(f.samples.size());
  Dct1Raw(f.samples, s.coeffs);
  const double scale = 0.5 * ForwardScale(grid);
  for (double &c : s.coeffs)
  {
    c *= scale;
  }
  return s;
}

TemporalField Dct1Inverse(const SpectralField &s, const TimeGrid &grid)
{
  CheckLength(s.coeffs.size(), grid, "Dct1Inverse");
  CheckFinite(s.coeffs, "Dct1Inverse");
  TemporalField f;
  f.samples.resize(s.coeffs.size());
  Dct1Raw(s.coeffs, f.samples);
  const double scale = 0.5 * InverseScale(grid);
  for (double &v : f.samples)
  {
    v *= scale;
  }
  return f;
}

SpectralField Dct1ForwardDirect(const TemporalField &f, const TimeGrid &grid)
{
  CheckLength(f.samples.size(), grid, "Dct1ForwardDirect");
  SpectralField s;
  s.coeffs.resize(f.samples.size());
  kernels::Dct1SumSerial(f.samples, s.coeffs);
  for (double &c : s.coeffs)
  {
    c *= ForwardScale(grid);
  }
  return s;
}

TemporalField Dct1InverseDirect(const SpectralField &s, const TimeGrid &grid)
{
  CheckLength(s.coeffs.size(), grid, "Dct1InverseDirect");
  TemporalField f;
  f.samples.resize(s.coeffs.size());
  kernels::Dct1SumSerial(s.coeffs, f.samples);
  for (double &v : f.samples)
  {
    v *= InverseScale(grid);
  }
  return f;
}

std::vector<double> IntegrationWeights(const TimeGrid &grid)
{
  std::vector<double> w(grid.Size());
  for (int j = 0; j < grid.Size(); j++)
  {
    w[j] = EndpointFactor(j, grid.Intervals()) * grid.FrequencyStep();
  }
  return w;
}

double InverseAtStart(const SpectralField &s, const TimeGrid &grid)
{
  CheckLength(s.coeffs.size(), grid, "InverseAtStart");
  double acc = 0.0;
  for (int j = 0; j < grid.Size(); j++)
  {
    acc += EndpointFactor(j, grid.Intervals()) * s.coeffs[j];
  }
  return InverseScale(grid) * acc;
}

double InverseAtEnd(const SpectralField &s, const TimeGrid &grid)
{
  CheckLength(s.coeffs.size(), grid, "InverseAtEnd");
  double acc = 0.0;
  for (int j = 0; j < grid.Size(); j++)
  {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    acc += sign * EndpointFactor(j, grid.Intervals()) * s.coeffs[j];
  }
  return InverseScale(grid) * acc;
}

ProjectedField BoundaryProject(const SpectralField &eps_unc, const FilterFunction &ftilde,
                               const TimeGrid &grid)
{
  CheckLength(eps_unc.coeffs.size(), grid, "BoundaryProject");
  CheckLength(ftilde.samples.size(), grid, "BoundaryProject filter");
  const SpectralField f{ftilde.samples};
  BoundaryMultipliers m;
  m.a = InverseAtStart(f, grid);
  m.b = InverseAtEnd(f, grid);
  m.d = m.a;
  m.detM = m.a * m.d - m.b * m.b;
  if (!(std::abs(m.detM) > 1e-14 * m.a * m.a))
  {
    throw DegenerateFilter("BoundaryProject: singular boundary system (detM = " +
                           std::to_string(m.detM) + ")");
  }
  const double e0 = InverseAtStart(eps_unc, grid);
  const double eT = InverseAtEnd(eps_unc, grid);
  m.lambda0 = (e0 * m.d - eT * m.b) / m.detM;
  m.lambdaT = (eT * m.a - e0 * m.b) / m.detM;

  ProjectedField out{eps_unc, m};
  for (int j = 0; j < grid.Size(); j++)
  {
    const double cosT = (j % 2 == 0) ? 1.0 : -1.0;
    out.field.coeffs[j] -= ftilde.samples[j] * (m.lambda0 + m.lambdaT * cosT);
  }
  return out;
}

FilterFunction GaussianFilter(double center, double width, const TimeGrid &grid, FilterKind kind)
{
  if (!(width > 0.0))
  {
    throw InvalidInput("GaussianFilter: width must be positive");
  }
  FilterFunction f;
  f.kind = kind;
  f.samples.resize(grid.Size());
  for (int j = 0; j < grid.Size(); j++)
  {
    const double u = (grid.Omega(j) - center) / width;
    f.samples[j] = std::exp(-0.5 * u * u);
  }
  return f;
}

FilterFunction ScaleFilter(const FilterFunction &f, double alpha)
{
  if (!(alpha > 0.0))
  {
    throw InvalidInput("ScaleFilter: alpha must be positive");
  }
  FilterFunction out{f.samples, FilterKind::ScaledSource};
  for (double &v : out.samples)
  {
    v /= alpha;
  }
  return out;
}

FieldSeries::FieldSeries(const SpectralField &s, const TimeGrid &grid)
{
  CheckLength(s.coeffs.size(), grid, "FieldSeries");
  const auto w = IntegrationWeights(grid);
  for (int j = 0; j < grid.Size(); j++)
  {
    if (s.coeffs[j] != 0.0)
    {
      omega.push_back(grid.Omega(j));
      amplitude.push_back(kSqrt2OverPi * w[j] * s.coeffs[j]);
    }
  }
}

double FieldSeries::operator()(double t) const
{
  double acc = 0.0;
  for (std::size_t i = 0; i < omega.size(); i++)
  {
    acc += amplitude[i] * std::cos(omega[i] * t);
  }
  return acc;
}

}  // namespace hhgoct
