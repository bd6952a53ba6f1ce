// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HHGOCT_SPECTRAL_HPP
#define HHGOCT_SPECTRAL_HPP

#include <vector>

namespace hhgoct
{

// Uniform time grid t_k = kT/N_t and its dual cosine grid w_j = j*pi/T, k, j = 0..N_t.
class TimeGrid
{
public:
  TimeGrid(double duration, int intervals);

  double Duration() const { return duration; }
  int Intervals() const { return intervals; }
  int Size() const { return intervals + 1; }
  double Step() const { return duration / intervals; }
  double Time(int k) const;
  double Omega(int j) const;
  double MaxFrequency() const;
  double FrequencyStep() const;

  bool operator==(const TimeGrid &) const = default;

private:
  double duration;
  int intervals;
};

struct TemporalField
{
  std::vector<double> samples;
};

struct SpectralField
{
  std::vector<double> coeffs;
};

enum class FilterKind
{
  Source,
  ScaledSource,
  Target
};

struct FilterFunction
{
  std::vector<double> samples;
  FilterKind kind = FilterKind::Source;
};

struct BoundaryMultipliers
{
  double lambda0 = 0.0;
  double lambdaT = 0.0;
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
  double detM = 0.0;
};

struct ProjectedField
{
  SpectralField field;
  BoundaryMultipliers multipliers;
};

// Endpoint-halving factor 1/h_k: 1/2 at both ends, 1 elsewhere.
double EndpointFactor(int k, int intervals);

SpectralField Dct1Forward(const TemporalField &f, const TimeGrid &grid);
TemporalField Dct1Inverse(const SpectralField &s, const TimeGrid &grid);

// Same transforms evaluated as the explicit O(N^2) sums.
SpectralField Dct1ForwardDirect(const TemporalField &f, const TimeGrid &grid);
TemporalField Dct1InverseDirect(const SpectralField &s, const TimeGrid &grid);

std::vector<double> IntegrationWeights(const TimeGrid &grid);

// Field value at one node, from its spectral coefficients.
double InverseAtStart(const SpectralField &s, const TimeGrid &grid);
double InverseAtEnd(const SpectralField &s, const TimeGrid &grid);

ProjectedField BoundaryProject(const SpectralField &eps_unc, const FilterFunction &ftilde,
                               const TimeGrid &grid);

FilterFunction GaussianFilter(double center, double width, const TimeGrid &grid,
                              FilterKind kind = FilterKind::Source);

// f / alpha, tagged as the scaled source filter.
FilterFunction ScaleFilter(const FilterFunction &f, double alpha);

// Continuous cosine series of a spectral field, evaluable at any t in [0, T].
// Agrees with Dct1Inverse at the nodes.
class FieldSeries
{
public:
  FieldSeries() = default;
  FieldSeries(const SpectralField &s, const TimeGrid &grid);

  double operator()(double t) const;
  bool IsZero() const { return amplitude.empty(); }

private:
  std::vector<double> omega;
  std::vector<double> amplitude;
};

}  // namespace hhgoct

#endif  // HHGOCT_SPECTRAL_HPP
