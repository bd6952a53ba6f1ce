// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HHGOCT_ABSORBER_HPP
#define HHGOCT_ABSORBER_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hhgoct/hamiltonian.hpp"

namespace hhgoct
{

enum class CapShape
{
  CosineSeries,
  Quadratic  // Im V = -eta (x - x0)^2, Re V = 0
};

// Complex absorbing potential placed over the outer `width` at both grid ends.
// Profiles are functions of the depth u in [0, 1] into the absorber, using the
// odd quarter-wave cosines b_n(u) = cos((2n - 1)(pi/2)(1 - u)) that vanish at u = 0.
//   Re V = sum a_n b_n(u),  Im V = -(sum c_n b_n(u))^2.
struct CapSpec
{
  CapShape shape = CapShape::CosineSeries;
  std::vector<double> real_coeffs;
  std::vector<double> imag_coeffs;
  double quadratic_strength = 0.0;
  double width = 40.0;

  std::complex<double> Profile(double u) const;
  // Potential at signed depth distance `depth` (a.u.) into the absorber.
  std::complex<double> AtDepth(double depth) const;
};

Eigen::ArrayXcd BuildCap(const CapSpec &spec, const SpatialGrid &grid);

// Piecewise-constant cells of width `cell`, free space on both sides.
struct Scattering
{
  double reflection = 0.0;
  double transmission = 0.0;
};

Scattering ScatteringCoefficients(const std::vector<std::complex<double>> &cells, double cell,
                                  double k);

// Potential of one absorber sampled on cells from its inner edge outwards.
std::vector<std::complex<double>> CapCells(const CapSpec &spec, double cell);

struct CapObjectiveSettings
{
  double k_min = 0.2;
  double k_max = 2.5;
  int k_samples = 24;
  double cell = 0.625;
};

std::vector<double> MomentumSamples(const CapObjectiveSettings &s);

// max over sampled k of R + Tr.
double CapObjective(const CapSpec &spec, const CapObjectiveSettings &s);
double CapObjective(const CapSpec &spec, const std::vector<double> &ks, double cell);

struct CapOptimizationResult
{
  CapSpec spec;
  double objective = 0.0;
  CapSpec baseline;
  double baseline_objective = 0.0;
  bool beats_baseline = false;  // objective <= baseline / 10
  int evaluations = 0;
  std::string diagnostics;
};

CapSpec TuneQuadraticBaseline(double width, const CapObjectiveSettings &s, double *objective);

CapOptimizationResult OptimizeCap(const CapObjectiveSettings &s, int n_coeffs, int budget,
                                  std::uint64_t seed, double width = 40.0);

// Stored default for the default geometry; regenerated by `hhgoct cap-optimize`.
CapSpec DefaultCap();

void WriteCapFile(const std::string &path, const CapSpec &spec, const SpatialGrid &grid);
// Reads samples written by WriteCapFile. Returns x and V columns.
void ReadCapFile(const std::string &path, Eigen::ArrayXd &x, Eigen::ArrayXcd &v, double *width);

std::string CapSpecToJson(const CapSpec &spec);
CapSpec CapSpecFromJson(const std::string &text);

}  // namespace hhgoct

#endif  // HHGOCT_ABSORBER_HPP
