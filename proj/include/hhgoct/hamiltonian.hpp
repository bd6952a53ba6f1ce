// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HHGOCT_HAMILTONIAN_HPP
#define HHGOCT_HAMILTONIAN_HPP

#include <complex>
#include <memory>

#include <Eigen/Core>

#include "hhgoct/fourier.hpp"

namespace hhgoct
{

using Wavefunction = Eigen::VectorXcd;

// Equidistant periodic grid on [x_min, x_max), x_max excluded.
class SpatialGrid
{
public:
  SpatialGrid(double x_min, double x_max, int points);
  static SpatialGrid Standard() { return SpatialGrid(-240.0, 240.0, 768); }

  double XMin() const { return x_min; }
  double XMax() const { return x_max; }
  int Points() const { return points; }
  double Length() const { return x_max - x_min; }
  double Spacing() const { return Length() / points; }
  double Center() const { return 0.5 * (x_min + x_max); }
  double X(int i) const { return x_min + i * Spacing(); }

  Eigen::ArrayXd Positions() const;
  // FFT-ordered wave numbers.
  Eigen::ArrayXd Momenta() const;

  // Same spacing, twice the extent, same center.
  SpatialGrid Doubled() const;

  bool operator==(const SpatialGrid &) const = default;

private:
  double x_min;
  double x_max;
  int points;
};

struct PotentialModel
{
  Eigen::ArrayXd v0;        // stationary potential
  Eigen::ArrayXd accel;     // stationary acceleration -dV0/dx
  Eigen::ArrayXd coupling;  // coordinate multiplying the field in the dipole term
  Eigen::ArrayXd window;    // d(coupling)/dx, 1 in the physical domain
  double physical_min = 0.0;
  double physical_max = 0.0;
};

Eigen::ArrayXd TruncatedCoulomb(const Eigen::ArrayXd &x);
Eigen::ArrayXd StationaryAcceleration(const Eigen::ArrayXd &x);

PotentialModel MakePotential(const SpatialGrid &grid);

// Flattens the coordinate over the outer `absorber_width` at each end, so that
// V0 and the dipole coupling exert no force there.
PotentialModel ForceMask(const PotentialModel &pot, const SpatialGrid &grid,
                         double absorber_width);

class KineticOperator
{
public:
  explicit KineticOperator(const SpatialGrid &grid);

  void Apply(const Wavefunction &in, Wavefunction &out) const;
  // psi <- exp(-i K tau) psi.
  void Evolve(Wavefunction &psi, double tau) const;
  // Momentum-space factor exp(-i K tau) / N, for repeated use with ApplyPhase.
  Eigen::ArrayXcd Phase(double tau) const;
  void ApplyPhase(Wavefunction &psi, const Eigen::ArrayXcd &phase) const;
  const Eigen::ArrayXd &Energies() const { return energy; }

private:
  std::shared_ptr<ComplexFft> fft;
  Eigen::ArrayXd energy;
};

class Hamiltonian
{
public:
  Hamiltonian(const SpatialGrid &grid, const PotentialModel &pot, const Eigen::ArrayXcd &cap);
  Hamiltonian(const SpatialGrid &grid, const PotentialModel &pot);

  Wavefunction Apply(const Wavefunction &psi, double eps) const;
  Wavefunction ApplyAdjoint(const Wavefunction &psi, double eps) const;

  const SpatialGrid &Grid() const { return grid; }
  const PotentialModel &Potential() const { return pot; }
  const Eigen::ArrayXcd &Cap() const { return cap; }
  const KineticOperator &Kinetic() const { return kinetic; }
  bool HasCap() const;

private:
  SpatialGrid grid;
  PotentialModel pot;
  Eigen::ArrayXcd cap;
  KineticOperator kinetic;
};

struct GroundState
{
  Wavefunction psi;
  double e0 = 0.0;
  double e1 = 0.0;
  double residual = 0.0;
};

// Lowest two eigenpairs of the stationary Hamiltonian (no CAP, no field).
GroundState SolveGroundState(const SpatialGrid &grid, const PotentialModel &pot);

double Norm2(const Wavefunction &psi, double dx);
std::complex<double> Inner(const Wavefunction &a, const Wavefunction &b, double dx);
// <psi|O|psi> for a diagonal operator.
double Expectation(const Wavefunction &psi, const Eigen::ArrayXd &op, double dx);

}  // namespace hhgoct

#endif  // HHGOCT_HAMILTONIAN_HPP
