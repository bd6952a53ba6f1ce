// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hhgoct/hamiltonian.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "hhgoct/errors.hpp"

namespace hhgoct
{

SpatialGrid::SpatialGrid(double x_min_, double x_max_, int points_)
  : x_min(x_min_), x_max(x_max_), points(points_)
{
  if (points < 4 || points % 2 != 0)
  {
    throw InvalidInput("SpatialGrid: need an even number of points >= 4");
  }
  if (!(x_max > x_min))
  {
    throw InvalidInput("SpatialGrid: x_max must exceed x_min");
  }
}

Eigen::ArrayXd SpatialGrid::Positions() const
{
  Eigen::ArrayXd x(points);
  for (int i = 0; i < points; i++)
  {
    x[i] = X(i);
  }
  return x;
}

Eigen::ArrayXd SpatialGrid::Momenta() const
{
  Eigen::ArrayXd k(points);
  const double dk = 2.0 * std::numbers::pi / Length();
  for (int i = 0; i < points; i++)
  {
    k[i] = dk * (i < points / 2 ? i : i - points);
  }
  return k;
}

SpatialGrid SpatialGrid::Doubled() const
{
  const double c = Center();
  return SpatialGrid(c - Length(), c + Length(), 2 * points);
}

Eigen::ArrayXd TruncatedCoulomb(const Eigen::ArrayXd &x)
{
  return 1.0 - (x.square() + 1.0).rsqrt();
}

Eigen::ArrayXd StationaryAcceleration(const Eigen::ArrayXd &x)
{
  return -x * (x.square() + 1.0).pow(-1.5);
}

PotentialModel MakePotential(const SpatialGrid &grid)
{
  PotentialModel pot;
  const Eigen::ArrayXd x = grid.Positions();
  pot.v0 = TruncatedCoulomb(x);
  pot.accel = StationaryAcceleration(x);
  pot.coupling = x;
  pot.window = Eigen::ArrayXd::Ones(x.size());
  pot.physical_min = grid.XMin();
  pot.physical_max = grid.XMax();
  return pot;
}

PotentialModel ForceMask(const PotentialModel &pot, const SpatialGrid &grid,
                         double absorber_width)
{
  const double half = 0.5 * grid.Length();
  if (!(absorber_width >= 0.0) || absorber_width >= half)
  {
    throw InvalidInput("ForceMask: absorber width must lie in [0, half domain)");
  }
  PotentialModel out = pot;
  if (absorber_width == 0.0)
  {
    return out;
  }
  const double c = grid.Center();
  const double xb = half - absorber_width;
  const double w = absorber_width;
  const double pi = std::numbers::pi;
  Eigen::ArrayXd m = grid.Positions();
  for (int i = 0; i < grid.Points(); i++)
  {
    const double rel = m[i] - c;
    const double r = std::abs(rel);
    if (r <= xb)
    {
      continue;
    }
    const double d = r - xb;
    const double mr = xb + 0.5 * d + w / (2.0 * pi) * std::sin(pi * d / w);
    m[i] = c + std::copysign(mr, rel);
    out.window[i] = 0.5 * (1.0 + std::cos(pi * d / w));
  }
  out.coupling = m;
  out.v0 = TruncatedCoulomb(m);
  out.accel = StationaryAcceleration(m) * out.window;
  out.physical_min = c - xb;
  out.physical_max = c + xb;
  return out;
}

KineticOperator::KineticOperator(const SpatialGrid &grid)
  : fft(std::make_shared<ComplexFft>(grid.Points()))
{
  energy = 0.5 * grid.Momenta().square();
}

void KineticOperator::Apply(const Wavefunction &in, Wavefunction &out) const
{
  out = in;
  fft->Forward(out.data());
  out.array() *= energy / static_cast<double>(energy.size());
  fft->Backward(out.data());
}

void KineticOperator::Evolve(Wavefunction &psi, double tau) const
{
  fft->Forward(psi.data());
  const double inv_n = 1.0 / static_cast<double>(energy.size());
  for (Eigen::Index i = 0; i < energy.size(); i++)
  {
    const double phase = -energy[i] * tau;
    psi[i] *= std::complex<double>(std::cos(phase), std::sin(phase)) * inv_n;
  }
  fft->Backward(psi.data());
}

Eigen::ArrayXcd KineticOperator::Phase(double tau) const
{
  const double inv_n = 1.0 / static_cast<double>(energy.size());
  Eigen::ArrayXcd out(energy.size());
  for (Eigen::Index i = 0; i < energy.size(); i++)
  {
    const double phase = -energy[i] * tau;
    out[i] = std::complex<double>(std::cos(phase), std::sin(phase)) * inv_n;
  }
  return out;
}

void KineticOperator::ApplyPhase(Wavefunction &psi, const Eigen::ArrayXcd &phase) const
{
  fft->Forward(psi.data());
  psi.array() *= phase;
  fft->Backward(psi.data());
}

Hamiltonian::Hamiltonian(const SpatialGrid &grid_, const PotentialModel &pot_,
                         const Eigen::ArrayXcd &cap_)
  : grid(grid_), pot(pot_), cap(cap_), kinetic(grid_)
{
  if (pot.v0.size() != grid.Points() || cap.size() != grid.Points())
  {
    throw InvalidInput("Hamiltonian: grid mismatch");
  }
}

Hamiltonian::Hamiltonian(const SpatialGrid &grid_, const PotentialModel &pot_)
  : Hamiltonian(grid_, pot_, Eigen::ArrayXcd::Zero(grid_.Points()))
{
}

bool Hamiltonian::HasCap() const
{
  return (cap != std::complex<double>(0.0)).any();
}

Wavefunction Hamiltonian::Apply(const Wavefunction &psi, double eps) const
{
  if (psi.size() != grid.Points())
  {
    throw InvalidInput("Hamiltonian::Apply: grid mismatch");
  }
  Wavefunction out;
  kinetic.Apply(psi, out);
  out.array() += (pot.v0 - pot.coupling * eps + cap) * psi.array();
  return out;
}

Wavefunction Hamiltonian::ApplyAdjoint(const Wavefunction &psi, double eps) const
{
  if (psi.size() != grid.Points())
  {
    throw InvalidInput("Hamiltonian::ApplyAdjoint: grid mismatch");
  }
  Wavefunction out;
  kinetic.Apply(psi, out);
  out.array() += (pot.v0 - pot.coupling * eps + cap.conjugate()) * psi.array();
  return out;
}

GroundState SolveGroundState(const SpatialGrid &grid, const PotentialModel &pot)
{
  const int n = grid.Points();
  KineticOperator kin(grid);
  Eigen::MatrixXd h(n, n);
  Wavefunction unit = Wavefunction::Zero(n);
  Wavefunction col;
  for (int j = 0; j < n; j++)
  {
    unit.setZero();
    unit[j] = 1.0;
    kin.Apply(unit, col);
    h.col(j) = col.real();
  }
  h = 0.5 * (h + h.transpose()).eval();
  h.diagonal() += pot.v0.matrix();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success)
  {
    throw ContractError("SolveGroundState: eigensolver did not converge");
  }
  GroundState gs;
  gs.e0 = solver.eigenvalues()[0];
  gs.e1 = solver.eigenvalues()[1];
  Eigen::VectorXd v = solver.eigenvectors().col(0);
  if (v.sum() < 0.0)
  {
    v = -v;
  }
  const double dx = grid.Spacing();
  gs.psi = (v / std::sqrt(v.squaredNorm() * dx)).cast<std::complex<double>>();

  Hamiltonian ham(grid, pot);
  const Wavefunction r = ham.Apply(gs.psi, 0.0) - gs.e0 * gs.psi;
  gs.residual = std::sqrt(Norm2(r, dx));
  return gs;
}

double Norm2(const Wavefunction &psi, double dx)
{
  return psi.squaredNorm() * dx;
}

std::complex<double> Inner(const Wavefunction &a, const Wavefunction &b, double dx)
{
  return a.dot(b) * dx;
}

double Expectation(const Wavefunction &psi, const Eigen::ArrayXd &op, double dx)
{
  return (psi.array().abs2() * op).sum() * dx;
}

}  // namespace hhgoct
