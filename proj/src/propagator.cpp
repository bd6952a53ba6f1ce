// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hhgoct/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hhgoct/errors.hpp"

namespace hhgoct
{

using cplx = std::complex<double>;

std::vector<double> CompositionCoefficients(int order)
{
  switch (order)
  {
    case 2:
      return {1.0};
    case 4:
    {
      const double c = std::cbrt(2.0);
      const double x1 = 1.0 / (2.0 - c);
      const double x0 = -c / (2.0 - c);
      return {x1, x0, x1};
    }
    case 6:
    {
      // Yoshida, solution A.
      const double w1 = -1.17767998417887;
      const double w2 = 0.235573213359357;
      const double w3 = 0.784513610477560;
      const double w0 = 1.0 - 2.0 * (w1 + w2 + w3);
      return {w3, w2, w1, w0, w1, w2, w3};
    }
    case 8:
    {
      // Yoshida, solution D.
      const double w[] = {0.102799849391985,  -1.96061023297549, 1.93813913762276,
                          -0.158240635368243, -1.44485223686048, 0.253693336566229,
                          0.914844246229740};
      double sum = 0.0;
      for (double v : w)
      {
        sum += v;
      }
      const double w0 = 1.0 - 2.0 * sum;
      std::vector<double> out;
      for (int i = 6; i >= 0; i--)
      {
        out.push_back(w[i]);
      }
      out.push_back(w0);
      for (int i = 0; i < 7; i++)
      {
        out.push_back(w[i]);
      }
      return out;
    }
    default:
      throw InvalidInput("CompositionCoefficients: order must be 2, 4, 6 or 8");
  }
}

Propagator::Propagator(std::shared_ptr<const Hamiltonian> ham_, PropagationSettings settings_)
  : ham(std::move(ham_)), settings(settings_), gammas(CompositionCoefficients(settings_.order))
{
  if (!(settings.tolerance > 0.0) || settings.initial_substeps < 1 ||
      settings.max_substeps < 2 || settings.quadrature_substeps < 4 ||
      settings.quadrature_substeps % 4 != 0)
  {
    throw InvalidInput("Propagator: invalid settings");
  }
  base = ham->Potential().v0.cast<cplx>() + ham->Cap();

  // Blocks where the dipole coordinate is equidistant take the phase by recurrence.
  const auto &x = ham->Potential().coupling;
  const int n = static_cast<int>(x.size());
  const double dx = ham->Grid().Spacing();
  const int block = 32;
  for (int start = 0; start < n; start += block)
  {
    const int len = std::min(block, n - start);
    bool uniform = true;
    for (int i = start + 1; i < start + len; i++)
    {
      uniform = uniform && std::abs(x[i] - x[i - 1] - dx) <= 1e-12 * dx;
    }
    blocks.push_back({start, len, uniform});
  }
}

void Propagator::ApplyPotential(Wavefunction &psi, double t, double duration,
                                const FieldSeries &field, bool adjoint, StaticFactors &cache) const
{
  if (duration == 0.0)
  {
    return;
  }
  std::size_t slot = 0;
  while (slot < cache.durations.size() && cache.durations[slot] != duration)
  {
    slot++;
  }
  if (slot == cache.durations.size())
  {
    const Eigen::ArrayXcd v = adjoint ? Eigen::ArrayXcd(base.conjugate()) : base;
    cache.durations.push_back(duration);
    cache.factors.push_back((v * cplx(0.0, -duration)).exp());
  }
  const Eigen::ArrayXcd &stat = cache.factors[slot];

  // exp(+i x eps d)
  const double theta = field(t) * duration;
  const auto &x = ham->Potential().coupling;
  if (theta == 0.0)
  {
    psi.array() *= stat;
    return;
  }
  const cplx step = std::polar(1.0, theta * ham->Grid().Spacing());
  for (const Block &b : blocks)
  {
    if (b.uniform)
    {
      cplx ph = std::polar(1.0, theta * x[b.start]);
      for (int i = b.start; i < b.start + b.length; i++)
      {
        psi[i] *= stat[i] * ph;
        ph *= step;
      }
    }
    else
    {
      for (int i = b.start; i < b.start + b.length; i++)
      {
        psi[i] *= stat[i] * std::polar(1.0, theta * x[i]);
      }
    }
  }
}

void Propagator::Advance(Wavefunction &psi, double t0, double t1, int substeps,
                         const FieldSeries &field, bool adjoint,
                         std::vector<Wavefunction> *sub) const
{
  if (substeps < 1)
  {
    throw InvalidInput("Propagator::Advance: substeps must be positive");
  }
  const double h = (t1 - t0) / substeps;
  const std::size_t s = gammas.size();
  const auto &kin = ham->Kinetic();
  StaticFactors cache;
  std::vector<Eigen::ArrayXcd> phases;
  phases.reserve(s);
  for (std::size_t i = 0; i < s; i++)
  {
    // Stage coefficients are palindromic, so duplicates could be shared; the cost is minor.
    phases.push_back(kin.Phase(gammas[i] * h));
  }
  if (sub)
  {
    sub->assign(1, psi);
  }
  double pending = 0.5 * gammas[0] * h;
  for (int n = 0; n < substeps; n++)
  {
    const double tn = t0 + n * h;
    double t = tn;
    double acc = 0.0;
    for (std::size_t i = 0; i < s; i++)
    {
      ApplyPotential(psi, t, pending, field, adjoint, cache);
      kin.ApplyPhase(psi, phases[i]);
      acc += gammas[i];
      t = tn + acc * h;
      pending = 0.5 * gammas[i] * h + (i + 1 < s ? 0.5 * gammas[i + 1] * h : 0.0);
    }
    const bool last = n + 1 == substeps;
    if (sub || last)
    {
      const double tend = last ? t1 : t0 + (n + 1) * h;
      ApplyPotential(psi, tend, pending, field, adjoint, cache);
      pending = 0.5 * gammas[0] * h;
      if (sub)
      {
        sub->push_back(psi);
      }
    }
    else
    {
      pending += 0.5 * gammas[0] * h;
    }
  }
  if (!psi.allFinite())
  {
    throw PropagationError("Propagator: non-finite amplitudes (instability)");
  }
}

int Propagator::AdaptiveAdvance(Wavefunction &psi, double t0, double t1, const FieldSeries &field,
                                bool adjoint, int &hint, std::vector<Wavefunction> *sub,
                                int min_used) const
{
  const double scale = psi.norm();
  if (scale == 0.0)
  {
    const int used = std::max(std::max(hint, min_used), 1);
    if (sub)
    {
      sub->assign(used + 1, psi);
    }
    return used;
  }
  const double richardson = std::pow(2.0, settings.order) - 1.0;
  int used = std::max(std::max(hint, min_used), 2);
  Wavefunction coarse = psi;
  Advance(coarse, t0, t1, used / 2, field, adjoint);
  Wavefunction fine = psi;
  Advance(fine, t0, t1, used, field, adjoint, sub);
  double err = (fine - coarse).norm() / richardson / scale;
  while (err > settings.tolerance)
  {
    if (2 * used > settings.max_substeps)
    {
      throw PropagationError("Propagator: tolerance " + std::to_string(settings.tolerance) +
                             " unreachable with " + std::to_string(settings.max_substeps) +
                             " substeps (estimate " + std::to_string(err) + ")");
    }
    coarse = fine;
    used *= 2;
    fine = psi;
    Advance(fine, t0, t1, used, field, adjoint, sub);
    err = (fine - coarse).norm() / richardson / scale;
  }
  hint = (err * (richardson + 1.0) < settings.tolerance && used / 2 >= 2) ? used / 2 : used;
  psi = fine;
  return used;
}

Trajectory Propagator::Forward(const Wavefunction &psi0, const FieldSeries &field,
                               const TimeGrid &grid, const std::vector<int> *schedule) const
{
  if (psi0.size() != ham->Grid().Points())
  {
    throw InvalidInput("Propagator::Forward: grid mismatch");
  }
  if (schedule && static_cast<int>(schedule->size()) != grid.Intervals())
  {
    throw InvalidInput("Propagator::Forward: schedule length mismatch");
  }
  const double dx = ham->Grid().Spacing();
  Trajectory traj;
  traj.non_hermitian = ham->HasCap();
  traj.states.reserve(grid.Size());
  traj.states.push_back(psi0);
  traj.norms.push_back(Norm2(psi0, dx));
  Wavefunction psi = psi0;
  int hint = settings.initial_substeps;
  for (int k = 0; k < grid.Intervals(); k++)
  {
    int used;
    if (schedule)
    {
      used = (*schedule)[k];
      Advance(psi, grid.Time(k), grid.Time(k + 1), used, field, false);
    }
    else
    {
      used = AdaptiveAdvance(psi, grid.Time(k), grid.Time(k + 1), field, false, hint);
    }
    traj.substeps.push_back(used);
    traj.states.push_back(psi);
    traj.norms.push_back(Norm2(psi, dx));
  }
  return traj;
}

Trajectory Propagator::Forward(const Wavefunction &psi0, const TemporalField &field,
                               const TimeGrid &grid) const
{
  return Forward(psi0, FieldSeries(Dct1Forward(field, grid), grid), grid);
}

namespace
{

int RoundUpToMultiple(int n, int m)
{
  return ((n + m - 1) / m) * m;
}

}  // namespace

BackwardResult Propagator::Backward(const Wavefunction &chiT, const FieldSeries &field,
                                    const TimeGrid &grid, const SourceTerm *source,
                                    bool quadrature, const std::vector<int> *schedule) const
{
  const int nt = grid.Intervals();
  if (chiT.size() != ham->Grid().Points())
  {
    throw InvalidInput("Propagator::Backward: grid mismatch");
  }
  const Trajectory *fwd = source ? source->forward : nullptr;
  if ((source || quadrature) && !fwd)
  {
    throw ContractError("Propagator::Backward: missing forward trajectory");
  }
  if (fwd && static_cast<int>(fwd->states.size()) != grid.Size())
  {
    throw ContractError("Propagator::Backward: forward trajectory does not match the grid");
  }
  if (source && static_cast<int>(source->impulses.size()) != grid.Size())
  {
    throw InvalidInput("Propagator::Backward: impulse profile length mismatch");
  }
  if (schedule && static_cast<int>(schedule->size()) != nt)
  {
    throw InvalidInput("Propagator::Backward: schedule length mismatch");
  }
  const double dx = ham->Grid().Spacing();
  const auto &x = ham->Potential().coupling;

  BackwardResult res;
  auto &traj = res.adjoint;
  traj.non_hermitian = ham->HasCap();
  traj.states.resize(grid.Size());
  traj.norms.resize(grid.Size());
  traj.substeps.resize(nt);

  Wavefunction chi = chiT;
  if (source)
  {
    chi.array() += source->impulses[nt] * source->op * fwd->states[nt].array();
  }
  traj.states[nt] = chi;
  traj.norms[nt] = Norm2(chi, dx);

  int hint = settings.initial_substeps;
  const int qmin = quadrature ? settings.quadrature_substeps : 1;
  std::vector<Wavefunction> chi_sub, psi_sub;
  for (int k = nt - 1; k >= 0; k--)
  {
    const double t0 = grid.Time(k), t1 = grid.Time(k + 1);
    int used;
    if (schedule)
    {
      used = std::max((*schedule)[k], qmin);
      if (quadrature)
      {
        used = RoundUpToMultiple(used, 4);
      }
      Advance(chi, t1, t0, used, field, true, quadrature ? &chi_sub : nullptr);
    }
    else
    {
      if (fwd && !fwd->substeps.empty())
      {
        hint = std::max(hint, fwd->substeps[k]);
      }
      if (quadrature)
      {
        hint = RoundUpToMultiple(std::max(hint, qmin), 4);
      }
      used = AdaptiveAdvance(chi, t1, t0, field, true, hint, quadrature ? &chi_sub : nullptr,
                             qmin);
    }
    traj.substeps[k] = used;

    if (quadrature)
    {
      Wavefunction psi = fwd->states[k];
      Advance(psi, t0, t1, used, field, false, &psi_sub);
      const double hh = (t1 - t0) / used;
      const bool boole = used % 4 == 0;
      for (int i = 0; i <= used; i++)
      {
        const Wavefunction &c = chi_sub[used - i];
        const Wavefunction &p = psi_sub[i];
        const double eta = -(c.array().conjugate() * x * p.array()).sum().imag() * dx;
        double w;
        if (boole)
        {
          static const double bw[4] = {14.0, 32.0, 12.0, 32.0};
          w = (i == 0 || i == used) ? 7.0 : bw[i % 4];
          w *= 2.0 * hh / 45.0;
        }
        else
        {
          w = (i == 0 || i == used) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
          w *= hh / 3.0;
        }
        res.quad_times.push_back(t0 + i * hh);
        res.quad_values.push_back(w * eta);
      }
    }

    if (source)
    {
      chi.array() += source->impulses[k] * source->op * fwd->states[k].array();
    }
    traj.states[k] = chi;
    traj.norms[k] = Norm2(chi, dx);
  }
  return res;
}

std::vector<double> ExpectationSeries(const Trajectory &traj, const Eigen::ArrayXd &op, double dx)
{
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const auto &psi : traj.states)
  {
    if (op.size() != psi.size())
    {
      throw InvalidInput("ExpectationSeries: operator size mismatch");
    }
    const cplx v = (psi.array().conjugate() * op * psi.array()).sum() * dx;
    const double scale = std::max(std::abs(v.real()), psi.squaredNorm() * dx * op.abs().maxCoeff());
    if (std::abs(v.imag()) > 1e-12 * std::max(scale, 1e-300))
    {
      throw ContractError("ExpectationSeries: imaginary residue above threshold");
    }
    out.push_back(v.real());
  }
  return out;
}

double SurvivalProbability(const Trajectory &traj)
{
  if (traj.norms.empty())
  {
    throw InvalidInput("SurvivalProbability: empty trajectory");
  }
  return traj.norms.back();
}

}  // namespace hhgoct
