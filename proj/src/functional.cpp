// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hhgoct/functional.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hhgoct/errors.hpp"
#include "hhgoct/kernels.hpp"

namespace hhgoct
{

ReducedSpace::ReducedSpace(std::vector<int> indices_, int full_size_)
  : indices(std::move(indices_)), member(full_size_, 0), full_size(full_size_)
{
  if (indices.empty())
  {
    throw InvalidInput("ReducedSpace: empty index set");
  }
  for (int j : indices)
  {
    if (j < 0 || j >= full_size || member[j])
    {
      throw InvalidInput("ReducedSpace: index out of range or repeated");
    }
    member[j] = 1;
  }
}

bool ReducedSpace::Contains(int j) const
{
  return j >= 0 && j < full_size && member[j];
}

Eigen::VectorXd ReducedSpace::ToReduced(const SpectralField &full) const
{
  if (static_cast<int>(full.coeffs.size()) != full_size)
  {
    throw InvalidInput("ReducedSpace::ToReduced: size mismatch");
  }
  Eigen::VectorXd x(Size());
  for (int r = 0; r < Size(); r++)
  {
    x[r] = full.coeffs[indices[r]];
  }
  return x;
}

SpectralField ReducedSpace::ToFull(const Eigen::VectorXd &reduced) const
{
  if (reduced.size() != Size())
  {
    throw InvalidInput("ReducedSpace::ToFull: size mismatch");
  }
  SpectralField s;
  s.coeffs.assign(full_size, 0.0);
  for (int r = 0; r < Size(); r++)
  {
    s.coeffs[indices[r]] = reduced[r];
  }
  return s;
}

ReducedSpace MakeReducedSpace(const FilterFunction &f_eps, double threshold)
{
  std::vector<int> idx;
  for (int j = 0; j < static_cast<int>(f_eps.samples.size()); j++)
  {
    if (f_eps.samples[j] >= threshold)
    {
      idx.push_back(j);
    }
  }
  if (idx.empty())
  {
    throw InvalidInput("MakeReducedSpace: no frequency reaches the threshold");
  }
  return ReducedSpace(std::move(idx), static_cast<int>(f_eps.samples.size()));
}

double Sigma(double y, const SigmaParams &p)
{
  return p.scale * (std::tanh(p.steepness * (y - p.threshold)) -
                    std::tanh(p.steepness * (1.0 - p.threshold)));
}

double SigmaPrime(double y, const SigmaParams &p)
{
  const double th = std::tanh(p.steepness * (y - p.threshold));
  return p.scale * p.steepness * (1.0 - th * th);
}

namespace
{

FilterFunction RestrictedScaledFilter(const FilterFunction &f_eps, const ReducedSpace &space,
                                      double alpha)
{
  FilterFunction f = ScaleFilter(f_eps, alpha);
  for (int j = 0; j < static_cast<int>(f.samples.size()); j++)
  {
    if (!space.Contains(j))
    {
      f.samples[j] = 0.0;
    }
  }
  return f;
}

FilterFunction MakeTargetFilter(const ProblemSpec &s, const TimeGrid &time)
{
  FilterFunction f =
      GaussianFilter(s.harmonic * s.omega0, s.target_width, time, FilterKind::Target);
  for (double &v : f.samples)
  {
    v *= s.target_scale;
  }
  return f;
}

std::shared_ptr<const Hamiltonian> MakeHamiltonian(const ProblemSpec &s)
{
  const PotentialModel pot = ForceMask(MakePotential(s.grid), s.grid, s.absorber_width);
  if (s.use_cap)
  {
    return std::make_shared<Hamiltonian>(s.grid, pot, BuildCap(s.cap, s.grid));
  }
  return std::make_shared<Hamiltonian>(s.grid, pot);
}

}  // namespace

ControlProblem::ControlProblem(const ProblemSpec &spec_)
  : spec(spec_),
    time(spec_.duration, spec_.intervals),
    f_eps(GaussianFilter(spec_.omega0, spec_.source_width, time)),
    space(MakeReducedSpace(f_eps, spec_.reduced_threshold)),
    f_tilde(RestrictedScaledFilter(f_eps, space, spec_.alpha)),
    f_c(MakeTargetFilter(spec_, time)),
    weights(IntegrationWeights(time)),
    ham(MakeHamiltonian(spec_))
{
  ground = SolveGroundState(spec.grid, ham->Potential());
  prop = std::make_shared<Propagator>(ham, spec.propagation);
}

double JMax(const std::vector<double> &series, const FilterFunction &f_c, const TimeGrid &grid)
{
  const SpectralField g = Dct1Forward(TemporalField{series}, grid);
  if (f_c.samples.size() != g.coeffs.size())
  {
    throw InvalidInput("JMax: filter length mismatch");
  }
  const auto w = IntegrationWeights(grid);
  double acc = 0.0;
  for (std::size_t j = 0; j < g.coeffs.size(); j++)
  {
    acc += f_c.samples[j] * g.coeffs[j] * g.coeffs[j] * w[j];
  }
  return 0.5 * acc;
}

double JEnergy(const SpectralField &eps, const FilterFunction &ftilde, const TimeGrid &grid)
{
  if (eps.coeffs.size() != ftilde.samples.size() ||
      eps.coeffs.size() != static_cast<std::size_t>(grid.Size()))
  {
    throw InvalidInput("JEnergy: length mismatch");
  }
  const auto w = IntegrationWeights(grid);
  double acc = 0.0;
  for (std::size_t j = 0; j < eps.coeffs.size(); j++)
  {
    if (ftilde.samples[j] > 0.0)
    {
      acc += eps.coeffs[j] * eps.coeffs[j] * w[j] / ftilde.samples[j];
    }
    else if (eps.coeffs[j] != 0.0)
    {
      throw ContractError("JEnergy: nonzero coefficient outside the filter support at j = " +
                          std::to_string(j));
    }
  }
  return -acc;
}

double Fluence(const TemporalField &eps_t, const TimeGrid &grid)
{
  if (eps_t.samples.size() != static_cast<std::size_t>(grid.Size()))
  {
    throw InvalidInput("Fluence: length mismatch");
  }
  double acc = 0.0;
  for (int k = 0; k < grid.Size(); k++)
  {
    acc += EndpointFactor(k, grid.Intervals()) * eps_t.samples[k] * eps_t.samples[k];
  }
  return acc * grid.Step();
}

void CheckBoundary(const TemporalField &eps_t)
{
  double peak = 0.0;
  for (double v : eps_t.samples)
  {
    peak = std::max(peak, std::abs(v));
  }
  const double e0 = std::abs(eps_t.samples.front());
  const double eT = std::abs(eps_t.samples.back());
  if (e0 > 1e-12 * peak || eT > 1e-12 * peak)
  {
    throw ContractError("boundary violation: |eps(0)| = " + std::to_string(e0) +
                        ", |eps(T)| = " + std::to_string(eT) + ", peak " + std::to_string(peak));
  }
}

Evaluation EvaluateField(const SpectralField &eps, const ControlProblem &problem,
                         const EvaluateOptions &options)
{
  const TimeGrid &time = problem.Time();
  Evaluation ev;
  ev.eps = eps;
  ev.eps_t = Dct1Inverse(eps, time);
  if (options.check_boundary)
  {
    CheckBoundary(ev.eps_t);
  }
  const FieldSeries series(eps, time);
  ev.forward = problem.Prop().Forward(problem.Ground().psi, series, time, options.schedule);
  ev.accel = ExpectationSeries(ev.forward, problem.Ham().Potential().accel, problem.Dx());
  ev.accel_spectrum = Dct1Forward(TemporalField{ev.accel}, time);

  auto &t = ev.terms;
  t.j_max = JMax(ev.accel, problem.TargetFilter(), time);
  t.j_energy = JEnergy(eps, problem.ScaledFilter(), time);
  t.survival = SurvivalProbability(ev.forward);
  t.j_ion = Sigma(t.survival, problem.Spec().sigma);
  t.j_total = t.j_max + t.j_energy + t.j_ion;
  t.fluence = Fluence(ev.eps_t, time);
  for (double v : ev.eps_t.samples)
  {
    t.peak_field = std::max(t.peak_field, std::abs(v));
  }
  return ev;
}

Evaluation Evaluate(const Eigen::VectorXd &x, const ControlProblem &problem,
                    const EvaluateOptions &options)
{
  return EvaluateField(problem.Space().ToFull(x), problem, options);
}

GradientResult Gradient(const Eigen::VectorXd &x, const ControlProblem &problem,
                        const EvaluateOptions &options)
{
  const TimeGrid &time = problem.Time();
  const ReducedSpace &space = problem.Space();
  GradientResult res;
  res.eval = Evaluate(x, problem, options);
  const Evaluation &ev = res.eval;

  // Adjoint sources: terminal ionization term and nodal impulses from J_max.
  const double sp = SigmaPrime(ev.terms.survival, problem.Spec().sigma);
  SpectralField weighted = ev.accel_spectrum;
  for (int j = 0; j < time.Size(); j++)
  {
    weighted.coeffs[j] *= problem.TargetFilter().samples[j];
  }
  const TemporalField s = Dct1Inverse(weighted, time);
  SourceTerm source;
  source.impulses.resize(time.Size());
  for (int k = 0; k < time.Size(); k++)
  {
    source.impulses[k] = time.Step() * EndpointFactor(k, time.Intervals()) * s.samples[k];
  }
  source.op = problem.Ham().Potential().accel;
  source.forward = &ev.forward;

  const Wavefunction chiT = sp * ev.forward.states.back();
  const FieldSeries series(ev.eps, time);
  BackwardResult back = problem.Prop().Backward(chiT, series, time, &source, true);

  const int nr = space.Size();
  std::vector<double> omega(nr), proj(nr);
  for (int r = 0; r < nr; r++)
  {
    omega[r] = time.Omega(space.Indices()[r]);
  }
  kernels::CosineProjectionParallel(omega, back.quad_times, back.quad_values, proj);
  const double c = std::sqrt(2.0 / std::numbers::pi);

  const auto &ft = problem.ScaledFilter().samples;
  const auto &w = problem.Weights();
  SpectralField unc;
  unc.coeffs.assign(time.Size(), 0.0);
  Eigen::VectorXd big_g(nr);
  for (int r = 0; r < nr; r++)
  {
    const int j = space.Indices()[r];
    big_g[r] = c * proj[r];
    unc.coeffs[j] = ft[j] * big_g[r];
  }
  const ProjectedField el = BoundaryProject(unc, problem.ScaledFilter(), time);
  res.eps_el = el.field;
  res.multipliers = el.multipliers;

  res.raw.resize(nr);
  res.gradient.resize(nr);
  for (int r = 0; r < nr; r++)
  {
    const int j = space.Indices()[r];
    const double cosT = (j % 2 == 0) ? 1.0 : -1.0;
    res.raw[r] = 2.0 * w[j] * (x[r] / ft[j] - big_g[r]);
    res.gradient[r] =
        res.raw[r] + 2.0 * w[j] * (el.multipliers.lambda0 + el.multipliers.lambdaT * cosT);
  }
  res.adjoint = std::move(back.adjoint);
  return res;
}

}  // namespace hhgoct
