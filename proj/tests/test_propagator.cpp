// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "hhgoct/absorber.hpp"
#include "hhgoct/errors.hpp"
#include "hhgoct/propagator.hpp"

using namespace hhgoct;
using cd = std::complex<double>;

namespace
{

struct Small
{
  SpatialGrid grid{-30.0, 30.0, 128};
  PotentialModel pot = ForceMask(MakePotential(grid), grid, 10.0);
  std::shared_ptr<Hamiltonian> ham;
  TimeGrid time{20.0, 32};
  SpectralField eps;

  explicit Small(bool cap)
  {
    CapSpec spec = DefaultCap();
    spec.width = 10.0;
    ham = cap ? std::make_shared<Hamiltonian>(grid, pot, BuildCap(spec, grid))
              : std::make_shared<Hamiltonian>(grid, pot);
    eps.coeffs.assign(time.Size(), 0.0);
    eps.coeffs[3] = 0.4;
    eps.coeffs[6] = -0.25;
    eps.coeffs[7] = 0.1;
  }
};

// Classical fourth-order Runge-Kutta on i d/dt psi = H(t) psi.
Wavefunction Rk4(const Hamiltonian &h, Wavefunction psi, double t0, double t1, int steps,
                 const FieldSeries &field)
{
  const double dt = (t1 - t0) / steps;
  const cd mi(0.0, -1.0);
  for (int s = 0; s < steps; s++)
  {
    const double t = t0 + s * dt;
    const Wavefunction k1 = mi * h.Apply(psi, field(t));
    const Wavefunction k2 = mi * h.Apply(psi + 0.5 * dt * k1, field(t + 0.5 * dt));
    const Wavefunction k3 = mi * h.Apply(psi + 0.5 * dt * k2, field(t + 0.5 * dt));
    const Wavefunction k4 = mi * h.Apply(psi + dt * k3, field(t + dt));
    psi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi;
}

Wavefunction Packet(const SpatialGrid &g, double x0, double k0, double sigma)
{
  Wavefunction psi(g.Points());
  const double norm = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
  for (int i = 0; i < g.Points(); i++)
  {
    const double u = g.X(i) - x0;
    psi[i] = norm * std::exp(cd(-u * u / (4.0 * sigma * sigma), k0 * u));
  }
  return psi;
}

// Free-particle evolution of Packet(x0, k0, sigma) at time t.
cd FreePacket(double x, double t, double x0, double k0, double sigma)
{
  const cd s = 1.0 + cd(0.0, t / (2.0 * sigma * sigma));
  const double u = x - x0;
  const cd arg = -(u - k0 * t) * (u - k0 * t) / (4.0 * sigma * sigma * s) + cd(0.0, k0 * u) -
                 cd(0.0, 0.5 * k0 * k0 * t);
  return std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25) / std::sqrt(s) * std::exp(arg);
}

}  // namespace

TEST_CASE("composition coefficients")
{
  for (int order : {2, 4, 6, 8})
  {
    const auto g = CompositionCoefficients(order);
    double sum = 0.0, cube = 0.0;
    for (double v : g)
    {
      sum += v;
      cube += v * v * v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    if (order >= 4)
    {
      CHECK(cube == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(CompositionCoefficients(5), InvalidInput);
}

TEST_CASE("split-operator steps agree with a Runge-Kutta reference")
{
  for (bool cap : {false, true})
  {
    Small s(cap);
    const FieldSeries field(s.eps, s.time);
    const Propagator prop(s.ham, PropagationSettings{});
    const Wavefunction psi0 = Packet(s.grid, -3.0, 0.8, 2.0);
    Wavefunction a = psi0;
    prop.Advance(a, 0.0, 5.0, 160, field, false);
    const Wavefunction b = Rk4(*s.ham, psi0, 0.0, 5.0, 20000, field);
    CHECK((a - b).norm() < 1e-8 * psi0.norm());

    SUBCASE("backward step inverts the forward step")
    {
      if (!cap)
      {
        Wavefunction c = a;
        prop.Advance(c, 5.0, 0.0, 160, field, false);
        CHECK((c - psi0).norm() < 1e-12 * psi0.norm());
      }
    }
    SUBCASE("adjoint direction integrates the conjugate Hamiltonian")
    {
      Wavefunction c = psi0;
      prop.Advance(c, 5.0, 2.0, 120, field, true);
      const Hamiltonian &h = *s.ham;
      const double dt = -3.0 / 20000;
      Wavefunction r = psi0;
      const cd mi(0.0, -1.0);
      for (int i = 0; i < 20000; i++)
      {
        const double t = 5.0 + i * dt;
        const Wavefunction k1 = mi * h.ApplyAdjoint(r, field(t));
        const Wavefunction k2 = mi * h.ApplyAdjoint(r + 0.5 * dt * k1, field(t + 0.5 * dt));
        const Wavefunction k3 = mi * h.ApplyAdjoint(r + 0.5 * dt * k2, field(t + 0.5 * dt));
        const Wavefunction k4 = mi * h.ApplyAdjoint(r + dt * k3, field(t + dt));
        r += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      CHECK((c - r).norm() < 1e-8 * psi0.norm());
    }
  }
}

TEST_CASE("free Gaussian matches the analytic spreading")
{
  const SpatialGrid g = SpatialGrid::Standard();
  PotentialModel pot;
  pot.v0 = Eigen::ArrayXd::Zero(g.Points());
  pot.accel = pot.v0;
  pot.coupling = g.Positions();
  pot.window = Eigen::ArrayXd::Ones(g.Points());
  const auto ham = std::make_shared<Hamiltonian>(g, pot);
  const Propagator prop(ham, PropagationSettings{});
  const double x0 = -20.0, k0 = 0.7, sigma = 3.0, t = 50.0;
  Wavefunction psi = Packet(g, x0, k0, sigma);
  prop.Advance(psi, 0.0, t, 5, FieldSeries(), false);
  double err = 0.0;
  for (int i = 0; i < g.Points(); i++)
  {
    err += std::norm(psi[i] - FreePacket(g.X(i), t, x0, k0, sigma));
  }
  CHECK(std::sqrt(err * g.Spacing()) <= 1e-7);
}

TEST_CASE("norm is conserved without absorber and decays with it")
{
  for (bool cap : {false, true})
  {
    Small s(cap);
    const Propagator prop(s.ham, PropagationSettings{});
    const Trajectory tr = prop.Forward(Packet(s.grid, 0.0, 2.0, 1.5), FieldSeries(s.eps, s.time),
                                       s.time);
    CHECK(tr.states.size() == 33);
    CHECK(tr.non_hermitian == cap);
    CHECK(tr.norms.front() == doctest::Approx(1.0).epsilon(1e-12));
    if (cap)
    {
      CHECK(tr.norms.back() < 0.5);
      for (std::size_t k = 1; k < tr.norms.size(); k++)
      {
        CHECK(tr.norms[k] <= tr.norms[k - 1] * (1.0 + 1e-12));
      }
    }
    else
    {
      CHECK(tr.norms.back() == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(SurvivalProbability(tr) == tr.norms.back());
  }
}

TEST_CASE("fixed schedules converge at the composition order")
{
  Small s(true);
  const FieldSeries field(s.eps, s.time);
  const Wavefunction psi0 = Packet(s.grid, -2.0, 0.5, 2.0);
  for (int order : {2, 4, 6})
  {
    PropagationSettings ps;
    ps.order = order;
    const Propagator prop(s.ham, ps);
    auto run = [&](int m)
    {
      std::vector<int> sch(s.time.Intervals(), m);
      return prop.Forward(psi0, field, s.time, &sch).states.back();
    };
    const Wavefunction ref = run(256);
    const double e1 = (run(2) - ref).norm(), e2 = (run(4) - ref).norm();
    const double observed = std::log2(e1 / e2);
    MESSAGE("order " << order << " observed " << observed);
    // Coarse steps can look better than nominal, never worse.
    CHECK(observed > order - 0.6);
    CHECK(observed < order + 1.5);
  }
}

TEST_CASE("adaptive control meets its tolerance")
{
  Small s(true);
  const FieldSeries field(s.eps, s.time);
  const Wavefunction psi0 = Packet(s.grid, -2.0, 0.5, 2.0);
  PropagationSettings ps;
  ps.tolerance = 1e-10;
  const Propagator prop(s.ham, ps);
  const Trajectory tr = prop.Forward(psi0, field, s.time);
  std::vector<int> fine = tr.substeps;
  for (int &m : fine)
  {
    m *= 4;
  }
  const Trajectory ref = prop.Forward(psi0, field, s.time, &fine);
  CHECK((tr.states.back() - ref.states.back()).norm() < 1e-8 * psi0.norm());

  PropagationSettings tight = ps;
  tight.max_substeps = 2;
  tight.initial_substeps = 1;
  tight.tolerance = 1e-14;
  CHECK_THROWS_AS(Propagator(s.ham, tight).Forward(psi0, field, s.time), PropagationError);
}

TEST_CASE("adjoint trajectory satisfies the jump identity")
{
  Small s(true);
  const FieldSeries field(s.eps, s.time);
  PropagationSettings ps;
  ps.tolerance = 1e-11;
  const Propagator prop(s.ham, ps);
  const Trajectory fwd = prop.Forward(Packet(s.grid, 0.0, 0.3, 2.0), field, s.time);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  SourceTerm src;
  for (int k = 0; k < s.time.Size(); k++)
  {
    src.impulses.push_back(n(rng));
  }
  src.op = s.ham->Potential().accel;
  src.forward = &fwd;
  const Wavefunction chiT = 0.3 * fwd.states.back();
  const BackwardResult back = prop.Backward(chiT, field, s.time, &src, false);
  const double dx = s.grid.Spacing();
  const int nt = s.time.Intervals();
  const double cN = Expectation(fwd.states[nt], src.op, dx);
  const cd top = Inner(back.adjoint.states[nt], fwd.states[nt], dx);
  CHECK(std::abs(top - (0.3 * Norm2(fwd.states[nt], dx) + src.impulses[nt] * cN)) < 1e-12);
  for (int k = 0; k < nt; k++)
  {
    const cd lhs = Inner(back.adjoint.states[k], fwd.states[k], dx) -
                   Inner(back.adjoint.states[k + 1], fwd.states[k + 1], dx);
    const double rhs = src.impulses[k] * Expectation(fwd.states[k], src.op, dx);
    CHECK(std::abs(lhs - rhs) < 1e-8);
  }
}

TEST_CASE("expectation series rejects inconsistent operators")
{
  Small s(false);
  const Propagator prop(s.ham, PropagationSettings{});
  const Trajectory tr = prop.Forward(Packet(s.grid, 1.0, 0.0, 2.0), FieldSeries(s.eps, s.time),
                                     s.time);
  const auto c = ExpectationSeries(tr, s.pot.accel, s.grid.Spacing());
  CHECK(c.size() == tr.states.size());
  CHECK(c[5] == doctest::Approx(Expectation(tr.states[5], s.pot.accel, s.grid.Spacing())));
  CHECK_THROWS(ExpectationSeries(tr, Eigen::ArrayXd::Zero(3), s.grid.Spacing()));
}
