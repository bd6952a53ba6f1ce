// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance checks. One line per criterion:
//   [Cn] PASS|FAIL|SKIP  <measured values>  (<seconds> s)
// Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include "hhgoct/absorber.hpp"
#include "hhgoct/config.hpp"
#include "hhgoct/experiment.hpp"
#include "hhgoct/optimizer.hpp"
#include "hhgoct/propagator.hpp"
#include "hhgoct/spectral.hpp"

using namespace hhgoct;
namespace fs = std::filesystem;
using cd = std::complex<double>;

namespace
{

// Pinned tolerances.
constexpr double kRoundtripTol = 1e-12;
constexpr double kParsevalTol = 1e-10;
constexpr double kGap = 0.395, kGapTol = 0.002;
constexpr double kFidelityTol = 1e-8;
constexpr double kFreeGaussianTol = 1e-7;
constexpr double kOrder = 6.0, kOrderTol = 0.5;
constexpr double kGradientTol = 1e-4;
constexpr int kGradientCoords = 10;
constexpr double kEpsMax = 0.15;
constexpr double kCapRatio = 10.0;
constexpr double kTransitTol = 1e-4;
constexpr double kSurvival13 = 0.926, kSurvival13Tol = 0.01;
constexpr double kFluence13 = 0.992, kFluence13Tol = 0.05;
constexpr double kJmaxRatio = 100.0;
constexpr double kDoubledTol = 1e-2;
constexpr double kEvenHarmonicFactor = 5.0;
constexpr double kBeta2Fluence = 2.65;
constexpr double kSurvivalBeta2 = 0.783, kSurvivalBeta2Tol = 0.02;
constexpr double kFluenceBeta2Tol = 0.1;

// Desk scale: shorter pulse, same spatial grid. The default guess is scaled up because
// at this duration it starts below the zero-field value of the functional.
constexpr double kDeskDuration = 250.0;
constexpr int kDeskIntervals = 256;
constexpr double kDeskGuessScale = 5.0;

struct Result
{
  explicit Result(int id = 0) : id(id) {}
  int id;
  enum { Pass, Fail, Skip } status = Fail;
  std::string detail;
  double seconds = 0.0;
};

double Seconds(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ProblemSpec DeskSpec(int harmonic)
{
  ProblemSpec s;
  s.duration = kDeskDuration;
  s.intervals = kDeskIntervals;
  s.harmonic = harmonic;
  return s;
}

ProblemSpec FullSpec(int harmonic)
{
  ProblemSpec s;
  s.harmonic = harmonic;
  return s;
}

double PeakOf(const TemporalField &f)
{
  double m = 0.0;
  for (double v : f.samples)
  {
    m = std::max(m, std::abs(v));
  }
  return m;
}

struct DeskRun
{
  int harmonic = 0;
  std::unique_ptr<ControlProblem> problem;
  OptimizeOutcome outcome;
  double seconds = 0.0;
};

class Acceptance
{
public:
  Acceptance(std::string out, bool slow, std::string full_dir)
      : out_dir(std::move(out)), slow(slow), full_dir(std::move(full_dir))
  {
  }

  Result C1();
  Result C2();
  Result C3();
  Result C4();
  Result C5();
  Result C6();
  Result C7();
  Result C8();
  Result C9();
  Result C10();

private:
  const std::vector<DeskRun> &DeskRuns();
  // Stored or freshly optimized full-scale n = 13 pulse; empty if unavailable.
  struct FullPulse
  {
    std::unique_ptr<ControlProblem> problem;
    SpectralField eps;
    Evaluation eval;
    std::string source;
    std::optional<RunRecord> record;
    nlohmann::json stored_record;
  };
  FullPulse *Full();

  std::string out_dir;
  bool slow;
  std::string full_dir;
  std::vector<DeskRun> desk;
  std::optional<FullPulse> full;
  bool full_tried = false;
};

const std::vector<DeskRun> &Acceptance::DeskRuns()
{
  if (!desk.empty())
  {
    return desk;
  }
  for (int n : {13, 14, 15})
  {
    const auto t0 = std::chrono::steady_clock::now();
    DeskRun r;
    r.harmonic = n;
    r.problem = std::make_unique<ControlProblem>(DeskSpec(n));
    ExperimentConfig c;
    c.problem = DeskSpec(n);
    c.guess_scale = kDeskGuessScale;
    r.outcome = RunOptimization(*r.problem, c);
    r.seconds = Seconds(t0);
    const fs::path dir = fs::path(out_dir) / fmt::format("desk{}", n);
    c.out_dir = dir.string();
    WriteOptimizeArtifacts(c.out_dir, r.outcome, *r.problem, c);
    fmt::print(stderr, "  desk n = {}: {} after {} iterations, J_max {:.4e}, {:.0f} s\n", n,
               r.outcome.record.termination, r.outcome.record.iterations.size() - 1,
               r.outcome.final.terms.j_max, r.seconds);
    desk.push_back(std::move(r));
  }
  return desk;
}

Acceptance::FullPulse *Acceptance::Full()
{
  if (full_tried)
  {
    return full ? &*full : nullptr;
  }
  full_tried = true;
  FullPulse p;
  p.problem = std::make_unique<ControlProblem>(FullSpec(13));
  if (slow)
  {
    ExperimentConfig c;
    c.optimizer.on_iteration = [](const IterationRecord &r)
    {
      fmt::print(stderr, "  full iter {:3d}  J {:+.6e}  surv {:.5f}\n", r.iteration,
                 r.terms.j_total, r.terms.survival);
    };
    OptimizeOutcome o = RunOptimization(*p.problem, c);
    c.out_dir = (fs::path(out_dir) / "full13").string();
    WriteOptimizeArtifacts(c.out_dir, o, *p.problem, c);
    p.eps = o.final.eps;
    p.eval = std::move(o.final);
    p.record = std::move(o.record);
    p.source = "optimized now";
  }
  else
  {
    const fs::path field = fs::path(full_dir) / "field.csv";
    if (full_dir.empty() || !fs::exists(field))
    {
      return nullptr;
    }
    p.eps = ReadFieldCsv(field.string(), *p.problem);
    p.eval = EvaluateField(p.eps, *p.problem);
    p.source = "stored " + field.string();
    const fs::path rec = fs::path(full_dir) / "run_record.json";
    if (fs::exists(rec))
    {
      std::ifstream in(rec);
      p.stored_record = nlohmann::json::parse(in);
    }
  }
  full = std::move(p);
  return &*full;
}

// DCT-1 involution and weighted Parseval on random signals.
Result Acceptance::C1()
{
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst_rt = 0.0, worst_p = 0.0;
  for (int n : {16, 256, 1024})
  {
    const TimeGrid grid(1000.0, n);
    for (int trial = 0; trial < 5; trial++)
    {
      TemporalField f;
      for (int k = 0; k <= n; k++)
      {
        f.samples.push_back(g(rng));
      }
      const SpectralField c = Dct1Forward(f, grid);
      const TemporalField back = Dct1Inverse(c, grid);
      double num = 0.0, den = 0.0, lhs = 0.0, rhs = 0.0;
      const auto w = IntegrationWeights(grid);
      for (int k = 0; k <= n; k++)
      {
        num += (back.samples[k] - f.samples[k]) * (back.samples[k] - f.samples[k]);
        den += f.samples[k] * f.samples[k];
        lhs += EndpointFactor(k, n) * f.samples[k] * f.samples[k] * grid.Step();
        rhs += w[k] * c.coeffs[k] * c.coeffs[k];
      }
      worst_rt = std::max(worst_rt, std::sqrt(num / den));
      worst_p = std::max(worst_p, std::abs(lhs - rhs) / lhs);
    }
  }
  Result r(1);
  r.seconds = Seconds(t0);
  const bool ok = worst_rt <= kRoundtripTol && worst_p <= kParsevalTol && r.seconds < 1.0;
  r.status = ok ? Result::Pass : Result::Fail;
  r.detail = fmt::format("roundtrip {:.2e} (<= {:.0e}), Parseval {:.2e} (<= {:.0e}), runtime < 1 s",
                         worst_rt, kRoundtripTol, worst_p, kParsevalTol);
  return r;
}

// Bohr frequency of the model atom on the default grid.
Result Acceptance::C2()
{
  const auto t0 = std::chrono::steady_clock::now();
  const ProblemSpec s = FullSpec(13);
  const GroundState gs = SolveGroundState(s.grid, ForceMask(MakePotential(s.grid), s.grid,
                                                            s.absorber_width));
  Result r(2);
  r.seconds = Seconds(t0);
  const double gap = gs.e1 - gs.e0;
  r.status = std::abs(gap - kGap) <= kGapTol && r.seconds < 60.0 ? Result::Pass : Result::Fail;
  r.detail = fmt::format("E1 - E0 = {:.6f} (target {} +- {}), E0 = {:.6f}, residual {:.1e}", gap,
                         kGap, kGapTol, gs.e0, gs.residual);
  return r;
}

// Propagator: stationary phase, free spreading, convergence order.
Result Acceptance::C3()
{
  const auto t0 = std::chrono::steady_clock::now();
  double fidelity = 0.0;
  {
    const ControlProblem p(FullSpec(13));
    const GroundState &gs = p.Ground();
    const SpectralField zero{std::vector<double>(p.Time().Size(), 0.0)};
    const Trajectory tr = p.Prop().Forward(gs.psi, FieldSeries(zero, p.Time()), p.Time());
    const double t = p.Time().Duration();
    fidelity = (std::exp(cd(0.0, gs.e0 * t)) * Inner(gs.psi, tr.states.back(), p.Dx())).real();
  }

  double free_err = 0.0;
  {
    const SpatialGrid g = SpatialGrid::Standard();
    PotentialModel pot;
    pot.v0 = Eigen::ArrayXd::Zero(g.Points());
    pot.accel = pot.v0;
    pot.coupling = g.Positions();
    pot.window = Eigen::ArrayXd::Ones(g.Points());
    const Propagator prop(std::make_shared<Hamiltonian>(g, pot), PropagationSettings{});
    const double x0 = -20.0, k0 = 0.7, sigma = 3.0, t = 50.0;
    Wavefunction psi(g.Points());
    const double nrm = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
    for (int i = 0; i < g.Points(); i++)
    {
      const double u = g.X(i) - x0;
      psi[i] = nrm * std::exp(cd(-u * u / (4.0 * sigma * sigma), k0 * u));
    }
    prop.Advance(psi, 0.0, t, 5, FieldSeries(), false);
    double acc = 0.0;
    for (int i = 0; i < g.Points(); i++)
    {
      const cd s = 1.0 + cd(0.0, t / (2.0 * sigma * sigma));
      const double u = g.X(i) - x0;
      const cd arg = -(u - k0 * t) * (u - k0 * t) / (4.0 * sigma * sigma * s) + cd(0.0, k0 * u) -
                     cd(0.0, 0.5 * k0 * k0 * t);
      acc += std::norm(psi[i] - nrm / std::sqrt(s) * std::exp(arg));
    }
    free_err = std::sqrt(acc * g.Spacing());
  }

  // Step halving under the desk guess field.
  std::vector<double> errors;
  {
    const ControlProblem p(DeskSpec(13));
    SpectralField guess = DefaultUnconstrainedGuess(p.Time());
    for (double &v : guess.coeffs)
    {
      v *= kDeskGuessScale;
    }
    const SpectralField eps = p.Space().ToFull(MakeInitialGuess(guess, p).x);
    const FieldSeries field(eps, p.Time());
    auto run = [&](int m)
    {
      const std::vector<int> sch(p.Time().Intervals(), m);
      return p.Prop().Forward(p.Ground().psi, field, p.Time(), &sch).states.back();
    };
    const Wavefunction ref = run(64);
    for (int m : {4, 8, 16})
    {
      errors.push_back((run(m) - ref).norm() * std::sqrt(p.Dx()));
    }
  }
  const double o1 = std::log2(errors[0] / errors[1]);
  const double o2 = std::log2(errors[1] / errors[2]);

  Result r(3);
  r.seconds = Seconds(t0);
  const bool ok = fidelity >= 1.0 - kFidelityTol && free_err <= kFreeGaussianTol &&
                  std::abs(o2 - kOrder) <= kOrderTol && r.seconds < 300.0;
  r.status = ok ? Result::Pass : Result::Fail;
  r.detail = fmt::format(
      "fidelity 1 - {:.2e} (>= 1 - {:.0e}), free Gaussian {:.2e} (<= {:.0e}), "
      "order {:.2f} (4->8) {:.2f} (8->16, {} +- {})",
      1.0 - fidelity, kFidelityTol, free_err, kFreeGaussianTol, o1, o2, kOrder, kOrderTol);
  return r;
}

// Adjoint gradient against central differences on random reduced coordinates.
Result Acceptance::C4()
{
  const auto t0 = std::chrono::steady_clock::now();
  const ControlProblem p(DeskSpec(13));
  SpectralField guess = DefaultUnconstrainedGuess(p.Time());
  for (double &v : guess.coeffs)
  {
    v *= kDeskGuessScale;
  }
  const Eigen::VectorXd x = MakeInitialGuess(guess, p).x;
  EvaluateOptions loose;
  loose.check_boundary = false;
  const GradientResult g = Gradient(x, p, loose);
  EvaluateOptions fixed = loose;
  fixed.schedule = &g.eval.forward.substeps;

  // d(-J_E)/dx_r in closed form, to separate the propagated part.
  const auto &idx = p.Space().Indices();
  Eigen::VectorXd energy(x.size());
  for (int r = 0; r < x.size(); r++)
  {
    const int j = idx[r];
    energy[r] = 2.0 * p.Weights()[j] * x[r] / p.ScaledFilter().samples[j];
  }

  std::mt19937_64 rng(4);
  std::vector<int> coords(x.size());
  std::iota(coords.begin(), coords.end(), 0);
  std::shuffle(coords.begin(), coords.end(), rng);
  coords.resize(std::min<std::size_t>(kGradientCoords, coords.size()));

  const double h = 1e-6 * std::max(1.0, x.lpNorm<Eigen::Infinity>());
  double worst = 0.0, worst_dyn = 0.0;
  for (int r : coords)
  {
    Eigen::VectorXd xp = x, xm = x;
    xp[r] += h;
    xm[r] -= h;
    const double jp = Evaluate(xp, p, fixed).terms.j_total;
    const double jm = Evaluate(xm, p, fixed).terms.j_total;
    const double fd = -(jp - jm) / (2.0 * h);
    const double an = g.raw[r];
    worst = std::max(worst, std::abs(fd - an) / std::abs(an));
    worst_dyn = std::max(worst_dyn, std::abs(fd - an) / std::abs(an - energy[r]));
  }
  Result res(4);
  res.seconds = Seconds(t0);
  const bool ok = worst <= kGradientTol && worst_dyn <= kGradientTol && res.seconds < 1800.0;
  res.status = ok ? Result::Pass : Result::Fail;
  res.detail = fmt::format(
      "{} coordinates of {}, h = {:.1e}: max rel error {:.2e}, field-dependent part {:.2e} (<= {:.0e})",
      coords.size(), x.size(), h, worst, worst_dyn, kGradientTol);
  return res;
}

// Every iterate: zero boundary values, peak bound, nothing outside the band.
Result Acceptance::C5()
{
  const auto t0 = std::chrono::steady_clock::now();
  int checked = 0, bad = 0;
  double worst_boundary = 0.0, worst_peak = 0.0, worst_outside = 0.0;
  bool monotone = true;
  auto scan = [&](const RunRecord &rec)
  {
    for (std::size_t i = 0; i < rec.iterations.size(); i++)
    {
      const auto &it = rec.iterations[i];
      checked++;
      bad += !it.feasibility.ok;
      worst_boundary = std::max(worst_boundary, it.feasibility.boundary);
      worst_peak = std::max(worst_peak, it.feasibility.peak);
      worst_outside = std::max(worst_outside, it.feasibility.outside_band);
      if (i > 0 && it.value > rec.iterations[i - 1].value)
      {
        monotone = false;
      }
    }
  };
  for (const DeskRun &d : DeskRuns())
  {
    for (const auto &prep : d.outcome.preparation)
    {
      scan(prep);
    }
    scan(d.outcome.record);
  }
  std::string extra;
  if (FullPulse *pp = Full())
  {
    if (pp->record)
    {
      scan(*pp->record);
    }
    else if (pp->stored_record.contains("iterations"))
    {
      for (const auto &it : pp->stored_record["iterations"])
      {
        checked++;
        bad += !it["feasible"].get<bool>();
        worst_boundary = std::max(worst_boundary, it["boundary"].get<double>());
        worst_outside = std::max(worst_outside, it["outside_band"].get<double>());
      }
    }
    const double peak = PeakOf(pp->eval.eps_t);
    worst_peak = std::max(worst_peak, peak);
    bad += peak > kEpsMax * (1.0 + 1e-12);
    extra = ", full pulse included";
  }
  Result r(5);
  r.seconds = Seconds(t0);
  r.status = bad == 0 && checked > 0 && monotone ? Result::Pass : Result::Fail;
  r.detail = fmt::format(
      "{} iterates, {} infeasible: boundary {:.1e} (<= 1e-12 of peak), peak {:.4f} (<= {}), "
      "outside band {:.1e}, J monotone {}{}",
      checked, bad, worst_boundary, worst_peak, kEpsMax, worst_outside, monotone ? "yes" : "no",
      extra);
  return r;
}

// Absorber: stationary reflection plus transmission, and a dynamic transit test.
Result Acceptance::C6()
{
  const auto t0 = std::chrono::steady_clock::now();
  const CapObjectiveSettings s;
  double base = 0.0;
  TuneQuadraticBaseline(40.0, s, &base);
  const CapSpec cap = DefaultCap();
  const double opt = CapObjective(cap, s);

  // Free packets launched from the center; periodic wrap-around sends the transmitted part
  // into the opposite absorber.
  const SpatialGrid g = SpatialGrid::Standard();
  PotentialModel pot;
  pot.v0 = Eigen::ArrayXd::Zero(g.Points());
  pot.accel = pot.v0;
  pot.coupling = g.Positions();
  pot.window = Eigen::ArrayXd::Ones(g.Points());
  const auto ham = std::make_shared<Hamiltonian>(g, pot, BuildCap(cap, g));
  PropagationSettings ps;
  ps.tolerance = 1e-10;
  const Propagator prop(ham, ps);
  const double interior = 0.5 * g.Length() - cap.width;
  double worst = 0.0;
  std::string per_k;
  for (double k0 : {0.5, 1.0, 2.0})
  {
    const double sigma = 10.0;
    const double t_end = 2.0 * (interior + cap.width) / (k0 - 3.0 / (2.0 * sigma)) + 200.0;
    Wavefunction psi(g.Points());
    const double nrm = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
    for (int i = 0; i < g.Points(); i++)
    {
      psi[i] = nrm * std::exp(cd(-g.X(i) * g.X(i) / (4.0 * sigma * sigma), k0 * g.X(i)));
    }
    const TimeGrid tg(t_end, static_cast<int>(std::ceil(t_end)));
    const Trajectory tr = prop.Forward(psi, FieldSeries(), tg);
    double left = 0.0;
    for (int i = 0; i < g.Points(); i++)
    {
      if (std::abs(g.X(i)) < interior)
      {
        left += std::norm(tr.states.back()[i]);
      }
    }
    left *= g.Spacing();
    worst = std::max(worst, left);
    per_k += fmt::format(" k={} {:.1e}", k0, left);
  }
  Result r(6);
  r.seconds = Seconds(t0);
  const bool ok = opt * kCapRatio <= base && worst <= kTransitTol && r.seconds < 600.0;
  r.status = ok ? Result::Pass : Result::Fail;
  r.detail = fmt::format(
      "max(R+T) {:.2e} vs quadratic {:.2e} (ratio {:.0f}, >= {}), interior norm after transit{} "
      "(<= {:.0e})",
      opt, base, base / opt, kCapRatio, per_k, kTransitTol);
  return r;
}

// Full-scale n = 13.
Result Acceptance::C7()
{
  const auto t0 = std::chrono::steady_clock::now();
  Result r(7);
  FullPulse *pp = Full();
  if (!pp)
  {
    r.status = Result::Skip;
    r.detail = "no full-scale pulse; run with --slow or --full-dir";
    return r;
  }
  const auto &t = pp->eval.terms;
  const double beta = MatchBeta(MatchKind::Fluence, t.fluence, *pp->problem);
  const Evaluation ref = EvaluateField(BuildReferencePulse(beta, *pp->problem), *pp->problem);
  const double ratio = t.j_max / ref.terms.j_max;
  r.seconds = Seconds(t0);
  const bool ok = std::abs(t.survival - kSurvival13) <= kSurvival13Tol &&
                  std::abs(t.fluence - kFluence13) <= kFluence13Tol && ratio >= kJmaxRatio &&
                  PeakOf(pp->eval.eps_t) <= kEpsMax * (1.0 + 1e-12);
  r.status = ok ? Result::Pass : Result::Fail;
  r.detail = fmt::format(
      "{}: survival {:.4f} ({} +- {}), fluence {:.4f} ({} +- {}), J_max {:.3e} = {:.0f} x "
      "fluence-matched reference {:.3e} (>= {})",
      pp->source, t.survival, kSurvival13, kSurvival13Tol, t.fluence, kFluence13, kFluence13Tol,
      t.j_max, ratio, ref.terms.j_max, kJmaxRatio);
  return r;
}

// Doubled box for every optimized pulse.
Result Acceptance::C8()
{
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string per;
  for (const DeskRun &d : DeskRuns())
  {
    const DoubledGridResult g = DoubledGridCheck(d.outcome.final.eps, *d.problem);
    worst = std::max(worst, std::abs(g.delta));
    per += fmt::format(" desk n={} {:+.1e}", d.harmonic, g.delta);
  }
  if (FullPulse *pp = Full())
  {
    const DoubledGridResult g = DoubledGridCheck(pp->eps, *pp->problem);
    worst = std::max(worst, std::abs(g.delta));
    per += fmt::format(" full n=13 {:+.1e}", g.delta);
  }
  Result r(8);
  r.seconds = Seconds(t0);
  r.status = worst <= kDoubledTol ? Result::Pass : Result::Fail;
  r.detail = fmt::format("delta_rel J_max:{} (|.| <= {:.0e})", per, kDoubledTol);
  return r;
}

// Even harmonic against its odd neighbors at desk scale.
Result Acceptance::C9()
{
  const auto t0 = std::chrono::steady_clock::now();
  std::map<int, double> j;
  std::string terms;
  for (const DeskRun &d : DeskRuns())
  {
    j[d.harmonic] = d.outcome.final.terms.j_max;
    terms += fmt::format(" n={} {:.3e} ({}, {} it)", d.harmonic, j[d.harmonic],
                         d.outcome.record.termination, d.outcome.record.iterations.size() - 1);
  }
  auto within = [](double a, double b) { return a > 0.0 && b > 0.0 && a * kEvenHarmonicFactor >= b && b * kEvenHarmonicFactor >= a; };
  Result r(9);
  r.seconds = Seconds(t0);
  r.status = within(j[14], j[13]) && within(j[14], j[15]) ? Result::Pass : Result::Fail;
  r.detail = fmt::format("desk J_max:{}; n=14 within {}x of both neighbors", terms,
                         kEvenHarmonicFactor);
  return r;
}

// Reference sine pulses at full scale.
Result Acceptance::C10()
{
  const auto t0 = std::chrono::steady_clock::now();
  const ControlProblem p(FullSpec(13));
  const double b2 = MatchBeta(MatchKind::Fluence, kBeta2Fluence, p);
  const Evaluation e2 = EvaluateField(BuildReferencePulse(b2, p), p);
  const double b1 = MatchBeta(MatchKind::Fluence, kFluence13, p);
  const Evaluation e1 = EvaluateField(BuildReferencePulse(b1, p), p);
  Result r(10);
  r.seconds = Seconds(t0);
  const bool ok = std::abs(e2.terms.survival - kSurvivalBeta2) <= kSurvivalBeta2Tol &&
                  std::abs(e2.terms.fluence - kBeta2Fluence) <= kFluenceBeta2Tol &&
                  r.seconds < 900.0;
  r.status = ok ? Result::Pass : Result::Fail;
  r.detail = fmt::format(
      "beta2 {:.5f}: survival {:.4f} ({} +- {}), fluence {:.3f} ({} +- {}), J_max {:.3e}; "
      "beta1 {:.5f}: survival {:.5f}, J_max {:.3e}",
      b2, e2.terms.survival, kSurvivalBeta2, kSurvivalBeta2Tol, e2.terms.fluence, kBeta2Fluence,
      kFluenceBeta2Tol, e2.terms.j_max, b1, e1.terms.survival, e1.terms.j_max);
  return r;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"hhgoct acceptance checks"};
  bool slow = false;
  std::vector<int> only;
  std::string out = "acceptance_out";
#ifdef HHGOCT_FULL_DIR
  std::string full_dir = HHGOCT_FULL_DIR;
#else
  std::string full_dir;
#endif
  app.add_flag("--slow", slow, "optimize the full-scale n = 13 pulse (hours)");
  app.add_option("--only", only, "run only these criteria")->check(CLI::Range(1, 10));
  app.add_option("--out", out, "directory for the optimized pulses");
  app.add_option("--full-dir", full_dir, "stored full-scale run (field.csv, run_record.json)");
  CLI11_PARSE(app, argc, argv);

  Acceptance a(out, slow, full_dir);
  const std::vector<std::pair<int, Result (Acceptance::*)()>> all = {
      {1, &Acceptance::C1}, {2, &Acceptance::C2}, {3, &Acceptance::C3}, {4, &Acceptance::C4},
      {5, &Acceptance::C5}, {6, &Acceptance::C6}, {7, &Acceptance::C7}, {8, &Acceptance::C8},
      {9, &Acceptance::C9}, {10, &Acceptance::C10}};
  const std::set<int> want(only.begin(), only.end());
  int failed = 0;
  for (const auto &[id, fn] : all)
  {
    if (!want.empty() && !want.count(id))
    {
      continue;
    }
    Result r;
    try
    {
      r = (a.*fn)();
    }
    catch (const std::exception &e)
    {
      r.id = id;
      r.status = Result::Fail;
      r.detail = std::string("exception: ") + e.what();
    }
    const char *tag = r.status == Result::Pass ? "PASS" : r.status == Result::Skip ? "SKIP" : "FAIL";
    fmt::print("[C{}] {}  {}  ({:.1f} s)\n", id, tag, r.detail, r.seconds);
    std::fflush(stdout);
    failed += r.status == Result::Fail;
  }
  return failed == 0 ? 0 : 1;
}
