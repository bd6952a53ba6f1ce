// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hhgoct/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/core.h>
#include <fmt/os.h>
#include <json.hpp>

#include "hhgoct/errors.hpp"

namespace hhgoct
{

SpectralField BuildReferencePulse(double beta, const ControlProblem &problem)
{
  const TimeGrid &time = problem.Time();
  const double half = 0.5 * time.Duration();
  const double w0 = problem.Spec().omega0;
  TemporalField wave;
  wave.samples.resize(time.Size());
  for (int k = 0; k < time.Size(); k++)
  {
    wave.samples[k] = beta * std::sin(w0 * (time.Time(k) - half));
  }
  SpectralField s = Dct1Forward(wave, time);
  const ReducedSpace &space = problem.Space();
  for (int j = 0; j < time.Size(); j++)
  {
    s.coeffs[j] = space.Contains(j) ? s.coeffs[j] * problem.SourceFilter().samples[j] : 0.0;
  }
  return BoundaryProject(s, problem.ScaledFilter(), time).field;
}

MatchKind ParseMatchKind(const std::string &name)
{
  if (name == "fluence")
  {
    return MatchKind::Fluence;
  }
  if (name == "peak")
  {
    return MatchKind::Peak;
  }
  throw InvalidInput("unknown match kind '" + name + "'");
}

namespace
{

double PeakOf(const TemporalField &f)
{
  double m = 0.0;
  for (double v : f.samples)
  {
    m = std::max(m, std::abs(v));
  }
  return m;
}

double Measure(MatchKind kind, const SpectralField &s, const TimeGrid &time)
{
  const TemporalField eps_t = Dct1Inverse(s, time);
  return kind == MatchKind::Fluence ? Fluence(eps_t, time) : PeakOf(eps_t);
}

}  // namespace

double MatchBeta(MatchKind kind, double target, const ControlProblem &problem)
{
  if (!(target > 0.0))
  {
    throw InvalidInput("MatchBeta: target must be positive");
  }
  const double unit = Measure(kind, BuildReferencePulse(1.0, problem), problem.Time());
  if (!(unit > 0.0))
  {
    throw DegenerateFilter("MatchBeta: the reference pulse vanishes on this band");
  }
  // Fluence is quadratic in beta, the peak linear.
  const double beta = kind == MatchKind::Fluence ? std::sqrt(target / unit) : target / unit;
  const double got = Measure(kind, BuildReferencePulse(beta, problem), problem.Time());
  if (std::abs(got - target) > 1e-6 * target)
  {
    throw ContractError(fmt::format("MatchBeta: matched value {:.17g} misses target {:.17g}", got,
                                    target));
  }
  return beta;
}

SpectrumResult MakeSpectrum(const Evaluation &ev, const ControlProblem &problem)
{
  const TimeGrid &time = problem.Time();
  SpectrumResult s;
  s.terms = ev.terms;
  for (int j = 0; j < time.Size(); j++)
  {
    const double w = time.Omega(j);
    s.omega.push_back(w);
    s.harmonic_order.push_back(w / problem.Spec().omega0);
    s.abs_eps.push_back(std::abs(ev.eps.coeffs[j]));
    s.accel.push_back(ev.accel_spectrum.coeffs[j]);
  }
  return s;
}

namespace
{

void EnsureParent(const std::string &path)
{
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty())
  {
    std::filesystem::create_directories(parent);
  }
}

void WriteText(const std::string &path, const std::string &text)
{
  EnsureParent(path);
  std::ofstream f(path);
  if (!f)
  {
    throw Error("cannot write " + path);
  }
  f << text;
}

}  // namespace

void WriteSpectrumCsv(const std::string &path, const SpectrumResult &s)
{
  std::string out = "omega,harmonic_order,abs_eps_w,C_w\n";
  for (std::size_t j = 0; j < s.omega.size(); j++)
  {
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", s.omega[j], s.harmonic_order[j],
                       s.abs_eps[j], s.accel[j]);
  }
  WriteText(path, out);
}

void WriteLogPlotData(const std::string &path, const SpectrumResult &s)
{
  std::string out = "# harmonic_order log10_C_w_sq\n";
  for (std::size_t j = 0; j < s.omega.size(); j++)
  {
    const double p = std::max(s.accel[j] * s.accel[j], 1e-300);
    out += fmt::format("{:.17g} {:.17g}\n", s.harmonic_order[j], std::log10(p));
  }
  WriteText(path, out);
}

void WriteFieldCsv(const std::string &path, const TemporalField &eps_t, const TimeGrid &grid)
{
  std::string out = "t,epsilon\n";
  for (int k = 0; k < grid.Size(); k++)
  {
    out += fmt::format("{:.17g},{:.17g}\n", grid.Time(k), eps_t.samples[k]);
  }
  WriteText(path, out);
}

SpectralField ReadFieldCsv(const std::string &path, const ControlProblem &problem)
{
  std::ifstream f(path);
  if (!f)
  {
    throw Error("cannot open " + path);
  }
  const TimeGrid &time = problem.Time();
  std::string line;
  std::getline(f, line);
  if (line != "t,epsilon")
  {
    throw InvalidInput(path + ": expected header 't,epsilon'");
  }
  TemporalField eps_t;
  while (std::getline(f, line))
  {
    if (line.empty())
    {
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
    {
      throw InvalidInput(path + ": malformed row '" + line + "'");
    }
    const double t = std::stod(line.substr(0, comma));
    const int k = static_cast<int>(eps_t.samples.size());
    if (k >= time.Size() || std::abs(t - time.Time(k)) > 1e-9 * time.Duration())
    {
      throw InvalidInput(path + ": time column does not match the configured grid");
    }
    eps_t.samples.push_back(std::stod(line.substr(comma + 1)));
  }
  if (static_cast<int>(eps_t.samples.size()) != time.Size())
  {
    throw InvalidInput(path + ": wrong number of samples for the configured grid");
  }
  SpectralField s = Dct1Forward(eps_t, time);
  double inside = 0.0, outside = 0.0;
  for (int j = 0; j < time.Size(); j++)
  {
    double &m = problem.Space().Contains(j) ? inside : outside;
    m = std::max(m, std::abs(s.coeffs[j]));
  }
  if (outside > 1e-9 * std::max(inside, 1e-300))
  {
    throw ContractError(path + ": field has spectral content outside the reduced band");
  }
  // Remove transform roundoff outside the band.
  return problem.Space().ToFull(problem.Space().ToReduced(s));
}

DoubledGridResult DoubledGridCheck(const SpectralField &eps, const ControlProblem &problem)
{
  ProblemSpec spec = problem.Spec();
  spec.grid = spec.grid.Doubled();
  const ControlProblem doubled(spec);
  const Evaluation a = EvaluateField(eps, problem);
  const Evaluation b = EvaluateField(eps, doubled);
  DoubledGridResult r;
  r.j_max = a.terms.j_max;
  r.j_max_doubled = b.terms.j_max;
  r.delta = (r.j_max - r.j_max_doubled) / r.j_max_doubled;
  r.survival = a.terms.survival;
  r.survival_doubled = b.terms.survival;
  return r;
}

namespace
{

ProblemSpec RampedSpec(const ProblemSpec &spec, int stage)
{
  ProblemSpec s = spec;
  const double f = std::pow(10.0, -stage);
  s.alpha *= f;
  s.sigma.scale *= f;
  return s;
}

}  // namespace

OptimizeOutcome RunOptimization(const ControlProblem &problem, const ExperimentConfig &config)
{
  OptimizeOutcome out;
  SpectralField unc = DefaultUnconstrainedGuess(problem.Time());
  for (double &v : unc.coeffs)
  {
    v *= config.guess_scale;
  }
  out.guess = MakeInitialGuess(unc, problem);
  Eigen::VectorXd x = out.guess.x;
  const double eps_max = config.optimizer.line.eps_max;

  if (config.preparation)
  {
    const double j0 = Evaluate(x, problem).terms.j_total;
    if (j0 <= 0.0)
    {
      // Smallest penalty reduction with a positive start, then ramp back by x10 per stage.
      int start = 0;
      for (int s = 1; s <= config.preparation_stages; s++)
      {
        const ControlProblem p(RampedSpec(problem.Spec(), s));
        if (Evaluate(x, p).terms.j_total > 0.0)
        {
          start = s;
          break;
        }
      }
      for (int s = start; s >= 1; s--)
      {
        const ControlProblem p(RampedSpec(problem.Spec(), s));
        OctObjective obj(p, eps_max);
        RunRecord r = Optimize(obj, x, config.optimizer);
        r.events.insert(r.events.begin(), fmt::format("preparation stage alpha x 1e-{}", s));
        x = r.x;
        out.preparation.push_back(std::move(r));
      }
    }
  }

  OctObjective obj(problem, eps_max);
  out.record = Optimize(obj, x, config.optimizer);
  const double j0 = -out.record.iterations.front().value;
  if (j0 <= 0.0)
  {
    out.guess.warnings.push_back(fmt::format(
        "initial J = {:.6g} is not above the zero-field value; the search may collapse to zero", j0));
  }
  out.final = Evaluate(out.record.x, problem);
  return out;
}

std::string BreakdownJson(const FunctionalBreakdown &t)
{
  nlohmann::json j;
  j["j_total"] = t.j_total;
  j["j_max"] = t.j_max;
  j["j_energy"] = t.j_energy;
  j["j_ion"] = t.j_ion;
  j["fluence"] = t.fluence;
  j["survival"] = t.survival;
  j["peak_field"] = t.peak_field;
  return j.dump(2);
}

void WriteOptimizeArtifacts(const std::string &dir, const OptimizeOutcome &o,
                            const ControlProblem &problem, const ExperimentConfig &config)
{
  std::filesystem::create_directories(dir);
  const auto path = [&](const char *name) { return (std::filesystem::path(dir) / name).string(); };
  const Feasibility feas = OctObjective(problem, config.optimizer.line.eps_max).Check(o.record.x);
  if (!feas.ok)
  {
    throw ContractError(fmt::format("optimized field is infeasible: boundary {:.3g}, peak {:.6g}",
                                    feas.boundary, feas.peak));
  }
  WriteFieldCsv(path("field.csv"), o.final.eps_t, problem.Time());
  const SpectrumResult s = MakeSpectrum(o.final, problem);
  WriteSpectrumCsv(path("spectrum.csv"), s);
  WriteLogPlotData(path("spectrum_log.dat"), s);
  WriteText(path("run_record.json"), RunRecordToJson(o.record) + "\n");
  WriteText(path("config.ini"), SerializeConfig(config));

  nlohmann::json j = nlohmann::json::parse(BreakdownJson(o.final.terms));
  j["harmonic"] = problem.Spec().harmonic;
  j["termination"] = o.record.termination;
  j["iterations"] = static_cast<int>(o.record.iterations.size()) - 1;
  j["resets"] = o.record.resets;
  j["evaluations"] = o.record.evaluations;
  j["feasible"] = o.record.feasible;
  j["warnings"] = o.guess.warnings;
  j["preparation_stages"] = o.preparation.size();
  WriteText(path("summary.json"), j.dump(2) + "\n");
}

}  // namespace hhgoct
