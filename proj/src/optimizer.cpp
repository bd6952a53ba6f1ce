// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hhgoct/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/core.h>
#include <json.hpp>

#include "hhgoct/errors.hpp"

namespace hhgoct
{

Eigen::MatrixXd Objective::InitialInverseHessian() const
{
  return Eigen::MatrixXd::Identity(Dimension(), Dimension());
}

double Objective::KappaMax(const Eigen::VectorXd &, const Eigen::VectorXd &) const
{
  return std::numeric_limits<double>::infinity();
}

Feasibility Objective::Check(const Eigen::VectorXd &) const
{
  return {};
}

OctObjective::OctObjective(const ControlProblem &problem_, double eps_max_,
                           EvaluateOptions options_)
  : problem(problem_), eps_max(eps_max_), options(options_)
{
  if (!(eps_max > 0.0))
  {
    throw InvalidInput("OctObjective: eps_max must be positive");
  }
}

ObjectivePoint OctObjective::Evaluate(const Eigen::VectorXd &x)
{
  GradientResult g = Gradient(x, problem, options);
  ObjectivePoint pt;
  pt.value = -g.eval.terms.j_total;
  pt.gradient = std::move(g.gradient);
  pt.terms = g.eval.terms;
  pt.has_terms = true;
  return pt;
}

Eigen::MatrixXd OctObjective::InitialInverseHessian() const
{
  return hhgoct::InitialInverseHessian(problem.Space(), problem.ScaledFilter(),
                                       problem.Weights());
}

double OctObjective::KappaMax(const Eigen::VectorXd &x, const Eigen::VectorXd &p) const
{
  const ReducedSpace &space = problem.Space();
  const TemporalField eps_t = Dct1Inverse(space.ToFull(x), problem.Time());
  const TemporalField q = Dct1Inverse(space.ToFull(p), problem.Time());
  return hhgoct::KappaMax(eps_t, q, eps_max);
}

Eigen::VectorXd OctObjective::Project(const Eigen::VectorXd &p) const
{
  const ReducedSpace &space = problem.Space();
  const ProjectedField pr = BoundaryProject(space.ToFull(p), problem.ScaledFilter(), problem.Time());
  return space.ToReduced(pr.field);
}

Feasibility OctObjective::Check(const Eigen::VectorXd &x) const
{
  const ReducedSpace &space = problem.Space();
  const SpectralField full = space.ToFull(x);
  const TemporalField eps_t = Dct1Inverse(full, problem.Time());
  Feasibility f;
  for (double v : eps_t.samples)
  {
    f.peak = std::max(f.peak, std::abs(v));
  }
  for (int j = 0; j < space.FullSize(); j++)
  {
    if (!space.Contains(j))
    {
      f.outside_band = std::max(f.outside_band, std::abs(full.coeffs[j]));
    }
  }
  const double ends = std::max(std::abs(eps_t.samples.front()), std::abs(eps_t.samples.back()));
  f.boundary = f.peak > 0.0 ? ends / f.peak : 0.0;
  f.ok = f.boundary <= 1e-12 && f.peak <= eps_max * (1.0 + 1e-12) && f.outside_band == 0.0;
  return f;
}

namespace
{

const char *StatusName(LineSearchStatus s)
{
  switch (s)
  {
    case LineSearchStatus::Wolfe:
      return "wolfe";
    case LineSearchStatus::CapBinding:
      return "cap_binding";
    case LineSearchStatus::BestEffort:
      return "best_effort";
    case LineSearchStatus::Failed:
      return "failed";
  }
  return "unknown";
}

}  // namespace

RunRecord Optimize(Objective &objective, const Eigen::VectorXd &x0, const OptimizerOptions &opt)
{
  const int n = objective.Dimension();
  if (x0.size() != n)
  {
    throw InvalidInput("Optimize: initial point has the wrong dimension");
  }
  RunRecord rec;
  Eigen::VectorXd x = x0;
  ObjectivePoint cur = objective.Evaluate(x);
  rec.evaluations = 1;
  const Eigen::MatrixXd sinv0 = objective.InitialInverseHessian();
  Eigen::MatrixXd sinv = sinv0;
  bool fresh = true;  // sinv equals the initial matrix
  int convergence_resets = 0;
  // Set by a convergence reset, cleared by the next non-converged step. A restart that
  // cannot move from there is counted as convergence.
  bool converging = false;

  auto push = [&](IterationRecord r)
  {
    r.value = cur.value;
    r.terms = cur.terms;
    r.has_terms = cur.has_terms;
    r.grad_inf = cur.gradient.size() ? cur.gradient.lpNorm<Eigen::Infinity>() : 0.0;
    r.feasibility = objective.Check(x);
    rec.feasible = rec.feasible && r.feasibility.ok;
    if (opt.on_iteration)
    {
      opt.on_iteration(r);
    }
    rec.iterations.push_back(r);
  };
  auto reset = [&](const std::string &why, int it)
  {
    sinv = sinv0;
    fresh = true;
    rec.resets++;
    rec.events.push_back(fmt::format("iteration {}: inverse-Hessian reset ({})", it, why));
  };

  push(IterationRecord{});
  std::vector<double> improvements;

  for (int it = 1; it <= opt.max_iterations; it++)
  {
    Eigen::VectorXd p = objective.Project(-(sinv * cur.gradient));
    const double slope = p.dot(cur.gradient);
    if (!(slope < 0.0))
    {
      if (!fresh)
      {
        reset("not a descent direction", it);
        continue;
      }
      rec.termination = converging ? "converged"
                        : slope == 0.0 ? "stationary"
                                       : "no descent direction";
      break;
    }
    const double kmax = objective.KappaMax(x, p);
    std::vector<ObjectivePoint> probes;
    auto phi = [&](double k)
    {
      // Re-projection removes the roundoff of x + k p, which matters once |x + k p| << |x|.
      ObjectivePoint pt = objective.Evaluate(objective.Project(x + k * p));
      LineProbe lp{pt.value, pt.gradient.dot(p)};
      probes.push_back(std::move(pt));
      return lp;
    };
    const LineSearchResult ls = LineSearch(phi, LineProbe{cur.value, slope}, kmax, opt.line);
    rec.evaluations += ls.evaluations;

    IterationRecord r;
    r.iteration = it;
    r.kappa_max = kmax;
    r.line_status = StatusName(ls.status);
    r.evaluations = ls.evaluations;

    if (ls.status == LineSearchStatus::Failed)
    {
      if (!fresh)
      {
        reset("line search failed", it);
        continue;
      }
      if (converging)
      {
        rec.events.push_back(
            fmt::format("iteration {}: no decrease after the convergence restart", it));
        rec.termination = "converged";
        break;
      }
      rec.termination = kmax < 1e-12 ? "line search failed: eps_max too small for this direction"
                                     : "line search failed";
      break;
    }
    const ObjectivePoint &acc = probes[ls.accepted_index];
    const Eigen::VectorXd x_new = objective.Project(x + ls.kappa * p);
    const Eigen::VectorXd delta = x_new - x;
    const Eigen::VectorXd gamma = acc.gradient - cur.gradient;
    const double before = cur.value;
    x = x_new;
    cur = acc;
    r.kappa = ls.kappa;
    r.step_rel = x.norm() > 0.0 ? delta.norm() / x.norm() : delta.norm();

    bool stuck = false;
    if (ls.expansions > opt.stuck_expansions)
    {
      stuck = true;
      rec.events.push_back(fmt::format("iteration {}: {} bracket expansions", it, ls.expansions));
    }
    improvements.push_back((before - cur.value) / std::max(std::abs(before), 1e-300));
    if (static_cast<int>(improvements.size()) >= opt.stuck_window)
    {
      bool small = true;
      for (int i = 0; i < opt.stuck_window; i++)
      {
        small = small && improvements[improvements.size() - 1 - i] < opt.stuck_improvement;
      }
      if (small)
      {
        stuck = true;
        improvements.clear();
        rec.events.push_back(fmt::format("iteration {}: relative improvement below {:g}", it,
                                         opt.stuck_improvement));
      }
    }

    const bool converged = r.step_rel <= opt.tolerance;
    converging = converging && converged;
    if (converged && convergence_resets < opt.convergence_resets)
    {
      convergence_resets++;
      converging = true;
      reset("termination condition matched", it);
      r.reset = true;
    }
    else if (converged)
    {
      push(r);
      rec.termination = "converged";
      break;
    }
    else if (stuck)
    {
      if (fresh)
      {
        push(r);
        rec.termination = "stuck";
        break;
      }
      reset("stuck", it);
      r.reset = true;
    }
    else if (BfgsUpdate(sinv, delta, gamma))
    {
      fresh = false;
    }
    else
    {
      r.update_skipped = true;
      rec.skipped_updates++;
      rec.events.push_back(fmt::format("iteration {}: skipped update, delta^T gamma <= 0", it));
    }
    push(r);
  }
  if (rec.termination.empty())
  {
    rec.termination = "iteration limit";
  }
  rec.x = x;
  rec.final = cur;
  return rec;
}

std::string RunRecordToJson(const RunRecord &rec)
{
  using nlohmann::json;
  json j;
  j["termination"] = rec.termination;
  j["resets"] = rec.resets;
  j["skipped_updates"] = rec.skipped_updates;
  j["evaluations"] = rec.evaluations;
  j["feasible"] = rec.feasible;
  j["events"] = rec.events;
  j["x"] = std::vector<double>(rec.x.data(), rec.x.data() + rec.x.size());
  json its = json::array();
  for (const auto &r : rec.iterations)
  {
    json e;
    e["iteration"] = r.iteration;
    e["objective"] = r.value;
    if (r.has_terms)
    {
      e["j_total"] = r.terms.j_total;
      e["j_max"] = r.terms.j_max;
      e["j_energy"] = r.terms.j_energy;
      e["j_ion"] = r.terms.j_ion;
      e["survival"] = r.terms.survival;
      e["fluence"] = r.terms.fluence;
      e["peak_field"] = r.terms.peak_field;
    }
    e["grad_inf"] = r.grad_inf;
    e["kappa"] = r.kappa;
    e["kappa_max"] = std::isfinite(r.kappa_max) ? json(r.kappa_max) : json(nullptr);
    e["line_status"] = r.line_status;
    e["evaluations"] = r.evaluations;
    e["step_rel"] = r.step_rel;
    e["update_skipped"] = r.update_skipped;
    e["reset"] = r.reset;
    e["boundary"] = r.feasibility.boundary;
    e["outside_band"] = r.feasibility.outside_band;
    e["feasible"] = r.feasibility.ok;
    its.push_back(e);
  }
  j["iterations"] = its;
  return j.dump(2);
}

InitialGuess MakeInitialGuess(const SpectralField &eps_unc, const ControlProblem &problem)
{
  const ReducedSpace &space = problem.Space();
  if (static_cast<int>(eps_unc.coeffs.size()) != space.FullSize())
  {
    throw InvalidInput("MakeInitialGuess: spectrum length does not match the time grid");
  }
  InitialGuess g;
  SpectralField masked;
  masked.coeffs.assign(eps_unc.coeffs.size(), 0.0);
  double outside = 0.0, norm_in = 0.0, peak_in = 0.0;
  for (int j = 0; j < space.FullSize(); j++)
  {
    norm_in += eps_unc.coeffs[j] * eps_unc.coeffs[j];
    peak_in = std::max(peak_in, std::abs(eps_unc.coeffs[j]));
    if (space.Contains(j))
    {
      masked.coeffs[j] = eps_unc.coeffs[j];
    }
    else
    {
      outside = std::max(outside, std::abs(eps_unc.coeffs[j]));
    }
  }
  norm_in = std::sqrt(norm_in);
  if (outside > 1e-12 * peak_in)
  {
    g.warnings.push_back(
        fmt::format("initial spectrum has components up to {:.3g} outside the reduced band; dropped",
                    outside));
  }
  const ProjectedField pr = BoundaryProject(masked, problem.ScaledFilter(), problem.Time());
  g.x = space.ToReduced(pr.field);
  if (g.x.norm() <= 1e-12 * norm_in)
  {
    g.x.setZero();
    g.warnings.push_back("initial spectrum is proportional to the scaled filter; projected guess "
                         "is the zero field");
  }
  return g;
}

SpectralField DefaultUnconstrainedGuess(const TimeGrid &grid)
{
  SpectralField s;
  s.coeffs.resize(grid.Size());
  for (int j = 0; j < grid.Size(); j++)
  {
    const double d = grid.Omega(j) - 0.06;
    s.coeffs[j] = 5.0 * std::exp(-d * d / (2.0 * 0.01 * 0.01)) *
                  std::sin(d * std::numbers::pi / 0.015);
  }
  return s;
}

}  // namespace hhgoct
