// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HHGOCT_OPTIMIZER_HPP
#define HHGOCT_OPTIMIZER_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hhgoct/bfgs.hpp"
#include "hhgoct/functional.hpp"

namespace hhgoct
{

struct ObjectivePoint
{
  double value = 0.0;  // minimized
  Eigen::VectorXd gradient;
  FunctionalBreakdown terms;
  bool has_terms = false;
};

struct Feasibility
{
  double boundary = 0.0;  // max(|eps(0)|, |eps(T)|) / max|eps|
  double peak = 0.0;
  double outside_band = 0.0;  // max |coefficient| outside the reduced space
  bool ok = true;
};

// Minimization problem seen by the BFGS driver.
class Objective
{
public:
  virtual ~Objective() = default;
  virtual int Dimension() const = 0;
  virtual ObjectivePoint Evaluate(const Eigen::VectorXd &x) = 0;
  virtual Eigen::MatrixXd InitialInverseHessian() const;
  // Largest admissible step along p from x.
  virtual double KappaMax(const Eigen::VectorXd &x, const Eigen::VectorXd &p) const;
  // Linear projection onto the feasible subspace, applied to directions and iterates.
  virtual Eigen::VectorXd Project(const Eigen::VectorXd &p) const { return p; }
  virtual Feasibility Check(const Eigen::VectorXd &x) const;
};

// -J of a control problem on its reduced space.
class OctObjective : public Objective
{
public:
  OctObjective(const ControlProblem &problem, double eps_max, EvaluateOptions options = {});

  int Dimension() const override { return problem.Space().Size(); }
  ObjectivePoint Evaluate(const Eigen::VectorXd &x) override;
  Eigen::MatrixXd InitialInverseHessian() const override;
  double KappaMax(const Eigen::VectorXd &x, const Eigen::VectorXd &p) const override;
  Eigen::VectorXd Project(const Eigen::VectorXd &p) const override;
  Feasibility Check(const Eigen::VectorXd &x) const override;

private:
  const ControlProblem &problem;
  double eps_max;
  EvaluateOptions options;
};

struct OptimizerOptions
{
  LineSearchParams line;
  double tolerance = 1e-4;  // on |dx| / |x|
  int max_iterations = 200;
  int convergence_resets = 1;
  int stuck_expansions = 10;
  double stuck_improvement = 1e-10;
  int stuck_window = 3;
  std::function<void(const struct IterationRecord &)> on_iteration;
};

struct IterationRecord
{
  int iteration = 0;
  double value = 0.0;
  FunctionalBreakdown terms;
  bool has_terms = false;
  double grad_inf = 0.0;
  double kappa = 0.0;
  double kappa_max = 0.0;
  std::string line_status;
  int evaluations = 0;
  double step_rel = 0.0;
  bool update_skipped = false;
  bool reset = false;
  Feasibility feasibility;
};

struct RunRecord
{
  std::vector<IterationRecord> iterations;
  std::vector<std::string> events;
  Eigen::VectorXd x;
  ObjectivePoint final;
  int resets = 0;
  int skipped_updates = 0;
  int evaluations = 0;
  bool feasible = true;  // every iterate passed Check
  std::string termination;
};

RunRecord Optimize(Objective &objective, const Eigen::VectorXd &x0,
                   const OptimizerOptions &options = {});

std::string RunRecordToJson(const RunRecord &record);

struct InitialGuess
{
  Eigen::VectorXd x;
  std::vector<std::string> warnings;
};

// Masks eps_unc to the reduced band and boundary-projects it.
InitialGuess MakeInitialGuess(const SpectralField &eps_unc, const ControlProblem &problem);

// 5 exp(-(w - 0.06)^2 / (2 0.01^2)) sin((w - 0.06) pi / 0.015) on the problem grid.
SpectralField DefaultUnconstrainedGuess(const TimeGrid &grid);

}  // namespace hhgoct

#endif  // HHGOCT_OPTIMIZER_HPP
