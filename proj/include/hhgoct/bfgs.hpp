// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HHGOCT_BFGS_HPP
#define HHGOCT_BFGS_HPP

#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "hhgoct/functional.hpp"
#include "hhgoct/spectral.hpp"

namespace hhgoct
{

struct LineSearchParams
{
  double sigma = 0.9;
  double rho = 0.0;
  double tau1 = 9.0;
  double tau2 = 0.1;
  double tau3 = 0.5;
  double fbar = -std::numeric_limits<double>::infinity();
  double kappa0 = 1.0;
  double eps_max = 0.15;
  int max_evaluations = 30;
};

// 1/2 diag(ftilde_r / w_r) on the reduced space.
Eigen::MatrixXd InitialInverseHessian(const ReducedSpace &space, const FilterFunction &ftilde,
                                      const std::vector<double> &weights);

// Returns false (and leaves Sinv alone) when delta^T gamma <= 0.
bool BfgsUpdate(Eigen::MatrixXd &sinv, const Eigen::VectorXd &delta, const Eigen::VectorXd &gamma);

// Largest step along q keeping |eps + kappa q| <= eps_max at every node.
double KappaMax(const TemporalField &eps_t, const TemporalField &q, double eps_max);

struct LineProbe
{
  double value = 0.0;  // objective along the line (minimized)
  double slope = 0.0;  // derivative with respect to kappa
};

enum class LineSearchStatus
{
  Wolfe,       // strict decrease and |slope| <= -sigma slope(0)
  CapBinding,  // kappa = kappa_max, strict decrease, still descending
  BestEffort,  // strict decrease only; evaluation budget or interval exhausted
  Failed       // no decrease found
};

struct LineSearchResult
{
  LineSearchStatus status = LineSearchStatus::Failed;
  double kappa = 0.0;
  LineProbe probe;
  int evaluations = 0;
  int expansions = 0;
  // Index into the probe sequence of the accepted point, -1 if none.
  int accepted_index = -1;
};

// Minimizes phi(kappa) on (0, kappa_max] following Fletcher's bracketing and sectioning
// scheme with cubic interpolation. `phi0` is the value and slope at kappa = 0.
LineSearchResult LineSearch(const std::function<LineProbe(double)> &phi, const LineProbe &phi0,
                            double kappa_max, const LineSearchParams &params);

// Minimizer of the cubic Hermite interpolant on [lo, hi], through (a, fa, da) and (b, fb, db).
double CubicMinimizer(double a, double fa, double da, double b, double fb, double db, double lo,
                      double hi);

}  // namespace hhgoct

#endif  // HHGOCT_BFGS_HPP
