// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HHGOCT_FUNCTIONAL_HPP
#define HHGOCT_FUNCTIONAL_HPP

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "hhgoct/absorber.hpp"
#include "hhgoct/propagator.hpp"
#include "hhgoct/spectral.hpp"

namespace hhgoct
{

// Indices of the frequencies the optimizer varies; everything else is pinned to zero.
class ReducedSpace
{
public:
  ReducedSpace(std::vector<int> indices, int full_size);

  const std::vector<int> &Indices() const { return indices; }
  int Size() const { return static_cast<int>(indices.size()); }
  int FullSize() const { return full_size; }
  bool Contains(int j) const;

  Eigen::VectorXd ToReduced(const SpectralField &full) const;
  SpectralField ToFull(const Eigen::VectorXd &reduced) const;

private:
  std::vector<int> indices;
  std::vector<char> member;
  int full_size;
};

ReducedSpace MakeReducedSpace(const FilterFunction &f_eps, double threshold = 2.22e-16);

struct SigmaParams
{
  double scale = 5e-3;
  double steepness = 50.0;
  double threshold = 0.9;
};

double Sigma(double y, const SigmaParams &p);
double SigmaPrime(double y, const SigmaParams &p);

struct ProblemSpec
{
  SpatialGrid grid = SpatialGrid::Standard();
  double absorber_width = 40.0;
  bool use_cap = true;
  CapSpec cap = DefaultCap();
  double duration = 1000.0;
  int intervals = 1024;
  int harmonic = 13;
  double omega0 = 0.06;
  double source_width = 0.01;
  double target_width = 0.01;
  double target_scale = 1.0;  // 0 switches the emission target off
  double alpha = 2e-6;
  SigmaParams sigma;
  double reduced_threshold = 2.22e-16;
  PropagationSettings propagation;
};

class ControlProblem
{
public:
  explicit ControlProblem(const ProblemSpec &spec);

  const ProblemSpec &Spec() const { return spec; }
  const TimeGrid &Time() const { return time; }
  const FilterFunction &SourceFilter() const { return f_eps; }
  // f_eps / alpha on the reduced space, exactly zero elsewhere.
  const FilterFunction &ScaledFilter() const { return f_tilde; }
  const FilterFunction &TargetFilter() const { return f_c; }
  const std::vector<double> &Weights() const { return weights; }
  const ReducedSpace &Space() const { return space; }
  const GroundState &Ground() const { return ground; }
  const Propagator &Prop() const { return *prop; }
  const Hamiltonian &Ham() const { return *ham; }
  double Dx() const { return spec.grid.Spacing(); }

private:
  ProblemSpec spec;
  TimeGrid time;
  FilterFunction f_eps;
  ReducedSpace space;
  FilterFunction f_tilde;
  FilterFunction f_c;
  std::vector<double> weights;
  GroundState ground;
  std::shared_ptr<const Hamiltonian> ham;
  std::shared_ptr<const Propagator> prop;
};

double JMax(const std::vector<double> &series, const FilterFunction &f_c, const TimeGrid &grid);
double JEnergy(const SpectralField &eps, const FilterFunction &ftilde, const TimeGrid &grid);
double Fluence(const TemporalField &eps_t, const TimeGrid &grid);

struct FunctionalBreakdown
{
  double j_total = 0.0;
  double j_max = 0.0;
  double j_energy = 0.0;
  double j_ion = 0.0;
  double fluence = 0.0;
  double survival = 0.0;
  double peak_field = 0.0;
};

struct Evaluation
{
  FunctionalBreakdown terms;
  SpectralField eps;
  TemporalField eps_t;
  Trajectory forward;
  std::vector<double> accel;  // <psi|C|psi>(t_k)
  SpectralField accel_spectrum;
};

struct EvaluateOptions
{
  bool check_boundary = true;
  const std::vector<int> *schedule = nullptr;  // fixed forward substeps
};

// Boundary values of a field must vanish to 1e-12 of its peak.
void CheckBoundary(const TemporalField &eps_t);

Evaluation Evaluate(const Eigen::VectorXd &x, const ControlProblem &problem,
                    const EvaluateOptions &options = {});
Evaluation EvaluateField(const SpectralField &eps, const ControlProblem &problem,
                         const EvaluateOptions &options = {});

struct GradientResult
{
  Evaluation eval;
  Eigen::VectorXd gradient;  // of -J, boundary-projected
  Eigen::VectorXd raw;       // of -J, without the multiplier terms
  BoundaryMultipliers multipliers;
  SpectralField eps_el;      // Euler-Lagrange field for the current adjoint
  Trajectory adjoint;
};

GradientResult Gradient(const Eigen::VectorXd &x, const ControlProblem &problem,
                        const EvaluateOptions &options = {});

}  // namespace hhgoct

#endif  // HHGOCT_FUNCTIONAL_HPP
