// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HHGOCT_PROPAGATOR_HPP
#define HHGOCT_PROPAGATOR_HPP

#include <memory>
#include <vector>

#include "hhgoct/hamiltonian.hpp"
#include "hhgoct/spectral.hpp"

namespace hhgoct
{

struct PropagationSettings
{
  double tolerance = 1e-9;  // per macro step, relative to the state norm
  int order = 6;            // 2, 4, 6 or 8
  int initial_substeps = 4;
  int max_substeps = 4096;
  int quadrature_substeps = 8;  // floor for the gradient time quadrature
};

struct Trajectory
{
  std::vector<Wavefunction> states;  // one per t_k
  std::vector<double> norms;         // <psi|psi>(t_k)
  std::vector<int> substeps;         // per macro interval, as used
  bool non_hermitian = false;
};

// Impulsive source added to the adjoint at every node: chi(t_k) += impulses[k] * op * psi(t_k).
struct SourceTerm
{
  std::vector<double> impulses;
  Eigen::ArrayXd op;
  const Trajectory *forward = nullptr;
};

struct BackwardResult
{
  Trajectory adjoint;
  // Quadrature nodes and weighted samples of -Im<chi|X|psi>, when requested.
  std::vector<double> quad_times;
  std::vector<double> quad_values;
};

class Propagator
{
public:
  Propagator(std::shared_ptr<const Hamiltonian> ham, PropagationSettings settings);

  const Hamiltonian &Ham() const { return *ham; }
  const PropagationSettings &Settings() const { return settings; }

  // One macro step with `substeps` equal composition steps. t1 < t0 runs backwards.
  // `adjoint` selects H^dagger. If `sub` is given it receives the substeps + 1 states.
  void Advance(Wavefunction &psi, double t0, double t1, int substeps, const FieldSeries &field,
               bool adjoint, std::vector<Wavefunction> *sub = nullptr) const;

  // Step-doubling controlled macro step. Returns the substep count used; `hint` is the
  // starting count and is updated to the suggestion for the next step.
  int AdaptiveAdvance(Wavefunction &psi, double t0, double t1, const FieldSeries &field,
                      bool adjoint, int &hint, std::vector<Wavefunction> *sub = nullptr,
                      int min_used = 1) const;

  // With `schedule` the substep counts are taken as given and no error control runs.
  Trajectory Forward(const Wavefunction &psi0, const FieldSeries &field, const TimeGrid &grid,
                     const std::vector<int> *schedule = nullptr) const;
  Trajectory Forward(const Wavefunction &psi0, const TemporalField &field,
                     const TimeGrid &grid) const;

  BackwardResult Backward(const Wavefunction &chiT, const FieldSeries &field, const TimeGrid &grid,
                          const SourceTerm *source, bool quadrature,
                          const std::vector<int> *schedule = nullptr) const;

private:
  struct StaticFactors
  {
    std::vector<double> durations;
    std::vector<Eigen::ArrayXcd> factors;
  };
  struct Block
  {
    int start;
    int length;
    bool uniform;
  };

  void ApplyPotential(Wavefunction &psi, double t, double duration, const FieldSeries &field,
                      bool adjoint, StaticFactors &cache) const;

  std::shared_ptr<const Hamiltonian> ham;
  PropagationSettings settings;
  std::vector<double> gammas;
  Eigen::ArrayXcd base;  // V0 + CAP
  std::vector<Block> blocks;
};

std::vector<double> CompositionCoefficients(int order);

std::vector<double> ExpectationSeries(const Trajectory &traj, const Eigen::ArrayXd &op, double dx);
double SurvivalProbability(const Trajectory &traj);

}  // namespace hhgoct

#endif  // HHGOCT_PROPAGATOR_HPP
