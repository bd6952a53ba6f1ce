// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HHGOCT_EXPERIMENT_HPP
#define HHGOCT_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "hhgoct/config.hpp"
#include "hhgoct/functional.hpp"
#include "hhgoct/optimizer.hpp"

namespace hhgoct
{

// beta sin(w0 (t - T/2)), band-limited by f_eps and boundary-projected.
SpectralField BuildReferencePulse(double beta, const ControlProblem &problem);

enum class MatchKind
{
  Fluence,
  Peak
};

MatchKind ParseMatchKind(const std::string &name);

// beta such that the reference pulse has the requested fluence or peak |eps|.
double MatchBeta(MatchKind kind, double target, const ControlProblem &problem);

struct SpectrumResult
{
  std::vector<double> omega;
  std::vector<double> harmonic_order;
  std::vector<double> abs_eps;
  std::vector<double> accel;
  FunctionalBreakdown terms;
};

SpectrumResult MakeSpectrum(const Evaluation &ev, const ControlProblem &problem);

// omega,harmonic_order,abs_eps_w,C_w
void WriteSpectrumCsv(const std::string &path, const SpectrumResult &s);
// harmonic_order,log10_C_w_sq
void WriteLogPlotData(const std::string &path, const SpectrumResult &s);
// t,epsilon
void WriteFieldCsv(const std::string &path, const TemporalField &eps_t, const TimeGrid &grid);
// Reads a field CSV on the problem grid and returns its spectrum restricted to the reduced band.
SpectralField ReadFieldCsv(const std::string &path, const ControlProblem &problem);

struct DoubledGridResult
{
  double j_max = 0.0;
  double j_max_doubled = 0.0;
  double delta = 0.0;  // (J - J_doubled) / J_doubled
  double survival = 0.0;
  double survival_doubled = 0.0;
};

// Re-propagates on the grid doubled outwards with the same spacing; absorber and force
// mask are re-placed at the new edges.
DoubledGridResult DoubledGridCheck(const SpectralField &eps, const ControlProblem &problem);

struct OptimizeOutcome
{
  InitialGuess guess;
  std::vector<RunRecord> preparation;
  RunRecord record;
  Evaluation final;
};

// Builds the default guess (scaled by config.guess_scale), optionally runs the preparation
// ramp, then optimizes the real problem.
OptimizeOutcome RunOptimization(const ControlProblem &problem, const ExperimentConfig &config);

// Writes field.csv, spectrum.csv, spectrum_log.dat, run_record.json and summary.json.
void WriteOptimizeArtifacts(const std::string &dir, const OptimizeOutcome &outcome,
                            const ControlProblem &problem, const ExperimentConfig &config);

std::string BreakdownJson(const FunctionalBreakdown &terms);

}  // namespace hhgoct

#endif  // HHGOCT_EXPERIMENT_HPP
