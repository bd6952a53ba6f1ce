// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef HHGOCT_CONFIG_HPP
#define HHGOCT_CONFIG_HPP

#include <cstdint>
#include <string>

#include "hhgoct/absorber.hpp"
#include "hhgoct/functional.hpp"
#include "hhgoct/optimizer.hpp"

namespace hhgoct
{

struct ExperimentConfig
{
  // [run]
  std::string mode = "optimize";
  std::string out_dir = "out";
  std::uint64_t seed = 1;

  // [time], [grid], [problem], [propagation]
  ProblemSpec problem;

  // [absorber]
  // "default", "quadratic" or the path of a JSON cap spec.
  std::string cap_source = "default";
  CapObjectiveSettings cap_objective;
  int cap_coeffs = 6;
  int cap_budget = 20000;

  // [optimizer]
  OptimizerOptions optimizer;
  double guess_scale = 1.0;
  bool preparation = false;
  int preparation_stages = 4;

  // [reference]
  std::string reference_match = "fluence";  // fluence | peak
  double reference_target = 0.992;
};

// INI text with the sections [run], [time], [grid], [absorber], [problem],
// [propagation], [optimizer] and [reference]. Unknown sections or keys are rejected.
ExperimentConfig ParseConfig(const std::string &text);
ExperimentConfig LoadConfig(const std::string &path);

// Every key, floats with 17 significant digits.
std::string SerializeConfig(const ExperimentConfig &config);

// Resolves cap_source into config.problem.cap.
void ResolveCap(ExperimentConfig &config);

}  // namespace hhgoct

#endif  // HHGOCT_CONFIG_HPP
