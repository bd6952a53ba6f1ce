// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hhgoct/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/core.h>

#include "hhgoct/errors.hpp"

namespace hhgoct
{

namespace
{

std::string Where(const std::string &section, const std::string &key)
{
  return "[" + section + "] " + key;
}

template <class T>
T ParseValue(const std::string &text, const std::string &where)
{
  T v{};
  if constexpr (std::is_same_v<T, bool>)
  {
    if (text == "true" || text == "1")
    {
      return true;
    }
    if (text == "false" || text == "0")
    {
      return false;
    }
    throw ConfigError(where + ": expected true or false, got '" + text + "'");
  }
  else if constexpr (std::is_same_v<T, std::string>)
  {
    return text;
  }
  else if constexpr (std::is_floating_point_v<T>)
  {
    // from_chars for double is available in libstdc++ 11.
    const char *b = text.data();
    const char *e = b + text.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e)
    {
      throw ConfigError(where + ": expected a number, got '" + text + "'");
    }
    return v;
  }
  else
  {
    const char *b = text.data();
    const char *e = b + text.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e)
    {
      throw ConfigError(where + ": expected an integer, got '" + text + "'");
    }
    return v;
  }
}

template <class T>
std::string FormatValue(const T &v)
{
  if constexpr (std::is_same_v<T, bool>)
  {
    return v ? "true" : "false";
  }
  else if constexpr (std::is_same_v<T, std::string>)
  {
    return v;
  }
  else if constexpr (std::is_floating_point_v<T>)
  {
    return fmt::format("{:.17g}", v);
  }
  else
  {
    return fmt::format("{}", v);
  }
}

struct GridKeys
{
  double x_min;
  double x_max;
  int points;
};

struct Key
{
  std::string section;
  std::string name;
  std::function<void(ExperimentConfig &, GridKeys &, const std::string &)> set;
  std::function<std::string(const ExperimentConfig &)> get;
};

template <class Ref>
Key Bind(std::string section, std::string name, Ref ref)
{
  using T = std::remove_cvref_t<decltype(ref(std::declval<ExperimentConfig &>()))>;
  const std::string where = Where(section, name);
  return Key{section, name,
             [ref, where](ExperimentConfig &c, GridKeys &, const std::string &v)
             { ref(c) = ParseValue<T>(v, where); },
             [ref](const ExperimentConfig &c) { return FormatValue(ref(c)); }};
}

#define HHGOCT_KEY(section, name, member) \
  Bind(section, name, [](auto &c) -> auto & { return c.member; })

const std::vector<Key> &Keys()
{
  static const std::vector<Key> keys = {
      HHGOCT_KEY("run", "mode", mode),
      HHGOCT_KEY("run", "out_dir", out_dir),
      HHGOCT_KEY("run", "seed", seed),

      HHGOCT_KEY("time", "duration", problem.duration),
      HHGOCT_KEY("time", "intervals", problem.intervals),

      Key{"grid", "x_min",
          [](ExperimentConfig &, GridKeys &g, const std::string &v)
          { g.x_min = ParseValue<double>(v, "[grid] x_min"); },
          [](const ExperimentConfig &c) { return FormatValue(c.problem.grid.XMin()); }},
      Key{"grid", "x_max",
          [](ExperimentConfig &, GridKeys &g, const std::string &v)
          { g.x_max = ParseValue<double>(v, "[grid] x_max"); },
          [](const ExperimentConfig &c) { return FormatValue(c.problem.grid.XMax()); }},
      Key{"grid", "points",
          [](ExperimentConfig &, GridKeys &g, const std::string &v)
          { g.points = ParseValue<int>(v, "[grid] points"); },
          [](const ExperimentConfig &c) { return FormatValue(c.problem.grid.Points()); }},

      HHGOCT_KEY("absorber", "use_cap", problem.use_cap),
      HHGOCT_KEY("absorber", "width", problem.absorber_width),
      HHGOCT_KEY("absorber", "cap", cap_source),
      HHGOCT_KEY("absorber", "k_min", cap_objective.k_min),
      HHGOCT_KEY("absorber", "k_max", cap_objective.k_max),
      HHGOCT_KEY("absorber", "k_samples", cap_objective.k_samples),
      HHGOCT_KEY("absorber", "cell", cap_objective.cell),
      HHGOCT_KEY("absorber", "coeffs", cap_coeffs),
      HHGOCT_KEY("absorber", "budget", cap_budget),

      HHGOCT_KEY("problem", "harmonic", problem.harmonic),
      HHGOCT_KEY("problem", "omega0", problem.omega0),
      HHGOCT_KEY("problem", "source_width", problem.source_width),
      HHGOCT_KEY("problem", "target_width", problem.target_width),
      HHGOCT_KEY("problem", "target_scale", problem.target_scale),
      HHGOCT_KEY("problem", "alpha", problem.alpha),
      HHGOCT_KEY("problem", "sigma_scale", problem.sigma.scale),
      HHGOCT_KEY("problem", "sigma_steepness", problem.sigma.steepness),
      HHGOCT_KEY("problem", "sigma_threshold", problem.sigma.threshold),
      HHGOCT_KEY("problem", "reduced_threshold", problem.reduced_threshold),

      HHGOCT_KEY("propagation", "tolerance", problem.propagation.tolerance),
      HHGOCT_KEY("propagation", "order", problem.propagation.order),
      HHGOCT_KEY("propagation", "initial_substeps", problem.propagation.initial_substeps),
      HHGOCT_KEY("propagation", "max_substeps", problem.propagation.max_substeps),
      HHGOCT_KEY("propagation", "quadrature_substeps", problem.propagation.quadrature_substeps),

      HHGOCT_KEY("optimizer", "eps_max", optimizer.line.eps_max),
      HHGOCT_KEY("optimizer", "tolerance", optimizer.tolerance),
      HHGOCT_KEY("optimizer", "max_iterations", optimizer.max_iterations),
      HHGOCT_KEY("optimizer", "convergence_resets", optimizer.convergence_resets),
      HHGOCT_KEY("optimizer", "sigma", optimizer.line.sigma),
      HHGOCT_KEY("optimizer", "rho", optimizer.line.rho),
      HHGOCT_KEY("optimizer", "tau1", optimizer.line.tau1),
      HHGOCT_KEY("optimizer", "tau2", optimizer.line.tau2),
      HHGOCT_KEY("optimizer", "tau3", optimizer.line.tau3),
      HHGOCT_KEY("optimizer", "kappa0", optimizer.line.kappa0),
      HHGOCT_KEY("optimizer", "max_line_evaluations", optimizer.line.max_evaluations),
      HHGOCT_KEY("optimizer", "stuck_expansions", optimizer.stuck_expansions),
      HHGOCT_KEY("optimizer", "stuck_improvement", optimizer.stuck_improvement),
      HHGOCT_KEY("optimizer", "stuck_window", optimizer.stuck_window),
      HHGOCT_KEY("optimizer", "guess_scale", guess_scale),
      HHGOCT_KEY("optimizer", "preparation", preparation),
      HHGOCT_KEY("optimizer", "preparation_stages", preparation_stages),

      HHGOCT_KEY("reference", "match", reference_match),
      HHGOCT_KEY("reference", "target", reference_target),
  };
  return keys;
}

#undef HHGOCT_KEY

void Require(bool ok, const std::string &message)
{
  if (!ok)
  {
    throw ConfigError(message);
  }
}

void Validate(const ExperimentConfig &c)
{
  static const std::set<std::string> modes = {"optimize", "reference", "spectrum",
                                              "validate", "cap-optimize", "eigensolve"};
  Require(modes.count(c.mode) == 1, "[run] mode: unknown mode '" + c.mode + "'");
  Require(c.reference_match == "fluence" || c.reference_match == "peak",
          "[reference] match must be fluence or peak");
  Require(c.reference_target > 0.0, "[reference] target must be positive");
  const ProblemSpec &p = c.problem;
  Require(p.duration > 0.0, "[time] duration must be positive");
  Require(p.intervals >= 2, "[time] intervals must be at least 2");
  Require(p.absorber_width > 0.0 && 2.0 * p.absorber_width < p.grid.Length(),
          "[absorber] width must be positive and below half the box");
  Require(p.harmonic >= 1, "[problem] harmonic must be at least 1");
  Require(p.omega0 > 0.0, "[problem] omega0 must be positive");
  Require(p.source_width > 0.0 && p.target_width > 0.0, "[problem] filter widths must be positive");
  Require(p.target_scale >= 0.0, "[problem] target_scale must be non-negative");
  Require(p.alpha > 0.0, "[problem] alpha must be positive");
  Require(p.sigma.scale >= 0.0 && p.sigma.steepness > 0.0, "[problem] invalid sigma parameters");
  Require(p.reduced_threshold > 0.0, "[problem] reduced_threshold must be positive");
  const PropagationSettings &s = p.propagation;
  Require(s.tolerance > 0.0, "[propagation] tolerance must be positive");
  Require(s.order == 2 || s.order == 4 || s.order == 6 || s.order == 8,
          "[propagation] order must be 2, 4, 6 or 8");
  Require(s.initial_substeps >= 1 && s.max_substeps >= s.initial_substeps,
          "[propagation] need 1 <= initial_substeps <= max_substeps");
  Require(s.quadrature_substeps >= 4 && s.quadrature_substeps % 4 == 0,
          "[propagation] quadrature_substeps must be a positive multiple of 4");
  const LineSearchParams &l = c.optimizer.line;
  Require(l.eps_max > 0.0, "[optimizer] eps_max must be positive");
  Require(l.rho >= 0.0 && l.rho < l.sigma && l.sigma < 1.0, "[optimizer] need 0 <= rho < sigma < 1");
  Require(l.tau1 > 1.0 && l.tau2 > 0.0 && l.tau3 > 0.0 && l.tau2 + l.tau3 < 1.0,
          "[optimizer] invalid tau parameters");
  Require(l.kappa0 > 0.0 && l.max_evaluations >= 2, "[optimizer] invalid kappa0 or line budget");
  Require(c.optimizer.tolerance > 0.0 && c.optimizer.max_iterations >= 0,
          "[optimizer] invalid termination settings");
  Require(c.optimizer.convergence_resets >= 0 && c.optimizer.stuck_window >= 1,
          "[optimizer] invalid reset settings");
  Require(c.preparation_stages >= 1, "[optimizer] preparation_stages must be at least 1");
  Require(c.cap_objective.k_min > 0.0 && c.cap_objective.k_max > c.cap_objective.k_min &&
              c.cap_objective.k_samples >= 2 && c.cap_objective.cell > 0.0,
          "[absorber] invalid momentum band");
  Require(c.cap_coeffs >= 0 && c.cap_budget > 0, "[absorber] invalid cap optimization budget");
}

}  // namespace

ExperimentConfig ParseConfig(const std::string &text)
{
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try
  {
    pt::ini_parser::read_ini(in, tree);
  }
  catch (const pt::ini_parser_error &e)
  {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  GridKeys g{c.problem.grid.XMin(), c.problem.grid.XMax(), c.problem.grid.Points()};
  for (const auto &[section, body] : tree)
  {
    if (!body.data().empty())
    {
      throw ConfigError("config: key '" + section + "' outside of any section");
    }
    bool known_section = false;
    for (const Key &k : Keys())
    {
      known_section = known_section || k.section == section;
    }
    if (!known_section)
    {
      throw ConfigError("config: unknown section [" + section + "]");
    }
    for (const auto &[name, value] : body)
    {
      const Key *match = nullptr;
      for (const Key &k : Keys())
      {
        if (k.section == section && k.name == name)
        {
          match = &k;
        }
      }
      if (!match)
      {
        throw ConfigError("config: unknown key " + Where(section, name));
      }
      match->set(c, g, value.data());
    }
  }
  try
  {
    c.problem.grid = SpatialGrid(g.x_min, g.x_max, g.points);
  }
  catch (const InvalidInput &e)
  {
    throw ConfigError(std::string("[grid] ") + e.what());
  }
  Validate(c);
  return c;
}

ExperimentConfig LoadConfig(const std::string &path)
{
  std::ifstream f(path);
  if (!f)
  {
    throw ConfigError("config: cannot open " + path);
  }
  std::stringstream ss;
  ss << f.rdbuf();
  return ParseConfig(ss.str());
}

std::string SerializeConfig(const ExperimentConfig &c)
{
  std::string out;
  std::string section;
  for (const Key &k : Keys())
  {
    if (k.section != section)
    {
      out += (section.empty() ? "" : "\n") + ("[" + k.section + "]\n");
      section = k.section;
    }
    out += k.name + " = " + k.get(c) + "\n";
  }
  return out;
}

void ResolveCap(ExperimentConfig &c)
{
  const double width = c.problem.absorber_width;
  if (c.cap_source == "default")
  {
    c.problem.cap = DefaultCap();
  }
  else if (c.cap_source == "quadratic")
  {
    c.problem.cap = TuneQuadraticBaseline(width, c.cap_objective, nullptr);
  }
  else
  {
    std::ifstream f(c.cap_source);
    if (!f)
    {
      throw ConfigError("[absorber] cap: cannot open " + c.cap_source);
    }
    std::stringstream ss;
    ss << f.rdbuf();
    try
    {
      c.problem.cap = CapSpecFromJson(ss.str());
    }
    catch (const std::exception &e)
    {
      throw ConfigError("[absorber] cap: " + std::string(e.what()));
    }
  }
  c.problem.cap.width = width;
}

}  // namespace hhgoct
