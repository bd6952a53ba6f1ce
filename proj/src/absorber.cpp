// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hhgoct/absorber.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_min.h>
#include <gsl/gsl_multimin.h>
#include <json.hpp>

#include "hhgoct/errors.hpp"

namespace hhgoct
{

using cplx = std::complex<double>;

std::complex<double> CapSpec::Profile(double u) const
{
  if (u <= 0.0)
  {
    return 0.0;
  }
  u = std::min(u, 1.0);
  if (shape == CapShape::Quadratic)
  {
    const double depth = u * width;
    return cplx(0.0, -quadratic_strength * depth * depth);
  }
  const double phase = 0.5 * std::numbers::pi * (1.0 - u);
  double re = 0.0;
  for (std::size_t n = 0; n < real_coeffs.size(); n++)
  {
    re += real_coeffs[n] * std::cos((2.0 * n + 1.0) * phase);
  }
  double s = 0.0;
  for (std::size_t n = 0; n < imag_coeffs.size(); n++)
  {
    s += imag_coeffs[n] * std::cos((2.0 * n + 1.0) * phase);
  }
  return cplx(re, -s * s);
}

std::complex<double> CapSpec::AtDepth(double depth) const
{
  return Profile(depth / width);
}

Eigen::ArrayXcd BuildCap(const CapSpec &spec, const SpatialGrid &grid)
{
  const double half = 0.5 * grid.Length();
  if (!(spec.width > 0.0) || spec.width >= half)
  {
    throw InvalidInput("BuildCap: absorber width must lie in (0, half domain)");
  }
  const double xb = half - spec.width;
  const double c = grid.Center();
  Eigen::ArrayXcd v = Eigen::ArrayXcd::Zero(grid.Points());
  for (int i = 0; i < grid.Points(); i++)
  {
    const double r = std::abs(grid.X(i) - c);
    if (r > xb)
    {
      v[i] = spec.AtDepth(r - xb);
    }
  }
  return v;
}

std::vector<std::complex<double>> CapCells(const CapSpec &spec, double cell)
{
  const int n = static_cast<int>(std::ceil(spec.width / cell - 1e-9));
  std::vector<cplx> cells(n);
  for (int i = 0; i < n; i++)
  {
    cells[i] = spec.AtDepth((i + 0.5) * cell);
  }
  return cells;
}

Scattering ScatteringCoefficients(const std::vector<std::complex<double>> &cells, double cell,
                                  double k)
{
  if (!(k > 0.0))
  {
    throw InvalidInput("ScatteringCoefficients: k must be positive");
  }
  // Outgoing wave e^{ikx} on the right, carried leftwards as (psi, psi').
  cplx psi = 1.0;
  cplx dpsi = cplx(0.0, k);
  double log_scale = 0.0;
  for (auto it = cells.rbegin(); it != cells.rend(); ++it)
  {
    const cplx kappa = std::sqrt(cplx(k * k) - 2.0 * (*it));
    const cplx z = kappa * cell;
    const cplx c = std::cos(z);
    const cplx sinc = std::abs(z) < 1e-8 ? cplx(cell) : std::sin(z) / kappa;
    const cplx ks = kappa * std::sin(z);
    const cplx p0 = c * psi - sinc * dpsi;
    const cplx d0 = ks * psi + c * dpsi;
    const double s = std::max(std::abs(p0), std::abs(d0) / k);
    psi = p0 / s;
    dpsi = d0 / s;
    log_scale += std::log(s);
  }
  const cplx a = 0.5 * (psi + dpsi / cplx(0.0, k));
  const cplx b = 0.5 * (psi - dpsi / cplx(0.0, k));
  Scattering out;
  out.reflection = std::norm(b / a);
  out.transmission = std::exp(-2.0 * log_scale) / std::norm(a);
  return out;
}

std::vector<double> MomentumSamples(const CapObjectiveSettings &s)
{
  std::vector<double> ks(s.k_samples);
  for (int i = 0; i < s.k_samples; i++)
  {
    ks[i] = s.k_samples == 1 ? s.k_min
                             : s.k_min + (s.k_max - s.k_min) * i / (s.k_samples - 1.0);
  }
  return ks;
}

double CapObjective(const CapSpec &spec, const std::vector<double> &ks, double cell)
{
  const auto cells = CapCells(spec, cell);
  double worst = 0.0;
  for (double k : ks)
  {
    const Scattering sc = ScatteringCoefficients(cells, cell, k);
    worst = std::max(worst, sc.reflection + sc.transmission);
  }
  return worst;
}

double CapObjective(const CapSpec &spec, const CapObjectiveSettings &s)
{
  return CapObjective(spec, MomentumSamples(s), s.cell);
}

namespace
{

struct QuadraticContext
{
  double width;
  std::vector<double> ks;
  double cell;
};

double QuadraticLogObjective(double log_eta, void *params)
{
  const auto *ctx = static_cast<QuadraticContext *>(params);
  CapSpec spec;
  spec.shape = CapShape::Quadratic;
  spec.width = ctx->width;
  spec.quadratic_strength = std::exp(log_eta);
  return std::log(CapObjective(spec, ctx->ks, ctx->cell));
}

struct SeriesContext
{
  double width;
  int n;
  std::vector<double> ks;
  double cell;
  int evaluations = 0;
};

CapSpec SeriesSpec(const gsl_vector *v, int n, double width)
{
  CapSpec spec;
  spec.width = width;
  spec.real_coeffs.resize(n);
  spec.imag_coeffs.resize(n);
  for (int i = 0; i < n; i++)
  {
    spec.real_coeffs[i] = gsl_vector_get(v, i);
    spec.imag_coeffs[i] = gsl_vector_get(v, n + i);
  }
  return spec;
}

double SeriesLogObjective(const gsl_vector *v, void *params)
{
  auto *ctx = static_cast<SeriesContext *>(params);
  ctx->evaluations++;
  const double obj = CapObjective(SeriesSpec(v, ctx->n, ctx->width), ctx->ks, ctx->cell);
  return std::isfinite(obj) ? std::log(obj) : 1e300;
}

}  // namespace

CapSpec TuneQuadraticBaseline(double width, const CapObjectiveSettings &s, double *objective)
{
  QuadraticContext ctx{width, MomentumSamples(s), s.cell};
  // Coarse log scan, then Brent refinement around the best sample.
  const double lo = std::log(1e-8), hi = std::log(1e0);
  const int scan = 161;
  int best = 0;
  std::vector<double> vals(scan);
  for (int i = 0; i < scan; i++)
  {
    vals[i] = QuadraticLogObjective(lo + (hi - lo) * i / (scan - 1.0), &ctx);
    if (vals[i] < vals[best])
    {
      best = i;
    }
  }
  double x = lo + (hi - lo) * best / (scan - 1.0);
  if (best > 0 && best < scan - 1)
  {
    const double step = (hi - lo) / (scan - 1.0);
    gsl_function fn{&QuadraticLogObjective, &ctx};
    gsl_set_error_handler_off();
    gsl_min_fminimizer *m = gsl_min_fminimizer_alloc(gsl_min_fminimizer_brent);
    if (gsl_min_fminimizer_set(m, &fn, x, x - step, x + step) == GSL_SUCCESS)
    {
      for (int it = 0; it < 100; it++)
      {
        gsl_min_fminimizer_iterate(m);
        const double a = gsl_min_fminimizer_x_lower(m);
        const double b = gsl_min_fminimizer_x_upper(m);
        if (gsl_min_test_interval(a, b, 1e-6, 0.0) == GSL_SUCCESS)
        {
          break;
        }
      }
      x = gsl_min_fminimizer_x_minimum(m);
    }
    gsl_min_fminimizer_free(m);
  }
  CapSpec spec;
  spec.shape = CapShape::Quadratic;
  spec.width = width;
  spec.quadratic_strength = std::exp(x);
  if (objective)
  {
    *objective = CapObjective(spec, ctx.ks, ctx.cell);
  }
  return spec;
}

CapOptimizationResult OptimizeCap(const CapObjectiveSettings &s, int n_coeffs, int budget,
                                  std::uint64_t seed, double width)
{
  if (n_coeffs < 0 || budget < 0)
  {
    throw InvalidInput("OptimizeCap: n_coeffs and budget must be non-negative");
  }
  if (!(s.k_min > 0.0) || s.k_max < s.k_min || s.k_samples < 1)
  {
    throw InvalidInput("OptimizeCap: invalid momentum band");
  }
  if (s.k_max > std::numbers::pi / s.cell)
  {
    throw InvalidInput("OptimizeCap: momentum band exceeds the grid Nyquist momentum");
  }
  CapOptimizationResult res;
  res.baseline = TuneQuadraticBaseline(width, s, &res.baseline_objective);
  res.spec = res.baseline;
  res.objective = res.baseline_objective;
  if (n_coeffs == 0)
  {
    res.diagnostics = "n_coeffs = 0: baseline returned";
    return res;
  }

  SeriesContext ctx{width, n_coeffs, MomentumSamples(s), s.cell};
  const int dim = 2 * n_coeffs;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  // The quadratic baseline reaches -eta W^2 at the outer edge; start from the single
  // cosine with the same edge value.
  const double c1 = width * std::sqrt(res.baseline.quadratic_strength);
  std::vector<double> best(dim, 0.0);
  best[n_coeffs] = c1;
  double best_val = std::numeric_limits<double>::infinity();

  gsl_multimin_function fn{&SeriesLogObjective, static_cast<size_t>(dim), &ctx};
  gsl_vector *x = gsl_vector_alloc(dim);
  gsl_vector *step = gsl_vector_alloc(dim);
  gsl_multimin_fminimizer *mm =
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);

  int restart = 0;
  while (ctx.evaluations < budget)
  {
    for (int i = 0; i < dim; i++)
    {
      double v = best[i];
      if (restart > 0)
      {
        v += 0.2 * c1 * normal(rng) / (1 + i % n_coeffs);
      }
      gsl_vector_set(x, i, v);
      gsl_vector_set(step, i, 0.25 * c1);
    }
    gsl_multimin_fminimizer_set(mm, &fn, x, step);
    while (ctx.evaluations < budget)
    {
      if (gsl_multimin_fminimizer_iterate(mm) != GSL_SUCCESS)
      {
        break;
      }
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(mm), 1e-7) == GSL_SUCCESS)
      {
        break;
      }
    }
    if (gsl_multimin_fminimizer_minimum(mm) < best_val)
    {
      best_val = gsl_multimin_fminimizer_minimum(mm);
      for (int i = 0; i < dim; i++)
      {
        best[i] = gsl_vector_get(mm->x, i);
      }
    }
    restart++;
  }
  gsl_multimin_fminimizer_free(mm);
  gsl_vector_free(step);

  for (int i = 0; i < dim; i++)
  {
    gsl_vector_set(x, i, best[i]);
  }
  CapSpec series = SeriesSpec(x, n_coeffs, width);
  gsl_vector_free(x);
  const double series_obj = CapObjective(series, ctx.ks, ctx.cell);
  res.evaluations = ctx.evaluations;
  if (series_obj < res.objective)
  {
    res.spec = series;
    res.objective = series_obj;
  }
  res.beats_baseline = res.objective <= 0.1 * res.baseline_objective;
  res.diagnostics = fmt::format(
      "baseline eta={:.6g} max(R+Tr)={:.6g}; series max(R+Tr)={:.6g}; ratio={:.4g}; "
      "restarts={} evaluations={}",
      res.baseline.quadratic_strength, res.baseline_objective, series_obj,
      res.baseline_objective / series_obj, restart, ctx.evaluations);
  return res;
}

CapSpec DefaultCap()
{
  CapSpec spec;
  spec.width = 40.0;
  // hhgoct cap-optimize --seed 1: n_coeffs=6, budget=20000, k in [0.2, 2.5] at 24 points.
  spec.real_coeffs = {-0.19889859412153896,  -0.019224198902696173, -0.006475714759699386,
                      -0.08774751502112688,  -0.07392461814601155,  -0.019326667976580336};
  spec.imag_coeffs = {0.7247575843192093,  0.35128252370497476, 0.16459669641727603,
                      0.19279881864453324, 0.09526222525442749, 0.006654759986345671};
  return spec;
}

void WriteCapFile(const std::string &path, const CapSpec &spec, const SpatialGrid &grid)
{
  const Eigen::ArrayXcd v = BuildCap(spec, grid);
  std::ofstream out(path);
  if (!out)
  {
    throw InvalidInput("WriteCapFile: cannot open " + path);
  }
  out << fmt::format("# cap v1 width={:.17g} n={}\n", spec.width, grid.Points());
  for (int i = 0; i < grid.Points(); i++)
  {
    out << fmt::format("{:.17g} {:.17g} {:.17g}\n", grid.X(i), v[i].real(), v[i].imag());
  }
}

void ReadCapFile(const std::string &path, Eigen::ArrayXd &x, Eigen::ArrayXcd &v, double *width)
{
  std::ifstream in(path);
  if (!in)
  {
    throw InvalidInput("ReadCapFile: cannot open " + path);
  }
  std::string header;
  std::getline(in, header);
  double w = 0.0;
  int n = 0;
  if (std::sscanf(header.c_str(), "# cap v1 width=%lf n=%d", &w, &n) != 2 || n <= 0)
  {
    throw InvalidInput("ReadCapFile: bad header in " + path);
  }
  x.resize(n);
  v.resize(n);
  for (int i = 0; i < n; i++)
  {
    double xi, re, im;
    if (!(in >> xi >> re >> im))
    {
      throw InvalidInput("ReadCapFile: truncated data in " + path);
    }
    if (i > 0 && !(xi > x[i - 1]))
    {
      throw InvalidInput("ReadCapFile: x must be ascending");
    }
    x[i] = xi;
    v[i] = cplx(re, im);
  }
  if (width)
  {
    *width = w;
  }
}

std::string CapSpecToJson(const CapSpec &spec)
{
  nlohmann::json j;
  j["shape"] = spec.shape == CapShape::Quadratic ? "quadratic" : "cosine_series";
  j["width"] = spec.width;
  j["real_coeffs"] = spec.real_coeffs;
  j["imag_coeffs"] = spec.imag_coeffs;
  j["quadratic_strength"] = spec.quadratic_strength;
  return j.dump(2);
}

CapSpec CapSpecFromJson(const std::string &text)
{
  try
  {
    const auto j = nlohmann::json::parse(text);
    CapSpec spec;
    const std::string shape = j.at("shape").get<std::string>();
    if (shape == "quadratic")
    {
      spec.shape = CapShape::Quadratic;
    }
    else if (shape != "cosine_series")
    {
      throw InvalidInput("CapSpecFromJson: unknown shape " + shape);
    }
    spec.width = j.at("width").get<double>();
    spec.real_coeffs = j.at("real_coeffs").get<std::vector<double>>();
    spec.imag_coeffs = j.at("imag_coeffs").get<std::vector<double>>();
    spec.quadratic_strength = j.at("quadratic_strength").get<double>();
    return spec;
  }
  catch (const nlohmann::json::exception &e)
  {
    throw InvalidInput(std::string("CapSpecFromJson: ") + e.what());
  }
}

}  // namespace hhgoct
