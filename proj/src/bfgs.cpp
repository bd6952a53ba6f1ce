// Copyright hhgoct contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "hhgoct/bfgs.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hhgoct/errors.hpp"

namespace hhgoct
{

Eigen::MatrixXd InitialInverseHessian(const ReducedSpace &space, const FilterFunction &ftilde,
                                      const std::vector<double> &weights)
{
  const int n = space.Size();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (int r = 0; r < n; r++)
  {
    const int j = space.Indices()[r];
    s(r, r) = 0.5 * ftilde.samples[j] / weights[j];
  }
  return s;
}

bool BfgsUpdate(Eigen::MatrixXd &sinv, const Eigen::VectorXd &delta, const Eigen::VectorXd &gamma)
{
  const double dg = delta.dot(gamma);
  if (!(dg > 0.0))
  {
    return false;
  }
  const Eigen::VectorXd sg = sinv * gamma;
  const double gsg = gamma.dot(sg);
  sinv += ((1.0 + gsg / dg) / dg) * (delta * delta.transpose()) -
          (delta * sg.transpose() + sg * delta.transpose()) / dg;
  sinv = 0.5 * (sinv + sinv.transpose()).eval();
  return true;
}

double KappaMax(const TemporalField &eps_t, const TemporalField &q, double eps_max)
{
  if (eps_t.samples.size() != q.samples.size())
  {
    throw InvalidInput("KappaMax: length mismatch");
  }
  double bound = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < q.samples.size(); k++)
  {
    const double e = eps_t.samples[k];
    if (std::abs(e) > eps_max * (1.0 + 1e-12))
    {
      throw ContractError("KappaMax: field already exceeds eps_max (" + std::to_string(e) + ")");
    }
    const double qk = q.samples[k];
    if (qk == 0.0)
    {
      continue;
    }
    const double room = eps_max - std::copysign(1.0, qk) * e;
    bound = std::min(bound, std::max(room, 0.0) / std::abs(qk));
  }
  return bound;
}

double CubicMinimizer(double a, double fa, double da, double b, double fb, double db, double lo,
                      double hi)
{
  if (lo > hi)
  {
    std::swap(lo, hi);
  }
  const double d = b - a;
  if (d == 0.0)
  {
    return lo;
  }
  // c(z) = fa + A z + B z^2 + C z^3 on x = a + z d.
  const double ca = da * d;
  const double cb = 3.0 * (fb - fa) - (2.0 * da + db) * d;
  const double cc = (da + db) * d - 2.0 * (fb - fa);
  auto value = [&](double x)
  {
    const double z = (x - a) / d;
    return fa + z * (ca + z * (cb + z * cc));
  };
  double best = lo;
  double best_val = value(lo);
  auto consider = [&](double x)
  {
    if (std::isfinite(x) && x >= lo && x <= hi)
    {
      const double v = value(x);
      if (v < best_val)
      {
        best = x;
        best_val = v;
      }
    }
  };
  consider(hi);
  // c'(z) = A + 2B z + 3C z^2
  const double qa = 3.0 * cc, qb = 2.0 * cb, qc = ca;
  if (qa == 0.0)
  {
    if (qb != 0.0)
    {
      consider(a + d * (-qc / qb));
    }
  }
  else
  {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0)
    {
      const double sq = std::sqrt(disc);
      const double r1 = (-qb + sq) / (2.0 * qa);
      const double r2 = (-qb - sq) / (2.0 * qa);
      consider(a + d * r1);
      consider(a + d * r2);
    }
  }
  return best;
}

LineSearchResult LineSearch(const std::function<LineProbe(double)> &phi, const LineProbe &phi0,
                            double kappa_max, const LineSearchParams &p)
{
  if (!(phi0.slope < 0.0))
  {
    throw LineSearchError("LineSearch: not a descent direction (slope " +
                          std::to_string(phi0.slope) + ")");
  }
  if (!(p.rho >= 0.0 && p.rho < p.sigma && p.sigma < 1.0))
  {
    throw InvalidInput("LineSearch: need 0 <= rho < sigma < 1");
  }
  LineSearchResult res;
  if (!(kappa_max > 0.0))
  {
    return res;
  }
  const double f0 = phi0.value;
  const double d0 = phi0.slope;
  double mu = kappa_max;
  if (p.rho > 0.0 && std::isfinite(p.fbar))
  {
    mu = std::min(mu, (p.fbar - f0) / (p.rho * d0));
  }

  double best_k = 0.0;
  LineProbe best = phi0;
  int index = -1;
  auto eval = [&](double k)
  {
    LineProbe pr = phi(k);
    res.evaluations++;
    index++;
    if (std::isfinite(pr.value) && pr.value < best.value)
    {
      best = pr;
      best_k = k;
      res.accepted_index = index;
    }
    return pr;
  };
  auto accept = [&](double k, const LineProbe &pr, LineSearchStatus st)
  {
    res.status = st;
    res.kappa = k;
    res.probe = pr;
    res.accepted_index = index;
    return res;
  };
  auto fallback = [&]()
  {
    if (best_k > 0.0)
    {
      res.status = LineSearchStatus::BestEffort;
      res.kappa = best_k;
      res.probe = best;
    }
    else
    {
      res.status = LineSearchStatus::Failed;
      res.accepted_index = -1;
    }
    return res;
  };
  auto sufficient = [&](double k, const LineProbe &pr, const LineProbe &ref)
  { return std::isfinite(pr.value) && pr.value <= f0 + p.rho * k * d0 && pr.value < ref.value; };

  // Bracketing.
  double prev_k = 0.0;
  LineProbe prev = phi0;
  double k = std::min(p.kappa0, mu);
  double a, b;
  LineProbe pa, pb;
  while (true)
  {
    if (res.evaluations >= p.max_evaluations)
    {
      return fallback();
    }
    const LineProbe cur = eval(k);
    if (cur.value <= p.fbar)
    {
      return accept(k, cur, LineSearchStatus::Wolfe);
    }
    if (!sufficient(k, cur, prev))
    {
      a = prev_k;
      pa = prev;
      b = k;
      pb = cur;
      break;
    }
    if (std::abs(cur.slope) <= -p.sigma * d0)
    {
      return accept(k, cur, LineSearchStatus::Wolfe);
    }
    if (cur.slope >= 0.0)
    {
      a = k;
      pa = cur;
      b = prev_k;
      pb = prev;
      break;
    }
    if (k >= mu)
    {
      return accept(k, cur, LineSearchStatus::CapBinding);
    }
    res.expansions++;
    double next;
    if (mu <= 2.0 * k - prev_k)
    {
      next = mu;
    }
    else
    {
      const double lo = 2.0 * k - prev_k;
      const double hi = std::min(mu, k + p.tau1 * (k - prev_k));
      next = CubicMinimizer(prev_k, prev.value, prev.slope, k, cur.value, cur.slope, lo, hi);
    }
    prev_k = k;
    prev = cur;
    k = next;
  }

  // Sectioning.
  while (res.evaluations < p.max_evaluations)
  {
    const double lo = a + p.tau2 * (b - a);
    const double hi = b - p.tau3 * (b - a);
    k = CubicMinimizer(a, pa.value, pa.slope, b, pb.value, pb.slope, lo, hi);
    // Stop once the predicted change is below rounding of the objective.
    if (std::abs((k - a) * pa.slope) <= 1e-15 * std::max(std::abs(pa.value), 1e-300))
    {
      break;
    }
    const LineProbe cur = eval(k);
    if (!sufficient(k, cur, pa))
    {
      b = k;
      pb = cur;
      continue;
    }
    if (std::abs(cur.slope) <= -p.sigma * d0)
    {
      return accept(k, cur, LineSearchStatus::Wolfe);
    }
    if ((b - a) * cur.slope >= 0.0)
    {
      b = a;
      pb = pa;
    }
    a = k;
    pa = cur;
  }
  return fallback();
}

}  // namespace hhgoct
