#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "cqcap/common.hpp"

namespace cqcap::detail {

struct ScalarMax {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section maximization on [lo, hi]. Tracks the best probe seen, so a
/// mildly non-unimodal objective still returns the best sampled point.
template <class F>
ScalarMax golden_section_max(F&& f, double lo, double hi, double xtol,
                             int max_iter = 200) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  ScalarMax best = f1 >= f2 ? ScalarMax{x1, f1} : ScalarMax{x2, f2};
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
      if (f2 > best.value) best = {x2, f2};
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
      if (f1 > best.value) best = {x1, f1};
    }
  }
  return best;
}

/// Euclidean projection onto the probability simplex.
inline std::vector<double> project_to_simplex(std::vector<double> v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    css += u[i];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  for (double& x : v) x = std::max(0.0, x - theta);
  // kill projection round-off so downstream probability checks stay exact
  double s = std::accumulate(v.begin(), v.end(), 0.0);
  for (double& x : v) x /= s;
  return v;
}

struct SimplexOpt {
  std::vector<double> x;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// KKT residual of max f over the simplex at x with gradient g: on the
/// support the gradient must be constant, off the support no larger.
inline double simplex_kkt_residual(const std::vector<double>& x,
                                   const std::vector<double>& g) {
  double lambda = 0.0;
  int support = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 1e-12) {
      lambda += g[i];
      ++support;
    }
  }
  lambda /= std::max(1, support);
  double res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 1e-12)
      res = std::max(res, std::abs(g[i] - lambda));
    else
      res = std::max(res, std::max(0.0, g[i] - lambda));
  }
  return res;
}

/// Projected gradient ascent with backtracking line search for a concave
/// objective on the probability simplex.
template <class F, class G>
SimplexOpt maximize_on_simplex(F&& f, G&& grad, std::vector<double> x0,
                               double grad_tol = 1e-10, int max_iter = 5000) {
  SimplexOpt out;
  out.x = project_to_simplex(std::move(x0));
  out.value = f(out.x);
  double step = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it;
    std::vector<double> g = grad(out.x);
    if (simplex_kkt_residual(out.x, g) <= grad_tol) {
      out.converged = true;
      return out;
    }
    bool improved = false;
    for (int bt = 0; bt < 60; ++bt) {
      std::vector<double> trial(out.x.size());
      for (std::size_t i = 0; i < trial.size(); ++i)
        trial[i] = out.x[i] + step * g[i];
      trial = project_to_simplex(std::move(trial));
      const double fv = f(trial);
      if (fv > out.value) {
        double decrease = 0.0;
        for (std::size_t i = 0; i < trial.size(); ++i)
          decrease += std::abs(trial[i] - out.x[i]);
        out.x = std::move(trial);
        out.value = fv;
        improved = true;
        if (decrease > 0.5 * step) step *= 2.0;  // step not binding, grow back
        break;
      }
      step *= 0.5;
    }
    if (!improved) {
      // step underflowed: accept stationarity at line-search resolution
      out.converged = simplex_kkt_residual(out.x, grad(out.x)) <= 1e3 * grad_tol;
      return out;
    }
  }
  return out;
}

}  // namespace cqcap::detail
