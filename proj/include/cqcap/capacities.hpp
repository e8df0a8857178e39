#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cqcap/common.hpp"
#include "cqcap/optimize.hpp"
#include "cqcap/spectral.hpp"

namespace cqcap {

/// Classical DMC transition matrix, rows indexed by input symbol. Also used
/// for the superchannels induced by inner code/decoder pairs.
struct DiscreteChannel {
  rmatrix transition;

  explicit DiscreteChannel(rmatrix t) : transition(std::move(t)) {
    if (transition.empty() || transition[0].empty())
      throw std::invalid_argument("DiscreteChannel: empty matrix");
    const std::size_t cols = transition[0].size();
    for (auto& row : transition) {
      if (row.size() != cols)
        throw std::invalid_argument("DiscreteChannel: ragged matrix");
      double sum = 0.0;
      for (double& v : row) {
        if (v < -1e-12)
          throw std::domain_error("DiscreteChannel: negative entry");
        v = std::max(v, 0.0);
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-12)
        throw std::domain_error("DiscreteChannel: row does not sum to 1");
    }
  }

  static DiscreteChannel bsc(double p) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::domain_error("bsc: crossover outside [0,1]");
    return DiscreteChannel({{1.0 - p, p}, {p, 1.0 - p}});
  }

  std::size_t num_inputs() const { return transition.size(); }
  std::size_t num_outputs() const { return transition[0].size(); }
};

/// Holevo capacity of a binary pure-state alphabet with overlap gamma.
inline double holevo_binary(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::domain_error("holevo_binary: gamma outside [0,1]");
  return binary_entropy(0.5 * (1.0 - gamma));
}

/// Single-copy accessible information of the same binary alphabet.
inline double c1_binary(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::domain_error("c1_binary: gamma outside [0,1]");
  const double r = std::sqrt(std::max(0.0, 1.0 - gamma * gamma));
  double c1 = 0.0;
  if (1.0 - r > 0.0) c1 += 0.5 * (1.0 - r) * std::log(1.0 - r);
  if (1.0 + r > 0.0) c1 += 0.5 * (1.0 + r) * std::log(1.0 + r);
  return std::max(c1, 0.0);
}

struct CapacityResult {
  double capacity = 0.0;
  std::vector<double> prior;
  int iterations = 0;
};

namespace detail {

/// <psi_x| f(rho) |psi_x> for every x, evaluated in the Gram picture:
/// diag(G D^{1/2} g(W) D^{1/2} G) with g(t) = f(t)/t and W = D^{1/2} G D^{1/2}.
template <class F>
std::vector<double> state_expectations(const cmatrix& gram,
                                       const std::vector<double>& prior,
                                       F&& f_over_t) {
  const std::size_t n = gram.size();
  const cmatrix w = weighted_gram(gram, prior);
  const cmatrix g = hermitian_apply(w, f_over_t);
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = std::sqrt(std::max(prior[i], 0.0));
  std::vector<double> out(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    // b_i = sqrt(p_i) G_{i x}; value = b^dagger g b
    complex_t acc = 0.0;
    std::vector<complex_t> gb(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      complex_t s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += g[i][j] * (r[j] * gram[j][x]);
      gb[i] = s;
    }
    for (std::size_t i = 0; i < n; ++i)
      acc += std::conj(r[i] * gram[i][x]) * gb[i];
    out[x] = acc.real();
  }
  return out;
}

}  // namespace detail

/// Holevo capacity of a general pure-state alphabet: maximizes the von
/// Neumann entropy of the average state over input priors. The objective is
/// concave, so the projected-gradient stationary point is the global optimum.
inline CapacityResult holevo_general(const cmatrix& gram, double tol = 1e-10) {
  const cmatrix g = detail::validate_gram(gram, "holevo_general");
  const std::size_t n = g.size();
  if (n < 2 || n > 16)
    throw std::domain_error("holevo_general: alphabet size outside [2,16]");

  auto objective = [&](const std::vector<double>& p) {
    return von_neumann_entropy(detail::weighted_spectrum(g, p));
  };
  auto gradient = [&](const std::vector<double>& p) {
    // dS/dp_x = -<psi_x|log rho|psi_x> - 1
    std::vector<double> e = detail::state_expectations(
        g, p, [](double t) { return std::log(t) / t; });
    for (double& v : e) v = -v - 1.0;
    return e;
  };

  detail::SimplexOpt opt = detail::maximize_on_simplex(
      objective, gradient, std::vector<double>(n, 1.0 / double(n)), tol, 5000);
  if (!opt.converged)
    throw convergence_error("holevo_general: prior optimization did not converge",
                            opt.value, opt.x);
  return {opt.value, opt.x, opt.iterations};
}

/// Holevo capacity of the mean-photon-number-constrained bosonic channel
/// with a Gaussian input ensemble.
inline double gaussian_holevo(double energy) {
  if (!(energy >= 0.0)) throw std::domain_error("gaussian_holevo: energy < 0");
  if (energy == 0.0) return 0.0;
  return (1.0 + energy) * std::log1p(energy) - energy * std::log(energy);
}

inline double mutual_information(const std::vector<double>& prior,
                                 const DiscreteChannel& ch) {
  if (prior.size() != ch.num_inputs())
    throw std::invalid_argument("mutual_information: dimension mismatch");
  detail::check_probability_vector(prior, 1e-9, "mutual_information prior");
  const std::size_t ny = ch.num_outputs();
  std::vector<double> q(ny, 0.0);
  for (std::size_t x = 0; x < prior.size(); ++x)
    for (std::size_t y = 0; y < ny; ++y)
      q[y] += prior[x] * ch.transition[x][y];
  double mi = 0.0;
  for (std::size_t x = 0; x < prior.size(); ++x) {
    if (prior[x] <= 0.0) continue;
    for (std::size_t y = 0; y < ny; ++y) {
      const double w = ch.transition[x][y];
      if (w > 0.0 && q[y] > 0.0) mi += prior[x] * w * std::log(w / q[y]);
    }
  }
  return std::max(mi, 0.0);
}

/// Channel capacity by Blahut-Arimoto, stopping when the Csiszar bracket
/// max_x D(W_x || q) - sum_x p_x D(W_x || q) is below tol.
inline CapacityResult max_mutual_information(const DiscreteChannel& ch,
                                             double tol = 1e-10) {
  const std::size_t nx = ch.num_inputs(), ny = ch.num_outputs();
  if (nx > 4096 || ny > 4096)
    throw std::domain_error("max_mutual_information: alphabet exceeds 4096");
  std::vector<double> p(nx, 1.0 / double(nx));
  std::vector<double> q(ny), d(nx);
  constexpr int kMaxIter = 100000;
  double lower = 0.0;
  for (int it = 1; it <= kMaxIter; ++it) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) q[y] += p[x] * ch.transition[x][y];
    double upper = -1e300;
    lower = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      double dx = 0.0;
      for (std::size_t y = 0; y < ny; ++y) {
        const double w = ch.transition[x][y];
        if (w > 0.0) dx += w * (q[y] > 0.0 ? std::log(w / q[y]) : 690.0);
      }
      d[x] = dx;
      lower += p[x] * dx;
      upper = std::max(upper, dx);
    }
    if (upper - lower < tol)
      return {std::max(lower, 0.0), p, it};
    const double dmax = upper;
    double norm = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      p[x] *= std::exp(d[x] - dmax);
      norm += p[x];
    }
    for (double& v : p) v /= norm;
  }
  throw convergence_error("max_mutual_information: iteration cap exceeded",
                          lower, p);
}

/// Photon information efficiency: nats per mean received photon.
inline double pie(double rate, double energy) {
  if (!(energy > 0.0)) throw std::domain_error("pie: energy must be positive");
  return rate / energy;
}

}  // namespace cqcap
