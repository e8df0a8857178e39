#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "cqcap/capacities.hpp"
#include "cqcap/common.hpp"
#include "cqcap/optimize.hpp"
#include "cqcap/spectral.hpp"

namespace cqcap {

/// Inner product <a|b> of two coherent states. Downstream binary formulas
/// consume only the magnitude exp(-|a-b|^2/2); the phase is kept for
/// constellation Gram matrices.
inline complex_t coherent_overlap(complex_t a, complex_t b) {
  const complex_t exponent =
      -0.5 * (std::norm(a) + std::norm(b)) + std::conj(a) * b;
  return std::exp(exponent);
}

/// Coherent-state constellation under a mean-photon-number budget.
struct CoherentConstellation {
  std::vector<complex_t> amplitudes;
  std::vector<double> prior;
  double energy_budget = 0.0;

  CoherentConstellation(std::vector<complex_t> amps, std::vector<double> p,
                        double energy)
      : amplitudes(std::move(amps)), prior(std::move(p)), energy_budget(energy) {
    if (amplitudes.empty() || amplitudes.size() != prior.size())
      throw std::invalid_argument("CoherentConstellation: size mismatch");
    if (!(energy_budget >= 0.0))
      throw std::domain_error("CoherentConstellation: negative energy budget");
    detail::check_probability_vector(prior, 1e-12, "constellation prior");
    double mean = 0.0;
    for (std::size_t i = 0; i < amplitudes.size(); ++i)
      mean += prior[i] * std::norm(amplitudes[i]);
    if (mean > energy_budget + 1e-12)
      throw std::domain_error("CoherentConstellation: energy budget exceeded");
  }

  GramEnsemble to_ensemble() const {
    const std::size_t n = amplitudes.size();
    cmatrix g(n, std::vector<complex_t>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        g[i][j] = coherent_overlap(amplitudes[i], amplitudes[j]);
    return GramEnsemble(std::move(g), prior);
  }
};

/// Antipodal coherent pair {|sqrt(E)>, |-sqrt(E)>} with prior (1-q, q).
/// Both amplitudes carry energy E, so any prior meets the budget.
inline GramEnsemble bpsk_ensemble(double energy, double q) {
  if (!(energy >= 0.0)) throw std::domain_error("bpsk_ensemble: energy < 0");
  if (!(q >= 0.0 && q <= 1.0))
    throw std::domain_error("bpsk_ensemble: q outside [0,1]");
  const double gamma = std::exp(-2.0 * energy);
  return GramEnsemble({{1.0, gamma}, {gamma, 1.0}}, {1.0 - q, q});
}

struct RatePair {
  double exact = 0.0;
  double asymptotic = 0.0;
};

/// BPSK Holevo capacity: exact closed form and its small-E expansion.
inline RatePair c_bpsk(double energy) {
  if (!(energy >= 0.0)) throw std::domain_error("c_bpsk: energy < 0");
  RatePair out;
  out.exact = holevo_binary(std::exp(-2.0 * energy));
  out.asymptotic =
      energy > 0.0 ? energy * std::log(1.0 / energy) + energy : 0.0;
  return out;
}

/// BPSK single-copy accessible information: exact and small-E form.
inline RatePair c1_bpsk(double energy) {
  if (!(energy >= 0.0)) throw std::domain_error("c1_bpsk: energy < 0");
  RatePair out;
  out.exact = c1_binary(std::exp(-2.0 * energy));
  out.asymptotic = 2.0 * energy;
  return out;
}

struct OptimalBinaryInputs {
  double q_star = 0.0;
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double c1_exact = 0.0;
  double c1_asymptotic = 0.0;
};

namespace detail {

/// Mutual information of the optimal antipodal pair at prior weight q:
/// I(q) = H_B(q) - H_B(p) with p from the k* = (1-q)/q geometry, under the
/// mean-photon-number budget E.
inline double optimal_binary_rate_at(double q, double energy) {
  const double d2 = energy / (q * (1.0 - q));
  const double rad = 1.0 - 4.0 * q * (1.0 - q) * std::exp(-d2);
  const double p = 0.5 * (1.0 - std::sqrt(std::max(0.0, rad)));
  return binary_entropy(q) - binary_entropy(p);
}

}  // namespace detail

/// Energy-constrained optimal binary coherent inputs for single-copy
/// detection: maximizes I(q) over the prior weight on a log-q bracket.
inline OptimalBinaryInputs optimal_binary_inputs(double energy) {
  if (!(energy > 0.0 && energy < 0.1))
    throw regime_error("optimal_binary_inputs: energy outside (0, 0.1)");
  const double lo = std::log(10.0 * energy * energy);
  const double hi = std::log(0.5);
  auto objective = [energy](double u) {
    return detail::optimal_binary_rate_at(std::exp(u), energy);
  };
  // golden section over log q until the q bracket narrows below 1e-12
  double a = lo, b = hi;
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 200 && std::exp(b) - std::exp(a) > 1e-12; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(x1);
    }
  }
  OptimalBinaryInputs out;
  out.q_star = std::exp(0.5 * (a + b));
  out.c1_exact = detail::optimal_binary_rate_at(out.q_star, energy);
  out.alpha0 = std::sqrt(energy * out.q_star / (1.0 - out.q_star));
  out.alpha1 = -std::sqrt(energy * (1.0 - out.q_star) / out.q_star);
  const double big_l = std::log(1.0 / energy);
  out.c1_asymptotic = energy * big_l - energy * std::log(big_l);
  return out;
}

}  // namespace cqcap
