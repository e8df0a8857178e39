#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cqcap/capacities.hpp"
#include "cqcap/common.hpp"
#include "cqcap/exponents.hpp"
#include "cqcap/optical.hpp"
#include "cqcap/optimize.hpp"

namespace cqcap {

/// One evaluated lower-bound point on C_N/N.
struct BoundPoint {
  long long n = 0;
  double rate_lb = 0.0;
  double r_star = 0.0;
  double s_star = 0.0;
  double exponent = 0.0;
  double pe_bound = 0.0;   // clamped to [0,1]
  bool negative_rate = false;
  std::string error;       // set instead of values when a sweep point fails

  bool ok() const { return error.empty(); }
};

struct BoundCurve {
  std::string model;
  std::optional<double> energy;  // set for models with a photon-number budget
  std::vector<BoundPoint> points;
};

namespace detail {

/// max over R in (0, C] of (1 - clamp(coef * e^{-n E(R)})) R - log2/n.
/// Grid-first (log-spaced, ties to the smaller R), then golden refinement in
/// the winning bracket; an optional warm-start candidate from a neighbouring
/// sweep point is also admitted.
template <class Model>
BoundPoint concatenation_bound(const Model& model, long long n, double coef,
                               const double* warm_r = nullptr) {
  if (n < 1) throw std::domain_error("bound: blocklength must be >= 1");
  const double cap = model.capacity();
  const double log2_over_n = std::log(2.0) / double(n);
  if (cap <= 1e-12) {  // zero-capacity model: only the -log2/n floor remains
    BoundPoint out;
    out.n = n;
    out.r_star = 0.0;
    out.s_star = 0.0;
    out.exponent = 0.0;
    out.pe_bound = std::min(coef, 1.0);
    out.rate_lb = -log2_over_n;
    out.negative_rate = true;
    return out;
  }
  auto objective = [&](double r) {
    const double e = model.exponent(r).exponent;
    const double pe = std::min(1.0, coef * std::exp(-double(n) * e));
    return (1.0 - pe) * r - log2_over_n;
  };

  constexpr int kGrid = 2000;
  const double lo = std::min(1e-6, cap), hi = cap;
  double best_r = lo, best_v = objective(lo);
  for (int i = 1; i < kGrid; ++i) {
    const double r =
        std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (kGrid - 1));
    const double v = objective(r);
    if (v > best_v) {
      best_v = v;
      best_r = r;
    }
  }
  const double step = (std::log(hi) - std::log(lo)) / (kGrid - 1);
  ScalarMax refined = golden_section_max(
      [&](double u) { return objective(std::exp(u)); },
      std::log(best_r) - step, std::min(std::log(best_r) + step, std::log(hi)),
      1e-12);
  if (refined.value > best_v) {
    best_v = refined.value;
    best_r = std::exp(refined.x);
  }
  if (warm_r && *warm_r > 0.0 && *warm_r <= cap) {
    const double v = objective(*warm_r);
    if (v > best_v) {
      best_v = v;
      best_r = *warm_r;
    }
  }

  const ExponentPoint ep = model.exponent(best_r);
  BoundPoint out;
  out.n = n;
  out.r_star = best_r;
  out.s_star = ep.s_star;
  out.exponent = ep.exponent;
  out.pe_bound =
      std::clamp(coef * std::exp(-double(n) * ep.exponent), 0.0, 1.0);
  out.rate_lb = best_v;
  out.negative_rate = best_v < 0.0;
  return out;
}

}  // namespace detail

/// Lower bound on C_N/N for a pure-state alphabet measured in blocks of n:
/// max_R (1 - 2 e^{-n E(R)}) R - log2/n with the quantum exponent.
inline BoundPoint quantum_rate_bound(const QuantumExponentModel& model, long long n) {
  return detail::concatenation_bound(model, n, 2.0);
}

inline BoundPoint quantum_rate_bound(const cmatrix& gram, long long n) {
  return quantum_rate_bound(QuantumExponentModel(gram), n);
}

/// Classical analogue with hard-decision inner decoding: coefficient 1 on the
/// error term instead of 2.
inline BoundPoint classical_rate_bound(const ClassicalExponentModel& model, long long n) {
  return detail::concatenation_bound(model, n, 1.0);
}

inline BoundPoint classical_rate_bound(const DiscreteChannel& ch, long long n) {
  return classical_rate_bound(ClassicalExponentModel(ch), n);
}

/// Closed-form BPSK bound: the printed rate R* and Gallager parameter s'
/// give an exponent lower bound Etilde(R*) <= E(R*), valid for
/// n >= log(1/E)/E with R* inside (R_c, C) and s' in [0,1].
inline BoundPoint bpsk_rate_bound(double energy, long long n) {
  if (!(energy > 0.0 && energy < 1.0))
    throw std::domain_error("bpsk_rate_bound: energy outside (0,1)");
  const double big_l = std::log(1.0 / energy);
  if (double(n) < big_l / energy)
    throw regime_error("bpsk_rate_bound: n below log(1/E)/E");
  const double x = double(n) * energy;
  const double f = std::log(x * std::log(x)) / x;
  const double r_star = energy * big_l * (1.0 - std::sqrt(f)) + energy;
  const double r_c = energy + energy * energy * big_l;
  const double cap_asym = energy * big_l + energy;
  if (!(r_star > r_c && r_star < cap_asym))
    throw regime_error("bpsk_rate_bound: R* fell outside (R_c, C)");
  const double s =
      (std::log(big_l) - std::log(r_star - energy)) / big_l - 1.0;
  if (!(s >= 0.0 && s <= 1.0))
    throw regime_error("bpsk_rate_bound: s' fell outside [0,1]");
  const double sig1 = 0.5 * (1.0 - std::exp(-2.0 * energy));
  const double sig2 = 0.5 * (1.0 + std::exp(-2.0 * energy));
  const double etilde =
      -std::log(std::pow(sig1, 1.0 + s) + std::pow(sig2, 1.0 + s)) - s * r_star;

  BoundPoint out;
  out.n = n;
  out.r_star = r_star;
  out.s_star = s;
  out.exponent = etilde;
  out.pe_bound = std::clamp(2.0 * std::exp(-double(n) * etilde), 0.0, 1.0);
  out.rate_lb = (1.0 - out.pe_bound) * r_star - std::log(2.0) / double(n);
  out.negative_rate = out.rate_lb < 0.0;
  return out;
}

/// Leading-order simplification of the BPSK bound, valid on the narrower
/// window log(1/E)^2/E <= n <= 1/E^2.
inline double bpsk_simplified_bound(double energy, long long n) {
  if (!(energy > 0.0 && energy < 1.0))
    throw std::domain_error("bpsk_simplified_bound: energy outside (0,1)");
  const double big_l = std::log(1.0 / energy);
  if (double(n) < big_l * big_l / energy || double(n) > 1.0 / (energy * energy))
    throw regime_error("bpsk_simplified_bound: n outside validity window");
  const double x = double(n) * energy;
  const double f = std::log(x * std::log(x)) / x;
  return energy * big_l * (1.0 - std::sqrt(f)) + energy;
}

/// Dispersion-form lower bound: C (1 - sqrt(V log(n C^2/V) / (n C^2))) -
/// log2/n, leading order only (the printed remainder term is dropped).
inline double dispersion_rate_bound(double capacity, double dispersion, long long n) {
  if (!(dispersion > 0.0))
    throw std::domain_error("dispersion_rate_bound: dispersion must be positive");
  if (!(capacity > 0.0))
    throw std::domain_error("dispersion_rate_bound: capacity must be positive");
  const double u = double(n) * capacity * capacity / dispersion;
  if (!(u > 1.0))
    throw std::domain_error("dispersion_rate_bound: n C^2 must exceed V");
  return capacity * (1.0 - std::sqrt(std::log(u) / u)) -
         std::log(2.0) / double(n);
}

struct EquierrorCapacity {
  double capacity = 0.0;         // log m - pe log(m-1) - H_B(pe)
  double weak_lower_bound = 0.0; // (1 - pe) log m - log 2
};

/// Maximum mutual information of the equierror superchannel with m messages
/// and uniform error probability pe. m may be the real-valued e^{NR}.
inline EquierrorCapacity equierror_capacity(double m, double pe) {
  if (!(m >= 2.0)) throw std::domain_error("equierror_capacity: m < 2");
  if (!(pe >= 0.0 && pe <= 1.0))
    throw std::domain_error("equierror_capacity: pe outside [0,1]");
  EquierrorCapacity out;
  out.capacity = std::log(m) - pe * std::log(m - 1.0) - binary_entropy(pe);
  out.weak_lower_bound = (1.0 - pe) * std::log(m) - std::log(2.0);
  return out;
}

/// The m x m equierror superchannel: diagonal 1-pe, off-diagonal pe/(m-1).
inline DiscreteChannel equierror_channel(int m, double pe) {
  if (m < 2) throw std::domain_error("equierror_channel: m < 2");
  if (!(pe >= 0.0 && pe <= 1.0))
    throw std::domain_error("equierror_channel: pe outside [0,1]");
  rmatrix t(m, std::vector<double>(m, pe / double(m - 1)));
  for (int i = 0; i < m; ++i) t[i][i] = 1.0 - pe;
  return DiscreteChannel(std::move(t));
}

// ---------------------------------------------------------------------------
// Bound sweeps over a blocklength grid

/// Gram matrix of a binary pure-state alphabet with overlap magnitude gamma.
inline cmatrix binary_gram(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::domain_error("binary_gram: gamma outside [0,1]");
  return {{1.0, gamma}, {gamma, 1.0}};
}

struct BinaryGammaModel {
  double gamma = 0.0;
};
struct BpskEnergyModel {
  double energy = 0.0;
};
struct DmcModel {
  DiscreteChannel channel;
};
struct DispersionModel {
  double capacity = 0.0;
  double dispersion = 0.0;
};

using SweepModel =
    std::variant<BinaryGammaModel, BpskEnergyModel, DmcModel, DispersionModel>;

/// Evaluates the matching bound at every n in the (strictly increasing) grid.
/// Per-point regime violations are recorded on the point, not thrown.
inline BoundCurve sweep(const SweepModel& model,
                        const std::vector<long long>& n_grid) {
  if (n_grid.empty()) throw std::invalid_argument("sweep: empty n grid");
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1])
      throw std::invalid_argument("sweep: n grid must be strictly increasing");

  BoundCurve curve;
  auto run = [&](auto&& eval) {
    for (long long n : n_grid) {
      BoundPoint p;
      try {
        p = eval(n);
      } catch (const std::exception& ex) {
        p = BoundPoint{};
        p.n = n;
        p.error = ex.what();
      }
      curve.points.push_back(std::move(p));
    }
  };

  if (const auto* m = std::get_if<BinaryGammaModel>(&model)) {
    curve.model = "binary";
    QuantumExponentModel qm(binary_gram(m->gamma));
    double warm = -1.0;
    run([&](long long n) {
      BoundPoint p = detail::concatenation_bound(qm, n, 2.0,
                                                 warm > 0.0 ? &warm : nullptr);
      warm = p.r_star;
      return p;
    });
  } else if (const auto* m = std::get_if<BpskEnergyModel>(&model)) {
    curve.model = "bpsk";
    curve.energy = m->energy;
    run([&](long long n) { return bpsk_rate_bound(m->energy, n); });
  } else if (const auto* m = std::get_if<DmcModel>(&model)) {
    curve.model = "dmc";
    ClassicalExponentModel cm(m->channel);
    double warm = -1.0;
    run([&](long long n) {
      BoundPoint p = detail::concatenation_bound(cm, n, 1.0,
                                                 warm > 0.0 ? &warm : nullptr);
      warm = p.r_star;
      return p;
    });
  } else {
    const auto& dm = std::get<DispersionModel>(model);
    curve.model = "dispersion";
    run([&](long long n) {
      BoundPoint p;
      p.n = n;
      p.rate_lb = dispersion_rate_bound(dm.capacity, dm.dispersion, n);
      p.negative_rate = p.rate_lb < 0.0;
      p.r_star = p.s_star = p.exponent = p.pe_bound =
          std::numeric_limits<double>::quiet_NaN();
      return p;
    });
  }
  return curve;
}

}  // namespace cqcap
