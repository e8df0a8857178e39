#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "cqcap/capacities.hpp"
#include "cqcap/common.hpp"
#include "cqcap/optimize.hpp"
#include "cqcap/spectral.hpp"

namespace cqcap {

struct ExponentPoint {
  double rate = 0.0;
  double exponent = 0.0;
  double s_star = 0.0;
  std::vector<double> prior_star;
};

/// -log Tr(rho^{1+s}) from the spectrum of rho, via log-sum-exp.
inline double quantum_e0(const Spectrum& spec, double gallager_s) {
  if (!(gallager_s >= 0.0 && gallager_s <= 1.0))
    throw std::domain_error("quantum_e0: s outside [0,1]");
  double tmax = -1e300;
  std::vector<double> terms;
  terms.reserve(spec.size());
  for (double sigma : spec.values()) {
    if (sigma <= detail::kZeroEigenvalue) continue;
    const double t = (1.0 + gallager_s) * std::log(sigma);
    terms.push_back(t);
    tmax = std::max(tmax, t);
  }
  if (terms.empty()) throw numeric_error("quantum_e0: empty spectrum support");
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - tmax);
  return -(tmax + std::log(acc));
}

/// Gallager E0 for a classical DMC at Gallager parameter s.
inline double classical_e0(const std::vector<double>& prior,
                           const DiscreteChannel& ch, double gallager_s) {
  if (!(gallager_s >= 0.0 && gallager_s <= 1.0))
    throw std::domain_error("classical_e0: s outside [0,1]");
  if (prior.size() != ch.num_inputs())
    throw std::invalid_argument("classical_e0: dimension mismatch");
  const double e = 1.0 / (1.0 + gallager_s);
  double total = 0.0;
  for (std::size_t y = 0; y < ch.num_outputs(); ++y) {
    double g = 0.0;
    for (std::size_t x = 0; x < prior.size(); ++x) {
      const double w = ch.transition[x][y];
      if (w > 0.0 && prior[x] > 0.0) g += prior[x] * std::pow(w, e);
    }
    if (g > 0.0) total += std::pow(g, 1.0 + gallager_s);
  }
  return -std::log(total);
}

namespace detail {

/// phi(s) = max over priors of E0(s, P), tabulated on an s-grid with the
/// maximizing priors, plus local quadratic interpolation in between. The
/// Legendre transform E(R) = max_s [phi(s) - s R] is evaluated off the grid.
class E0Envelope {
 public:
  using Objective =
      std::function<double(const std::vector<double>&, double)>;
  using Gradient =
      std::function<std::vector<double>(const std::vector<double>&, double)>;

  E0Envelope(std::size_t dim, Objective e0, Gradient e0_grad,
             std::size_t nodes = 2049)
      : dim_(dim), e0_(std::move(e0)), grad_(std::move(e0_grad)) {
    s_.resize(nodes);
    phi_.resize(nodes);
    priors_.resize(nodes);
    std::vector<double> warm(dim_, 1.0 / double(dim_));
    for (std::size_t k = 0; k < nodes; ++k) {
      s_[k] = double(k) / double(nodes - 1);
      auto [value, prior] = maximize_prior(s_[k], warm);
      phi_[k] = value;
      priors_[k] = prior;
      warm = std::move(prior);
    }
  }

  /// Exact phi(s), warm-started from the nearest tabulated node.
  std::pair<double, std::vector<double>> e0_max(double s) const {
    return maximize_prior(s, priors_[nearest(s)]);
  }

  double phi_interp(double s) const {
    const std::size_t n = s_.size();
    std::size_t k = nearest(s);
    if (k == 0) k = 1;
    if (k == n - 1) k = n - 2;
    const double x0 = s_[k - 1], x1 = s_[k], x2 = s_[k + 1];
    const double y0 = phi_[k - 1], y1 = phi_[k], y2 = phi_[k + 1];
    return y0 * (s - x1) * (s - x2) / ((x0 - x1) * (x0 - x2)) +
           y1 * (s - x0) * (s - x2) / ((x1 - x0) * (x1 - x2)) +
           y2 * (s - x0) * (s - x1) / ((x2 - x0) * (x2 - x1));
  }

  ExponentPoint exponent(double rate, bool polish_prior = false) const {
    if (!(rate >= 0.0)) throw std::domain_error("error exponent: rate < 0");
    const std::size_t n = s_.size();
    std::size_t best = 0;
    double best_val = phi_[0];
    for (std::size_t k = 0; k < n; ++k) {
      const double v = phi_[k] - s_[k] * rate;
      if (v > best_val) {
        best_val = v;
        best = k;
      }
    }
    const double lo = s_[best == 0 ? 0 : best - 1];
    const double hi = s_[best + 1 >= n ? n - 1 : best + 1];
    ScalarMax ref = golden_section_max(
        [&](double s) { return phi_interp(s) - s * rate; }, lo, hi, 1e-13);
    ExponentPoint p;
    p.rate = rate;
    if (ref.value >= best_val) {
      p.exponent = std::max(0.0, ref.value);
      p.s_star = ref.x;
    } else {
      p.exponent = std::max(0.0, best_val);
      p.s_star = s_[best];
    }
    if (p.exponent == 0.0) p.s_star = 0.0;
    if (polish_prior) {
      auto [value, prior] = e0_max(p.s_star);
      p.prior_star = std::move(prior);
      p.exponent = std::max(0.0, value - p.s_star * rate);
    } else {
      p.prior_star = priors_[nearest(p.s_star)];
    }
    return p;
  }

 private:
  std::size_t nearest(double s) const {
    const double t = std::clamp(s, 0.0, 1.0) * double(s_.size() - 1);
    return static_cast<std::size_t>(std::llround(t));
  }

  std::pair<double, std::vector<double>> maximize_prior(
      double s, std::vector<double> warm) const {
    if (s == 0.0) return {0.0, std::move(warm)};  // Tr rho = 1 for any prior
    auto f = [&](const std::vector<double>& p) { return e0_(p, s); };
    auto g = [&](const std::vector<double>& p) { return grad_(p, s); };
    SimplexOpt opt = maximize_on_simplex(f, g, warm, 1e-11, 2000);
    if (opt.converged) return {opt.value, opt.x};
    // flat-region fallback: coarse simplex scan, then one more ascent pass
    if (dim_ == 2) {
      double bq = 0.5, bv = -1e300;
      for (int i = 0; i <= 512; ++i) {
        const double q = double(i) / 512.0;
        const double v = f({1.0 - q, q});
        if (v > bv) {
          bv = v;
          bq = q;
        }
      }
      ScalarMax r = golden_section_max(
          [&](double q) { return f({1.0 - q, q}); },
          std::max(0.0, bq - 1.0 / 512.0), std::min(1.0, bq + 1.0 / 512.0),
          1e-14);
      if (r.value >= opt.value) return {r.value, {1.0 - r.x, r.x}};
      return {opt.value, opt.x};
    }
    if (dim_ == 3) {
      std::vector<double> bp = opt.x;
      double bv = opt.value;
      for (int i = 0; i <= 512; ++i) {
        for (int j = 0; j <= 512 - i; ++j) {
          const std::vector<double> p = {i / 512.0, j / 512.0,
                                         (512 - i - j) / 512.0};
          const double v = f(p);
          if (v > bv) {
            bv = v;
            bp = p;
          }
        }
      }
      SimplexOpt fin = maximize_on_simplex(f, g, bp, 1e-11, 2000);
      return fin.value >= bv ? std::make_pair(fin.value, fin.x)
                             : std::make_pair(bv, bp);
    }
    throw convergence_error("E0 prior optimization did not converge", opt.value,
                            opt.x);
  }

  std::size_t dim_;
  Objective e0_;
  Gradient grad_;
  std::vector<double> s_;
  std::vector<double> phi_;
  std::vector<std::vector<double>> priors_;
};

}  // namespace detail

/// Random-coding exponent machinery for a pure-state alphabet, reusable
/// across rates (the prior envelope is tabulated once).
class QuantumExponentModel {
 public:
  explicit QuantumExponentModel(cmatrix gram, std::size_t nodes = 2049)
      : gram_(detail::validate_gram(gram, "QuantumExponentModel")),
        capacity_(holevo_general(gram_).capacity),
        envelope_(make_envelope(gram_, nodes)) {}

  double capacity() const { return capacity_; }

  double e0_max(double s) const { return envelope_.e0_max(s).first; }

  ExponentPoint exponent(double rate, bool polish_prior = false) const {
    return envelope_.exponent(rate, polish_prior);
  }

 private:
  static detail::E0Envelope make_envelope(const cmatrix& gram,
                                          std::size_t nodes) {
    auto e0 = [gram](const std::vector<double>& p, double s) {
      return quantum_e0(detail::weighted_spectrum(gram, p), s);
    };
    auto grad = [gram](const std::vector<double>& p, double s) {
      // d/dp_x of -log Tr(rho^{1+s}) = -(1+s) <psi_x|rho^s|psi_x> / Tr(rho^{1+s})
      const Spectrum spec = detail::weighted_spectrum(gram, p);
      double trace = 0.0;
      for (double sigma : spec.values())
        if (sigma > detail::kZeroEigenvalue) trace += std::pow(sigma, 1.0 + s);
      std::vector<double> e = detail::state_expectations(
          gram, p, [s](double t) { return std::pow(t, s - 1.0); });
      for (double& v : e) v = -(1.0 + s) * v / trace;
      return e;
    };
    return detail::E0Envelope(gram.size(), e0, grad, nodes);
  }

  cmatrix gram_;
  double capacity_;
  detail::E0Envelope envelope_;
};

/// Same machinery for a classical DMC with Gallager's E0.
class ClassicalExponentModel {
 public:
  explicit ClassicalExponentModel(DiscreteChannel ch, std::size_t nodes = 2049)
      : ch_(std::move(ch)),
        capacity_(max_mutual_information(ch_, 1e-12).capacity),
        envelope_(make_envelope(ch_, nodes)) {}

  double capacity() const { return capacity_; }

  double e0_max(double s) const { return envelope_.e0_max(s).first; }

  ExponentPoint exponent(double rate, bool polish_prior = false) const {
    return envelope_.exponent(rate, polish_prior);
  }

 private:
  static detail::E0Envelope make_envelope(const DiscreteChannel& ch,
                                          std::size_t nodes) {
    auto e0 = [&ch](const std::vector<double>& p, double s) {
      return classical_e0(p, ch, s);
    };
    auto grad = [&ch](const std::vector<double>& p, double s) {
      const double e = 1.0 / (1.0 + s);
      const std::size_t nx = ch.num_inputs(), ny = ch.num_outputs();
      std::vector<double> gy(ny, 0.0);
      rmatrix a(nx, std::vector<double>(ny, 0.0));
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) {
          const double w = ch.transition[x][y];
          a[x][y] = w > 0.0 ? std::pow(w, e) : 0.0;
          gy[y] += p[x] * a[x][y];
        }
      double denom = 0.0;
      std::vector<double> gys(ny, 0.0);
      for (std::size_t y = 0; y < ny; ++y) {
        if (gy[y] > 0.0) {
          gys[y] = std::pow(gy[y], s);
          denom += gys[y] * gy[y];
        }
      }
      std::vector<double> out(nx, 0.0);
      for (std::size_t x = 0; x < nx; ++x) {
        double num = 0.0;
        for (std::size_t y = 0; y < ny; ++y) num += gys[y] * a[x][y];
        out[x] = -(1.0 + s) * num / denom;
      }
      return out;
    };
    return detail::E0Envelope(ch.num_inputs(), e0, grad, nodes);
  }

  DiscreteChannel ch_;
  double capacity_;
  detail::E0Envelope envelope_;
};

inline ExponentPoint quantum_error_exponent(const cmatrix& gram, double rate) {
  return QuantumExponentModel(gram).exponent(rate, true);
}

inline ExponentPoint classical_error_exponent(const DiscreteChannel& ch,
                                              double rate) {
  return ClassicalExponentModel(ch).exponent(rate, true);
}

/// Variance of -log sigma under the spectrum of rho.
inline double quantum_dispersion(const Spectrum& spec) {
  double m1 = 0.0, m2 = 0.0;
  for (double sigma : spec.values()) {
    if (sigma <= detail::kZeroEigenvalue) continue;
    const double l = std::log(sigma);
    m1 += sigma * l;
    m2 += sigma * l * l;
  }
  return std::max(0.0, m2 - m1 * m1);
}

/// Variance of the information density at the capacity-achieving input.
inline double classical_dispersion(const DiscreteChannel& ch) {
  CapacityResult cap = max_mutual_information(ch, 1e-12);
  std::vector<double> p = cap.prior;
  double sum = 0.0;
  for (double& v : p) {
    if (v < 1e-12) v = 0.0;
    sum += v;
  }
  for (double& v : p) v /= sum;

  const std::size_t nx = ch.num_inputs(), ny = ch.num_outputs();
  std::vector<double> q(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) q[y] += p[x] * ch.transition[x][y];

  // uniqueness guard: a zero-prior input whose divergence already matches the
  // capacity signals a tie among capacity-achieving priors
  for (std::size_t x = 0; x < nx; ++x) {
    if (p[x] > 0.0) continue;
    double dx = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      const double w = ch.transition[x][y];
      if (w > 0.0) dx += w * (q[y] > 0.0 ? std::log(w / q[y]) : 690.0);
    }
    if (dx >= cap.capacity - 1e-8)
      throw numeric_error(
          "classical_dispersion: capacity-achieving prior is not unique");
  }

  double mean = 0.0, second = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    if (p[x] <= 0.0) continue;
    for (std::size_t y = 0; y < ny; ++y) {
      const double w = ch.transition[x][y];
      if (w <= 0.0) continue;
      const double info = std::log(w / q[y]);
      mean += p[x] * w * info;
      second += p[x] * w * info * info;
    }
  }
  return std::max(0.0, second - mean * mean);
}

/// (R - C)^2 / (2V): the quadratic exponent approximation near capacity.
inline double quadratic_exponent(double capacity, double dispersion,
                                 double rate) {
  if (!(dispersion > 0.0))
    throw std::domain_error("quadratic_exponent: dispersion must be positive");
  const double d = rate - capacity;
  return d * d / (2.0 * dispersion);
}

/// Low-SNR asymptote of V/C^2 for the classical AWGN channel.
inline double awgn_vc_ratio_lowsnr(double snr) {
  if (!(snr > 0.0))
    throw std::domain_error("awgn_vc_ratio_lowsnr: snr must be positive");
  return 4.0 / snr;
}

}  // namespace cqcap
