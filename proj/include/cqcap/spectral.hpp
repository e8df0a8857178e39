#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cqcap/common.hpp"

namespace cqcap {

namespace detail {

inline constexpr std::size_t kMaxEigenDim = 64;

/// Cyclic Jacobi on a dense symmetric matrix. Rotates until the off-diagonal
/// Frobenius norm drops below tol_rel times the input Frobenius norm.
/// Optionally accumulates the rotations into `vecs` (columns = eigenvectors).
inline std::vector<double> jacobi_symmetric(rmatrix a, rmatrix* vecs,
                                            double tol_rel = 1e-13,
                                            int max_sweeps = 100) {
  const std::size_t n = a.size();
  if (vecs) {
    vecs->assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) (*vecs)[i][i] = 1.0;
  }
  double fro = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) fro += a[i][j] * a[i][j];
  fro = std::sqrt(fro);
  const double target = tol_rel * std::max(fro, 1e-300);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * a[i][j] * a[i][j];
    if (std::sqrt(off) <= target) {
      std::vector<double> ev(n);
      for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
      return ev;
    }
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p][q];
        if (apq == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        const double app = a[p][p], aqq = a[q][q];
        a[p][p] = app - t * apq;
        a[q][q] = aqq + t * apq;
        a[p][q] = a[q][p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = a[p][k] = akp - s * (akq + tau * akp);
          a[k][q] = a[q][k] = akq + s * (akp - tau * akq);
        }
        if (vecs) {
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = (*vecs)[k][p], vkq = (*vecs)[k][q];
            (*vecs)[k][p] = vkp - s * (vkq + tau * vkp);
            (*vecs)[k][q] = vkq + s * (vkp - tau * vkq);
          }
        }
      }
    }
  }
  throw numeric_error("jacobi_symmetric: no convergence within sweep limit");
}

inline void check_square(const cmatrix& m, const char* what) {
  if (m.empty()) throw std::invalid_argument(std::string(what) + ": empty matrix");
  for (const auto& row : m)
    if (row.size() != m.size())
      throw std::invalid_argument(std::string(what) + ": not square");
}

inline double max_abs(const cmatrix& m) {
  double v = 0.0;
  for (const auto& row : m)
    for (const auto& z : row) v = std::max(v, std::abs(z));
  return v;
}

inline bool is_real(const cmatrix& m) {
  for (const auto& row : m)
    for (const auto& z : row)
      if (z.imag() != 0.0) return false;
  return true;
}

/// Hermitian matrix symmetrized as (M + M^dagger)/2, after checking the
/// deviation stays within tol (absolute, scaled by max entry).
inline cmatrix symmetrize_hermitian(const cmatrix& m, double tol,
                                    const char* what) {
  check_square(m, what);
  const std::size_t n = m.size();
  const double scale = std::max(1.0, max_abs(m));
  cmatrix out(n, std::vector<complex_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const complex_t d = m[i][j] - std::conj(m[j][i]);
      if (std::abs(d) > tol * scale)
        throw std::domain_error(std::string(what) + ": matrix is not Hermitian");
      out[i][j] = 0.5 * (m[i][j] + std::conj(m[j][i]));
    }
  }
  return out;
}

/// Real symmetric embedding of a Hermitian matrix A + iB -> [[A,-B],[B,A]].
/// Every eigenvalue of the Hermitian matrix shows up twice.
inline rmatrix embed_hermitian(const cmatrix& m) {
  const std::size_t n = m.size();
  rmatrix e(2 * n, std::vector<double>(2 * n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double re = m[i][j].real(), im = m[i][j].imag();
      e[i][j] = re;
      e[n + i][n + j] = re;
      e[i][n + j] = -im;
      e[n + i][j] = im;
    }
  }
  return e;
}

/// f applied to a Hermitian matrix through its eigendecomposition.
/// Zero modes (eigenvalues <= kZeroEigenvalue) take the value f0.
template <class F>
cmatrix hermitian_apply(const cmatrix& m, F&& f, double f0 = 0.0) {
  const cmatrix h = symmetrize_hermitian(m, 1e-10, "hermitian_apply");
  const std::size_t n = h.size();
  if (is_real(h)) {
    rmatrix a(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i][j] = h[i][j].real();
    rmatrix v;
    std::vector<double> ev = jacobi_symmetric(std::move(a), &v);
    std::vector<double> fe(n);
    for (std::size_t k = 0; k < n; ++k)
      fe[k] = ev[k] > kZeroEigenvalue ? f(ev[k]) : f0;
    cmatrix out(n, std::vector<complex_t>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += v[i][k] * fe[k] * v[j][k];
        out[i][j] = s;
      }
    return out;
  }
  rmatrix v;
  std::vector<double> ev = jacobi_symmetric(embed_hermitian(h), &v);
  std::vector<double> fe(2 * n);
  for (std::size_t k = 0; k < 2 * n; ++k)
    fe[k] = ev[k] > kZeroEigenvalue ? f(ev[k]) : f0;
  cmatrix out(n, std::vector<complex_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double re = 0.0, im = 0.0;
      for (std::size_t k = 0; k < 2 * n; ++k) {
        re += v[i][k] * fe[k] * v[j][k];
        im += v[n + i][k] * fe[k] * v[j][k];
      }
      out[i][j] = complex_t(re, im);
    }
  }
  return out;
}

}  // namespace detail

/// Eigenvalue distribution of a density operator, stored nonincreasing.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> eigenvalues)
      : values_(std::move(eigenvalues)) {
    if (values_.empty()) throw std::invalid_argument("Spectrum: empty");
    double sum = 0.0;
    for (double& v : values_) {
      if (v < -1e-12) throw std::domain_error("Spectrum: negative eigenvalue");
      sum += v;
      v = std::max(v, 0.0);
    }
    if (std::abs(sum - 1.0) > 1e-10)
      throw std::domain_error("Spectrum: eigenvalues do not sum to 1");
    std::sort(values_.begin(), values_.end(), std::greater<>());
  }

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

/// All eigenvalues of a Hermitian matrix (dimension <= 64), sorted
/// nonincreasing. Cyclic Jacobi on the real symmetric embedding; the complex
/// path dedups the doubled eigenvalue pairs.
inline std::vector<double> hermitian_eigenvalues(const cmatrix& m) {
  detail::check_square(m, "hermitian_eigenvalues");
  if (m.size() > detail::kMaxEigenDim)
    throw std::domain_error("hermitian_eigenvalues: dimension exceeds 64");
  const cmatrix h = detail::symmetrize_hermitian(m, 1e-10, "hermitian_eigenvalues");
  const std::size_t n = h.size();
  std::vector<double> ev;
  if (detail::is_real(h)) {
    rmatrix a(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i][j] = h[i][j].real();
    ev = detail::jacobi_symmetric(std::move(a), nullptr);
  } else {
    std::vector<double> doubled =
        detail::jacobi_symmetric(detail::embed_hermitian(h), nullptr);
    std::sort(doubled.begin(), doubled.end(), std::greater<>());
    ev.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = doubled[2 * i], b = doubled[2 * i + 1];
      if (std::abs(a - b) > 1e-9)
        throw numeric_error("hermitian_eigenvalues: embedded pair mismatch");
      ev[i] = 0.5 * (a + b);
    }
  }
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

/// Pure-state alphabet as its Gram matrix of pairwise inner products plus a
/// prior. The Gram matrix is symmetrized on construction; diagonal must be 1,
/// off-diagonal magnitudes at most 1, and the matrix positive semidefinite.
struct GramEnsemble {
  cmatrix gram;
  std::vector<double> prior;

  GramEnsemble(cmatrix g, std::vector<double> p)
      : gram(detail::symmetrize_hermitian(g, 1e-10, "GramEnsemble")),
        prior(std::move(p)) {
    const std::size_t n = gram.size();
    if (prior.size() != n)
      throw std::invalid_argument("GramEnsemble: prior size mismatch");
    detail::check_probability_vector(prior, 1e-12, "GramEnsemble prior");
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(gram[i][i] - 1.0) > 1e-12)
        throw std::domain_error("GramEnsemble: diagonal entry is not 1");
      gram[i][i] = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (std::abs(gram[i][j]) > 1.0 + 1e-12)
          throw std::domain_error("GramEnsemble: overlap magnitude exceeds 1");
    }
    for (double ev : hermitian_eigenvalues(gram))
      if (ev < -1e-10)
        throw std::domain_error("GramEnsemble: gram matrix is not PSD");
  }

  std::size_t size() const { return prior.size(); }
};

namespace detail {

/// Validates the states-only part of an ensemble (Gram matrix alone).
inline cmatrix validate_gram(const cmatrix& g, const char* what) {
  GramEnsemble e(g, std::vector<double>(g.size(), 1.0 / double(g.size())));
  (void)what;
  return e.gram;
}

/// D^{1/2} G D^{1/2} for D = diag(prior): same nonzero eigenvalues as the
/// ensemble density operator. Inputs are assumed already validated.
inline cmatrix weighted_gram(const cmatrix& gram,
                             const std::vector<double>& prior) {
  const std::size_t n = gram.size();
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = std::sqrt(std::max(prior[i], 0.0));
  cmatrix w(n, std::vector<complex_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w[i][j] = r[i] * gram[i][j] * r[j];
  return w;
}

inline Spectrum weighted_spectrum(const cmatrix& gram,
                                  const std::vector<double>& prior) {
  return Spectrum(hermitian_eigenvalues(weighted_gram(gram, prior)));
}

}  // namespace detail

/// Eigenvalues of rho = (1-q)|psi0><psi0| + q|psi1><psi1| with overlap gamma.
inline Spectrum binary_spectrum(double q, double gamma) {
  if (!(q >= 0.0 && q <= 1.0))
    throw std::domain_error("binary_spectrum: q outside [0,1]");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::domain_error("binary_spectrum: gamma outside [0,1]");
  const double rad =
      std::max(0.0, 1.0 - 4.0 * q * (1.0 - q) * (1.0 - gamma * gamma));
  const double root = std::sqrt(rad);
  return Spectrum({0.5 * (1.0 + root), 0.5 * (1.0 - root)});
}

/// Spectrum of the ensemble density operator via the weighted Gram matrix.
inline Spectrum ensemble_spectrum(const GramEnsemble& e) {
  return detail::weighted_spectrum(e.gram, e.prior);
}

inline double von_neumann_entropy(const Spectrum& s) {
  double h = 0.0;
  for (double v : s.values()) h -= detail::xlogx(v);
  return std::max(h, 0.0);
}

inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("binary_entropy: p outside [0,1]");
  return std::max(0.0, -detail::xlogx(p) - detail::xlogx(1.0 - p));
}

}  // namespace cqcap
