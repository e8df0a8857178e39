#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cqcap {

using complex_t = std::complex<double>;
using cmatrix = std::vector<std::vector<complex_t>>;
using rmatrix = std::vector<std::vector<double>>;

/// Violation of a documented validity regime or argument precondition.
class regime_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical failure (non-convergence, lost accuracy).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-convergence that still produced a usable best iterate.
class convergence_error : public numeric_error {
 public:
  convergence_error(const std::string& what, double best_value,
                    std::vector<double> best_point)
      : numeric_error(what),
        best_value(best_value),
        best_point(std::move(best_point)) {}

  double best_value;
  std::vector<double> best_point;
};

namespace detail {

// Eigenvalues and probabilities at or below this are treated as exactly zero
// in entropy and exponent sums.
inline constexpr double kZeroEigenvalue = 1e-15;

inline void check_probability_vector(const std::vector<double>& p,
                                     double sum_tol,
                                     const char* what) {
  if (p.empty()) throw std::invalid_argument(std::string(what) + ": empty");
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0))
      throw std::domain_error(std::string(what) + ": negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > sum_tol)
    throw std::domain_error(std::string(what) + ": entries do not sum to 1");
}

inline double xlogx(double x) { return x > kZeroEigenvalue ? x * std::log(x) : 0.0; }

}  // namespace detail
}  // namespace cqcap
