#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <random>

#include "cqcap/spectral.hpp"

using namespace cqcap;
using Catch::Approx;

namespace {

// closed-form eigenvalues of a 2x2 Hermitian [[a, b],[conj(b), d]]
std::pair<double, double> eig2x2(double a, double d, complex_t b) {
  const double mid = 0.5 * (a + d);
  const double rad = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
  return {mid + rad, mid - rad};
}

cmatrix real_gram(double g01) { return {{1.0, g01}, {g01, 1.0}}; }

}  // namespace

TEST_CASE("binary_spectrum closed form", "[spectral]") {
  SECTION("q = 1/2 collapses the radical to gamma") {
    for (double g : {0.0, 0.1, 0.5, 0.9, 1.0}) {
      Spectrum s = binary_spectrum(0.5, g);
      REQUIRE(s[0] == Approx(0.5 * (1.0 + g)).margin(1e-15));
      REQUIRE(s[1] == Approx(0.5 * (1.0 - g)).margin(1e-15));
    }
  }
  SECTION("identical states give a pure density operator") {
    Spectrum s = binary_spectrum(0.3, 1.0);
    REQUIRE(s[0] == Approx(1.0).margin(1e-15));
    REQUIRE(s[1] == Approx(0.0).margin(1e-15));
  }
  SECTION("agrees with the general eigensolver on the weighted Gram matrix") {
    const double q = 0.3, g = 0.5;
    cmatrix w = detail::weighted_gram(real_gram(g), {1.0 - q, q});
    auto ev = hermitian_eigenvalues(w);
    Spectrum s = binary_spectrum(q, g);
    REQUIRE(s[0] == Approx(ev[0]).margin(1e-12));
    REQUIRE(s[1] == Approx(ev[1]).margin(1e-12));
  }
  SECTION("domain errors") {
    REQUIRE_THROWS_AS(binary_spectrum(-0.1, 0.5), std::domain_error);
    REQUIRE_THROWS_AS(binary_spectrum(1.1, 0.5), std::domain_error);
    REQUIRE_THROWS_AS(binary_spectrum(0.5, -0.1), std::domain_error);
    REQUIRE_THROWS_AS(binary_spectrum(0.5, 1.1), std::domain_error);
  }
  SECTION("sums to one and stays in [0,1] across the (q, gamma) grid") {
    for (int i = 0; i <= 100; ++i) {
      for (int j = 0; j <= 100; ++j) {
        Spectrum s = binary_spectrum(i / 100.0, j / 100.0);
        REQUIRE(std::abs(s[0] + s[1] - 1.0) < 1e-12);
        REQUIRE(s[0] >= 0.0);
        REQUIRE(s[0] <= 1.0);
        REQUIRE(s[1] >= 0.0);
        REQUIRE(s[1] <= 1.0);
      }
    }
  }
}

TEST_CASE("hermitian_eigenvalues", "[spectral]") {
  SECTION("identity and diagonal") {
    cmatrix id(3, std::vector<complex_t>(3, 0.0));
    for (int i = 0; i < 3; ++i) id[i][i] = 1.0;
    for (double ev : hermitian_eigenvalues(id)) REQUIRE(ev == Approx(1.0).margin(1e-13));
    auto d = hermitian_eigenvalues({{{0.2, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {0.8, 0.0}}});
    REQUIRE(d[0] == Approx(0.8).margin(1e-13));
    REQUIRE(d[1] == Approx(0.2).margin(1e-13));
  }
  SECTION("hand-checked 2x2") {
    // trace 1, det 3/16 -> roots 3/4 and 1/4
    auto ev = hermitian_eigenvalues({{{0.5, 0.0}, {0.25, 0.0}}, {{0.25, 0.0}, {0.5, 0.0}}});
    REQUIRE(ev[0] == Approx(0.75).margin(1e-13));
    REQUIRE(ev[1] == Approx(0.25).margin(1e-13));
  }
  SECTION("matches the quadratic formula on random 2x2 Hermitian matrices") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
      const double a = u(rng), d = u(rng);
      const complex_t b(u(rng), trial % 2 ? u(rng) : 0.0);
      auto [hi, lo] = eig2x2(a, d, b);
      auto ev = hermitian_eigenvalues({{{a, 0.0}, b}, {std::conj(b), {d, 0.0}}});
      REQUIRE(ev[0] == Approx(hi).margin(1e-12));
      REQUIRE(ev[1] == Approx(lo).margin(1e-12));
    }
  }
  SECTION("complex Hermitian") {
    auto ev = hermitian_eigenvalues(
        {{{1.0, 0.0}, {0.0, 0.5}}, {{0.0, -0.5}, {1.0, 0.0}}});
    REQUIRE(ev[0] == Approx(1.5).margin(1e-12));
    REQUIRE(ev[1] == Approx(0.5).margin(1e-12));
  }
  SECTION("rejects non-Hermitian input and oversized matrices") {
    REQUIRE_THROWS_AS(hermitian_eigenvalues({{{0.0, 0.0}, {1.0, 0.0}},
                                             {{0.0, 0.0}, {0.0, 0.0}}}),
                      std::domain_error);
    cmatrix big(65, std::vector<complex_t>(65, 0.0));
    for (int i = 0; i < 65; ++i) big[i][i] = 1.0;
    REQUIRE_THROWS_AS(hermitian_eigenvalues(big), std::domain_error);
  }
}

TEST_CASE("ensemble_spectrum", "[spectral]") {
  SECTION("orthogonal equiprobable pair") {
    Spectrum s = ensemble_spectrum(GramEnsemble(real_gram(0.0), {0.5, 0.5}));
    REQUIRE(s[0] == Approx(0.5).margin(1e-12));
    REQUIRE(s[1] == Approx(0.5).margin(1e-12));
  }
  SECTION("matches the binary closed form") {
    const double g = std::exp(-0.02);
    Spectrum s = ensemble_spectrum(GramEnsemble(real_gram(g), {0.5, 0.5}));
    Spectrum ref = binary_spectrum(0.5, g);
    REQUIRE(s[0] == Approx(ref[0]).margin(1e-10));
    REQUIRE(s[1] == Approx(ref[1]).margin(1e-10));
  }
  SECTION("three orthogonal states, uniform prior") {
    cmatrix g(3, std::vector<complex_t>(3, 0.0));
    for (int i = 0; i < 3; ++i) g[i][i] = 1.0;
    Spectrum s = ensemble_spectrum(GramEnsemble(g, {1.0 / 3, 1.0 / 3, 1.0 / 3}));
    for (std::size_t i = 0; i < 3; ++i) REQUIRE(s[i] == Approx(1.0 / 3).margin(1e-12));
  }
  SECTION("random ensembles stay normalized and nonnegative") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      const int d = 2 + int(rng() % 5);  // states in C^d, d <= 6
      std::vector<std::vector<complex_t>> psi(d, std::vector<complex_t>(d));
      for (auto& v : psi) {
        double norm = 0.0;
        for (auto& z : v) {
          z = complex_t(gauss(rng), gauss(rng));
          norm += std::norm(z);
        }
        for (auto& z : v) z /= std::sqrt(norm);
      }
      cmatrix g(d, std::vector<complex_t>(d));
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          complex_t ip = 0.0;
          for (int k = 0; k < d; ++k) ip += std::conj(psi[i][k]) * psi[j][k];
          g[i][j] = ip;
        }
      std::vector<double> prior(d);
      double sum = 0.0;
      for (double& p : prior) sum += (p = u(rng));
      for (double& p : prior) p /= sum;
      // kill the last round-off so the prior sums to 1 exactly
      prior[0] += 1.0 - std::accumulate(prior.begin(), prior.end(), 0.0);

      Spectrum s = ensemble_spectrum(GramEnsemble(g, prior));
      double total = 0.0;
      for (double v : s.values()) {
        REQUIRE(v >= 0.0);
        total += v;
      }
      REQUIRE(total == Approx(1.0).margin(1e-10));
    }
  }
}

TEST_CASE("von_neumann_entropy", "[spectral]") {
  REQUIRE(von_neumann_entropy(Spectrum({1.0, 0.0})) == 0.0);
  REQUIRE(von_neumann_entropy(Spectrum({0.5, 0.5})) ==
          Approx(std::log(2.0)).margin(1e-14));
  REQUIRE(von_neumann_entropy(Spectrum({0.25, 0.75})) ==
          Approx(0.562335144619).margin(1e-12));

  SECTION("concave along mixing paths of weighted Gram matrices") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
      const double q1 = u(rng), q2 = u(rng), g1 = u(rng), g2 = u(rng);
      cmatrix w1 = detail::weighted_gram({{1.0, g1}, {g1, 1.0}}, {1.0 - q1, q1});
      cmatrix w2 = detail::weighted_gram({{1.0, g2}, {g2, 1.0}}, {1.0 - q2, q2});
      cmatrix mid(2, std::vector<complex_t>(2));
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) mid[i][j] = 0.5 * (w1[i][j] + w2[i][j]);
      const double s1 = von_neumann_entropy(Spectrum(hermitian_eigenvalues(w1)));
      const double s2 = von_neumann_entropy(Spectrum(hermitian_eigenvalues(w2)));
      const double sm = von_neumann_entropy(Spectrum(hermitian_eigenvalues(mid)));
      REQUIRE(sm >= 0.5 * (s1 + s2) - 1e-10);
    }
  }
}

TEST_CASE("binary_entropy", "[spectral]") {
  REQUIRE(binary_entropy(0.0) == 0.0);
  REQUIRE(binary_entropy(1.0) == 0.0);
  REQUIRE(binary_entropy(0.5) == Approx(std::log(2.0)).margin(1e-15));
  REQUIRE(binary_entropy(0.11) == Approx(0.34651533691866615).margin(1e-14));
  REQUIRE(binary_entropy(0.11) == Approx(binary_entropy(0.89)).margin(1e-15));
  REQUIRE_THROWS_AS(binary_entropy(-0.01), std::domain_error);
  REQUIRE_THROWS_AS(binary_entropy(1.01), std::domain_error);
}

TEST_CASE("GramEnsemble and Spectrum invariants", "[spectral]") {
  SECTION("diagonal must be one") {
    REQUIRE_THROWS_AS(GramEnsemble({{{0.9, 0.0}, {0.0, 0.0}},
                                    {{0.0, 0.0}, {1.0, 0.0}}},
                                   {0.5, 0.5}),
                      std::domain_error);
  }
  SECTION("overlaps above one are rejected") {
    REQUIRE_THROWS_AS(GramEnsemble(real_gram(1.5), {0.5, 0.5}), std::domain_error);
  }
  SECTION("prior must live on the simplex") {
    REQUIRE_THROWS_AS(GramEnsemble(real_gram(0.5), {0.7, 0.7}), std::domain_error);
    REQUIRE_THROWS_AS(GramEnsemble(real_gram(0.5), {1.2, -0.2}), std::domain_error);
  }
  SECTION("file-noise symmetrization is tolerated") {
    cmatrix g = real_gram(0.5);
    g[0][1] += complex_t(0.0, 1e-12);
    REQUIRE_NOTHROW(GramEnsemble(g, {0.5, 0.5}));
  }
  SECTION("spectrum rejects bad inputs") {
    REQUIRE_THROWS_AS(Spectrum({0.6, 0.6}), std::domain_error);
    REQUIRE_THROWS_AS(Spectrum({1.1, -0.1}), std::domain_error);
    REQUIRE_NOTHROW(Spectrum({1.0 + 5e-11, -5e-13}));
  }
}
