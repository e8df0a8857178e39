#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "cqcap/capacities.hpp"
#include "cqcap/optical.hpp"

using namespace cqcap;
using Catch::Approx;

TEST_CASE("holevo_binary", "[capacities]") {
  REQUIRE(holevo_binary(0.0) == Approx(std::log(2.0)).margin(1e-15));
  REQUIRE(holevo_binary(1.0) == 0.0);
  REQUIRE(holevo_binary(std::exp(-0.02)) == Approx(0.055544570513092688).margin(1e-13));
  REQUIRE_THROWS_AS(holevo_binary(-0.1), std::domain_error);
  REQUIRE_THROWS_AS(holevo_binary(1.1), std::domain_error);
  SECTION("decreasing in gamma") {
    double prev = holevo_binary(0.0);
    for (int i = 1; i <= 50; ++i) {
      const double c = holevo_binary(i / 50.0);
      REQUIRE(c <= prev + 1e-15);
      prev = c;
    }
  }
}

TEST_CASE("c1_binary and strict superadditivity", "[capacities]") {
  REQUIRE(c1_binary(0.0) == Approx(std::log(2.0)).margin(1e-15));
  REQUIRE(c1_binary(1.0) == 0.0);
  REQUIRE(c1_binary(std::exp(-0.02)) == Approx(0.019735455532575802).margin(1e-13));
  SECTION("C1 < C strictly away from the endpoints") {
    for (int i = 0; i < 50; ++i) {
      const double g = 0.05 + 0.9 * i / 49.0;
      REQUIRE(holevo_binary(g) - c1_binary(g) > 1e-6);
    }
  }
}

TEST_CASE("holevo_general", "[capacities]") {
  SECTION("binary symmetric overlap lands on the equiprior closed form") {
    for (double g : {0.1, 0.3, 0.5, 0.7, 0.9, std::exp(-0.02)}) {
      CapacityResult r = holevo_general({{1.0, g}, {g, 1.0}});
      REQUIRE(r.capacity == Approx(holevo_binary(g)).margin(1e-8));
      REQUIRE(r.prior[0] == Approx(0.5).margin(1e-6));
    }
  }
  SECTION("three orthogonal states") {
    cmatrix g(3, std::vector<complex_t>(3, 0.0));
    for (int i = 0; i < 3; ++i) g[i][i] = 1.0;
    CapacityResult r = holevo_general(g);
    REQUIRE(r.capacity == Approx(std::log(3.0)).margin(1e-8));
    for (double p : r.prior) REQUIRE(p == Approx(1.0 / 3).margin(1e-6));
  }
  SECTION("ternary coherent constellation beats the best contained pair") {
    const double energy = 0.05;
    const double a = std::sqrt(energy);
    CoherentConstellation con({{0.0, 0.0}, {a, 0.0}, {-a, 0.0}},
                              {1.0 / 3, 1.0 / 3, 1.0 / 3}, energy);
    const cmatrix gram = con.to_ensemble().gram;
    CapacityResult r = holevo_general(gram);
    double best_pair = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        best_pair = std::max(best_pair, holevo_binary(std::abs(gram[i][j])));
    REQUIRE(r.capacity >= best_pair - 1e-9);

    // simplex grid at resolution 0.01 as the independent maximizer
    double grid_best = 0.0;
    for (int i = 0; i <= 100; ++i)
      for (int j = 0; j <= 100 - i; ++j) {
        const std::vector<double> p = {i / 100.0, j / 100.0, (100 - i - j) / 100.0};
        grid_best = std::max(
            grid_best, von_neumann_entropy(detail::weighted_spectrum(gram, p)));
      }
    REQUIRE(r.capacity >= grid_best - 1e-9);
    REQUIRE(r.capacity <= grid_best + 1e-3);  // grid is 0.01-coarse
  }
  SECTION("alphabet size limits") {
    REQUIRE_THROWS_AS(holevo_general({{{1.0, 0.0}}}), std::domain_error);
  }
}

TEST_CASE("gaussian_holevo", "[capacities]") {
  REQUIRE(gaussian_holevo(0.0) == 0.0);
  REQUIRE(gaussian_holevo(1.0) == Approx(2.0 * std::log(2.0)).margin(1e-14));
  REQUIRE(gaussian_holevo(0.01) == Approx(0.0561015360216).margin(1e-12));
  REQUIRE_THROWS_AS(gaussian_holevo(-0.01), std::domain_error);
  SECTION("dominates BPSK at the same energy") {
    for (int i = 1; i <= 40; ++i) {
      const double e = 0.002 * i * i;
      REQUIRE(gaussian_holevo(e) >= holevo_binary(std::exp(-2.0 * e)) - 1e-12);
    }
  }
  SECTION("approaches E log(1/E) + E at small energy") {
    for (auto [e, tol] : {std::pair{1e-3, 0.05}, {1e-4, 0.02}, {1e-5, 0.01}}) {
      const double approx = e * std::log(1.0 / e) + e;
      REQUIRE(std::abs(gaussian_holevo(e) - approx) / e < tol);
    }
  }
}

TEST_CASE("mutual_information", "[capacities]") {
  const DiscreteChannel ident({{1.0, 0.0}, {0.0, 1.0}});
  REQUIRE(mutual_information({0.5, 0.5}, ident) == Approx(std::log(2.0)).margin(1e-14));
  const DiscreteChannel constant({{0.3, 0.7}, {0.3, 0.7}});
  REQUIRE(mutual_information({0.4, 0.6}, constant) == Approx(0.0).margin(1e-14));
  REQUIRE(mutual_information({0.5, 0.5}, DiscreteChannel::bsc(0.11)) ==
          Approx(std::log(2.0) - binary_entropy(0.11)).margin(1e-14));
  REQUIRE_THROWS_AS(mutual_information({1.0}, ident), std::invalid_argument);
}

TEST_CASE("max_mutual_information (Blahut-Arimoto)", "[capacities]") {
  SECTION("BSC capacity and uniform prior") {
    for (double p : {0.0, 0.05, 0.11, 0.25, 0.4}) {
      CapacityResult r = max_mutual_information(DiscreteChannel::bsc(p));
      REQUIRE(r.capacity == Approx(std::log(2.0) - binary_entropy(p)).margin(1e-9));
      REQUIRE(r.prior[0] == Approx(0.5).margin(1e-6));
    }
  }
  SECTION("identity 3x3") {
    DiscreteChannel id3({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
    REQUIRE(max_mutual_information(id3).capacity ==
            Approx(std::log(3.0)).margin(1e-9));
  }
  SECTION("upper bounds any fixed-prior mutual information") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    rmatrix t(3, std::vector<double>(4));
    for (auto& row : t) {
      double s = 0.0;
      for (double& v : row) s += (v = u(rng));
      for (double& v : row) v /= s;
      row[0] += 1.0 - (row[0] + row[1] + row[2] + row[3]);
    }
    DiscreteChannel ch(t);
    CapacityResult r = max_mutual_information(ch);
    REQUIRE(r.capacity <= std::log(3.0) + 1e-12);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> p(3);
      double s = 0.0;
      for (double& v : p) s += (v = u(rng));
      for (double& v : p) v /= s;
      p[0] += 1.0 - (p[0] + p[1] + p[2]);
      REQUIRE(r.capacity >= mutual_information(p, ch) - 1e-9);
    }
  }
}

TEST_CASE("pie", "[capacities]") {
  REQUIRE(pie(0.055544570513092688, 0.01) == Approx(5.5544570513092688).margin(1e-12));
  REQUIRE(pie(0.019735455532575802, 0.01) == Approx(1.9735455532575802).margin(1e-12));
  REQUIRE(pie(0.0, 0.3) == 0.0);
  REQUIRE_THROWS_AS(pie(0.1, 0.0), std::domain_error);
  REQUIRE_THROWS_AS(pie(0.1, -1.0), std::domain_error);
}

TEST_CASE("DiscreteChannel validation", "[capacities]") {
  REQUIRE_THROWS_AS(DiscreteChannel({{0.5, 0.4}}), std::domain_error);
  REQUIRE_THROWS_AS(DiscreteChannel({{1.2, -0.2}}), std::domain_error);
  REQUIRE_THROWS_AS(DiscreteChannel({{0.5, 0.5}, {1.0}}), std::invalid_argument);
  REQUIRE_THROWS_AS(DiscreteChannel::bsc(1.5), std::domain_error);
}
