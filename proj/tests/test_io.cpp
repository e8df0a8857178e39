#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "cqcap/io.hpp"

using namespace cqcap;
using Catch::Approx;

TEST_CASE("format_double round-trips", "[io]") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng) * std::pow(10.0, int(rng() % 40) - 20);
    REQUIRE(std::stod(format_double(x)) == x);
  }
  REQUIRE(format_double(0.5) == "0.5");
  REQUIRE(format_double(-0.0555) == "-0.0555");
}

TEST_CASE("gram ensemble JSON", "[io]") {
  SECTION("imaginary part defaults to zero") {
    json j = {{"prior", {0.5, 0.5}},
              {"gram_re", {{1.0, 0.25}, {0.25, 1.0}}}};
    GramEnsemble e = gram_ensemble_from_json(j);
    REQUIRE(e.gram[0][1] == complex_t(0.25, 0.0));
  }
  SECTION("round trip") {
    GramEnsemble e({{1.0, complex_t(0.2, 0.1)}, {complex_t(0.2, -0.1), 1.0}},
                   {0.3, 0.7});
    GramEnsemble back = gram_ensemble_from_json(to_json(e));
    REQUIRE(back.gram[0][1].real() == Approx(0.2).margin(1e-15));
    REQUIRE(back.gram[0][1].imag() == Approx(0.1).margin(1e-15));
    REQUIRE(back.prior[1] == Approx(0.7).margin(1e-15));
  }
  SECTION("shape errors surface") {
    REQUIRE_THROWS(gram_ensemble_from_json(
        json{{"prior", {0.5, 0.5}}, {"gram_re", {{1.0}, {0.25, 1.0}}}}));
  }
}

TEST_CASE("channel JSON and specs", "[io]") {
  DiscreteChannel ch = channel_from_json(
      json{{"transition", {{0.9, 0.1}, {0.2, 0.8}}}});
  REQUIRE(ch.transition[1][0] == 0.2);
  REQUIRE(parse_channel_spec("bsc:0.11").transition ==
          DiscreteChannel::bsc(0.11).transition);
  REQUIRE_THROWS_AS(parse_channel_spec("bsc:abc"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_channel_spec("qam:16"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_channel_spec("bsc:2.0"), std::domain_error);
}

TEST_CASE("constellation JSON", "[io]") {
  CoherentConstellation c = constellation_from_json(
      json{{"amplitudes_re", {0.1, -0.1}},
           {"amplitudes_im", {0.0, 0.05}},
           {"prior", {0.5, 0.5}},
           {"energy", 0.02}});
  REQUIRE(c.amplitudes[1] == complex_t(-0.1, 0.05));
  CoherentConstellation back = constellation_from_json(to_json(c));
  REQUIRE(back.energy_budget == 0.02);
}

TEST_CASE("n-grid parsing", "[io]") {
  SECTION("log spacing") {
    auto g = parse_n_grid("1e3:1e6:log4");
    REQUIRE(g == std::vector<long long>{1000, 10000, 100000, 1000000});
  }
  SECTION("arithmetic spacing") {
    REQUIRE(parse_n_grid("10:50:20") == std::vector<long long>{10, 30, 50});
  }
  SECTION("single value") {
    REQUIRE(parse_n_grid("2400") == std::vector<long long>{2400});
  }
  SECTION("duplicates collapse on coarse log grids") {
    auto g = parse_n_grid("1:4:log10");
    for (std::size_t i = 1; i < g.size(); ++i) REQUIRE(g[i] > g[i - 1]);
  }
  REQUIRE_THROWS_AS(parse_n_grid("5:2:log3"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_n_grid("1:2:3:4"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_n_grid("abc"), std::invalid_argument);
}

TEST_CASE("bound curve CSV", "[io]") {
  BoundCurve curve;
  curve.model = "bpsk";
  curve.energy = 0.01;
  BoundPoint p;
  p.n = 2400;
  p.rate_lb = 0.03;
  p.r_star = 0.0365;
  p.s_star = 0.12;
  p.exponent = 0.001;
  p.pe_bound = 0.169;
  curve.points.push_back(p);
  BoundPoint bad;
  bad.n = 100;
  bad.error = "below regime";
  curve.points.push_back(bad);

  const std::string csv = curve_to_csv(curve);
  REQUIRE(csv.rfind("n,r_star,s_star,exponent,pe_bound,rate_lb_nats,"
                    "pie_nats_per_photon\n", 0) == 0);
  REQUIRE(csv.find("2400,0.0365,0.12,0.001,0.169,0.03,3\n") != std::string::npos);
  REQUIRE(csv.find("100,,,,,,\n") != std::string::npos);

  SECTION("pie column is empty without an energy parameter") {
    curve.energy.reset();
    const std::string csv2 = curve_to_csv(curve);
    REQUIRE(csv2.find("2400,0.0365,0.12,0.001,0.169,0.03,\n") != std::string::npos);
  }
}

TEST_CASE("atomic_write", "[io]") {
  const std::string path = "test_io_atomic_output.csv";
  atomic_write(path, "n,rate\n1,0.5\n");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  REQUIRE(content == "n,rate\n1,0.5\n");
  std::filesystem::remove(path);
  REQUIRE_FALSE(std::filesystem::exists(path + ".tmp"));
}
