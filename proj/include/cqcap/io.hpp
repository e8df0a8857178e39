#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqcap/bounds.hpp"
#include "cqcap/capacities.hpp"
#include "cqcap/optical.hpp"
#include "cqcap/spectral.hpp"

namespace cqcap {

using json = nlohmann::json;

/// Shortest decimal string that round-trips the exact double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// --- JSON forms -------------------------------------------------------------
// GramEnsemble:          {"prior": [..], "gram_re": [[..]], "gram_im": [[..]]}
// DiscreteChannel:       {"transition": [[..], ..]}
// CoherentConstellation: {"amplitudes_re": [..], "amplitudes_im": [..],
//                         "prior": [..], "energy": E}

inline json to_json(const GramEnsemble& e) {
  json re = json::array(), im = json::array();
  for (const auto& row : e.gram) {
    json r = json::array(), i = json::array();
    for (const auto& z : row) {
      r.push_back(z.real());
      i.push_back(z.imag());
    }
    re.push_back(std::move(r));
    im.push_back(std::move(i));
  }
  return {{"prior", e.prior}, {"gram_re", std::move(re)}, {"gram_im", std::move(im)}};
}

inline GramEnsemble gram_ensemble_from_json(const json& j) {
  const auto& re = j.at("gram_re");
  const std::size_t n = re.size();
  cmatrix g(n, std::vector<complex_t>(n, 0.0));
  for (std::size_t r = 0; r < n; ++r) {
    if (re[r].size() != n)
      throw std::invalid_argument("gram_re is not square");
    for (std::size_t c = 0; c < n; ++c) g[r][c] = complex_t(re[r][c].get<double>(), 0.0);
  }
  if (j.contains("gram_im")) {
    const auto& im = j.at("gram_im");
    if (im.size() != n) throw std::invalid_argument("gram_im shape mismatch");
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        g[r][c] = complex_t(g[r][c].real(), im[r][c].get<double>());
  }
  return GramEnsemble(std::move(g), j.at("prior").get<std::vector<double>>());
}

inline json to_json(const DiscreteChannel& ch) {
  return {{"transition", ch.transition}};
}

inline DiscreteChannel channel_from_json(const json& j) {
  return DiscreteChannel(j.at("transition").get<rmatrix>());
}

inline json to_json(const CoherentConstellation& c) {
  std::vector<double> re, im;
  for (const auto& a : c.amplitudes) {
    re.push_back(a.real());
    im.push_back(a.imag());
  }
  return {{"amplitudes_re", re},
          {"amplitudes_im", im},
          {"prior", c.prior},
          {"energy", c.energy_budget}};
}

inline CoherentConstellation constellation_from_json(const json& j) {
  const auto re = j.at("amplitudes_re").get<std::vector<double>>();
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("amplitudes_im")) {
    im = j.at("amplitudes_im").get<std::vector<double>>();
    if (im.size() != re.size())
      throw std::invalid_argument("amplitudes_im size mismatch");
  }
  std::vector<complex_t> amps(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) amps[i] = complex_t(re[i], im[i]);
  return CoherentConstellation(std::move(amps),
                               j.at("prior").get<std::vector<double>>(),
                               j.at("energy").get<double>());
}

/// "bsc:p" shorthand or a JSON channel file.
inline DiscreteChannel parse_channel_spec(const std::string& spec) {
  if (spec.rfind("bsc:", 0) == 0) {
    const std::string num = spec.substr(4);
    std::size_t pos = 0;
    double p = 0.0;
    try {
      p = std::stod(num, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad bsc spec: " + spec);
    }
    if (pos != num.size()) throw std::invalid_argument("bad bsc spec: " + spec);
    return DiscreteChannel::bsc(p);
  }
  throw std::invalid_argument("unknown channel spec: " + spec);
}

inline DiscreteChannel channel_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open channel file: " + path);
  json j;
  in >> j;
  return channel_from_json(j);
}

// --- blocklength grids ------------------------------------------------------
// "a:b:logK"  -> K log-spaced integers on [a, b]
// "a:b:step"  -> arithmetic progression with the given step
// "n"         -> the single value

inline std::vector<long long> parse_n_grid(const std::string& spec) {
  auto to_ll = [](const std::string& s) -> long long {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !(v >= 1.0) || v > 9e18)
      throw std::invalid_argument("bad n value: " + s);
    return (long long)std::llround(v);
  };
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  std::vector<long long> grid;
  if (parts.size() == 1) {
    grid.push_back(to_ll(parts[0]));
  } else if (parts.size() == 3) {
    const long long a = to_ll(parts[0]), b = to_ll(parts[1]);
    if (b < a) throw std::invalid_argument("n grid: b < a");
    if (parts[2].rfind("log", 0) == 0) {
      const long long k = to_ll(parts[2].substr(3));
      if (k < 2) throw std::invalid_argument("n grid: logK needs K >= 2");
      for (long long i = 0; i < k; ++i) {
        const double t = double(i) / double(k - 1);
        const double v = std::exp(std::log(double(a)) +
                                  t * (std::log(double(b)) - std::log(double(a))));
        const long long n = (long long)std::llround(v);
        if (grid.empty() || n > grid.back()) grid.push_back(n);
      }
    } else {
      const long long step = to_ll(parts[2]);
      for (long long n = a; n <= b; n += step) grid.push_back(n);
    }
  } else {
    throw std::invalid_argument("bad n grid spec: " + spec);
  }
  return grid;
}

// --- bound curve CSV ---------------------------------------------------------

inline constexpr const char* kBoundCsvHeader =
    "n,r_star,s_star,exponent,pe_bound,rate_lb_nats,pie_nats_per_photon";

/// One row per point; failed points keep their n and leave the rest blank.
/// The PIE column is empty for models without an energy parameter.
inline std::string curve_to_csv(const BoundCurve& curve) {
  std::string out(kBoundCsvHeader);
  out += '\n';
  for (const BoundPoint& p : curve.points) {
    out += std::to_string(p.n);
    if (!p.ok()) {
      out += ",,,,,,\n";
      continue;
    }
    auto cell = [&](double v) {
      out += ',';
      if (std::isfinite(v)) out += format_double(v);
    };
    cell(p.r_star);
    cell(p.s_star);
    cell(p.exponent);
    cell(p.pe_bound);
    cell(p.rate_lb);
    out += ',';
    if (curve.energy) out += format_double(p.rate_lb / *curve.energy);
    out += '\n';
  }
  return out;
}

inline json curve_to_json(const BoundCurve& curve) {
  json points = json::array();
  for (const BoundPoint& p : curve.points) {
    json r{{"n", p.n}};
    if (p.ok()) {
      if (std::isfinite(p.r_star)) r["r_star"] = p.r_star;
      if (std::isfinite(p.s_star)) r["s_star"] = p.s_star;
      if (std::isfinite(p.exponent)) r["exponent"] = p.exponent;
      if (std::isfinite(p.pe_bound)) r["pe_bound"] = p.pe_bound;
      r["rate_lb_nats"] = p.rate_lb;
      r["negative_rate"] = p.negative_rate;
      if (curve.energy) r["pie_nats_per_photon"] = p.rate_lb / *curve.energy;
    } else {
      r["error"] = p.error;
    }
    points.push_back(std::move(r));
  }
  json out{{"model", curve.model}, {"points", std::move(points)}};
  if (curve.energy) out["energy"] = *curve.energy;
  return out;
}

/// Write-once output: temp file in the same directory, then rename.
inline void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
  }
  fs::rename(tmp, target);
}

}  // namespace cqcap
