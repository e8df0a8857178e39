#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cqcap/bounds.hpp"
#include "cqcap/capacities.hpp"
#include "cqcap/common.hpp"

namespace cqcap {

/// Counter-based splittable generator: substream t of a seed is statistically
/// independent of substream t', so trial results do not depend on evaluation
/// order. Splitmix64 underneath.
class SplitStream {
 public:
  SplitStream(std::uint64_t seed, std::uint64_t stream)
      : state_(mix(mix(seed) ^ mix(stream ^ 0x9E3779B97F4A7C15ull))) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  /// Inverse-CDF draw from a probability vector.
  int draw(const std::vector<double>& probs) {
    double u = uniform();
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      if (u < probs[i]) return int(i);
      u -= probs[i];
    }
    return int(probs.size()) - 1;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

/// m codewords of blocklength n over the channel input alphabet.
struct InnerCode {
  std::vector<std::vector<int>> codewords;
  int n = 0;
  int m = 0;

  InnerCode(std::vector<std::vector<int>> cw, int blocklength)
      : codewords(std::move(cw)), n(blocklength), m(int(codewords.size())) {
    if (m < 2) throw std::invalid_argument("InnerCode: fewer than 2 messages");
    for (const auto& c : codewords)
      if (int(c.size()) != n)
        throw std::invalid_argument("InnerCode: codeword length mismatch");
  }

  double effective_rate() const { return std::log(double(m)) / double(n); }

  static InnerCode repetition(int n) {
    return InnerCode({std::vector<int>(n, 0), std::vector<int>(n, 1)}, n);
  }
};

/// i.i.d. random code: every symbol drawn from `prior` using substream 0 of
/// the seed, row-major. Identical output for identical (prior, n, m, seed).
inline InnerCode random_inner_code(const std::vector<double>& prior, int n,
                                   int m, std::uint64_t seed) {
  detail::check_probability_vector(prior, 1e-12, "random_inner_code prior");
  if (n < 1 || m < 2) throw std::domain_error("random_inner_code: n < 1 or m < 2");
  if (double(n) * double(m) > 1e6)
    throw std::domain_error("random_inner_code: size overflow");
  SplitStream rng(seed, 0);
  std::vector<std::vector<int>> cw(m, std::vector<int>(n));
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) cw[j][i] = rng.draw(prior);
  return InnerCode(std::move(cw), n);
}

/// The DMC from inner-encoder input J to inner-decoder output K, plus the
/// uniform-prior inner decoding error probability. pe_uniform must match the
/// matrix: it is 1 minus the mean diagonal.
struct Superchannel {
  DiscreteChannel channel;
  double pe_uniform = 0.0;

  Superchannel(DiscreteChannel ch, double pe)
      : channel(std::move(ch)), pe_uniform(pe) {
    const std::size_t m = channel.num_inputs();
    if (channel.num_outputs() != m)
      throw std::invalid_argument("Superchannel: matrix must be square");
    double recomputed = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      recomputed += 1.0 - channel.transition[j][j];
    recomputed /= double(m);
    if (std::abs(recomputed - pe_uniform) > 1e-12)
      throw std::domain_error("Superchannel: pe_uniform does not match matrix");
  }
};

namespace detail {

inline void check_code_alphabet(const InnerCode& code,
                                const DiscreteChannel& ch) {
  for (const auto& cw : code.codewords)
    for (int s : cw)
      if (s < 0 || std::size_t(s) >= ch.num_inputs())
        throw std::invalid_argument("inner code symbol outside channel alphabet");
}

/// MAP estimate under a uniform message prior; ties go to the lowest index.
inline int map_decode(const std::vector<double>& loglik) {
  int best = 0;
  for (std::size_t j = 1; j < loglik.size(); ++j)
    if (loglik[j] > loglik[best]) best = int(j);
  return best;
}

}  // namespace detail

/// Exact superchannel by enumerating every output sequence (|Y|^n <= 1e6)
/// and MAP-decoding it.
inline Superchannel superchannel_exact(const InnerCode& code,
                                       const DiscreteChannel& ch) {
  detail::check_code_alphabet(code, ch);
  const std::size_t ny = ch.num_outputs();
  const double total = std::pow(double(ny), double(code.n));
  if (total > 1e6)
    throw std::domain_error("superchannel_exact: output space exceeds 1e6");
  const long long count = (long long)std::llround(total);

  rmatrix trans(code.m, std::vector<double>(code.m, 0.0));
  std::vector<int> y(code.n, 0);
  std::vector<double> lik(code.m);
  for (long long idx = 0; idx < count; ++idx) {
    for (int j = 0; j < code.m; ++j) {
      double p = 1.0;
      for (int i = 0; i < code.n; ++i) p *= ch.transition[code.codewords[j][i]][y[i]];
      lik[j] = p;
    }
    const int k = detail::map_decode(lik);
    for (int j = 0; j < code.m; ++j) trans[j][k] += lik[j];
    for (int i = 0; i < code.n; ++i) {  // odometer over Y^n
      if (++y[i] < int(ny)) break;
      y[i] = 0;
    }
  }
  double pe = 0.0;
  for (int j = 0; j < code.m; ++j) pe += 1.0 - trans[j][j];
  pe /= double(code.m);
  return Superchannel{DiscreteChannel(std::move(trans)), pe};
}

struct McEstimate {
  double pe = 0.0;
  double half_width_95 = 0.0;
  long long trials = 0;
};

/// Monte-Carlo estimate of the uniform-prior inner decoding error. Trial t
/// uses substream (seed, t+1), so the estimate is reproducible and
/// independent of any evaluation schedule.
inline McEstimate superchannel_mc(const InnerCode& code,
                                  const DiscreteChannel& ch, long long trials,
                                  std::uint64_t seed) {
  detail::check_code_alphabet(code, ch);
  if (trials < 100) throw std::domain_error("superchannel_mc: trials < 100");
  std::vector<std::vector<double>> loglik_table(
      ch.num_inputs(), std::vector<double>(ch.num_outputs()));
  for (std::size_t x = 0; x < ch.num_inputs(); ++x)
    for (std::size_t y = 0; y < ch.num_outputs(); ++y) {
      const double w = ch.transition[x][y];
      loglik_table[x][y] = w > 0.0 ? std::log(w) : -1e300;
    }
  long long errors = 0;
  std::vector<double> loglik(code.m);
  for (long long t = 0; t < trials; ++t) {
    SplitStream rng(seed, std::uint64_t(t) + 1);
    const int j = std::min(code.m - 1, int(rng.uniform() * code.m));
    std::fill(loglik.begin(), loglik.end(), 0.0);
    for (int i = 0; i < code.n; ++i) {
      const int y = rng.draw(ch.transition[code.codewords[j][i]]);
      for (int k = 0; k < code.m; ++k)
        loglik[k] += loglik_table[code.codewords[k][i]][y];
    }
    if (detail::map_decode(loglik) != j) ++errors;
  }
  McEstimate est;
  est.trials = trials;
  est.pe = double(errors) / double(trials);
  est.half_width_95 =
      1.96 * std::sqrt(std::max(est.pe * (1.0 - est.pe), 0.0) / double(trials));
  return est;
}

struct EquierrorFloorCheck {
  double lhs = 0.0;  // max mutual information of the superchannel
  double rhs = 0.0;  // equierror closed form at the same pe
  bool holds = false;
};

/// The equierror superchannel minimizes mutual information among all
/// superchannels with the same uniform-prior error probability.
inline EquierrorFloorCheck equierror_floor_check(const Superchannel& sc) {
  EquierrorFloorCheck out;
  out.lhs = max_mutual_information(sc.channel, 1e-12).capacity;
  out.rhs =
      equierror_capacity(double(sc.channel.num_inputs()), sc.pe_uniform).capacity;
  out.holds = out.lhs >= out.rhs - 1e-9;
  return out;
}

struct BruteForceCn {
  double cn = 0.0;  // nats per inner block
  InnerCode best_code;
  std::vector<int> best_decoder;  // maps output-sequence index to message
};

/// Exhausts every inner code and every deterministic hard-decision decoder,
/// maximizing the superchannel mutual information. Feasible only for tiny
/// instances: |X|^{nm} * m^{|Y|^n} <= 1e7.
inline BruteForceCn brute_force_cn(const DiscreteChannel& ch, int n, int m) {
  if (n < 1 || m < 2) throw std::domain_error("brute_force_cn: n < 1 or m < 2");
  const double nx = double(ch.num_inputs()), nyd = double(ch.num_outputs());
  const double n_codes = std::pow(nx, double(n) * double(m));
  const double n_out = std::pow(nyd, double(n));
  const double n_decoders = std::pow(double(m), n_out);
  if (!(n_codes * n_decoders <= 1e7))
    throw std::domain_error("brute_force_cn: search space exceeds 1e7");
  const long long codes = (long long)std::llround(n_codes);
  const long long outs = (long long)std::llround(n_out);
  const long long decoders = (long long)std::llround(n_decoders);

  BruteForceCn best{-1.0, InnerCode::repetition(n), {}};
  std::vector<int> digits(std::size_t(n) * m, 0);
  for (long long ci = 0; ci < codes; ++ci) {
    std::vector<std::vector<int>> cw(m, std::vector<int>(n));
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i) cw[j][i] = digits[std::size_t(j) * n + i];
    InnerCode code(cw, n);

    // likelihood of every output sequence under every message
    rmatrix lik(m, std::vector<double>(outs));
    for (long long yi = 0; yi < outs; ++yi) {
      long long rem = yi;
      std::vector<int> y(n);
      for (int i = 0; i < n; ++i) {
        y[i] = int(rem % (long long)nyd);
        rem /= (long long)nyd;
      }
      for (int j = 0; j < m; ++j) {
        double p = 1.0;
        for (int i = 0; i < n; ++i) p *= ch.transition[cw[j][i]][y[i]];
        lik[j][yi] = p;
      }
    }

    std::vector<int> dec(outs, 0);
    for (long long di = 0; di < decoders; ++di) {
      rmatrix trans(m, std::vector<double>(m, 0.0));
      for (long long yi = 0; yi < outs; ++yi)
        for (int j = 0; j < m; ++j) trans[j][dec[yi]] += lik[j][yi];
      const double cap =
          max_mutual_information(DiscreteChannel(trans), 1e-10).capacity;
      if (cap > best.cn) {
        best.cn = cap;
        best.best_code = code;
        best.best_decoder = dec;
      }
      for (long long yi = 0; yi < outs; ++yi) {  // odometer over decoders
        if (++dec[yi] < m) break;
        dec[yi] = 0;
      }
    }
    for (std::size_t d = 0; d < digits.size(); ++d) {  // odometer over codes
      if (++digits[d] < int(nx)) break;
      digits[d] = 0;
    }
  }
  return best;
}

}  // namespace cqcap
