// Command-line front end: capacities, error exponents, dispersions,
// finite-blocklength bound sweeps, and concatenated-coding simulation for
// pure-state cq channels and classical DMCs. Rates in nats throughout.

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cqcap/cqcap.hpp"

namespace {

using cqcap::json;

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(payload.c_str(), stdout);
  } else {
    cqcap::atomic_write(out_path, payload);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

cqcap::DiscreteChannel resolve_channel(const std::string& spec,
                                       const std::string& file) {
  if (!spec.empty() && !file.empty())
    throw std::invalid_argument("give either --channel or --channel-file");
  if (!spec.empty()) return cqcap::parse_channel_spec(spec);
  if (!file.empty()) return cqcap::channel_from_file(file);
  throw std::invalid_argument("a channel is required (--channel or --channel-file)");
}

struct ModelOpts {
  std::string model;
  double gamma = -1.0;
  double energy = -1.0;
  std::string channel_spec;
  std::string channel_file;
  std::string ensemble_file;
  double capacity = -1.0;
  double dispersion = -1.0;
};

void add_model_flags(CLI::App* cmd, ModelOpts& m, bool with_dispersion) {
  auto* opt = cmd->add_option("--model", m.model, "model: binary|bpsk|dmc" +
                              std::string(with_dispersion ? "|dispersion" : ""));
  opt->required();
  cmd->add_option("--gamma", m.gamma, "overlap magnitude (binary model)");
  cmd->add_option("--energy", m.energy, "mean photon number (bpsk model)");
  cmd->add_option("--channel", m.channel_spec, "channel spec, e.g. bsc:0.11");
  cmd->add_option("--channel-file", m.channel_file, "JSON channel file");
  cmd->add_option("--ensemble-file", m.ensemble_file,
                  "JSON pure-state ensemble (ensemble model)");
  if (with_dispersion) {
    cmd->add_option("--capacity", m.capacity, "capacity C in nats (dispersion model)");
    cmd->add_option("--dispersion", m.dispersion, "dispersion V in nats^2");
  }
}

double require_gamma(const ModelOpts& m) {
  if (!(m.gamma >= 0.0 && m.gamma <= 1.0))
    throw std::invalid_argument("binary model needs --gamma in [0,1]");
  return m.gamma;
}

double require_energy(const ModelOpts& m) {
  if (!(m.energy >= 0.0))
    throw std::invalid_argument("bpsk model needs --energy >= 0");
  return m.energy;
}

int run_capacity(const ModelOpts& m, const std::string& out_path) {
  json j;
  if (m.model == "binary") {
    const double g = require_gamma(m);
    j = {{"model", "binary"},
         {"gamma", g},
         {"c", cqcap::holevo_binary(g)},
         {"c1", cqcap::c1_binary(g)}};
  } else if (m.model == "bpsk") {
    const double e = require_energy(m);
    const cqcap::RatePair c = cqcap::c_bpsk(e);
    const cqcap::RatePair c1 = cqcap::c1_bpsk(e);
    j = {{"model", "bpsk"},     {"energy", e},
         {"c", c.exact},        {"c1", c1.exact},
         {"gaussian_c", cqcap::gaussian_holevo(e)}};
    if (e > 0.0) {
      j["pie"] = cqcap::pie(c.exact, e);
      j["pie1"] = cqcap::pie(c1.exact, e);
    }
  } else if (m.model == "dmc") {
    const cqcap::DiscreteChannel ch = resolve_channel(m.channel_spec, m.channel_file);
    const cqcap::CapacityResult r = cqcap::max_mutual_information(ch);
    j = {{"model", "dmc"}, {"c", r.capacity}, {"prior", r.prior}};
  } else if (m.model == "ensemble") {
    if (m.ensemble_file.empty())
      throw std::invalid_argument("ensemble model needs --ensemble-file");
    std::ifstream in(m.ensemble_file);
    if (!in)
      throw std::invalid_argument("cannot open ensemble file: " + m.ensemble_file);
    json ej;
    in >> ej;
    const cqcap::GramEnsemble e = cqcap::gram_ensemble_from_json(ej);
    const cqcap::CapacityResult r = cqcap::holevo_general(e.gram);
    j = {{"model", "ensemble"}, {"c", r.capacity}, {"prior", r.prior}};
  } else {
    throw std::invalid_argument("unknown model: " + m.model);
  }
  emit(dump(j), out_path);
  return 0;
}

int run_bound(const ModelOpts& m, long long n, const std::string& n_grid,
              const std::string& format, const std::string& out_path) {
  std::vector<long long> grid;
  if (!n_grid.empty() && n > 0)
    throw std::invalid_argument("give either --n or --n-grid, not both");
  if (!n_grid.empty())
    grid = cqcap::parse_n_grid(n_grid);
  else if (n > 0)
    grid = {n};
  else
    throw std::invalid_argument("a blocklength is required (--n or --n-grid)");

  cqcap::SweepModel model = [&]() -> cqcap::SweepModel {
    if (m.model == "binary") return cqcap::BinaryGammaModel{require_gamma(m)};
    if (m.model == "bpsk") return cqcap::BpskEnergyModel{require_energy(m)};
    if (m.model == "dmc")
      return cqcap::DmcModel{resolve_channel(m.channel_spec, m.channel_file)};
    if (m.model == "dispersion") {
      if (!(m.capacity > 0.0) || !(m.dispersion > 0.0))
        throw std::invalid_argument(
            "dispersion model needs --capacity and --dispersion > 0");
      return cqcap::DispersionModel{m.capacity, m.dispersion};
    }
    throw std::invalid_argument("unknown model: " + m.model);
  }();

  const cqcap::BoundCurve curve = cqcap::sweep(model, grid);
  for (const cqcap::BoundPoint& p : curve.points)
    if (!p.ok())
      std::fprintf(stderr, "n=%lld skipped: %s\n", p.n, p.error.c_str());
  emit(format == "json" ? dump(cqcap::curve_to_json(curve))
                        : cqcap::curve_to_csv(curve),
       out_path);
  return 0;
}

int run_exponent(const ModelOpts& m, double rate, const std::string& out_path) {
  cqcap::ExponentPoint p;
  double capacity = 0.0;
  if (m.model == "binary" || m.model == "bpsk") {
    const double g = m.model == "binary" ? require_gamma(m)
                                         : std::exp(-2.0 * require_energy(m));
    cqcap::QuantumExponentModel model(cqcap::binary_gram(g));
    p = model.exponent(rate, true);
    capacity = model.capacity();
  } else if (m.model == "dmc") {
    cqcap::ClassicalExponentModel model(
        resolve_channel(m.channel_spec, m.channel_file));
    p = model.exponent(rate, true);
    capacity = model.capacity();
  } else {
    throw std::invalid_argument("unknown model: " + m.model);
  }
  emit(dump({{"rate", p.rate},
             {"exponent", p.exponent},
             {"s_star", p.s_star},
             {"prior_star", p.prior_star},
             {"capacity", capacity}}),
       out_path);
  return 0;
}

int run_dispersion(const ModelOpts& m, double snr, const std::string& out_path) {
  json j;
  if (m.model == "awgn") {
    j = {{"model", "awgn"}, {"snr", snr},
         {"v_over_c2", cqcap::awgn_vc_ratio_lowsnr(snr)}};
  } else if (m.model == "binary" || m.model == "bpsk") {
    const double g = m.model == "binary" ? require_gamma(m)
                                         : std::exp(-2.0 * require_energy(m));
    const cqcap::CapacityResult cap = cqcap::holevo_general(cqcap::binary_gram(g));
    const double v = cqcap::quantum_dispersion(
        cqcap::detail::weighted_spectrum(cqcap::binary_gram(g), cap.prior));
    j = {{"model", m.model},
         {"capacity", cap.capacity},
         {"dispersion", v},
         {"v_over_c2", v / (cap.capacity * cap.capacity)}};
    if (m.model == "bpsk") j["energy"] = m.energy;
  } else if (m.model == "dmc") {
    const cqcap::DiscreteChannel ch = resolve_channel(m.channel_spec, m.channel_file);
    const double c = cqcap::max_mutual_information(ch).capacity;
    const double v = cqcap::classical_dispersion(ch);
    j = {{"model", "dmc"},
         {"capacity", c},
         {"dispersion", v},
         {"v_over_c2", v / (c * c)}};
  } else {
    throw std::invalid_argument("unknown model: " + m.model);
  }
  emit(dump(j), out_path);
  return 0;
}

int run_lemma1(double energy, const std::string& out_path) {
  const cqcap::OptimalBinaryInputs r = cqcap::optimal_binary_inputs(energy);
  emit(dump({{"energy", energy},
             {"q_star", r.q_star},
             {"alpha0", r.alpha0},
             {"alpha1", r.alpha1},
             {"c1_exact", r.c1_exact},
             {"c1_asymptotic", r.c1_asymptotic}}),
       out_path);
  return 0;
}

int run_dmcsim(const ModelOpts& m, int n, double rate, long long trials,
               std::uint64_t seed, const std::string& code_kind,
               const std::string& out_path) {
  const cqcap::DiscreteChannel ch = resolve_channel(m.channel_spec, m.channel_file);
  const int mm = std::max(2, int(std::llround(std::exp(double(n) * rate))));
  cqcap::InnerCode code = [&]() {
    if (code_kind == "repetition") {
      if (mm != 2)
        throw std::domain_error("repetition code needs rate with round(e^{nR}) = 2");
      if (ch.num_inputs() < 2)
        throw std::domain_error("repetition code needs a binary-input channel");
      return cqcap::InnerCode::repetition(n);
    }
    if (code_kind == "random") {
      const std::vector<double> uniform(ch.num_inputs(),
                                        1.0 / double(ch.num_inputs()));
      return cqcap::random_inner_code(uniform, n, mm, seed);
    }
    throw std::invalid_argument("unknown --code kind: " + code_kind);
  }();

  const cqcap::McEstimate mc = cqcap::superchannel_mc(code, ch, trials, seed);
  json j{{"n", n},
         {"m", mm},
         {"effective_rate_nats", code.effective_rate()},
         {"pe", mc.pe},
         {"pe_ci95", mc.half_width_95},
         {"equierror_lb_nats_per_use",
          cqcap::equierror_capacity(double(mm), mc.pe).capacity / double(n)},
         {"seed", seed},
         {"lemma2", nullptr}};
  if (std::pow(double(ch.num_outputs()), double(n)) <= 1e6) {
    const cqcap::Superchannel sc = cqcap::superchannel_exact(code, ch);
    const cqcap::EquierrorFloorCheck l2 = cqcap::equierror_floor_check(sc);
    j["lemma2"] = {{"lhs", l2.lhs}, {"rhs", l2.rhs}, {"holds", l2.holds}};
    j["pe_exact"] = sc.pe_uniform;
  }
  emit(dump(j), out_path);
  return 0;
}

int run_oracle_cn(const ModelOpts& m, int n, int mm, const std::string& out_path) {
  const cqcap::DiscreteChannel ch = resolve_channel(m.channel_spec, m.channel_file);
  const cqcap::BruteForceCn r = cqcap::brute_force_cn(ch, n, mm);
  emit(dump({{"n", n},
             {"m", mm},
             {"cn_nats", r.cn},
             {"cn_per_use", r.cn / double(n)},
             {"best_code", r.best_code.codewords},
             {"best_decoder", r.best_decoder}}),
       out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-blocklength achievable rates for pure-state cq channels "
               "and classical DMCs (all rates in nats)"};
  app.require_subcommand(1);

  std::string format = "json", out_path;
  std::uint64_t seed = 0;
  app.add_option("--format", format, "output format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out_path, "output file (atomic write)");
  app.add_option("--seed", seed, "RNG seed for simulation commands");
  app.fallthrough();  // shared flags may follow the subcommand name

  ModelOpts cap_m, bound_m, exp_m, disp_m, sim_m, cn_m;

  auto* c_cap = app.add_subcommand("capacity", "Holevo/C1/DMC capacities");
  add_model_flags(c_cap, cap_m, false);

  auto* c_bound = app.add_subcommand("bound", "lower bounds on C_N/N");
  add_model_flags(c_bound, bound_m, true);
  long long bound_n = 0;
  std::string bound_grid;
  auto* blocklengths = c_bound->add_option_group("blocklength");
  blocklengths->add_option("--n", bound_n, "single blocklength");
  blocklengths->add_option("--n-grid", bound_grid, "a:b:logK or a:b:step");
  blocklengths->require_option(1);

  auto* c_exp = app.add_subcommand("exponent", "random-coding error exponent at a rate");
  add_model_flags(c_exp, exp_m, false);
  double exp_rate = -1.0;
  c_exp->add_option("--rate", exp_rate, "rate in nats per channel use")
      ->required()
      ->check(CLI::NonNegativeNumber);

  auto* c_disp = app.add_subcommand("dispersion", "channel dispersion and V/C^2");
  add_model_flags(c_disp, disp_m, false);
  double disp_snr = 0.0;
  c_disp->add_option("--snr", disp_snr, "SNR for the awgn low-SNR ratio");
  c_disp->get_option("--model")->description("model: binary|bpsk|dmc|awgn");

  auto* c_lem = app.add_subcommand("lemma1", "optimal energy-constrained binary inputs");
  double lem_energy = 0.0;
  c_lem->add_option("--energy", lem_energy, "mean photon number in (0, 0.1)")
      ->required();

  auto* c_sim = app.add_subcommand("dmcsim", "concatenated-coding simulation on a DMC");
  c_sim->add_option("--channel", sim_m.channel_spec, "channel spec, e.g. bsc:0.11");
  c_sim->add_option("--channel-file", sim_m.channel_file, "JSON channel file");
  int sim_n = 0;
  double sim_rate = -1.0;
  long long sim_trials = 0;
  std::string sim_code = "random";
  c_sim->add_option("--n", sim_n, "inner blocklength")->required()
      ->check(CLI::PositiveNumber);
  c_sim->add_option("--rate", sim_rate, "inner code rate in nats/use")->required()
      ->check(CLI::NonNegativeNumber);
  c_sim->add_option("--trials", sim_trials, "Monte-Carlo trials")->required()
      ->check(CLI::PositiveNumber);
  c_sim->add_option("--code", sim_code, "inner code: random|repetition")
      ->check(CLI::IsMember({"random", "repetition"}));

  auto* c_cn = app.add_subcommand("oracle-cn", "exhaustive C_N on tiny instances");
  c_cn->add_option("--channel", cn_m.channel_spec, "channel spec, e.g. bsc:0.11");
  c_cn->add_option("--channel-file", cn_m.channel_file, "JSON channel file");
  int cn_n = 1, cn_mm = 2;
  c_cn->add_option("--n", cn_n, "inner blocklength")->check(CLI::PositiveNumber);
  c_cn->add_option("--m", cn_mm, "message count")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_cap->parsed()) return run_capacity(cap_m, out_path);
    if (c_bound->parsed()) {
      // bound curves default to the CSV contract unless JSON was asked for
      const std::string fmt = app.count("--format") ? format : "csv";
      return run_bound(bound_m, bound_n, bound_grid, fmt, out_path);
    }
    if (c_exp->parsed()) return run_exponent(exp_m, exp_rate, out_path);
    if (c_disp->parsed()) return run_dispersion(disp_m, disp_snr, out_path);
    if (c_lem->parsed()) return run_lemma1(lem_energy, out_path);
    if (c_sim->parsed())
      return run_dmcsim(sim_m, sim_n, sim_rate, sim_trials, seed, sim_code, out_path);
    if (c_cn->parsed()) return run_oracle_cn(cn_m, cn_n, cn_mm, out_path);
  } catch (const cqcap::convergence_error& e) {
    std::fprintf(stderr, "numerical failure: %s (best value %.17g)\n", e.what(),
                 e.best_value);
    return 4;
  } catch (const cqcap::regime_error& e) {
    std::fprintf(stderr, "regime violation: %s\n", e.what());
    return 3;
  } catch (const cqcap::numeric_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 4;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "precondition violated: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "bad input: %s\n", e.what());
    return 3;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "bad input file: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
  return 2;
}
