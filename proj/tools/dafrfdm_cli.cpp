// Command-line driver for the Monte Carlo campaigns.
//
//   dafrfdm ccdf|ber|mse|ici [--config FILE] [--seed S] [--out CSV]
//                            [--scheme NAME] [--blocks N] [--threads T]
//   dafrfdm selftest

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>

#include "dafrfdm/angle_search.hpp"
#include "dafrfdm/chain.hpp"
#include "dafrfdm/channels.hpp"
#include "dafrfdm/frft.hpp"
#include "dafrfdm/harness/config.hpp"
#include "dafrfdm/harness/output.hpp"
#include "dafrfdm/harness/runners.hpp"
#include "dafrfdm/papr.hpp"

namespace {

using namespace dafrfdm;
using namespace dafrfdm::harness;

struct Overrides {
  std::string config;
  std::string out;
  std::string scheme;
  std::uint64_t seed = 0;
  long blocks = 0;
  int threads = 0;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "key = value experiment file");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--out", o.out, "CSV output path (a .json sidecar is written next to it)");
  cmd->add_option("--scheme", o.scheme,
                  "ofdm | da-frfdm | da-frfdm-eigen | slm | pts | clipping");
  cmd->add_option("--blocks", o.blocks, "number of blocks (channel draws for ber/mse)");
  cmd->add_option("--threads", o.threads, "worker threads");
}

ExperimentConfig resolve(const Overrides& o, bool link_run) {
  ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (!o.scheme.empty()) c.scheme = parse_scheme(o.scheme);
  if (o.seed != 0) c.master_seed = o.seed;
  if (o.blocks > 0) (link_run ? c.ber_blocks : c.n_blocks) = o.blocks;
  if (o.threads > 0) c.threads = o.threads;
  if (!o.out.empty()) c.output = o.out;
  validate(c);
  return c;
}

void emit(const ExperimentConfig& c, const std::string& csv, const nlohmann::ordered_json& meta) {
  if (c.output.empty()) {
    std::cout << csv;
    return;
  }
  write_outputs(c.output, csv, meta);
  std::cerr << "wrote " << c.output << " and " << c.output << ".json\n";
}

int cmd_ccdf(const Overrides& o) {
  const auto c = resolve(o, false);
  const auto curve = run_ccdf(c);
  nlohmann::ordered_json s;
  s["blocks"] = curve.n_blocks;
  s["mean_evaluations"] = curve.mean_evaluations;
  s["fallbacks"] = curve.fallbacks;
  s["papr_at_1e-2"] = curve.papr_at(1e-2);
  s["papr_at_1e-3"] = curve.papr_at(1e-3);
  emit(c, to_csv(curve), sidecar(c, "ccdf", s));
  std::cerr << to_string(c.scheme) << ": PAPR at CCDF 1e-3 = " << curve.papr_at(1e-3)
            << " dB, mean evaluations " << curve.mean_evaluations << "\n";
  return 0;
}

int cmd_link(const Overrides& o, bool ber) {
  auto c = resolve(o, true);
  if (o.config.empty())
    c.modulation = ber ? ModulationKind::qam64 : ModulationKind::complex_gaussian;
  const auto curve = ber ? run_ber(c) : run_mse(c);
  nlohmann::ordered_json s;
  s["blocks"] = curve.n_blocks;
  s["mean_evaluations"] = curve.mean_evaluations;
  s["metric"] = curve.metric;
  emit(c, to_csv(curve), sidecar(c, curve.metric, s));
  return 0;
}

int cmd_ici(const Overrides& o) {
  auto c = resolve(o, false);
  if (o.config.empty()) {
    c.modulation = ModulationKind::complex_gaussian;
    c.channel.model = ChannelModel::doubly_dispersive;
  }
  const auto table = run_ici_tradeoff(c);
  nlohmann::ordered_json s;
  s["cp_length_used"] = table.cp_length;
  s["points"] = table.rows.size();
  emit(c, to_csv(table), sidecar(c, "ici", s));
  return 0;
}

int cmd_selftest() {
  int failures = 0;
  auto report = [&](const char* name, bool ok, double value) {
    std::printf("%-44s %s  (%.3g)\n", name, ok ? "PASS" : "FAIL", value);
    if (!ok) ++failures;
  };
  std::mt19937_64 rng(7);
  const auto s = gaussian_block(16, rng);

  const auto p = make_params(16, 4, 16.0, 0.37);
  const auto back = dfrft(p, idfrft(p, s));
  double err = 0;
  for (int k = 0; k < 16; ++k) err = std::max(err, std::abs(back.values[k] - s.values[k]));
  report("DFrFT loopback", err < 1e-10, err);

  const auto ch = draw_rayleigh(6, rng);
  const auto frame = transmit(p, s, 10);
  const auto rx = receive(p, apply_static(frame.samples, ch, p.oversample),
                          frequency_response(ch, 16), 10);
  err = 0;
  for (int k = 0; k < 16; ++k) err = std::max(err, std::abs(rx.values[k] - s.values[k]));
  report("one-tap equalization over 6-tap channel", err < 1e-9, err);

  const double q = quad_trig_integral(
      {TrigKind::cos, TrigKind::cos, TrigKind::cos, TrigKind::cos}, {2, 4, 1, 5});
  report("quadruple trig integral worked example", std::abs(q - kPi / 4) < 1e-15, q);

  const auto t1 = make_params(64, 10, 128e-6, 0.0);
  report("initial search set size", initial_set(128e-6, search_span(128e-6) / 80).size() == 40,
         40);
  const auto env = EnvelopeCoeffs(gaussian_block(64, rng).values);
  const double from_envelope = papr_db_from_envelope(env, harmonic_coeffs(env, 0.0), 640);
  (void)t1;
  report("envelope PAPR finite", std::isfinite(from_envelope), from_envelope);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DA-FrFDM PAPR / link simulations"};
  app.require_subcommand(1);
  Overrides ccdf_o, ber_o, mse_o, ici_o;
  auto* ccdf = app.add_subcommand("ccdf", "PAPR CCDF campaign");
  add_common(ccdf, ccdf_o);
  auto* ber = app.add_subcommand("ber", "BER over a fading channel (QAM)");
  add_common(ber, ber_o);
  auto* mse = app.add_subcommand("mse", "MSE over a fading channel (Gaussian symbols)");
  add_common(mse, mse_o);
  auto* ici = app.add_subcommand("ici", "PAPR / ICI trade-off over the angle range");
  add_common(ici, ici_o);
  auto* selftest = app.add_subcommand("selftest", "quick internal consistency checks");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*ccdf) return cmd_ccdf(ccdf_o);
    if (*ber) return cmd_link(ber_o, true);
    if (*mse) return cmd_link(mse_o, false);
    if (*ici) return cmd_ici(ici_o);
    if (*selftest) return cmd_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
