#pragma once

// Monte Carlo campaigns. Every block draws from its own seeded streams and
// writes into its own result slot, so the output is identical for any
// worker count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "dafrfdm/angle_search.hpp"
#include "dafrfdm/baselines.hpp"
#include "dafrfdm/chain.hpp"
#include "dafrfdm/channels.hpp"
#include "dafrfdm/harness/config.hpp"
#include "dafrfdm/harness/rng.hpp"
#include "dafrfdm/modulation.hpp"
#include "dafrfdm/papr.hpp"

namespace dafrfdm::harness {

template <class Fn>
void parallel_for(long count, int threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (long i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int n = static_cast<int>(std::min<long>(threads, count));
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

inline FrfdmParams base_params(const ExperimentConfig& c) {
  return make_params(c.n_subcarriers, c.oversample, c.block_duration, 0.0);
}

inline AngleSearchConfig search_config(const ExperimentConfig& c) {
  AngleSearchConfig a;
  a.coarse_step = search_span(c.block_duration) / c.coarse_divisions;
  a.fine_step = a.coarse_step / c.fine_divisions;
  a.papr_grid_points = c.n_subcarriers * c.oversample;
  return a;
}

/// One block after the scheme's PAPR reducer, with what the receiver needs
/// to undo it.
struct SchemeOutput {
  cvec body;                         // N*L (or N for the eigen variant) samples
  double papr_db = 0.0;              // of `body`
  int evaluations = 1;
  double alpha_offset = 0.0;         // DA-FrFDM angle (offset from pi/2)
  std::vector<double> symbol_phases; // SLM/PTS +-1 per symbol
  bool fallback = false;
};

/// Shared, read-only per-campaign state.
struct SchemeContext {
  ExperimentConfig cfg;
  FrfdmParams params;
  AngleSearchConfig search;
  std::shared_ptr<const HermiteBasis> basis;

  explicit SchemeContext(const ExperimentConfig& c)
      : cfg(c), params(base_params(c)), search(search_config(c)) {
    if (c.scheme == Scheme::da_frfdm_eigen)
      basis = std::make_shared<const HermiteBasis>(c.n_subcarriers);
  }
};

inline SchemeOutput apply_scheme(const SchemeContext& ctx, const ComplexBlock& s,
                                 std::uint64_t block_id) {
  const auto& c = ctx.cfg;
  SchemeOutput out;
  switch (c.scheme) {
    case Scheme::ofdm:
      out.body = oversampled_idft(s.values, c.oversample);
      break;
    case Scheme::clipping:
      out.body = clip(oversampled_idft(s.values, c.oversample), c.baselines.clip_ratio);
      break;
    case Scheme::slm: {
      auto rng = seed_stream(c.master_seed, block_id, Stream::slm);
      auto r = slm(s, c.baselines.slm_candidates, c.oversample, rng);
      out.body = std::move(r.time);
      out.evaluations = r.evaluations;
      out.symbol_phases = std::move(r.phases);
      break;
    }
    case Scheme::pts: {
      auto r = pts(s, c.baselines.pts_subblocks, c.oversample, c.baselines.partition);
      out.body = std::move(r.time);
      out.evaluations = r.evaluations;
      out.symbol_phases = pts_symbol_phases(r.phases, s.size(), c.baselines.partition);
      break;
    }
    case Scheme::da_frfdm: {
      const auto r = find_optimal_angle(s, ctx.params, ctx.search);
      out.alpha_offset = r.alpha_star;
      out.evaluations = r.evaluations;
      out.fallback = r.fallback_used;
      out.body = idfrft(with_offset(ctx.params, r.alpha_star), s).values;
      break;
    }
    case Scheme::da_frfdm_eigen: {
      const auto r = brute_sweep_eigen(s, *ctx.basis, c.eigen_step);
      out.alpha_offset = r.alpha_star;
      out.evaluations = r.evaluations;
      out.body = ctx.basis->apply(ctx.basis->analyze(s.values), -(r.alpha_star + kPi / 2));
      break;
    }
  }
  out.papr_db = papr_db_samples(out.body);
  return out;
}

inline DataBlock block_data(const ExperimentConfig& c, std::uint64_t block_id) {
  auto rng = seed_stream(c.master_seed, block_id, Stream::data);
  return random_block(c.modulation, c.n_subcarriers, rng);
}

// ---------------------------------------------------------------- CCDF

struct CcdfCurve {
  std::vector<double> thresholds_db;
  std::vector<double> ccdf;
  std::vector<double> papr_db;  // per block, in block order
  long n_blocks = 0;
  double mean_evaluations = 0.0;
  long fallbacks = 0;
  std::uint64_t seed = 0;
  std::string scheme;

  /// Smallest observed PAPR x with Pr(eta > x) <= level.
  double papr_at(double level) const {
    std::vector<double> v(papr_db);
    std::sort(v.begin(), v.end());
    const long n = static_cast<long>(v.size());
    const long allowed = static_cast<long>(std::floor(level * n + 1e-9));
    const long idx = std::clamp(n - allowed - 1, 0L, n - 1);
    return v[idx];
  }
};

inline CcdfCurve ccdf_from_samples(std::vector<double> papr, double step_db) {
  CcdfCurve curve;
  curve.papr_db = std::move(papr);
  curve.n_blocks = static_cast<long>(curve.papr_db.size());
  std::vector<double> sorted(curve.papr_db);
  std::sort(sorted.begin(), sorted.end());
  const double top = sorted.empty() ? 0.0 : sorted.back();
  const long points = static_cast<long>(std::floor(top / step_db)) + 2;
  for (long j = 0; j < points; ++j) {
    const double g = j * step_db;
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), g);
    curve.thresholds_db.push_back(g);
    curve.ccdf.push_back(static_cast<double>(above) / static_cast<double>(curve.n_blocks));
  }
  return curve;
}

inline CcdfCurve run_ccdf(const ExperimentConfig& cfg) {
  validate(cfg);
  require(cfg.n_blocks >= 100, "run_ccdf: need at least 100 blocks");
  const SchemeContext ctx(cfg);
  std::vector<double> papr(static_cast<std::size_t>(cfg.n_blocks));
  std::vector<int> evals(papr.size());
  std::vector<char> fallback(papr.size());
  parallel_for(cfg.n_blocks, cfg.threads, [&](long b) {
    const auto data = block_data(cfg, static_cast<std::uint64_t>(b));
    const auto out = apply_scheme(ctx, data.symbols, static_cast<std::uint64_t>(b));
    papr[b] = out.papr_db;
    evals[b] = out.evaluations;
    fallback[b] = out.fallback;
  });
  CcdfCurve curve = ccdf_from_samples(std::move(papr), cfg.ccdf_step_db);
  double total = 0.0;
  for (int e : evals) total += e;
  curve.mean_evaluations = total / static_cast<double>(cfg.n_blocks);
  for (char f : fallback) curve.fallbacks += f;
  curve.seed = cfg.master_seed;
  curve.scheme = to_string(cfg.scheme);
  return curve;
}

// ------------------------------------------------------------ BER / MSE

struct ErrorCurve {
  std::vector<double> snr_db;
  std::vector<double> value;        // BER or MSE
  std::vector<double> error_sum;    // bit errors or summed squared error
  std::vector<double> sample_count; // bits or symbols
  long n_blocks = 0;
  double mean_evaluations = 0.0;
  std::uint64_t seed = 0;
  std::string scheme;
  std::string metric;
};

inline ChannelRealization draw_channel(const ExperimentConfig& c, std::uint64_t block_id) {
  auto rng = seed_stream(c.master_seed, block_id, Stream::channel);
  switch (c.channel.model) {
    case ChannelModel::identity: return identity_channel();
    case ChannelModel::rayleigh:
      return draw_rayleigh(c.channel.taps, rng, c.channel.profile, c.channel.decay);
    case ChannelModel::doubly_dispersive:
      return doubly_dispersive_channel(c.block_duration / c.n_subcarriers, rng);
  }
  return identity_channel();
}

/// Receiver for a scheme's output: undo phase, DFrFT at the genie angle,
/// one-tap equalize, undo SLM/PTS signs.
inline ComplexBlock receive_scheme(const SchemeContext& ctx, const SchemeOutput& tx,
                                   const cvec& rx, const cvec& h_f) {
  const auto p = with_offset(ctx.params, tx.alpha_offset);
  auto s_hat = receive(p, rx, h_f, ctx.cfg.cp_length);
  for (std::size_t k = 0; k < tx.symbol_phases.size(); ++k)
    s_hat.values[k] *= tx.symbol_phases[k];
  return s_hat;
}

inline ErrorCurve run_link(const ExperimentConfig& cfg, bool ber) {
  validate(cfg);
  if (ber)
    require(cfg.modulation != ModulationKind::complex_gaussian, "run_ber: needs a QAM modulation");
  else
    require(cfg.modulation == ModulationKind::complex_gaussian,
            "run_mse: needs Gaussian symbols");
  require(cfg.scheme != Scheme::da_frfdm_eigen,
          "link runs: the eigendecomposition variant has no one-tap receiver");
  const SchemeContext ctx(cfg);
  const std::size_t n_snr = cfg.snr_db.size();
  std::vector<std::vector<double>> err(static_cast<std::size_t>(cfg.ber_blocks),
                                       std::vector<double>(n_snr, 0.0));
  std::vector<int> evals(static_cast<std::size_t>(cfg.ber_blocks));
  const int n = cfg.n_subcarriers;
  parallel_for(cfg.ber_blocks, cfg.threads, [&](long b) {
    const auto id = static_cast<std::uint64_t>(b);
    const auto data = block_data(cfg, id);
    const auto ch = draw_channel(cfg, id);
    validate(ch, cfg.cp_length);
    const auto h_f = frequency_response(ch, n);
    const auto tx = apply_scheme(ctx, data.symbols, id);
    evals[b] = tx.evaluations;
    const auto p = with_offset(ctx.params, tx.alpha_offset);
    const auto body = apply_phase(p, tx.body, +1.0);
    const auto frame = transmit_body(body, cfg.cp_length, cfg.oversample);
    const auto faded = apply_channel(frame.samples, ch, ctx.params);
    const double var = noise_variance(frame.samples, 0.0, cfg.oversample);
    for (std::size_t i = 0; i < n_snr; ++i) {
      auto rng = seed_stream(cfg.master_seed, id, Stream::noise, static_cast<std::uint32_t>(i));
      const double v = std::isinf(cfg.snr_db[i]) ? 0.0 : var / std::pow(10.0, cfg.snr_db[i] / 10.0);
      const auto rx = add_noise(faded, v, rng);
      const auto s_hat = receive_scheme(ctx, tx, rx, h_f);
      if (ber) {
        const auto bits = demodulate(cfg.modulation, s_hat);
        double e = 0;
        for (std::size_t j = 0; j < bits.size(); ++j) e += bits[j] != data.bits[j];
        err[b][i] = e;
      } else {
        double e = 0;
        for (int k = 0; k < n; ++k) e += std::norm(s_hat.values[k] - data.symbols.values[k]);
        err[b][i] = e;
      }
    }
  });
  ErrorCurve curve;
  curve.snr_db = cfg.snr_db;
  curve.n_blocks = cfg.ber_blocks;
  curve.seed = cfg.master_seed;
  curve.scheme = to_string(cfg.scheme);
  curve.metric = ber ? "ber" : "mse";
  const double per_block = ber ? static_cast<double>(n) * bits_per_symbol(cfg.modulation) : n;
  for (std::size_t i = 0; i < n_snr; ++i) {
    double total = 0.0;
    for (const auto& row : err) total += row[i];
    curve.error_sum.push_back(total);
    curve.sample_count.push_back(per_block * static_cast<double>(cfg.ber_blocks));
    curve.value.push_back(total / curve.sample_count.back());
  }
  double total_eval = 0.0;
  for (int e : evals) total_eval += e;
  curve.mean_evaluations = total_eval / static_cast<double>(cfg.ber_blocks);
  return curve;
}

inline ErrorCurve run_ber(const ExperimentConfig& cfg) { return run_link(cfg, true); }
inline ErrorCurve run_mse(const ExperimentConfig& cfg) { return run_link(cfg, false); }

// ------------------------------------------------------------------ ICI

struct IciRow {
  double alpha_offset = 0.0;
  double a_alpha = 0.0;
  double papr_db = 0.0;
  double signal_power = 0.0;
  double ici_power = 0.0;
  double ici_ratio = 0.0;
};

struct IciTable {
  std::vector<IciRow> rows;
  int cp_length = 0;  // CP actually used (covers the channel's delay spread)
  std::uint64_t seed = 0;
};

/// Sweeps the offset over [0, asin(T^2/pi)/2) for one seeded Gaussian
/// block. Static channel models give a diagonal end-to-end matrix.
inline IciTable run_ici_tradeoff(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto data = block_data(cfg, 0);
  const auto ch = draw_channel(cfg, 0);
  IciTable table;
  table.cp_length = std::max(cfg.cp_length, ch.max_delay());
  table.seed = cfg.master_seed;
  table.rows.resize(static_cast<std::size_t>(cfg.ici_points));
  const double half_span = 0.5 * search_span(cfg.block_duration);
  const auto base = base_params(cfg);
  parallel_for(cfg.ici_points, cfg.threads, [&](long i) {
    const double off = half_span * static_cast<double>(i) / cfg.ici_points;
    const auto p = with_offset(base, off);
    const auto rep = ici_power(p, ch, table.cp_length);
    IciRow& row = table.rows[i];
    row.alpha_offset = off;
    row.a_alpha = p.a_alpha;
    row.papr_db = papr_db(p, data.symbols);
    row.signal_power = rep.signal_power;
    row.ici_power = rep.ici_power;
    row.ici_ratio = rep.ici_ratio();
  });
  return table;
}

}  // namespace dafrfdm::harness
