#pragma once

// CSV emission with a stable column order and fixed number formatting, plus
// a JSON provenance sidecar.

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dafrfdm/harness/config.hpp"
#include "dafrfdm/harness/runners.hpp"

namespace dafrfdm::harness {

inline std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const CcdfCurve& c) {
  os << "threshold_db,ccdf\n";
  for (std::size_t i = 0; i < c.thresholds_db.size(); ++i)
    os << fmt_num(c.thresholds_db[i]) << ',' << fmt_num(c.ccdf[i]) << '\n';
}

inline void write_csv(std::ostream& os, const ErrorCurve& c) {
  os << "snr_db," << c.metric << ",errors,samples\n";
  for (std::size_t i = 0; i < c.snr_db.size(); ++i)
    os << fmt_num(c.snr_db[i]) << ',' << fmt_num(c.value[i]) << ',' << fmt_num(c.error_sum[i])
       << ',' << fmt_num(c.sample_count[i]) << '\n';
}

inline void write_csv(std::ostream& os, const IciTable& t) {
  os << "alpha_offset,a_alpha,papr_db,signal_power,ici_power,ici_ratio\n";
  for (const auto& r : t.rows)
    os << fmt_num(r.alpha_offset) << ',' << fmt_num(r.a_alpha) << ',' << fmt_num(r.papr_db)
       << ',' << fmt_num(r.signal_power) << ',' << fmt_num(r.ici_power) << ','
       << fmt_num(r.ici_ratio) << '\n';
}

template <class Result>
std::string to_csv(const Result& r) {
  std::ostringstream os;
  write_csv(os, r);
  return os.str();
}

inline nlohmann::ordered_json config_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["scheme"] = to_string(c.scheme);
  j["modulation"] = to_string(c.modulation);
  j["subcarriers"] = c.n_subcarriers;
  j["oversample"] = c.oversample;
  j["block_duration"] = c.block_duration;
  j["cp_length"] = c.cp_length;
  j["blocks"] = c.n_blocks;
  j["ber_blocks"] = c.ber_blocks;
  j["snr_db"] = c.snr_db;
  j["channel"] = to_string(c.channel.model);
  j["channel_taps"] = c.channel.taps;
  j["delay_profile"] = c.channel.profile == DelayProfile::uniform ? "uniform" : "exponential";
  j["delay_decay"] = c.channel.decay;
  j["coarse_divisions"] = c.coarse_divisions;
  j["fine_divisions"] = c.fine_divisions;
  j["slm_candidates"] = c.baselines.slm_candidates;
  j["pts_subblocks"] = c.baselines.pts_subblocks;
  j["pts_partition"] =
      c.baselines.partition == PtsPartition::adjacent ? "adjacent" : "interleaved";
  j["clip_ratio"] = c.baselines.clip_ratio;
  j["eigen_step"] = c.eigen_step;
  j["ici_points"] = c.ici_points;
  j["ccdf_step_db"] = c.ccdf_step_db;
  j["master_seed"] = c.master_seed;
  return j;
}

/// Provenance record; the worker count is deliberately left out so that
/// the sidecar is as reproducible as the CSV.
inline nlohmann::ordered_json sidecar(const ExperimentConfig& c, const std::string& kind,
                                      nlohmann::ordered_json summary) {
  nlohmann::ordered_json j;
  j["run"] = kind;
  j["config"] = config_json(c);
  j["summary"] = std::move(summary);
  return j;
}

inline void write_outputs(const std::string& csv_path, const std::string& csv,
                          const nlohmann::ordered_json& meta) {
  std::ofstream out(csv_path, std::ios::binary);
  if (!out) throw Error("cannot write '" + csv_path + "'");
  out << csv;
  std::ofstream js(csv_path + ".json", std::ios::binary);
  if (!js) throw Error("cannot write '" + csv_path + ".json'");
  js << meta.dump(2) << '\n';
}

}  // namespace dafrfdm::harness
