#pragma once

// Experiment configuration: a `key = value` text file, '#' starts a comment.
// Every key is optional; an empty file yields the default setup
// (N = 64, N_cp = 10, L = 10, T = 128 us, coarse/fine divisions 80/39, CR = 2).

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dafrfdm/baselines.hpp"
#include "dafrfdm/channels.hpp"
#include "dafrfdm/common.hpp"
#include "dafrfdm/modulation.hpp"

namespace dafrfdm::harness {

enum class Scheme { ofdm, da_frfdm, da_frfdm_eigen, slm, pts, clipping };

inline std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::ofdm: return "ofdm";
    case Scheme::da_frfdm: return "da-frfdm";
    case Scheme::da_frfdm_eigen: return "da-frfdm-eigen";
    case Scheme::slm: return "slm";
    case Scheme::pts: return "pts";
    case Scheme::clipping: return "clipping";
  }
  return "?";
}

inline Scheme parse_scheme(const std::string& name) {
  for (Scheme s : {Scheme::ofdm, Scheme::da_frfdm, Scheme::da_frfdm_eigen, Scheme::slm,
                   Scheme::pts, Scheme::clipping})
    if (to_string(s) == name) return s;
  throw InvalidArgument("unknown scheme '" + name + "'");
}

enum class ChannelModel { identity, rayleigh, doubly_dispersive };

inline std::string to_string(ChannelModel c) {
  switch (c) {
    case ChannelModel::identity: return "identity";
    case ChannelModel::rayleigh: return "rayleigh";
    case ChannelModel::doubly_dispersive: return "doubly-dispersive";
  }
  return "?";
}

inline ChannelModel parse_channel(const std::string& name) {
  for (ChannelModel c :
       {ChannelModel::identity, ChannelModel::rayleigh, ChannelModel::doubly_dispersive})
    if (to_string(c) == name) return c;
  throw InvalidArgument("unknown channel '" + name + "'");
}

struct ChannelSpec {
  ChannelModel model = ChannelModel::rayleigh;
  int taps = 6;
  DelayProfile profile = DelayProfile::uniform;
  double decay = 2.0;
};

struct ExperimentConfig {
  Scheme scheme = Scheme::da_frfdm;
  ModulationKind modulation = ModulationKind::qam64;
  int n_subcarriers = 64;
  int oversample = 10;
  double block_duration = 128e-6;
  int cp_length = 10;
  long n_blocks = 10000;     // CCDF campaigns
  long ber_blocks = 2000;    // channel draws per SNR point
  std::vector<double> snr_db = {0, 5, 10, 15, 20, 25, 30};
  ChannelSpec channel;
  int coarse_divisions = 80;  // coarse step = asin(T^2/pi) / coarse_divisions
  int fine_divisions = 39;    // fine step = coarse step / fine_divisions
  BaselineConfig baselines;
  double eigen_step = kPi * 1e-3;
  int ici_points = 80;
  double ccdf_step_db = 0.1;
  std::uint64_t master_seed = 1;
  int threads = 1;
  std::string output;
};

/// Configuration failure with the offending key (and line, when from a file).
class ConfigError : public InvalidArgument {
 public:
  explicit ConfigError(const std::string& what) : InvalidArgument(what) {}
};

inline void validate(const ExperimentConfig& c) {
  auto check = [](bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError("config key '" + key + "': " + what);
  };
  check(c.n_subcarriers >= 2, "subcarriers", "must be >= 2");
  check(c.oversample >= 1, "oversample", "must be >= 1");
  check(c.block_duration > 0 && c.block_duration * c.block_duration / kPi <= 1.0,
        "block_duration", "must satisfy 0 < T and T^2/pi <= 1");
  check(c.cp_length >= 0 && c.cp_length <= c.n_subcarriers, "cp_length", "must be in [0, N]");
  check(c.n_blocks >= 1, "blocks", "must be >= 1");
  check(c.ber_blocks >= 1, "ber_blocks", "must be >= 1");
  check(!c.snr_db.empty(), "snr_db", "must list at least one value");
  check(c.channel.taps >= 1 && c.channel.taps <= c.cp_length + 1, "channel_taps",
        "must be in [1, cp_length + 1]");
  check(c.channel.decay > 0, "delay_decay", "must be positive");
  check(c.coarse_divisions >= 2, "coarse_divisions", "must be >= 2");
  check(c.fine_divisions >= 1, "fine_divisions", "must be >= 1");
  check(c.baselines.slm_candidates >= 1, "slm_candidates", "must be >= 1");
  check(c.baselines.pts_subblocks >= 1 && c.baselines.pts_subblocks <= 24 &&
            c.n_subcarriers % c.baselines.pts_subblocks == 0,
        "pts_subblocks", "must divide N (and be <= 24)");
  check(c.baselines.clip_ratio > 0, "clip_ratio", "must be positive");
  check(c.eigen_step > 0 && c.eigen_step <= 2 * kPi, "eigen_step", "must be in (0, 2pi]");
  check(c.ici_points >= 1, "ici_points", "must be >= 1");
  check(c.ccdf_step_db > 0, "ccdf_step_db", "must be positive");
  check(c.threads >= 1, "threads", "must be >= 1");
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& v) {
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double d = std::stod(v, &used);
  if (used != v.size()) throw std::invalid_argument(v);
  return d;
}

inline long parse_long(const std::string& v) {
  std::size_t used = 0;
  const long x = std::stol(v, &used);
  if (used != v.size()) throw std::invalid_argument(v);
  return x;
}

}  // namespace detail

/// Applies one `key = value` setting.
inline void set_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
  using detail::parse_double;
  using detail::parse_long;
  try {
    if (key == "scheme") c.scheme = parse_scheme(value);
    else if (key == "modulation") c.modulation = parse_modulation(value);
    else if (key == "subcarriers") c.n_subcarriers = static_cast<int>(parse_long(value));
    else if (key == "oversample") c.oversample = static_cast<int>(parse_long(value));
    else if (key == "block_duration") c.block_duration = parse_double(value);
    else if (key == "cp_length") c.cp_length = static_cast<int>(parse_long(value));
    else if (key == "blocks") c.n_blocks = parse_long(value);
    else if (key == "ber_blocks") c.ber_blocks = parse_long(value);
    else if (key == "snr_db") {
      c.snr_db.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) c.snr_db.push_back(parse_double(detail::trim(item)));
    } else if (key == "channel") c.channel.model = parse_channel(value);
    else if (key == "channel_taps") c.channel.taps = static_cast<int>(parse_long(value));
    else if (key == "delay_profile") {
      if (value == "uniform") c.channel.profile = DelayProfile::uniform;
      else if (value == "exponential") c.channel.profile = DelayProfile::exponential;
      else throw std::invalid_argument(value);
    } else if (key == "delay_decay") c.channel.decay = parse_double(value);
    else if (key == "coarse_divisions") c.coarse_divisions = static_cast<int>(parse_long(value));
    else if (key == "fine_divisions") c.fine_divisions = static_cast<int>(parse_long(value));
    else if (key == "slm_candidates") c.baselines.slm_candidates = static_cast<int>(parse_long(value));
    else if (key == "pts_subblocks") c.baselines.pts_subblocks = static_cast<int>(parse_long(value));
    else if (key == "pts_partition") {
      if (value == "adjacent") c.baselines.partition = PtsPartition::adjacent;
      else if (value == "interleaved") c.baselines.partition = PtsPartition::interleaved;
      else throw std::invalid_argument(value);
    } else if (key == "clip_ratio") c.baselines.clip_ratio = parse_double(value);
    else if (key == "eigen_step") c.eigen_step = parse_double(value);
    else if (key == "ici_points") c.ici_points = static_cast<int>(parse_long(value));
    else if (key == "ccdf_step_db") c.ccdf_step_db = parse_double(value);
    else if (key == "master_seed") c.master_seed = std::stoull(value);
    else if (key == "threads") c.threads = static_cast<int>(parse_long(value));
    else if (key == "output") c.output = value;
    else throw ConfigError("unknown config key '" + key + "'");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': invalid value '" + value + "'");
  }
}

inline ExperimentConfig parse_config(std::istream& in, const std::string& origin = "config") {
  ExperimentConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    try {
      set_key(c, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  validate(c);
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

}  // namespace dafrfdm::harness
