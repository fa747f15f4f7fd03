#include "icls/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace icls {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] void fail(const std::string& key, int line, const std::string& why) {
  throw ConfigError("config error at line " + std::to_string(line) + ", key '" +
                    key + "': " + why);
}

double parse_double(const std::string& key, const std::string& value, int line) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) fail(key, line, "trailing characters in number");
    if (!std::isfinite(v)) fail(key, line, "value must be finite");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(key, line, "expected a number, got '" + value + "'");
  }
}

std::uint64_t parse_uint(const std::string& key, const std::string& value, int line) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(value, &pos);
    if (pos != value.size()) fail(key, line, "trailing characters in integer");
    if (v < 0) fail(key, line, "value must be non-negative");
    return static_cast<std::uint64_t>(v);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(key, line, "expected an integer, got '" + value + "'");
  }
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& value, int line) {
  std::vector<double> out;
  std::istringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(key, line, "empty list element");
    out.push_back(parse_double(key, item, line));
  }
  if (out.empty()) fail(key, line, "empty list");
  return out;
}

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line;
};

std::vector<Entry> tokenize(std::string_view text) {
  std::vector<Entry> entries;
  std::string section;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    // Strip comments, then whitespace.
    const std::size_t hash = raw.find_first_of("#;");
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config error at line " + std::to_string(line_no) +
                          ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config error at line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    Entry e;
    e.section = section;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    e.line = line_no;
    if (e.section.empty()) fail(e.key, e.line, "key appears outside any section");
    if (e.key.empty())
      throw ConfigError("config error at line " + std::to_string(line_no) +
                        ": empty key");
    entries.push_back(std::move(e));
  }
  return entries;
}

void apply_channel(ExperimentConfig& cfg, const Entry& e) {
  auto& ch = cfg.channel;
  if (e.key == "path_loss_exponent") ch.path_loss_exponent = parse_double(e.key, e.value, e.line);
  else if (e.key == "reference_distance_m") ch.reference_distance_m = parse_double(e.key, e.value, e.line);
  else if (e.key == "reference_loss_db") ch.reference_loss_db = parse_double(e.key, e.value, e.line);
  else if (e.key == "shadowing_sigma_db") ch.shadowing_sigma_db = parse_double(e.key, e.value, e.line);
  else if (e.key == "noise_power_dbm") ch.noise_power_dbm = parse_double(e.key, e.value, e.line);
  else if (e.key == "carrier_hz") ch.carrier_hz = parse_double(e.key, e.value, e.line);
  else if (e.key == "bandwidth_hz") ch.bandwidth_hz = parse_double(e.key, e.value, e.line);
  else if (e.key == "min_distance_m") ch.min_distance_m = parse_double(e.key, e.value, e.line);
  else if (e.key == "fading") {
    if (e.value == "none") ch.fading = Fading::None;
    else if (e.value == "rayleigh") ch.fading = Fading::RayleighFlat;
    else fail(e.key, e.line, "expected 'none' or 'rayleigh'");
  } else fail(e.key, e.line, "unknown key in [channel]");
}

void apply_deployment(ExperimentConfig& cfg, const Entry& e) {
  auto& dep = cfg.deployment;
  if (e.key == "ring_radius_m") dep.ring_radius_m = parse_double(e.key, e.value, e.line);
  else if (e.key == "candidate_offset_m") dep.candidate_offset_m = parse_double(e.key, e.value, e.line);
  else if (e.key == "attacker_x_m") dep.attacker_x_m = parse_double(e.key, e.value, e.line);
  else if (e.key == "attacker_y_m") dep.attacker_y_m = parse_double(e.key, e.value, e.line);
  else if (e.key == "target_cell") dep.target_cell = static_cast<int>(parse_uint(e.key, e.value, e.line));
  else fail(e.key, e.line, "unknown key in [deployment]");
}

void apply_frame(ExperimentConfig& cfg, const Entry& e) {
  auto& fr = cfg.frame;
  if (e.key == "beacon_bits") fr.beacon_bits = parse_uint(e.key, e.value, e.line);
  else if (e.key == "header_bits") fr.header_bits = parse_uint(e.key, e.value, e.line);
  else if (e.key == "payload_bits") fr.payload_bits = parse_uint(e.key, e.value, e.line);
  else fail(e.key, e.line, "unknown key in [frame]");
}

void apply_detector(ExperimentConfig& cfg, const Entry& e) {
  auto& det = cfg.detector;
  if (e.key == "bins") det.layout.bins = parse_uint(e.key, e.value, e.line);
  else if (e.key == "envelope_max") det.layout.hi = parse_double(e.key, e.value, e.line);
  else if (e.key == "smoothing_floor") det.layout.smoothing_floor = parse_double(e.key, e.value, e.line);
  else if (e.key == "window_frames") det.window_frames = parse_uint(e.key, e.value, e.line);
  else if (e.key == "baseline_frames") det.baseline_frames = parse_uint(e.key, e.value, e.line);
  else if (e.key == "power_gap_db") det.power_gap_db = parse_double(e.key, e.value, e.line);
  else if (e.key == "power_gap_quorum") det.power_gap_quorum = static_cast<int>(parse_uint(e.key, e.value, e.line));
  else if (e.key == "power_gap_min_level_db") det.power_gap_min_level_db = parse_double(e.key, e.value, e.line);
  else if (e.key == "threshold") {
    if (e.value == "auto") {
      cfg.threshold_auto = true;
    } else {
      cfg.threshold_auto = false;
      det.threshold = parse_double(e.key, e.value, e.line);
      if (det.threshold < 0.0) fail(e.key, e.line, "threshold must be non-negative");
    }
  } else fail(e.key, e.line, "unknown key in [detector]");
}

void apply_experiment(ExperimentConfig& cfg, const Entry& e) {
  if (e.key == "target_powers_dbm") cfg.target_powers_dbm = parse_double_list(e.key, e.value, e.line);
  else if (e.key == "attacker_power_dbm") cfg.attacker_power_dbm = parse_double(e.key, e.value, e.line);
  else if (e.key == "frames_per_point") cfg.frames_per_point = parse_uint(e.key, e.value, e.line);
  else if (e.key == "windows_per_point") cfg.windows_per_point = parse_uint(e.key, e.value, e.line);
  else if (e.key == "master_seed") cfg.master_seed = parse_uint(e.key, e.value, e.line);
  else if (e.key == "roc_thresholds") cfg.roc_thresholds = parse_double_list(e.key, e.value, e.line);
  else if (e.key == "cases") {
    cfg.cases.clear();
    std::istringstream in(e.value);
    std::string item;
    while (std::getline(in, item, ',')) {
      item = trim(item);
      try {
        cfg.cases.push_back(case_from_name(item));
      } catch (const std::exception&) {
        fail(e.key, e.line, "unknown case '" + item + "'");
      }
    }
    if (cfg.cases.empty()) fail(e.key, e.line, "empty case list");
  } else fail(e.key, e.line, "unknown key in [experiment]");
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  for (const Entry& e : tokenize(text)) {
    if (e.section == "channel") apply_channel(cfg, e);
    else if (e.section == "deployment") apply_deployment(cfg, e);
    else if (e.section == "frame") apply_frame(cfg, e);
    else if (e.section == "detector") apply_detector(cfg, e);
    else if (e.section == "experiment") apply_experiment(cfg, e);
    else fail(e.key, e.line, "unknown section [" + e.section + "]");
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("config constraint violation: ") + ex.what());
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string default_config_text() {
  return
      "# Simulator configuration. Omitted keys take these defaults.\n"
      "[channel]\n"
      "path_loss_exponent = 3.0\n"
      "reference_distance_m = 1.0\n"
      "reference_loss_db = 40.2\n"
      "shadowing_sigma_db = 4.0\n"
      "fading = rayleigh            # none | rayleigh\n"
      "noise_power_dbm = -90\n"
      "carrier_hz = 2.45e9\n"
      "bandwidth_hz = 1e6\n"
      "min_distance_m = 1.0\n"
      "\n"
      "[deployment]\n"
      "ring_radius_m = 12\n"
      "candidate_offset_m = 2\n"
      "attacker_x_m = 11\n"
      "attacker_y_m = 0\n"
      "target_cell = 0\n"
      "\n"
      "[frame]\n"
      "beacon_bits = 8\n"
      "header_bits = 8\n"
      "payload_bits = 96\n"
      "\n"
      "[detector]\n"
      "bins = 32\n"
      "envelope_max = 4.0\n"
      "smoothing_floor = 1e-9\n"
      "threshold = auto             # auto | static value in nats\n"
      "window_frames = 100\n"
      "baseline_frames = 1000\n"
      "power_gap_db = 3.0\n"
      "power_gap_quorum = 2\n"
      "power_gap_min_level_db = 6.0\n"
      "\n"
      "[experiment]\n"
      "target_powers_dbm = -5, 0, 5, 10\n"
      "attacker_power_dbm = 20\n"
      "frames_per_point = 2000\n"
      "windows_per_point = 200\n"
      "master_seed = 1\n"
      "cases = none, jam, spoof, beacon_sync, relay_af\n"
      "roc_thresholds = 0, 0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1, 2\n";
}

}  // namespace icls
