#include "cazackit/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>

#include "cazackit/io.hpp"

namespace cazackit::config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const Section& ConfigFile::at(const std::string& name) const {
  const auto it = sections.find(name);
  if (it == sections.end()) throw ValidationError("config has no [" + name + "] section");
  return it->second;
}

ConfigFile parse(std::istream& is) {
  ConfigFile cfg;
  std::string current;
  std::string line;
  long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError("config line " + std::to_string(lineno) + ": unterminated section");
      current = trim(line.substr(1, line.size() - 2));
      if (cfg.sections.count(current)) throw ValidationError("config: duplicate section [" + current + "]");
      cfg.sections[current];
      cfg.order.push_back(current);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ValidationError("config line " + std::to_string(lineno) + ": empty key");
    if (!cfg.sections.count(current)) cfg.order.push_back(current);
    if (!cfg.sections[current].emplace(key, trim(line.substr(eq + 1))).second) {
      throw ValidationError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  return cfg;
}

ConfigFile load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open config file '" + path + "'");
  return parse(f);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  for (const auto& item : io::split_csv_line(v)) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::vector<double> parse_number_list(const std::string& v) {
  if (v.find(':') != std::string::npos) {
    std::vector<std::string> p;
    std::string cur;
    for (char c : v) {
      if (c == ':') {
        p.push_back(trim(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    p.push_back(trim(cur));
    if (p.size() != 3) throw ValidationError("range '" + v + "' must be lo:step:hi");
    return hypothesis_grid(io::parse_double(p[0]), io::parse_double(p[2]), io::parse_double(p[1]));
  }
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(io::parse_double(item));
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("malformed boolean '" + v + "'");
}

long parse_long(const std::string& v) {
  const double d = io::parse_double(v);
  if (!std::isfinite(d) || d != std::floor(d)) throw ValidationError("expected an integer, got '" + v + "'");
  return static_cast<long>(d);
}

SimScenario preset(const std::string& name) {
  SimScenario s;
  s.name = name;
  s.sinr_db = parse_number_list("-20:2:10");
  if (name == "tn") {
    s.hypotheses = hypothesis_grid(-2000.0, 2000.0, 500.0);
  } else if (name == "ntn") {
    s.hypotheses = hypothesis_grid(-45000.0, 45000.0, 500.0);
    s.doppler_min_hz = -40e3;
    s.doppler_max_hz = 40e3;
  } else if (name == "interference") {
    s.hypotheses = hypothesis_grid(-2000.0, 2000.0, 500.0);
    s.interferers = 18;
    s.offsets = InterfererOffsets::Aligned;
    s.sinr_db = parse_number_list("-20:2:0");
  } else {
    throw ValidationError("unknown scenario preset '" + name + "' (tn, ntn, interference)");
  }
  return s;
}

const std::vector<std::string>& scenario_keys() {
  static const std::vector<std::string> keys = {
      "scenario",       "name",          "n",
      "family",         "extension",     "split",
      "scs_hz",         "sample_rate_hz", "carrier_hz",
      "doppler_min_hz", "doppler_max_hz", "hyp_min_hz",
      "hyp_max_hz",     "hyp_step_hz",   "sinr_db",
      "trials",         "interferers",   "interferer_assignment",
      "interferer_offsets", "reference_snr_db", "tx_column",
      "candidates",     "delay_window",  "delay_min",
      "delay_max",      "integer_delays", "delay_tolerance",
      "target_pfa",     "calib_sinr_db", "calib_trials",
      "gamma",          "seed",          "workers"};
  return keys;
}

void apply(SimScenario& s, const Section& keys) {
  if (const auto it = keys.find("scenario"); it != keys.end()) {
    const SimScenario p = preset(it->second);
    const std::string name = s.name;
    const std::uint64_t seed = s.seed;
    const unsigned workers = s.workers;
    s = p;
    if (name != "scenario") s.name = name;
    s.seed = seed;
    s.workers = workers;
  }
  double hmin = s.hypotheses.empty() ? -2000.0 : s.hypotheses.front();
  double hmax = s.hypotheses.empty() ? 2000.0 : s.hypotheses.back();
  double hstep = s.hypotheses.size() > 1 ? s.hypotheses[1] - s.hypotheses[0] : 500.0;
  bool rebuild = s.hypotheses.empty();

  for (const auto& [key, value] : keys) {
    try {
      if (key == "scenario") continue;
      else if (key == "name") s.name = value;
      else if (key == "n") s.n = parse_long(value);
      else if (key == "family") s.family = parse_family(value);
      else if (key == "extension") s.extension = parse_extension(value);
      else if (key == "split") {
        if (value == "auto" || value.empty()) {
          s.split.reset();
        } else {
          std::vector<std::uint64_t> parts;
          for (const auto& p : split_list(value)) parts.push_back(static_cast<std::uint64_t>(parse_long(p)));
          s.split = make_split(parts);
        }
      }
      else if (key == "scs_hz") s.scs_hz = io::parse_double(value);
      else if (key == "sample_rate_hz") s.sample_rate_hz = io::parse_double(value);
      else if (key == "carrier_hz") s.carrier_hz = io::parse_double(value);
      else if (key == "doppler_min_hz") s.doppler_min_hz = io::parse_double(value);
      else if (key == "doppler_max_hz") s.doppler_max_hz = io::parse_double(value);
      else if (key == "hyp_min_hz") hmin = io::parse_double(value), rebuild = true;
      else if (key == "hyp_max_hz") hmax = io::parse_double(value), rebuild = true;
      else if (key == "hyp_step_hz") hstep = io::parse_double(value), rebuild = true;
      else if (key == "sinr_db") s.sinr_db = parse_number_list(value);
      else if (key == "trials") s.trials = parse_long(value);
      else if (key == "interferers") s.interferers = parse_long(value);
      else if (key == "interferer_assignment") s.assignment = parse_assignment(value);
      else if (key == "interferer_offsets") s.offsets = parse_offsets(value);
      else if (key == "reference_snr_db") s.reference_snr_db = io::parse_double(value);
      else if (key == "tx_column") s.tx_column = parse_long(value);
      else if (key == "candidates") s.candidates = parse_candidates(value);
      else if (key == "delay_window") s.delay_window = parse_long(value);
      else if (key == "delay_min") s.delay_min = io::parse_double(value);
      else if (key == "delay_max") s.delay_max = io::parse_double(value);
      else if (key == "integer_delays") s.integer_delays = parse_bool(value);
      else if (key == "delay_tolerance") s.delay_tolerance = io::parse_double(value);
      else if (key == "target_pfa") s.target_pfa = io::parse_double(value);
      else if (key == "calib_sinr_db") s.calib_sinr_db = io::parse_double(value);
      else if (key == "calib_trials") s.calib_trials = parse_long(value);
      else if (key == "gamma") {
        if (value == "auto" || value.empty()) s.gamma.reset();
        else s.gamma = io::parse_double(value);
      }
      else if (key == "seed") {
        const long v = parse_long(value);
        if (v < 0) throw ValidationError("seed must be non-negative");
        s.seed = static_cast<std::uint64_t>(v);
      }
      else if (key == "workers") {
        const long v = parse_long(value);
        if (v < 0) throw ValidationError("workers must be non-negative");
        s.workers = static_cast<unsigned>(v);
      }
      else throw ValidationError("unknown scenario key");
    } catch (const ValidationError& e) {
      throw ValidationError("scenario key '" + key + "' = '" + value + "': " + e.what());
    } catch (const std::invalid_argument& e) {
      throw ValidationError("scenario key '" + key + "' = '" + value + "': " + e.what());
    }
  }
  if (rebuild) s.hypotheses = hypothesis_grid(hmin, hmax, hstep);
}

}  // namespace cazackit::config
