#include "cazackit/io.hpp"

#include <charconv>
#include <cstdio>
#include <limits>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace cazackit::io {

namespace {

std::vector<std::vector<std::string>> read_rows(std::istream& is, const std::string& header) {
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("empty CSV, expected header '" + header + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw ValidationError("CSV header '" + line + "' does not match '" + header + "'");
  const std::size_t width = split_csv_line(header).size();
  std::vector<std::vector<std::string>> rows;
  long lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != width) {
      throw ValidationError("CSV line " + std::to_string(lineno) + ": expected " + std::to_string(width) + " fields");
    }
    rows.push_back(std::move(f));
  }
  return rows;
}

long parse_index(const std::string& s) {
  long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ValidationError("malformed integer '" + s + "'");
  return v;
}

nlohmann::json split_json(const std::optional<GoldbachSplit>& s) {
  if (!s) return nullptr;
  return nlohmann::json(s->parts);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) throw ValidationError("malformed number '" + s + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void write_sequence_csv(std::ostream& os, const Eigen::VectorXcd& s) {
  os << "index,re,im\n";
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    os << i << ',' << format_double(s[i].real()) << ',' << format_double(s[i].imag()) << '\n';
  }
}

Eigen::VectorXcd read_sequence_csv(std::istream& is) {
  const auto rows = read_rows(is, "index,re,im");
  Eigen::VectorXcd s(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (parse_index(rows[r][0]) != static_cast<long>(r)) throw ValidationError("sequence CSV indices must be 0..n-1");
    s[static_cast<Eigen::Index>(r)] = {parse_double(rows[r][1]), parse_double(rows[r][2])};
  }
  return s;
}

void write_set_csv(std::ostream& os, const Eigen::MatrixXcd& m) {
  os << "column,index,re,im\n";
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      os << c << ',' << i << ',' << format_double(m(i, c).real()) << ',' << format_double(m(i, c).imag()) << '\n';
    }
  }
}

Eigen::MatrixXcd read_set_csv(std::istream& is) {
  const auto rows = read_rows(is, "column,index,re,im");
  std::map<long, std::map<long, std::complex<double>>> cells;
  for (const auto& r : rows) {
    const long c = parse_index(r[0]), i = parse_index(r[1]);
    if (c < 0 || i < 0) throw ValidationError("negative index in set CSV");
    if (!cells[c].emplace(i, std::complex<double>(parse_double(r[2]), parse_double(r[3]))).second) {
      throw ValidationError("duplicate cell in set CSV");
    }
  }
  if (cells.empty()) throw ValidationError("set CSV has no samples");
  const auto cols = static_cast<Eigen::Index>(cells.size());
  const auto len = static_cast<Eigen::Index>(cells.begin()->second.size());
  Eigen::MatrixXcd m(len, cols);
  Eigen::Index c = 0;
  for (const auto& [col, samples] : cells) {
    if (col != c || static_cast<Eigen::Index>(samples.size()) != len) {
      throw ValidationError("set CSV must hold equal-length columns numbered 0..C-1");
    }
    Eigen::Index i = 0;
    for (const auto& [idx, v] : samples) {
      if (idx != i) throw ValidationError("set CSV sample indices must be 0..n-1");
      m(i++, c) = v;
    }
    ++c;
  }
  return m;
}

nlohmann::json sequence_manifest(const ComplexSequence& s) {
  nlohmann::json j;
  j["type"] = "sequence";
  j["length"] = s.length();
  j["family"] = to_string(s.family());
  const auto& p = s.provenance();
  j["shift"] = p.shift ? nlohmann::json(*p.shift) : nlohmann::json(nullptr);
  j["root"] = p.root ? nlohmann::json(*p.root) : nlohmann::json(nullptr);
  j["split"] = split_json(p.split);
  return j;
}

nlohmann::json set_manifest(const SequenceSet& set) {
  nlohmann::json j;
  j["type"] = "set";
  j["n"] = set.length();
  j["count"] = set.count();
  j["kind"] = to_string(set.kind());
  j["family"] = to_string(set.family());
  j["split"] = split_json(set.split());
  nlohmann::json a = nlohmann::json::array();
  for (const auto& c : set.assignment()) a.push_back(c.parts);
  j["assignment"] = a;
  return j;
}

SequenceSet set_from_manifest(const Eigen::MatrixXcd& samples, const nlohmann::json& manifest) {
  try {
    if (manifest.at("type") != "set") throw ValidationError("manifest does not describe a set");
    if (manifest.at("n").get<long>() != samples.rows() || manifest.at("count").get<long>() != samples.cols()) {
      throw ValidationError("manifest dimensions do not match the CSV");
    }
    std::vector<ColumnAssignment> a;
    for (const auto& parts : manifest.at("assignment")) a.push_back({parts.get<std::vector<long>>()});
    std::optional<GoldbachSplit> split;
    if (!manifest.at("split").is_null()) split = make_split(manifest.at("split").get<std::vector<std::uint64_t>>());
    return SequenceSet(samples, parse_set_kind(manifest.at("kind").get<std::string>()),
                       parse_family(manifest.at("family").get<std::string>()), std::move(a), std::move(split));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  }
}

void write_ambiguity_csv(std::ostream& os, const AmbiguitySurface& s) {
  os << "delay,f_hz,magnitude\n";
  for (Eigen::Index d = 0; d < s.magnitudes.rows(); ++d) {
    for (Eigen::Index k = 0; k < s.magnitudes.cols(); ++k) {
      os << d << ',' << format_double(s.hypotheses[static_cast<std::size_t>(k)]) << ','
         << format_double(s.magnitudes(d, k)) << '\n';
    }
  }
}

void write_profile_csv(std::ostream& os, const CorrelationProfile& p) {
  os << "lag,re,im,abs\n";
  for (Eigen::Index i = 0; i < p.values.size(); ++i) {
    const auto v = p.values[i];
    os << p.lag_min + static_cast<long>(i) << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << ','
       << format_double(std::abs(v)) << '\n';
  }
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXcd& m) {
  os << "row,col,re,im,abs\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      os << r << ',' << c << ',' << format_double(m(r, c).real()) << ',' << format_double(m(r, c).imag()) << ','
         << format_double(std::abs(m(r, c))) << '\n';
    }
  }
}

void write_rms_csv(std::ostream& os, const std::vector<RmsRow>& rows) {
  os << "case,predicted,measured,rel_err\n";
  for (const auto& r : rows) {
    os << r.case_name << ',' << format_double(r.predicted) << ',' << format_double(r.measured) << ','
       << format_double(r.rel_err) << '\n';
  }
}

void write_campaign_header(std::ostream& os) {
  os << "scenario,family,extension,sinr_db,pd,time_rmse_s,freq_rmse_hz,trials,seed\n";
}

void write_campaign_rows(std::ostream& os, const CampaignResult& r) {
  const SimScenario& s = r.scenario;
  for (const auto& p : r.points) {
    os << s.name << ',' << to_string(s.family) << ',' << to_string(s.extension) << ',' << format_double(p.sinr_db) << ','
       << format_double(p.pd) << ',' << format_double(p.time_rmse_s) << ',' << format_double(p.freq_rmse_hz) << ','
       << p.trials << ',' << s.seed << '\n';
  }
}

void write_trial_dump(std::ostream& os, const CampaignResult& r) {
  os << "trial,detected,true_delay,est_delay,true_f,est_f,peak,column\n";
  std::size_t trial = 0;
  for (const auto& point : r.outcomes) {
    for (const TrialOutcome& o : point) {
      os << trial++ << ',' << (o.detected ? 1 : 0) << ','
         << format_double(o.true_delay_samples) << ',' << o.est_delay_samples << ',' << format_double(o.true_freq_hz)
         << ',' << format_double(o.est_freq_hz) << ',' << format_double(o.peak_magnitude) << ','
         << o.identified_column << '\n';
    }
  }
}

nlohmann::json scenario_json(const SimScenario& s) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(format_double(v)); };
  nlohmann::json j;
  j["name"] = s.name;
  j["n"] = s.n;
  j["family"] = to_string(s.family);
  j["extension"] = to_string(s.extension);
  j["split"] = split_json(s.split);
  j["scs_hz"] = s.scs_hz;
  j["sample_rate_hz"] = s.sample_rate_hz;
  j["carrier_hz"] = s.carrier_hz;
  j["doppler_min_hz"] = s.doppler_min_hz;
  j["doppler_max_hz"] = s.doppler_max_hz;
  j["hypotheses"] = s.hypotheses;
  nlohmann::json sinr = nlohmann::json::array();
  for (double v : s.sinr_db) sinr.push_back(num(v));
  j["sinr_db"] = sinr;
  j["trials"] = s.trials;
  j["interferers"] = s.interferers;
  j["interferer_assignment"] = to_string(s.assignment);
  j["interferer_offsets"] = to_string(s.offsets);
  j["reference_snr_db"] = s.reference_snr_db;
  j["tx_column"] = s.tx_column;
  j["candidates"] = to_string(s.candidates);
  j["delay_window"] = s.delay_window;
  j["delay_min"] = s.delay_min;
  j["delay_max"] = s.delay_max;
  j["integer_delays"] = s.integer_delays;
  j["delay_tolerance"] = s.delay_tolerance;
  j["target_pfa"] = s.target_pfa;
  j["calib_sinr_db"] = s.calib_sinr_db;
  j["calib_trials"] = s.calib_trials;
  j["gamma"] = s.gamma ? nlohmann::json(*s.gamma) : nlohmann::json(nullptr);
  j["seed"] = s.seed;
  return j;
}

}  // namespace cazackit::io
