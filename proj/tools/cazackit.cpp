#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cazackit/config.hpp"
#include "cazackit/corr.hpp"
#include "cazackit/extend.hpp"
#include "cazackit/io.hpp"
#include "cazackit/seqgen.hpp"
#include "cazackit/sim.hpp"

using namespace cazackit;
using nlohmann::json;

namespace {

constexpr int kUsage = 1;
constexpr int kValidation = 2;
constexpr int kRuntime = 3;

struct RuntimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::unique_ptr<std::ofstream> open_out(const std::string& path) {
  auto f = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*f) throw RuntimeFailure("cannot open '" + path + "' for writing");
  return f;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  auto f = open_out(path);
  *f << text;
  if (!*f) throw RuntimeFailure("write to '" + path + "' failed");
}

json options_json(const CLI::App& sub) {
  json j = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name.empty()) continue;
    const auto& res = opt->results();
    if (res.empty()) {
      j[name] = opt->get_default_str();
    } else if (res.size() == 1) {
      j[name] = res.front();
    } else {
      j[name] = res;
    }
  }
  return j;
}

json base_manifest(const CLI::App& sub) {
  json m;
  m["command"] = sub.get_name();
  m["version"] = CAZACKIT_VERSION;
  m["options"] = options_json(sub);
  m["seed"] = nullptr;  // deterministic commands
  return m;
}

// Next to the primary output, or on stderr when output went to stdout.
void emit_manifest(const json& m, const std::string& out) {
  const std::string text = m.dump(2) + "\n";
  if (out.empty()) {
    std::cerr << text;
  } else {
    write_text(out + ".manifest.json", text);
  }
}

std::vector<std::uint64_t> parse_parts(const std::string& v) {
  std::vector<std::uint64_t> parts;
  for (const auto& p : config::split_list(v)) {
    const long x = config::parse_long(p);
    if (x < 0) throw ValidationError("split parts must be positive");
    parts.push_back(static_cast<std::uint64_t>(x));
  }
  return parts;
}

ComplexSequence base_sequence(Family family, long q, long root) {
  if (q < 3) throw ValidationError("--q must be an odd prime");
  const PrimeQ p(static_cast<std::uint64_t>(q));
  if (family == Family::Bjorck) return bjorck<double>(p);
  if (family == Family::ZC) return zc<double>(root, p);
  throw ValidationError("family must be bjorck or zc");
}

// ---- gen ----

struct GenArgs {
  std::string family = "bjorck";
  long q = 0;
  long root = 1;
  long shift = 0;
  std::string extend = "none";
  std::string split;
  long n = 0;
  std::string kind;
  long count = 0;
  std::string out;
};

int run_gen(const CLI::App& sub, const GenArgs& a) {
  const Family family = parse_family(a.family);
  std::optional<ComplexSequence> seq;
  std::optional<SequenceSet> set;

  if (a.extend == "goldbach") {
    if (a.n < 5) throw ValidationError("--extend goldbach needs --n of at least 5");
    const auto n = static_cast<std::uint64_t>(a.n);
    const GoldbachSplit split =
        a.split.empty() ? (n % 2 == 0 ? goldbach_even(n) : goldbach_odd(n)) : make_split(parse_parts(a.split));
    const SetKind kind = a.kind.empty() ? SetKind::CyclicShift : parse_set_kind(a.kind);
    const long count = a.count > 0 ? a.count : max_columns(split, kind);
    const ExtensionPlan plan{n, split, kind, count, std::nullopt};
    validate(plan);
    set = extend(plan, default_part_sets(split, kind, family));
  } else {
    if (!a.split.empty()) throw ValidationError("--split needs --extend goldbach");
    ComplexSequence base = base_sequence(family, a.q, a.root);
    if (a.extend == "repetition") {
      if (a.n < a.q) throw ValidationError("--extend repetition needs --n >= --q");
      if (a.kind.empty()) {
        seq = extend_repetition(cyclic_shift(base, a.shift), a.n);
      } else {
        if (parse_set_kind(a.kind) != SetKind::CyclicShift) throw ValidationError("repetition sets are cyclic only");
        set = extend_repetition_set(base, a.n);
      }
    } else if (a.extend == "none") {
      if (a.n != 0) throw ValidationError("--n needs --extend goldbach or repetition");
      if (a.kind.empty()) {
        seq = cyclic_shift(base, a.shift);
      } else if (parse_set_kind(a.kind) == SetKind::CyclicShift) {
        set = circulant_set(base);
      } else {
        set = root_set<double>(PrimeQ(static_cast<std::uint64_t>(a.q)), family);
      }
    } else {
      throw ValidationError("--extend must be none, goldbach or repetition");
    }
    if (set && a.count > 0) {
      if (a.count > set->count()) throw ValidationError("--count exceeds the available columns");
      std::vector<Eigen::Index> cols(static_cast<std::size_t>(a.count));
      for (long i = 0; i < a.count; ++i) cols[static_cast<std::size_t>(i)] = i;
      set = set->select(cols);
    }
  }

  std::ostringstream csv;
  json m = base_manifest(sub);
  if (set) {
    io::write_set_csv(csv, set->matrix());
    m["output"] = io::set_manifest(*set);
  } else {
    io::write_sequence_csv(csv, seq->samples());
    m["output"] = io::sequence_manifest(*seq);
  }
  write_text(a.out, csv.str());
  emit_manifest(m, a.out);
  return 0;
}

// ---- analyze ----

struct AnalyzeArgs {
  std::string mode;
  std::string in;
  std::string manifest;
  bool orthogonal = false;
  long a = 0, b = 0;
  std::string out;
};

struct Loaded {
  Eigen::MatrixXcd samples;
  std::optional<SequenceSet> set;
};

Loaded load_input(const AnalyzeArgs& a) {
  std::ifstream f(a.in, std::ios::binary);
  if (!f) throw ValidationError("cannot open input '" + a.in + "'");
  std::string header;
  std::getline(f, header);
  f.seekg(0);
  Loaded l;
  if (header.rfind("index,", 0) == 0) {
    l.samples = io::read_sequence_csv(f);
    return l;
  }
  l.samples = io::read_set_csv(f);
  const std::string mpath = a.manifest.empty() ? a.in + ".manifest.json" : a.manifest;
  std::ifstream mf(mpath);
  if (mf) {
    json j;
    try {
      mf >> j;
    } catch (const json::exception& e) {
      throw ValidationError("malformed manifest '" + mpath + "': " + e.what());
    }
    l.set = io::set_from_manifest(l.samples, j.contains("output") ? j.at("output") : j);
  } else if (!a.manifest.empty()) {
    throw ValidationError("cannot open manifest '" + mpath + "'");
  }
  return l;
}

int run_analyze(const CLI::App& sub, const AnalyzeArgs& a) {
  Loaded in = load_input(a);
  if (a.orthogonal) {
    if (!in.set) throw ValidationError("--orthogonal needs a set with its manifest");
    in.set = orthogonal_subset(*in.set);
    in.samples = in.set->matrix();
  }
  json m = base_manifest(sub);
  m["columns"] = in.samples.cols();
  m["length"] = in.samples.rows();
  std::ostringstream csv;
  std::string summary;

  if (a.mode == "inner") {
    const Eigen::MatrixXcd g = (in.samples.adjoint() * in.samples).transpose();
    double off = 0.0;
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      for (Eigen::Index c = 0; c < g.cols(); ++c) {
        if (r != c) off = std::max(off, std::abs(g(r, c)));
      }
    }
    io::write_matrix_csv(csv, g);
    summary = "inner columns=" + std::to_string(g.cols()) + " max_offdiag=" + io::format_double(off) +
              " max_offdiag_normalized=" + io::format_double(off / static_cast<double>(in.samples.rows()));
  } else if (a.mode == "periodic" || a.mode == "aperiodic") {
    if (a.a < 0 || a.b < 0 || a.a >= in.samples.cols() || a.b >= in.samples.cols()) {
      throw ValidationError("column index out of range");
    }
    const Eigen::VectorXcd x = in.samples.col(a.a), y = in.samples.col(a.b);
    const CorrelationProfile p = a.mode == "periodic" ? periodic_xcorr_fft(x, y) : aperiodic_xcorr(x, y);
    io::write_profile_csv(csv, p);
    summary = a.mode + " a=" + std::to_string(a.a) + " b=" + std::to_string(a.b) + " rms=" + io::format_double(p.rms);
  } else if (a.mode == "rms") {
    if (!in.set || !in.set->split() || in.set->split()->size() != 2) {
      throw ValidationError("rms needs a two-part Goldbach set with its manifest");
    }
    const auto& parts = in.set->split()->parts;
    const long n = static_cast<long>(in.set->length());
    std::vector<io::RmsRow> rows;
    for (ProfileKind kind : {ProfileKind::Periodic, ProfileKind::Aperiodic}) {
      for (const RmsMeasurement& meas : measure_rms(*in.set, kind)) {
        const double pred =
            predict_rms(meas.case_id, n, static_cast<long>(parts[0]), static_cast<long>(parts[1])).value;
        rows.push_back({std::string(to_string(meas.case_id)), pred, meas.mean_rms, std::abs(meas.mean_rms - pred) / pred});
      }
    }
    io::write_rms_csv(csv, rows);
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.rel_err);
    summary = "rms rows=" + std::to_string(rows.size()) + " max_rel_err=" + io::format_double(worst);
  } else {
    throw ValidationError("analyze mode must be inner, periodic, aperiodic or rms");
  }
  write_text(a.out, csv.str());
  if (!a.out.empty()) std::cout << summary << "\n";
  m["summary"] = summary;
  emit_manifest(m, a.out);
  return 0;
}

// ---- ambiguity ----

struct AmbiguityArgs {
  std::string family = "bjorck";
  long q = 113;
  long root = 1;
  long idft = 128;
  double scs = 15e3;
  long rx_shift = 0;
  double rx_doppler = 0.0;
  long ref_shift = 0;
  std::optional<double> coarse;
  bool narrow = false;
  double hyp_min = -45e3, hyp_max = 45e3, hyp_step = 500.0;
  std::string out;
};

int run_ambiguity(const CLI::App& sub, const AmbiguityArgs& a) {
  const ComplexSequence base = base_sequence(parse_family(a.family), a.q, a.root);
  if (a.idft < a.q) throw ValidationError("--idft must be at least --q");
  if (!(a.scs > 0.0)) throw ValidationError("--scs must be positive");
  const double fs = static_cast<double>(a.idft) * a.scs;
  const Eigen::VectorXcd ref = time_domain(cyclic_shift(base.samples(), a.ref_shift), a.idft);
  Eigen::VectorXcd rx = apply_doppler(time_domain(cyclic_shift(base.samples(), a.rx_shift), a.idft), a.rx_doppler, fs);
  if (a.coarse) rx = apply_doppler(rx, -*a.coarse, fs);
  const std::vector<double> grid =
      a.narrow ? hypothesis_grid(-a.scs / 2, a.scs / 2, a.hyp_step) : hypothesis_grid(a.hyp_min, a.hyp_max, a.hyp_step);

  const AmbiguitySurface s = ambiguity(ref, rx, grid, fs);
  const double matched = ref.squaredNorm() / static_cast<double>(a.idft);
  const double offset = a.coarse.value_or(0.0);

  if (!a.out.empty()) {
    std::ostringstream csv;
    io::write_ambiguity_csv(csv, s);
    write_text(a.out, csv.str());
  }
  std::cout << "peak ref_shift=" << a.ref_shift << " delay=" << s.peak_delay
            << " f_hz=" << io::format_double(s.peak_frequency())
            << " total_f_hz=" << io::format_double(s.peak_frequency() + offset)
            << " magnitude=" << io::format_double(s.peak_magnitude)
            << " relative=" << io::format_double(s.peak_magnitude / matched) << "\n";

  json m = base_manifest(sub);
  m["sample_rate_hz"] = fs;
  m["hypotheses"] = grid.size();
  m["peak"] = {{"delay", s.peak_delay},
               {"f_hz", s.peak_frequency()},
               {"magnitude", s.peak_magnitude},
               {"relative", s.peak_magnitude / matched}};
  emit_manifest(m, a.out);
  return 0;
}

// ---- simulate ----

struct SimulateArgs {
  std::string config;
  std::string scenario;
  std::string families;
  std::optional<std::uint64_t> seed;
  std::optional<long> trials;
  std::string sinr;
  std::vector<std::string> sets;
  std::vector<std::string> curves;
  std::string out;
  std::string dump;
  std::optional<unsigned> workers;
};

int run_simulate(const CLI::App& sub, const SimulateArgs& a) {
  config::ConfigFile cfg;
  if (!a.config.empty()) cfg = config::load(a.config);

  config::Section flags;
  for (const auto& kv : a.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + kv + "'");
    flags[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (a.seed) flags["seed"] = std::to_string(*a.seed);
  if (a.trials) flags["trials"] = std::to_string(*a.trials);
  if (!a.sinr.empty()) flags["sinr_db"] = a.sinr;
  if (a.workers) flags["workers"] = std::to_string(*a.workers);

  config::Section base_keys = cfg.has("simulate") ? cfg.at("simulate") : config::Section{};
  if (!a.scenario.empty()) base_keys["scenario"] = a.scenario;
  if (!base_keys.count("scenario")) base_keys["scenario"] = "tn";
  for (const auto& [k, v] : flags) base_keys[k] = v;

  SimScenario base;
  config::apply(base, base_keys);
  if (!base_keys.count("name")) base.name = base_keys.at("scenario");

  std::vector<SimScenario> runs;
  for (const std::string& section : cfg.order) {
    if (section.rfind("curve.", 0) != 0) continue;
    const std::string name = section.substr(6);
    if (!a.curves.empty() && std::find(a.curves.begin(), a.curves.end(), name) == a.curves.end()) continue;
    SimScenario s = base;
    s.name = name;
    config::apply(s, cfg.at(section));
    config::apply(s, flags);
    runs.push_back(s);
  }
  if (runs.empty()) runs.push_back(base);
  if (!a.families.empty()) {
    std::vector<SimScenario> expanded;
    for (const auto& s : runs) {
      for (const auto& fam : config::split_list(a.families)) {
        SimScenario t = s;
        t.family = parse_family(fam);
        expanded.push_back(t);
      }
    }
    runs = expanded;
  }
  for (const auto& s : runs) validate(s);

  std::ostringstream csv;
  io::write_campaign_header(csv);
  json m = base_manifest(sub);
  m["config_file"] = a.config;
  m["seed"] = base.seed;
  m["curves"] = json::array();
  for (const SimScenario& s : runs) {
    const CampaignResult r = run_campaign(s, !a.dump.empty());
    io::write_campaign_rows(csv, r);
    json c = io::scenario_json(s);
    c["gamma"] = r.threshold.gamma;
    c["workers"] = resolve_workers(s.workers);
    json eff = json::array();
    for (const auto& p : r.points) eff.push_back(p.effective_sinr_db);
    c["effective_sinr_db"] = eff;
    m["curves"].push_back(c);
    if (!a.dump.empty()) {
      std::string path = a.dump;
      if (runs.size() > 1) path += "." + s.name + "." + std::string(to_string(s.family)) + ".csv";
      std::ostringstream d;
      io::write_trial_dump(d, r);
      write_text(path, d.str());
    }
  }
  write_text(a.out, csv.str());
  emit_manifest(m, a.out);
  return 0;
}

// Values from the [command] section of --config are placed ahead of the
// explicit flags so the latter win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::size_t cmd = 0;
  while (cmd < args.size() && args[cmd].rfind("-", 0) == 0) ++cmd;
  if (cmd >= args.size()) return args;
  const std::string command = args[cmd];
  if (command != "gen" && command != "analyze" && command != "ambiguity") return args;
  std::string path;
  for (std::size_t i = cmd + 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  const config::ConfigFile cfg = config::load(path);
  if (!cfg.has(command)) return args;
  std::vector<std::string> injected;
  for (const auto& [key, value] : cfg.at(command)) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    injected.push_back("--" + flag + "=" + value);
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(cmd) + 1, injected.begin(), injected.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CAZAC sequence construction, analysis and link simulation"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a sequence or a sequence set (CSV + manifest)");
  g->add_option("--config", "Config file; keys of its [gen] section act as flags");
  g->add_option("--family", gen.family, "bjorck or zc");
  g->add_option("--q", gen.q, "Prime base length");
  g->add_option("--root", gen.root, "ZC root index");
  g->add_option("--shift", gen.shift, "Cyclic shift of a single sequence");
  g->add_option("--extend", gen.extend, "none, goldbach or repetition");
  g->add_option("--split", gen.split, "Goldbach parts, e.g. 113,7");
  g->add_option("--n", gen.n, "Target length");
  g->add_option("--kind", gen.kind, "cyclic or root; omit for a single sequence");
  g->add_option("--count", gen.count, "Number of columns (default: the cap)");
  g->add_option("--out", gen.out, "Output CSV (stdout when omitted)");

  AnalyzeArgs an;
  auto* a = app.add_subcommand("analyze", "Inner products, correlation profiles and RMS tables");
  a->add_option("--config", "Config file; keys of its [analyze] section act as flags");
  a->add_option("mode,--mode", an.mode, "inner, periodic, aperiodic or rms")->required();
  a->add_option("--in", an.in, "Sequence or set CSV")->required();
  a->add_option("--manifest", an.manifest, "Set manifest (default: <in>.manifest.json)");
  a->add_flag("--orthogonal", an.orthogonal, "Restrict to the orthogonal subset");
  a->add_option("--a", an.a, "First column for profiles");
  a->add_option("--b", an.b, "Second column for profiles");
  a->add_option("--out", an.out, "Output CSV (stdout when omitted)");

  AmbiguityArgs am;
  auto* m = app.add_subcommand("ambiguity", "Delay-Doppler ambiguity surface between IDFT'd shifts");
  m->add_option("--config", "Config file; keys of its [ambiguity] section act as flags");
  m->add_option("--family", am.family, "bjorck or zc");
  m->add_option("--q", am.q, "Prime sequence length");
  m->add_option("--root", am.root, "ZC root index");
  m->add_option("--idft", am.idft, "IDFT length");
  m->add_option("--scs", am.scs, "Subcarrier spacing in Hz");
  m->add_option("--rx-shift", am.rx_shift, "Cyclic shift of the received sequence");
  m->add_option("--rx-doppler", am.rx_doppler, "Doppler applied to the received sequence, Hz");
  m->add_option("--ref-shift", am.ref_shift, "Cyclic shift of the local reference");
  m->add_option("--coarse", am.coarse, "Coarse Doppler estimate removed before the search, Hz");
  m->add_flag("--narrow", am.narrow, "Search [-scs/2, scs/2] only");
  m->add_option("--hyp-min", am.hyp_min, "Lowest hypothesis, Hz");
  m->add_option("--hyp-max", am.hyp_max, "Highest hypothesis, Hz");
  m->add_option("--hyp-step", am.hyp_step, "Hypothesis step, Hz");
  m->add_option("--out", am.out, "Surface CSV");

  SimulateArgs sm;
  auto* s = app.add_subcommand("simulate", "Monte-Carlo detection and offset-estimation campaign");
  s->add_option("--config", sm.config, "Config file with [simulate] and [curve.NAME] sections");
  s->add_option("--scenario", sm.scenario, "Preset: tn, ntn or interference");
  s->add_option("--families", sm.families, "Run every curve once per family, e.g. bjorck,zc");
  s->add_option("--seed", sm.seed, "Master seed");
  s->add_option("--trials", sm.trials, "Trials per SINR point");
  s->add_option("--sinr", sm.sinr, "SINR list in dB: a,b,c or lo:step:hi");
  s->add_option("--set", sm.sets, "Scenario override key=value (repeatable)")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  s->add_option("--curve", sm.curves, "Only run the named curves (repeatable)")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  s->add_option("--workers", sm.workers, "Worker threads (0: CAZACKIT_THREADS or hardware)");
  s->add_option("--out", sm.out, "Campaign CSV (stdout when omitted)");
  s->add_option("--dump", sm.dump, "Per-trial CSV");

  app.add_subcommand("version", "Print the version");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }

  try {
    if (*g) return run_gen(*g, gen);
    if (*a) return run_analyze(*a, an);
    if (*m) return run_ambiguity(*m, am);
    if (*s) return run_simulate(*s, sm);
    std::cout << "cazackit " << CAZACKIT_VERSION << "\n";
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return kRuntime;
  }
}
