#include "cazackit/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <thread>

namespace cazackit {

namespace {

double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

template <typename F>
void parallel_for(long count, unsigned workers, F&& fn) {
  if (count <= 0) return;
  const unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (w == 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (unsigned t = 0; t < w; ++t) {
    pool.emplace_back([&] {
      for (long i = next++; i < count && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

template <typename E>
E parse_enum(std::string_view s, std::initializer_list<std::pair<std::string_view, E>> table, const char* what) {
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  throw ValidationError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

SequenceSet build_set(const SimScenario& s) {
  if (s.extension == ExtensionKind::Prime) {
    const PrimeQ q(static_cast<std::uint64_t>(s.n));
    return circulant_set(s.family == Family::ZC ? zc<double>(1, q) : bjorck<double>(q));
  }
  if (s.extension == ExtensionKind::Repetition) {
    const PrimeQ q(prev_prime(static_cast<std::uint64_t>(s.n)));
    const ComplexSequence base = s.family == Family::ZC ? zc<double>(1, q) : bjorck<double>(q);
    return extend_repetition_set(base, s.n);
  }
  const auto n = static_cast<std::uint64_t>(s.n);
  const GoldbachSplit split = s.split ? *s.split : (n % 2 == 0 ? goldbach_even(n) : goldbach_odd(n));
  ExtensionPlan plan{n, split, SetKind::CyclicShift, max_columns(split, SetKind::CyclicShift), std::nullopt};
  return extend(plan, default_part_sets(split, SetKind::CyclicShift, s.family));
}

/// Common factor taking the IDFT of a unit-modulus column to unit mean power.
double unit_power_scale(const SequenceSet& set, long m) {
  const double energy = set.matrix().col(0).squaredNorm();
  return static_cast<double>(m) / std::sqrt(energy);
}

Eigen::MatrixXcd unit_power_symbols(const SequenceSet& set, long m, double scale) {
  for (Eigen::Index c = 0; c < set.count(); ++c) {
    for (Eigen::Index i = 0; i < set.length(); ++i) {
      if (std::abs(std::abs(set.matrix()(i, c)) - 1.0) > 1e-9) throw ValidationError("simulation sets must be unit-modulus");
    }
  }
  Eigen::MatrixXcd x(m, set.count());
  for (Eigen::Index c = 0; c < set.count(); ++c) x.col(c) = time_domain(set.matrix().col(c), m) * scale;
  return x;
}

bool disjoint_parts(const ColumnAssignment& a, const ColumnAssignment& b) {
  for (std::size_t p = 0; p < a.parts.size(); ++p) {
    if (a.parts[p] == b.parts[p]) return false;
  }
  return true;
}

Detector make_detector(const SimScenario& s, const Eigen::MatrixXcd& symbols) {
  if (s.tx_column < 0 || s.tx_column >= symbols.cols()) throw ValidationError("tx_column outside the set");
  std::vector<long> ids;
  if (s.candidates == CandidateMode::Target) {
    ids.push_back(s.tx_column);
  } else {
    ids.resize(static_cast<std::size_t>(symbols.cols()));
    std::iota(ids.begin(), ids.end(), 0L);
  }
  Eigen::MatrixXcd cand(symbols.rows(), static_cast<Eigen::Index>(ids.size()));
  for (std::size_t i = 0; i < ids.size(); ++i) cand.col(static_cast<Eigen::Index>(i)) = symbols.col(ids[i]);
  return Detector(cand, ids, s.hypotheses, s.sample_rate_hz, s.delay_window);
}

}  // namespace

std::string_view to_string(ExtensionKind k) {
  switch (k) {
    case ExtensionKind::Repetition: return "repetition";
    case ExtensionKind::Prime: return "prime";
    default: return "goldbach";
  }
}
std::string_view to_string(InterfererAssignment a) {
  return a == InterfererAssignment::OrthogonalFirst ? "orthogonal_first" : "random";
}
std::string_view to_string(InterfererOffsets o) { return o == InterfererOffsets::Aligned ? "aligned" : "uniform"; }
std::string_view to_string(CandidateMode c) { return c == CandidateMode::Target ? "target" : "all"; }

ExtensionKind parse_extension(std::string_view s) {
  return parse_enum<ExtensionKind>(s, {{"repetition", ExtensionKind::Repetition},
                                       {"goldbach", ExtensionKind::Goldbach},
                                       {"prime", ExtensionKind::Prime}},
                                   "extension");
}
InterfererAssignment parse_assignment(std::string_view s) {
  return parse_enum<InterfererAssignment>(
      s, {{"orthogonal_first", InterfererAssignment::OrthogonalFirst}, {"random", InterfererAssignment::Random}},
      "interferer assignment");
}
InterfererOffsets parse_offsets(std::string_view s) {
  return parse_enum<InterfererOffsets>(s, {{"aligned", InterfererOffsets::Aligned}, {"uniform", InterfererOffsets::Uniform}},
                                       "interferer offsets");
}
CandidateMode parse_candidates(std::string_view s) {
  return parse_enum<CandidateMode>(s, {{"target", CandidateMode::Target}, {"all", CandidateMode::All}}, "candidates");
}

long symbol_length(const SimScenario& s) { return std::lround(s.sample_rate_hz / s.scs_hz); }

void validate(const SimScenario& s) {
  auto fail = [](const std::string& m) { throw ValidationError(m); };
  if (s.n < 5) fail("n must be at least 5");
  if (!(s.scs_hz > 0.0) || !std::isfinite(s.scs_hz)) fail("scs_hz must be positive");
  if (!(s.sample_rate_hz > 0.0) || !std::isfinite(s.sample_rate_hz)) fail("sample_rate_hz must be positive");
  if (!std::isfinite(s.carrier_hz) || s.carrier_hz < 0.0) fail("carrier_hz must be non-negative");
  if (symbol_length(s) < s.n) fail("n subcarriers do not fit in round(fs / scs) IDFT bins");
  if (!std::isfinite(s.doppler_min_hz) || !std::isfinite(s.doppler_max_hz) || s.doppler_min_hz > s.doppler_max_hz) {
    fail("doppler range must be finite with min <= max");
  }
  if (s.hypotheses.empty()) fail("hypothesis set is empty");
  for (double h : s.hypotheses) {
    if (!std::isfinite(h)) fail("hypotheses must be finite");
  }
  if (s.sinr_db.empty()) fail("SINR list is empty");
  for (double v : s.sinr_db) {
    if (std::isnan(v)) fail("SINR values must not be NaN");
  }
  if (s.trials < 1) fail("trials must be positive");
  if (s.delay_window < 1 || s.delay_window > symbol_length(s)) fail("delay_window must lie in [1, symbol length]");
  if (!(s.delay_min >= 0.0) || !(s.delay_min <= s.delay_max) || !(s.delay_max <= static_cast<double>(s.delay_window - 1))) {
    fail("true delay range must satisfy 0 <= delay_min <= delay_max <= delay_window - 1");
  }
  if (s.integer_delays && std::ceil(s.delay_min) > std::floor(s.delay_max)) fail("no integer delay in the delay range");
  if (!(s.delay_tolerance >= 0.0)) fail("delay_tolerance must be non-negative");
  if (s.interferers < 0) fail("interferers must be non-negative");
  if (!std::isfinite(s.reference_snr_db)) fail("reference_snr_db must be finite");
  if (!(s.target_pfa > 0.0 && s.target_pfa <= 1.0)) fail("target_pfa must lie in (0, 1]");
  if (!s.gamma) {
    if (s.calib_trials < 1) fail("calib_trials must be positive");
    if (s.target_pfa < 1.0 && s.target_pfa * static_cast<double>(s.calib_trials) < 10.0) {
      fail("calib_trials too small for target_pfa (need target_pfa * calib_trials >= 10)");
    }
  } else if (!(*s.gamma >= 0.0)) {
    fail("gamma must be non-negative");
  }
  if (s.extension != ExtensionKind::Goldbach && s.split) fail("split applies to Goldbach extension only");
  if (s.extension == ExtensionKind::Prime && !is_prime(static_cast<std::uint64_t>(std::max(s.n, 0L)))) {
    fail("prime extension needs a prime n");
  }
  if (s.family != Family::Bjorck && s.family != Family::ZC) fail("family must be bjorck or zc");
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

long Rng::uniform_int(long lo, long hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t v;
  do v = engine_();
  while (v >= limit);
  return lo + static_cast<long>(v % span);
}

std::complex<double> Rng::complex_normal(double variance) {
  auto normal = [this] {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1;
    do u1 = uniform();
    while (u1 <= 0.0);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * kPi<double> * uniform();
    spare_ = r * std::sin(t);
    return r * std::cos(t);
  };
  const double s = std::sqrt(variance / 2.0);
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(master) ^ stream) + index);
}

Detector::Detector(const Eigen::MatrixXcd& candidates, std::vector<long> column_ids, std::vector<double> hypotheses,
                   double sample_rate, long delay_window)
    : ids_(std::move(column_ids)),
      hypotheses_(std::move(hypotheses)),
      window_(delay_window),
      length_(static_cast<long>(candidates.rows())) {
  if (candidates.cols() == 0) throw ValidationError("detector needs at least one candidate");
  if (static_cast<Eigen::Index>(ids_.size()) != candidates.cols()) throw ValidationError("candidate id count mismatch");
  if (hypotheses_.empty()) throw ValidationError("detector needs at least one hypothesis");
  if (!(sample_rate > 0.0)) throw ValidationError("sample rate must be positive");
  if (window_ <= 0) window_ = length_;
  if (window_ > length_) throw ValidationError("delay window exceeds the symbol length");
  weights_.reserve(ids_.size());
  for (Eigen::Index c = 0; c < candidates.cols(); ++c) {
    weights_.push_back(hypothesis_matrix(candidates.col(c), hypotheses_, sample_rate) / static_cast<double>(length_));
  }
}

TrialOutcome Detector::detect(const Eigen::VectorXcd& rx, const DetectionThreshold& threshold) const {
  // Column d of the delay matrix is span[d + l]: an overlapping strided view. A
  // length-M input is treated as one cyclic period and extended by wrapping.
  const long span = length_ + window_ - 1;
  Eigen::VectorXcd ext;
  if (rx.size() == span) {
    ext = rx;
  } else if (rx.size() == length_) {
    ext.resize(span);
    ext.head(length_) = rx;
    ext.tail(window_ - 1) = rx.head(window_ - 1);
  } else {
    throw ValidationError("received vector length must be M or M + delay_window - 1");
  }
  const Eigen::Map<const Eigen::MatrixXcd, 0, Eigen::OuterStride<>> delays(ext.data(), length_, window_,
                                                                             Eigen::OuterStride<>(1));
  TrialOutcome best;
  best.peak_magnitude = -1.0;
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(hypotheses_.size()), window_);
  for (std::size_t c = 0; c < weights_.size(); ++c) {
    a.noalias() = weights_[c] * delays;
    for (Eigen::Index d = 0; d < window_; ++d) {
      for (Eigen::Index k = 0; k < a.rows(); ++k) {
        const double v = std::abs(a(k, d));
        if (v > best.peak_magnitude) {
          best.peak_magnitude = v;
          best.est_delay_samples = static_cast<long>(d);
          best.est_freq_hz = hypotheses_[static_cast<std::size_t>(k)];
          best.identified_column = ids_[c];
        }
      }
    }
  }
  best.detected = best.peak_magnitude >= threshold.gamma;
  return best;
}

TrialOutcome detect(const Eigen::VectorXcd& rx, const Eigen::MatrixXcd& candidates, const std::vector<double>& hypotheses,
                    double sample_rate, const DetectionThreshold& threshold, long delay_window) {
  std::vector<long> ids(static_cast<std::size_t>(candidates.cols()));
  std::iota(ids.begin(), ids.end(), 0L);
  return Detector(candidates, ids, hypotheses, sample_rate, delay_window).detect(rx, threshold);
}

LinkModel::LinkModel(const SimScenario& s)
    : s_((validate(s), s)),
      set_(build_set(s_)),
      symbols_(unit_power_symbols(set_, cazackit::symbol_length(s_), unit_power_scale(set_, cazackit::symbol_length(s_)))),
      symbol_scale_(unit_power_scale(set_, cazackit::symbol_length(s_))),
      detector_(make_detector(s_, symbols_)) {
  if (s_.interferers > set_.count() - 1) throw ValidationError("more interferers than non-target columns");
  if (s_.assignment == InterfererAssignment::OrthogonalFirst && s_.extension == ExtensionKind::Goldbach) {
    const auto& assign = set_.assignment();
    const auto& tx = assign[static_cast<std::size_t>(s_.tx_column)];
    for (Eigen::Index c : orthogonal_subset_indices(assign, *set_.split())) {
      if (c != s_.tx_column && disjoint_parts(assign[static_cast<std::size_t>(c)], tx)) {
        orthogonal_pool_.push_back(static_cast<long>(c));
      }
    }
  }
}

LinkModel::Powers LinkModel::powers(double sinr_db) const {
  Powers p;
  const double total = std::isinf(sinr_db) && sinr_db > 0 ? 0.0 : 1.0 / db_to_lin(sinr_db);
  if (s_.interferers == 0) {
    p.noise = total;
  } else {
    p.noise = 1.0 / db_to_lin(s_.reference_snr_db);
    p.interference = std::max(0.0, total - p.noise);
  }
  const double denom = p.noise + p.interference;
  p.effective_sinr_db = denom > 0 ? -10.0 * std::log10(denom) : std::numeric_limits<double>::infinity();
  return p;
}

std::vector<long> LinkModel::draw_interferers(Rng& rng) const {
  const auto k = static_cast<std::size_t>(s_.interferers);
  std::vector<long> chosen(orthogonal_pool_.begin(), orthogonal_pool_.begin() + std::min(k, orthogonal_pool_.size()));
  if (chosen.size() == k) return chosen;
  std::vector<long> rest;
  for (long c = 0; c < set_.count(); ++c) {
    if (c != s_.tx_column && std::find(chosen.begin(), chosen.end(), c) == chosen.end()) rest.push_back(c);
  }
  // Partial Fisher-Yates.
  for (std::size_t i = 0; chosen.size() < k; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<long>(i), static_cast<long>(rest.size()) - 1));
    std::swap(rest[i], rest[j]);
    chosen.push_back(rest[i]);
  }
  return chosen;
}

double LinkModel::draw_delay(Rng& rng) const {
  if (s_.integer_delays) {
    return static_cast<double>(rng.uniform_int(std::lround(std::ceil(s_.delay_min)), std::lround(std::floor(s_.delay_max))));
  }
  return s_.delay_min + (s_.delay_max - s_.delay_min) * rng.uniform();
}

Eigen::VectorXcd LinkModel::synthesize_rx(long tx_column, double true_delay, double true_doppler_hz, double sinr_db,
                                          Rng& rng, bool with_signal) const {
  const long m = symbol_length();
  if (tx_column < 0 || tx_column >= set_.count()) throw ValidationError("tx_column outside the set");
  if (!std::isfinite(true_delay)) throw ValidationError("true delay must be finite");
  const Powers pw = powers(sinr_db);
  const Eigen::Index n = set_.length();

  // Sum of delayed sources on the occupied bins; a delay of t samples is the
  // per-bin phase ramp exp(-j 2 pi b t / M), exact for the cyclic symbol.
  Eigen::VectorXcd bins = Eigen::VectorXcd::Zero(n);
  auto add = [&](long column, std::complex<double> gain, double delay) {
    const double step = -2.0 * kPi<double> * delay / static_cast<double>(m);
    for (Eigen::Index b = 0; b < n; ++b) {
      const double ph = std::fmod(step * static_cast<double>(b), 2.0 * kPi<double>);
      bins[b] += gain * (set_.matrix()(b, column) * std::polar(1.0, ph));
    }
  };
  if (with_signal) add(tx_column, 1.0, true_delay);
  if (s_.interferers > 0 && pw.interference > 0.0) {
    const double amp = std::sqrt(pw.interference / static_cast<double>(s_.interferers));
    for (long c : draw_interferers(rng)) {
      const long offset = s_.offsets == InterfererOffsets::Aligned ? 0 : rng.uniform_int(0, m - 1);
      add(c, std::polar(amp, 2.0 * kPi<double> * rng.uniform()), true_delay + static_cast<double>(offset));
    }
  }
  const Eigen::VectorXcd period = time_domain(bins, m) * symbol_scale_;
  const long span = span_length();
  Eigen::VectorXcd rx(span);
  rx.head(m) = period;
  rx.tail(span - m) = period.head(span - m);
  rx = apply_doppler(rx, true_doppler_hz, s_.sample_rate_hz);
  if (pw.noise > 0.0) {
    for (long i = 0; i < span; ++i) rx[i] += rng.complex_normal(pw.noise);
  }
  return rx;
}

Eigen::VectorXcd synthesize_rx(const LinkModel& link, long tx_column, double true_delay, double true_doppler_hz,
                               double sinr_db, Rng& rng) {
  return link.synthesize_rx(tx_column, true_delay, true_doppler_hz, sinr_db, rng);
}

namespace {

double no_signal_peak(const LinkModel& link, double sinr_db, std::uint64_t seed) {
  const SimScenario& s = link.scenario();
  Rng rng(seed);
  const double d = link.draw_delay(rng);
  const double f = s.doppler_min_hz + (s.doppler_max_hz - s.doppler_min_hz) * rng.uniform();
  const Eigen::VectorXcd rx = link.synthesize_rx(s.tx_column, d, f, sinr_db, rng, false);
  return link.detector().detect(rx, {}).peak_magnitude;
}

}  // namespace

DetectionThreshold calibrate_threshold(const LinkModel& link, double target_pfa, double calib_sinr_db, long trials,
                                       std::uint64_t stream) {
  if (!(target_pfa > 0.0 && target_pfa <= 1.0)) throw ValidationError("target_pfa must lie in (0, 1]");
  if (trials < 1) throw ValidationError("calibration needs at least one trial");
  DetectionThreshold t{0.0, target_pfa, calib_sinr_db, trials};
  if (target_pfa >= 1.0) return t;
  const auto exceed = static_cast<long>(std::floor(target_pfa * static_cast<double>(trials)));
  if (exceed < 10) throw ValidationError("calibration trials too few for target_pfa (need target_pfa * trials >= 10)");

  const SimScenario& s = link.scenario();
  std::vector<double> peaks(static_cast<std::size_t>(trials));
  parallel_for(trials, resolve_workers(s.workers), [&](long i) {
    peaks[static_cast<std::size_t>(i)] =
        no_signal_peak(link, calib_sinr_db, substream_seed(s.seed, stream, static_cast<std::uint64_t>(i)));
  });
  // exceed-th largest peak, so that `exceed` calibration samples reach gamma
  const auto k = static_cast<std::size_t>(trials - exceed);
  std::nth_element(peaks.begin(), peaks.begin() + static_cast<std::ptrdiff_t>(k), peaks.end());
  t.gamma = peaks[k];
  return t;
}

DetectionThreshold calibrate_threshold(const SimScenario& s, double target_pfa, double calib_sinr_db, long trials) {
  return calibrate_threshold(LinkModel(s), target_pfa, calib_sinr_db, trials);
}

long count_false_alarms(const LinkModel& link, const DetectionThreshold& threshold, double sinr_db, long trials,
                        std::uint64_t stream) {
  const SimScenario& s = link.scenario();
  std::vector<char> hit(static_cast<std::size_t>(std::max(0L, trials)));
  parallel_for(trials, resolve_workers(s.workers), [&](long i) {
    hit[static_cast<std::size_t>(i)] =
        no_signal_peak(link, sinr_db, substream_seed(s.seed, stream, static_cast<std::uint64_t>(i))) >= threshold.gamma;
  });
  return std::count(hit.begin(), hit.end(), 1);
}

bool is_correct(const TrialOutcome& o, long tx_column, double tolerance) {
  return o.detected && o.identified_column == tx_column &&
         std::abs(static_cast<double>(o.est_delay_samples) - o.true_delay_samples) <= tolerance;
}

CampaignResult run_campaign(const LinkModel& link, const DetectionThreshold& threshold, bool keep_trials) {
  const SimScenario& s = link.scenario();
  CampaignResult r;
  r.scenario = s;
  r.threshold = threshold;
  const unsigned workers = resolve_workers(s.workers);
  const double ts = 1.0 / s.sample_rate_hz;

  for (std::size_t p = 0; p < s.sinr_db.size(); ++p) {
    const double sinr = s.sinr_db[p];
    std::vector<TrialOutcome> out(static_cast<std::size_t>(s.trials));
    parallel_for(s.trials, workers, [&](long i) {
      Rng rng(substream_seed(s.seed, 100 + p, static_cast<std::uint64_t>(i)));
      const double d = link.draw_delay(rng);
      const double f = s.doppler_min_hz + (s.doppler_max_hz - s.doppler_min_hz) * rng.uniform();
      TrialOutcome o = link.detector().detect(link.synthesize_rx(s.tx_column, d, f, sinr, rng), threshold);
      o.true_delay_samples = d;
      o.true_freq_hz = f;
      out[static_cast<std::size_t>(i)] = o;
    });

    CampaignPoint pt;
    pt.sinr_db = sinr;
    pt.effective_sinr_db = link.powers(sinr).effective_sinr_db;
    pt.trials = s.trials;
    double se_t = 0.0, se_f = 0.0;
    for (const auto& o : out) {
      if (!o.detected) continue;
      ++pt.declared;
      if (is_correct(o, s.tx_column, s.delay_tolerance)) ++pt.correct;
      const double dt = (static_cast<double>(o.est_delay_samples) - o.true_delay_samples) * ts;
      const double df = o.est_freq_hz - o.true_freq_hz;
      se_t += dt * dt;
      se_f += df * df;
    }
    pt.pd = static_cast<double>(pt.correct) / static_cast<double>(pt.trials);
    if (pt.declared > 0) {
      pt.time_rmse_s = std::sqrt(se_t / static_cast<double>(pt.declared));
      pt.freq_rmse_hz = std::sqrt(se_f / static_cast<double>(pt.declared));
    } else {
      pt.time_rmse_s = std::numeric_limits<double>::quiet_NaN();
      pt.freq_rmse_hz = std::numeric_limits<double>::quiet_NaN();
    }
    r.points.push_back(pt);
    if (keep_trials) r.outcomes.push_back(std::move(out));
  }
  return r;
}

CampaignResult run_campaign(const SimScenario& s, bool keep_trials) {
  const LinkModel link(s);
  const DetectionThreshold t = s.gamma ? DetectionThreshold{*s.gamma, s.target_pfa, s.calib_sinr_db, 0}
                                       : calibrate_threshold(link, s.target_pfa, s.calib_sinr_db, s.calib_trials);
  return run_campaign(link, t, keep_trials);
}

TrialOutcome mitigate_coarse(const Eigen::VectorXcd& rx, const Eigen::MatrixXcd& candidates, double coarse_doppler_hz,
                             double scs_hz, double sample_rate, double step_hz, const DetectionThreshold& threshold,
                             long delay_window) {
  if (!(scs_hz > 0.0) || !(step_hz > 0.0)) throw ValidationError("scs and step must be positive");
  const Eigen::VectorXcd comp = apply_doppler(rx, -coarse_doppler_hz, sample_rate);
  const std::vector<double> residual = hypothesis_grid(-scs_hz / 2.0, scs_hz / 2.0, step_hz);
  TrialOutcome o = detect(comp, candidates, residual, sample_rate, threshold, delay_window);
  o.est_freq_hz += coarse_doppler_hz;
  return o;
}

long subset_stride(double max_doppler_hz, double scs_hz) {
  if (!(scs_hz > 0.0)) throw ValidationError("scs must be positive");
  if (!(max_doppler_hz >= 0.0) || !std::isfinite(max_doppler_hz)) throw ValidationError("max Doppler must be >= 0");
  if (max_doppler_hz == 0.0) return 1;
  return 2 * static_cast<long>(std::ceil(max_doppler_hz / scs_hz)) + 1;
}

SequenceSet mitigate_subset(const SequenceSet& set, double max_doppler_hz, double scs_hz) {
  if (set.kind() != SetKind::CyclicShift) throw ValidationError("mitigate_subset needs a cyclic-shift set");
  const long stride = subset_stride(max_doppler_hz, scs_hz);
  if (stride == 1) return set;
  if (stride >= set.count()) {
    throw ValidationError("shift stride " + std::to_string(stride) + " leaves fewer than two of " +
                          std::to_string(set.count()) + " columns");
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index c = 0; c < set.count(); ++c) {
    const auto& parts = set.assignment()[static_cast<std::size_t>(c)].parts;
    if (!parts.empty() && parts[0] % stride == 0) keep.push_back(c);
  }
  return set.select(keep);
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CAZACKIT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace cazackit
