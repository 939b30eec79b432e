#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cazackit/corr.hpp"
#include "cazackit/extend.hpp"

namespace cazackit {

inline constexpr std::uint64_t kDefaultSeed = 20240601ULL;

/// Prime: length-n circulant set, n itself prime (no extension).
enum class ExtensionKind { Repetition, Goldbach, Prime };
enum class InterfererAssignment { OrthogonalFirst, Random };
enum class InterfererOffsets { Aligned, Uniform };
enum class CandidateMode { Target, All };

std::string_view to_string(ExtensionKind k);
std::string_view to_string(InterfererAssignment a);
std::string_view to_string(InterfererOffsets o);
std::string_view to_string(CandidateMode c);
ExtensionKind parse_extension(std::string_view s);
InterfererAssignment parse_assignment(std::string_view s);
InterfererOffsets parse_offsets(std::string_view s);
CandidateMode parse_candidates(std::string_view s);

struct SimScenario {
  std::string name = "scenario";
  long n = 120;
  Family family = Family::Bjorck;
  ExtensionKind extension = ExtensionKind::Goldbach;
  std::optional<GoldbachSplit> split;  // Goldbach only; MaxQ1 split of n when unset

  double scs_hz = 15e3;
  double sample_rate_hz = 20e6;
  double carrier_hz = 2e9;
  double doppler_min_hz = -1e3;
  double doppler_max_hz = 1e3;
  std::vector<double> hypotheses;
  std::vector<double> sinr_db;
  long trials = 2000;

  long interferers = 0;
  InterfererAssignment assignment = InterfererAssignment::OrthogonalFirst;
  InterfererOffsets offsets = InterfererOffsets::Uniform;
  /// Fixes the noise floor when interferers are present.
  double reference_snr_db = 10.0;

  long tx_column = 0;
  CandidateMode candidates = CandidateMode::Target;
  long delay_window = 48;  // delays searched: [0, delay_window)
  double delay_min = 8.0;  // true delay drawn uniformly from [delay_min, delay_max]
  double delay_max = 39.0;
  bool integer_delays = true;  // false: continuous U[delay_min, delay_max]
  double delay_tolerance = 6.0;

  double target_pfa = 1e-3;
  double calib_sinr_db = -5.0;
  long calib_trials = 20000;
  std::optional<double> gamma;  // skip calibration when set

  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 0;  // 0: CAZACKIT_THREADS, then hardware concurrency
};

void validate(const SimScenario& s);

/// Samples per OFDM symbol, round(fs / scs).
long symbol_length(const SimScenario& s);

struct TrialOutcome {
  bool detected = false;  // peak >= gamma
  long est_delay_samples = 0;
  double est_freq_hz = 0.0;
  double true_delay_samples = 0.0;
  double true_freq_hz = 0.0;
  double peak_magnitude = 0.0;
  long identified_column = -1;
};

struct DetectionThreshold {
  double gamma = 0.0;
  double target_pfa = 1.0;
  double calib_sinr_db = 0.0;
  long trials = 0;
};

/// mt19937_64 with a portable Box-Muller normal; one instance per trial.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();  // [0, 1)
  long uniform_int(long lo, long hi);  // inclusive
  std::complex<double> complex_normal(double variance);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Independent seed for (stream, index) derived from the master seed.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

/// Max over candidates, delays [0, window) and hypotheses of the ambiguity
/// magnitude. Candidates are unit-power time-domain columns of length M; rx
/// is either one cyclic period (M) or an observed span of M + window - 1.
class Detector {
 public:
  Detector(const Eigen::MatrixXcd& candidates, std::vector<long> column_ids, std::vector<double> hypotheses,
           double sample_rate, long delay_window);

  TrialOutcome detect(const Eigen::VectorXcd& rx, const DetectionThreshold& threshold) const;
  const std::vector<double>& hypotheses() const { return hypotheses_; }
  long delay_window() const { return window_; }

 private:
  std::vector<Eigen::MatrixXcd> weights_;  // per candidate: K x M
  std::vector<long> ids_;
  std::vector<double> hypotheses_;
  long window_;
  long length_;
};

/// Detect over an explicit candidate set of time-domain sequences.
TrialOutcome detect(const Eigen::VectorXcd& rx, const Eigen::MatrixXcd& candidates, const std::vector<double>& hypotheses,
                    double sample_rate, const DetectionThreshold& threshold, long delay_window = 0);

/// Everything derived from a scenario once: the frequency-domain set, its
/// unit-power OFDM symbols, interferer pool ordering and the detector.
class LinkModel {
 public:
  explicit LinkModel(const SimScenario& s);

  const SimScenario& scenario() const { return s_; }
  const SequenceSet& set() const { return set_; }
  const Eigen::MatrixXcd& symbols() const { return symbols_; }
  const Detector& detector() const { return detector_; }
  long symbol_length() const { return static_cast<long>(symbols_.rows()); }
  /// Observed span: one period plus delay_window - 1 cyclic-prefix samples.
  long span_length() const { return symbol_length() + detector_.delay_window() - 1; }

  /// Interference power per unit signal power for the requested SINR,
  /// clamped at zero; noise variance alongside.
  struct Powers {
    double noise = 0.0;
    double interference = 0.0;
    double effective_sinr_db = 0.0;
  };
  Powers powers(double sinr_db) const;

  std::vector<long> draw_interferers(Rng& rng) const;

  /// Cyclic, band-limited delay (fractional delays allowed) plus interferers,
  /// observed over span_length() samples with a continuous Doppler ramp and
  /// noise.
  Eigen::VectorXcd synthesize_rx(long tx_column, double true_delay, double true_doppler_hz, double sinr_db, Rng& rng,
                                 bool with_signal = true) const;
  double draw_delay(Rng& rng) const;

 private:
  SimScenario s_;
  SequenceSet set_;
  Eigen::MatrixXcd symbols_;
  double symbol_scale_ = 1.0;  // IDFT output to unit power
  std::vector<long> orthogonal_pool_;
  Detector detector_;
};

Eigen::VectorXcd synthesize_rx(const LinkModel& link, long tx_column, double true_delay, double true_doppler_hz,
                               double sinr_db, Rng& rng);

/// gamma = empirical (1 - target_pfa) quantile of the no-signal peak.
DetectionThreshold calibrate_threshold(const LinkModel& link, double target_pfa, double calib_sinr_db, long trials,
                                       std::uint64_t stream = 1);
DetectionThreshold calibrate_threshold(const SimScenario& s, double target_pfa, double calib_sinr_db, long trials);

/// Number of fresh no-signal trials whose peak reaches gamma.
long count_false_alarms(const LinkModel& link, const DetectionThreshold& threshold, double sinr_db, long trials,
                        std::uint64_t stream = 2);

struct CampaignPoint {
  double sinr_db = 0.0;
  double effective_sinr_db = 0.0;
  double pd = 0.0;
  double time_rmse_s = 0.0;
  double freq_rmse_hz = 0.0;
  long trials = 0;
  long declared = 0;
  long correct = 0;
};

struct CampaignResult {
  SimScenario scenario;
  DetectionThreshold threshold;
  std::vector<CampaignPoint> points;
  std::vector<std::vector<TrialOutcome>> outcomes;  // filled when requested
};

/// True when the outcome names the transmitted column within the delay tolerance.
bool is_correct(const TrialOutcome& o, long tx_column, double tolerance);

CampaignResult run_campaign(const SimScenario& s, bool keep_trials = false);
CampaignResult run_campaign(const LinkModel& link, const DetectionThreshold& threshold, bool keep_trials = false);

/// Remove a coarse Doppler estimate, then search residual hypotheses only.
/// est_freq_hz of the result is coarse + residual.
TrialOutcome mitigate_coarse(const Eigen::VectorXcd& rx, const Eigen::MatrixXcd& candidates, double coarse_doppler_hz,
                             double scs_hz, double sample_rate, double step_hz, const DetectionThreshold& threshold,
                             long delay_window = 0);

/// Shift stride 2 ceil(max_doppler / scs) + 1 (1 when max_doppler is 0).
long subset_stride(double max_doppler_hz, double scs_hz);

/// Keep cyclic-shift columns whose shift index is a multiple of the stride.
SequenceSet mitigate_subset(const SequenceSet& set, double max_doppler_hz, double scs_hz);

/// Worker count: explicit request, else CAZACKIT_THREADS, else hardware.
unsigned resolve_workers(unsigned requested);

}  // namespace cazackit
