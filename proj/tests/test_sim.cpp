#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "cazackit/sim.hpp"
#include "oracles.hpp"

using namespace cazackit;

namespace {

SimScenario small_scenario() {
  SimScenario s;
  s.sample_rate_hz = 3.84e6;  // M = 256
  s.hypotheses = hypothesis_grid(-2000.0, 2000.0, 500.0);
  s.sinr_db = {0.0};
  s.trials = 50;
  s.calib_trials = 2000;
  s.target_pfa = 0.01;
  s.delay_window = 32;
  s.delay_min = 4;
  s.delay_max = 20;
  return s;
}

// x(t) for a band-limited periodic symbol, evaluated directly.
Eigen::VectorXcd delayed_oracle(const Eigen::VectorXcd& freq, long m, double delay, double scale) {
  Eigen::VectorXcd out(m);
  for (long n = 0; n < m; ++n) {
    std::complex<double> acc = 0;
    for (Eigen::Index b = 0; b < freq.size(); ++b) {
      acc += freq[b] * std::polar(1.0, 2.0 * M_PI * static_cast<double>(b) * (static_cast<double>(n) - delay) /
                                           static_cast<double>(m));
    }
    out[n] = acc * scale / static_cast<double>(m);
  }
  return out;
}

}  // namespace

TEST_CASE("rng is reproducible and well scaled") {
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

  Rng r(11);
  double re2 = 0, im2 = 0, mean_re = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const auto z = r.complex_normal(2.0);
    re2 += z.real() * z.real();
    im2 += z.imag() * z.imag();
    mean_re += z.real();
  }
  CHECK(re2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(im2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(mean_re / n) < 0.01);

  std::set<long> seen;
  for (int i = 0; i < 2000; ++i) {
    const long v = r.uniform_int(3, 7);
    CHECK(v >= 3);
    CHECK(v <= 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 5);
}

TEST_CASE("substream seeds are distinct") {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t stream = 0; stream < 4; ++stream) {
    for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(substream_seed(kDefaultSeed, stream, i));
  }
  CHECK(seeds.size() == 4000);
  CHECK(substream_seed(1, 0, 0) != substream_seed(2, 0, 0));
}

TEST_CASE("clean synthesis reproduces the reference exactly") {
  SimScenario s = small_scenario();
  const LinkModel link(s);
  Rng rng(1);
  const Eigen::VectorXcd rx = link.synthesize_rx(3, 0.0, 0.0, std::numeric_limits<double>::infinity(), rng);
  REQUIRE(rx.size() == link.span_length());
  CHECK(rx.head(256) == link.symbols().col(3));
  CHECK(rx.tail(31) == link.symbols().col(3).head(31));
  CHECK(link.symbols().col(0).squaredNorm() / 256.0 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integer and fractional delays match the band-limited oracle") {
  SimScenario s = small_scenario();
  const LinkModel link(s);
  const double inf = std::numeric_limits<double>::infinity();
  const double scale = 256.0 / std::sqrt(120.0);
  for (double d : {5.0, 17.0, 6.25, 11.5}) {
    Rng rng(2);
    const Eigen::VectorXcd rx = link.synthesize_rx(0, d, 0.0, inf, rng).head(256);
    const Eigen::VectorXcd ref = delayed_oracle(link.set().matrix().col(0), 256, d, scale);
    CHECK((rx - ref).cwiseAbs().maxCoeff() < 1e-12);
    if (d == std::floor(d)) {
      CHECK((rx - cyclic_shift(link.symbols().col(0), static_cast<long>(d))).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("interference power follows the SINR definition with clamping") {
  SimScenario s = small_scenario();
  s.interferers = 3;
  s.reference_snr_db = 10.0;
  const LinkModel link(s);
  const auto low = link.powers(-10.0);
  CHECK(low.noise == doctest::Approx(0.1));
  CHECK(low.interference == doctest::Approx(10.0 - 0.1));
  CHECK(low.effective_sinr_db == doctest::Approx(-10.0));
  const auto high = link.powers(20.0);
  CHECK(high.interference == 0.0);
  CHECK(high.effective_sinr_db == doctest::Approx(10.0));

  s.interferers = 0;
  const auto awgn = LinkModel(s).powers(3.0);
  CHECK(awgn.noise == doctest::Approx(std::pow(10.0, -0.3)));
  CHECK(awgn.interference == 0.0);
}

TEST_CASE("interferers are drawn orthogonal-first without the target") {
  SimScenario s = small_scenario();
  s.split = make_split({101, 19});
  s.interferers = 25;
  const LinkModel link(s);
  Rng rng(5);
  const auto chosen = link.draw_interferers(rng);
  REQUIRE(chosen.size() == 25);
  CHECK(std::set<long>(chosen.begin(), chosen.end()).size() == 25);
  CHECK(std::find(chosen.begin(), chosen.end(), 0L) == chosen.end());
  const auto& assign = link.set().assignment();
  for (std::size_t i = 0; i < 18; ++i) {
    const auto& parts = assign[static_cast<std::size_t>(chosen[i])].parts;
    CHECK(parts[0] != 0);
    CHECK(parts[1] != 0);
  }
  for (std::size_t i = 0; i < 18; ++i) CHECK(chosen[i] == static_cast<long>(5 * (i + 1)));
}

TEST_CASE("detector agrees with the full ambiguity surface") {
  SimScenario s = small_scenario();
  const LinkModel link(s);
  Rng rng(9);
  const Eigen::VectorXcd rx = link.synthesize_rx(0, 9.0, 700.0, 0.0, rng).head(256);
  const TrialOutcome o = link.detector().detect(rx, {});
  const AmbiguitySurface full = ambiguity(link.symbols().col(0), rx, s.hypotheses, s.sample_rate_hz);
  double best = -1;
  long bd = 0;
  for (Eigen::Index d = 0; d < s.delay_window; ++d) {
    for (Eigen::Index k = 0; k < full.magnitudes.cols(); ++k) {
      if (full.magnitudes(d, k) > best) {
        best = full.magnitudes(d, k);
        bd = static_cast<long>(d);
      }
    }
  }
  CHECK(o.peak_magnitude == doctest::Approx(best).epsilon(1e-12));
  CHECK(o.est_delay_samples == bd);
}

TEST_CASE("noiseless matched detection is exact on grid") {
  SimScenario s = small_scenario();
  const LinkModel link(s);
  const double inf = std::numeric_limits<double>::infinity();
  for (double f : {-1500.0, 0.0, 500.0, 620.0}) {
    Rng rng(3);
    const TrialOutcome o = link.detector().detect(link.synthesize_rx(0, 12.0, f, inf, rng), {0.5});
    CHECK(o.detected);
    CHECK(o.est_delay_samples == 12);
    CHECK(o.identified_column == 0);
    CHECK(std::abs(o.est_freq_hz - f) <= 250.0);
  }
}

TEST_CASE("explicit candidate detection names the transmitted column") {
  const SequenceSet set = circulant_set(bjorck<double>(PrimeQ(31)));
  Eigen::MatrixXcd td(64, 4);
  for (long c = 0; c < 4; ++c) td.col(c) = time_domain(set.matrix().col(c * 5), 64);
  const Eigen::VectorXcd rx = cyclic_shift(Eigen::VectorXcd(td.col(2)), 3);
  const TrialOutcome o = detect(rx, td, {0.0}, 1e6, {0.0});
  CHECK(o.identified_column == 2);
  CHECK(o.est_delay_samples == 3);
}

TEST_CASE("threshold calibration") {
  SimScenario s = small_scenario();
  const LinkModel link(s);
  CHECK(calibrate_threshold(link, 1.0, -5.0, 10).gamma == 0.0);
  CHECK_THROWS_AS(calibrate_threshold(link, 1e-3, -5.0, 5000), ValidationError);
  const auto a = calibrate_threshold(link, 0.01, -5.0, 2000);
  const auto b = calibrate_threshold(link, 0.01, -5.0, 2000);
  CHECK(a.gamma == b.gamma);
  CHECK(a.gamma > 0.0);
  // 20 of 2000 calibration samples reach gamma by construction.
  const long fa = count_false_alarms(link, a, -5.0, 2000, 1);
  CHECK(fa == 20);
}

TEST_CASE("campaigns are deterministic across worker counts") {
  SimScenario s = small_scenario();
  s.interferers = 3;
  s.sinr_db = {-15.0, -5.0};
  s.trials = 120;
  s.calib_trials = 1000;
  s.workers = 1;
  const CampaignResult one = run_campaign(s, true);
  s.workers = 4;
  const CampaignResult four = run_campaign(s, true);
  CHECK(one.threshold.gamma == four.threshold.gamma);
  REQUIRE(one.points.size() == four.points.size());
  for (std::size_t p = 0; p < one.points.size(); ++p) {
    CHECK(one.points[p].pd == four.points[p].pd);
    CHECK(one.points[p].time_rmse_s == four.points[p].time_rmse_s);
    CHECK(one.points[p].freq_rmse_hz == four.points[p].freq_rmse_hz);
    for (std::size_t t = 0; t < one.outcomes[p].size(); ++t) {
      CHECK(one.outcomes[p][t].peak_magnitude == four.outcomes[p][t].peak_magnitude);
      CHECK(one.outcomes[p][t].true_delay_samples == four.outcomes[p][t].true_delay_samples);
    }
  }
}

TEST_CASE("noiseless on-grid campaign detects every trial exactly") {
  SimScenario s = small_scenario();
  s.sinr_db = {std::numeric_limits<double>::infinity()};
  s.integer_delays = true;
  s.doppler_min_hz = 500.0;
  s.doppler_max_hz = 500.0;
  s.gamma = 0.5;
  s.trials = 40;
  const CampaignResult r = run_campaign(s);
  CHECK(r.points[0].pd == 1.0);
  CHECK(r.points[0].time_rmse_s == 0.0);
  CHECK(r.points[0].freq_rmse_hz == 0.0);
}

TEST_CASE("continuous delays hit the sampling and grid quantization floors") {
  SimScenario s = small_scenario();
  s.sinr_db = {std::numeric_limits<double>::infinity()};
  s.integer_delays = false;
  s.gamma = 0.1;
  s.trials = 1500;
  const CampaignResult r = run_campaign(s);
  const double ts = 1.0 / s.sample_rate_hz;
  CHECK(r.points[0].pd == 1.0);
  CHECK(r.points[0].time_rmse_s > 0.7 * ts / std::sqrt(12.0));
  CHECK(r.points[0].time_rmse_s < 1.4 * ts / std::sqrt(12.0));
  CHECK(r.points[0].freq_rmse_hz > 0.7 * 500.0 / std::sqrt(12.0));
  CHECK(r.points[0].freq_rmse_hz < 1.4 * 500.0 / std::sqrt(12.0));
}

TEST_CASE("detection probability grows with SINR") {
  SimScenario s = small_scenario();
  s.sinr_db = {-25.0, -15.0, -5.0};
  s.trials = 300;
  const CampaignResult r = run_campaign(s);
  CHECK(r.points[0].pd <= r.points[1].pd);
  CHECK(r.points[1].pd <= r.points[2].pd);
  CHECK(r.points[2].pd > 0.95);
}

TEST_CASE("subset mitigation stride") {
  CHECK(subset_stride(45e3, 15e3) == 7);
  CHECK(subset_stride(0.0, 15e3) == 1);
  CHECK(subset_stride(20e3, 15e3) == 5);
  const SequenceSet set = circulant_set(bjorck<double>(PrimeQ(67)));
  CHECK(mitigate_subset(set, 0.0, 15e3).matrix() == set.matrix());
  const SequenceSet sub = mitigate_subset(set, 45e3, 15e3);
  REQUIRE(sub.count() == 10);
  for (Eigen::Index c = 0; c < sub.count(); ++c) CHECK(sub.assignment()[static_cast<std::size_t>(c)].parts[0] == 7 * c);
  const SequenceSet tiny = circulant_set(bjorck<double>(PrimeQ(5)));
  CHECK_THROWS_AS(mitigate_subset(tiny, 45e3, 15e3), ValidationError);
  CHECK_THROWS_AS(mitigate_subset(root_set(PrimeQ(7)), 45e3, 15e3), ValidationError);
}

TEST_CASE("coarse compensation with the true Doppler lands on zero residual") {
  const SequenceSet set = circulant_set(bjorck<double>(PrimeQ(113)));
  const double fs = 128 * 15e3;
  Eigen::MatrixXcd td(128, 3);
  for (long c = 0; c < 3; ++c) td.col(c) = time_domain(set.matrix().col(c), 128);
  const Eigen::VectorXcd rx = apply_doppler(td.col(1), -21e3, fs);
  const TrialOutcome o = mitigate_coarse(rx, td, -21e3, 15e3, fs, 500.0, {0.0});
  CHECK(o.identified_column == 1);
  CHECK(o.est_freq_hz == doctest::Approx(-21e3));
  CHECK(o.est_delay_samples == 0);
}

TEST_CASE("scenario validation") {
  SimScenario s = small_scenario();
  CHECK_NOTHROW(validate(s));
  auto bad = [&](auto mutate) {
    SimScenario t = small_scenario();
    mutate(t);
    CHECK_THROWS_AS(validate(t), ValidationError);
  };
  bad([](SimScenario& t) { t.hypotheses.clear(); });
  bad([](SimScenario& t) { t.sinr_db.clear(); });
  bad([](SimScenario& t) { t.trials = 0; });
  bad([](SimScenario& t) { t.delay_max = 40; });
  bad([](SimScenario& t) { t.delay_min = 30; });
  bad([](SimScenario& t) { t.sample_rate_hz = 1e6; });
  bad([](SimScenario& t) { t.calib_trials = 100; });
  bad([](SimScenario& t) { t.target_pfa = 0.0; });
  bad([](SimScenario& t) { t.doppler_min_hz = 5e3; });
  bad([](SimScenario& t) { t.family = Family::Raw; });
  bad([](SimScenario& t) {
    t.extension = ExtensionKind::Repetition;
    t.split = make_split({113, 7});
  });
  bad([](SimScenario& t) { t.extension = ExtensionKind::Prime; });
  SimScenario t = small_scenario();
  t.tx_column = 500;
  CHECK_THROWS_AS(LinkModel{t}, ValidationError);
  t = small_scenario();
  t.interferers = 113;
  CHECK_THROWS_AS(LinkModel{t}, ValidationError);
}

TEST_CASE("prime baseline uses the plain circulant set") {
  SimScenario s = small_scenario();
  s.extension = ExtensionKind::Prime;
  s.n = 113;
  const LinkModel link(s);
  CHECK(link.set().count() == 113);
  CHECK(link.set().length() == 113);
  const Eigen::VectorXcd base = bjorck(PrimeQ(113)).samples();
  CHECK((link.set().matrix().col(4) - cyclic_shift(base, 4)).norm() < 1e-15);
}

TEST_CASE("enum names round-trip") {
  for (auto k : {ExtensionKind::Repetition, ExtensionKind::Goldbach, ExtensionKind::Prime}) CHECK(parse_extension(to_string(k)) == k);
  for (auto a : {InterfererAssignment::OrthogonalFirst, InterfererAssignment::Random}) {
    CHECK(parse_assignment(to_string(a)) == a);
  }
  for (auto o : {InterfererOffsets::Aligned, InterfererOffsets::Uniform}) CHECK(parse_offsets(to_string(o)) == o);
  for (auto c : {CandidateMode::Target, CandidateMode::All}) CHECK(parse_candidates(to_string(c)) == c);
  CHECK_THROWS_AS(parse_offsets("sideways"), ValidationError);
}

TEST_CASE("worker resolution") {
  CHECK(resolve_workers(3) == 3);
  CHECK(resolve_workers(0) >= 1);
}
