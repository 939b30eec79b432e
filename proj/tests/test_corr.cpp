#include <doctest.h>

#include <cmath>

#include "cazackit/corr.hpp"
#include "cazackit/extend.hpp"
#include "oracles.hpp"

using namespace cazackit;

namespace {

SequenceSet goldbach_bjorck(std::uint64_t q1, std::uint64_t q2) {
  ExtensionPlan plan;
  plan.split = make_split({q1, q2});
  plan.n = plan.split.n;
  plan.count = static_cast<long>(q1);
  return extend(plan, default_part_sets(plan.split, plan.kind, Family::Bjorck));
}

std::complex<double> aperiodic_oracle(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, long tau) {
  const long n = static_cast<long>(a.size());
  std::complex<double> acc = 0;
  for (long i = 0; i < n; ++i) {
    for (long k = 0; k < n; ++k) {
      if (i - k == tau) acc += a[i] * std::conj(b[k]);
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("inner product") {
  const auto b = bjorck(PrimeQ(113)).samples();
  CHECK(std::abs(inner_product(b, b) - 113.0) < 1e-10);
  const auto x = oracle::random_vector(40, 1), y = oracle::random_vector(40, 2);
  CHECK(std::abs(inner_product(x, y) - oracle::dot(x, y)) < 1e-12);
  CHECK_THROWS_AS(inner_product(x, Eigen::VectorXcd(x.head(3))), ValidationError);

  const auto set = goldbach_bjorck(113, 7);
  CHECK(std::abs(std::abs(inner_product(set.matrix().col(0), set.matrix().col(7))) - 7.0) < 1e-10);
  const auto z1 = zc(1, PrimeQ(7)), z2 = zc(2, PrimeQ(7));
  CHECK(std::abs(std::abs(inner_product(z1, z2)) - std::sqrt(7.0)) < 1e-10);
}

TEST_CASE("periodic correlation against the direct sum") {
  const auto x = oracle::random_vector(37, 3), y = oracle::random_vector(37, 4);
  const auto p = periodic_xcorr(x, y);
  REQUIRE(p.values.size() == 37);
  for (long t = 0; t < 37; ++t) CHECK(std::abs(p.at(t) - oracle::periodic_corr(x, y, t) / 37.0) < 1e-12);
  CHECK(p.rms == doctest::Approx(std::sqrt(p.values.squaredNorm() / 37)).epsilon(1e-14));

  const auto b = bjorck(PrimeQ(7));
  const auto auto_p = periodic_xcorr(b, b);
  CHECK(std::abs(std::abs(auto_p.at(0)) - 1.0) < 1e-12);
  for (long t = 1; t < 7; ++t) CHECK(std::abs(auto_p.at(t)) < 1e-10);
  CHECK(std::abs(periodic_xcorr(b, cyclic_shift(b, 3)).at(0)) < 1e-10);
}

TEST_CASE("fft fast path matches brute force") {
  for (Eigen::Index n : {1, 2, 7, 64, 113, 120, 127}) {
    const auto x = oracle::random_vector(n, 10 + n), y = oracle::random_vector(n, 20 + n);
    const auto slow = periodic_xcorr(x, y);
    const auto fast = periodic_xcorr_fft(x, y);
    CHECK((slow.values - fast.values).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(slow.rms - fast.rms) < 1e-10);
  }
}

TEST_CASE("aperiodic correlation") {
  const auto x = oracle::random_vector(19, 5), y = oracle::random_vector(19, 6);
  const auto p = aperiodic_xcorr(x, y);
  REQUIRE(p.values.size() == 37);
  CHECK(p.lag_min == -18);
  for (long t = -18; t <= 18; ++t) CHECK(std::abs(p.at(t) - aperiodic_oracle(x, y, t) / 19.0) < 1e-12);

  const auto q = aperiodic_xcorr(y, x);
  for (long t = -18; t <= 18; ++t) {
    if (t != 0) CHECK(p.at(-t) == std::conj(q.at(t)));
  }
  CHECK(std::abs(p.at(0) - std::conj(q.at(0))) < 1e-15);

  const auto b = bjorck(PrimeQ(13)).samples();
  CHECK(std::abs(std::abs(aperiodic_xcorr(b, b).at(12)) * 13 - 1.0) < 1e-12);

  const auto set = goldbach_bjorck(113, 7);
  const auto r = aperiodic_xcorr(set.matrix().col(0), set.matrix().col(7));
  CHECK(std::abs(r.at(0) * 120.0 - 7.0) < 1e-10);
}

TEST_CASE("zero lag of extended pairs is exact") {
  const auto set = goldbach_bjorck(113, 7);
  for (long j = 1; j < 113; j += 5) {
    const double expect = j % 7 == 0 ? 7.0 / 120 : 0.0;
    CHECK(std::abs(std::abs(periodic_xcorr(set.matrix().col(0), set.matrix().col(j)).at(0)) - expect) < 1e-10);
    CHECK(std::abs(std::abs(aperiodic_xcorr(set.matrix().col(0), set.matrix().col(j)).at(0)) - expect) < 1e-10);
  }
}

TEST_CASE("closed-form rms values") {
  CHECK(predict_rms(RmsCase::PeriodicCase1, 120, 113, 7).value == doctest::Approx(0.0909069).epsilon(1e-6));
  CHECK(predict_rms(RmsCase::PeriodicCase2, 120, 113, 7).value == doctest::Approx(0.0910628).epsilon(1e-6));
  const double p = 7.0 * 120 + 113.0 * (113 - 7 - 1);
  CHECK(p == 12705.0);
  const double ap1 = std::sqrt(2 * p / (239.0 * 14400));
  CHECK(predict_rms(RmsCase::AperiodicCase1, 120, 113, 7).value == doctest::Approx(ap1).epsilon(1e-14));
  CHECK(ap1 == doctest::Approx(0.085926).epsilon(1e-5));
  CHECK(predict_rms(RmsCase::AperiodicCase2, 120, 113, 7).value ==
        doctest::Approx(std::sqrt((49 + 2 * p) / (239.0 * 14400))).epsilon(1e-14));
  CHECK_THROWS_AS(predict_rms(RmsCase::PeriodicCase1, 121, 113, 7), ValidationError);
}

TEST_CASE("cyclic-shift inner-product predictions") {
  const auto split = make_split({113, 7});
  auto pred = [&](std::vector<long> a, std::vector<long> b) {
    return predict_inner_product(split, SetKind::CyclicShift, {a}, {b});
  };
  CHECK(pred({1, 2}, {1, 2}).hi == doctest::Approx(1.0));
  CHECK(pred({1, 2}, {1, 3}).hi == doctest::Approx(113.0 / 120));
  CHECK(pred({1, 2}, {4, 2}).lo == doctest::Approx(7.0 / 120));
  CHECK(pred({1, 2}, {4, 3}).hi == 0.0);
}

TEST_CASE("ambiguity surface against the defining sum") {
  const auto ref = oracle::random_vector(16, 7), rx = oracle::random_vector(16, 8);
  const std::vector<double> hyp{-3000, 0, 1250.5};
  const double fs = 48000;
  const auto s = ambiguity(ref, rx, hyp, fs);
  REQUIRE(s.magnitudes.rows() == 16);
  REQUIRE(s.magnitudes.cols() == 3);
  for (long n = 0; n < 16; ++n) {
    for (int k = 0; k < 3; ++k) {
      std::complex<double> acc = 0;
      for (long l = 0; l < 16; ++l) {
        acc += rx[(n + l) % 16] * std::conj(ref[l]) * std::polar(1.0, -2 * M_PI * hyp[k] * double(l) / fs);
      }
      CHECK(s.magnitudes(n, k) == doctest::Approx(std::abs(acc) / 16).epsilon(1e-12));
    }
  }
  CHECK(s.magnitudes.maxCoeff() == s.peak_magnitude);
  CHECK(s.magnitudes(s.peak_delay, s.peak_hypothesis) == s.peak_magnitude);
  CHECK_THROWS_AS(ambiguity(ref, rx, {}, fs), ValidationError);
}

TEST_CASE("matched ambiguity peaks at zero delay and the true Doppler") {
  const auto ref = time_domain(bjorck(PrimeQ(113)).samples(), 128);
  const double fs = 128 * 15e3;
  const auto grid = hypothesis_grid(-45e3, 45e3, 500);
  CHECK(grid.size() == 181);
  const auto s = ambiguity(ref, ref, grid, fs);
  CHECK(s.peak_delay == 0);
  CHECK(s.peak_frequency() == 0.0);

  const auto rx = cyclic_shift(apply_doppler(ref, -7000, fs), 5);
  const auto t = ambiguity(ref, Eigen::VectorXcd(rx), grid, fs);
  CHECK(t.peak_delay == 5);
  CHECK(t.peak_frequency() == -7000.0);
}

TEST_CASE("hypothesis grid") {
  const auto g = hypothesis_grid(-2000, 2000, 500);
  CHECK(g == std::vector<double>{-2000, -1500, -1000, -500, 0, 500, 1000, 1500, 2000});
  CHECK(hypothesis_grid(0, 0, 1).size() == 1);
  CHECK_THROWS_AS(hypothesis_grid(0, 1, 0), ValidationError);
  CHECK_THROWS_AS(hypothesis_grid(1, 0, 1), ValidationError);
}

TEST_CASE("time domain") {
  const auto b = bjorck(PrimeQ(113)).samples();
  const auto x = time_domain(b, 128);
  for (long n = 0; n < 128; n += 9) {
    std::complex<double> acc = 0;
    for (long m = 0; m < 113; ++m) acc += b[m] * std::polar(1.0, 2 * M_PI * double(m * n) / 128);
    CHECK(std::abs(x[n] - acc / 128.0) < 1e-12);
  }
  CHECK(std::abs(x.squaredNorm() - b.squaredNorm() / 128) < 1e-12);
  CHECK(time_domain(Eigen::VectorXcd::Zero(9), 16).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(time_domain(b, 100), ValidationError);

  const auto c = time_domain(b, 128, {0, true});
  for (long n = 0; n < 128; n += 11) {
    std::complex<double> acc = 0;
    for (long m = 0; m < 113; ++m) acc += b[m] * std::polar(1.0, 2 * M_PI * double((m - 56) * n) / 128);
    CHECK(std::abs(c[n] - acc / 128.0) < 1e-12);
  }
}

TEST_CASE("subcarrier rotation equals a time-domain phase ramp") {
  const auto b = bjorck(PrimeQ(113)).samples();
  const auto x0 = time_domain(b, 128);
  double worst = 0;
  for (long l = 0; l < 113; ++l) {
    const auto xl = time_domain(b, 128, {l, false});
    const auto ramp = apply_doppler(x0, double(l) * 15e3, 128 * 15e3);
    worst = std::max(worst, (xl - ramp).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-12);

  // With a full-band IDFT the mod-Q shift itself is the ramp.
  const auto full = time_domain(b, 113);
  for (long l = 0; l < 113; l += 4) {
    const auto xl = time_domain(cyclic_shift(b, l), 113);
    CHECK((xl - apply_doppler(full, double(l), 113.0)).cwiseAbs().maxCoeff() < 1e-12);
  }
  // Between arbitrary shifts r and s the ramp runs at (r - s) bins.
  const auto x3 = time_domain(b, 128, {3, false}), x9 = time_domain(b, 128, {9, false});
  CHECK((x9 - apply_doppler(x3, 6 * 15e3, 128 * 15e3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("measured rms over pairs") {
  const SequenceSet set = goldbach_bjorck(61, 59);
  const auto periodic = measure_rms(set, ProfileKind::Periodic);
  REQUIRE(periodic.size() == 2);
  CHECK(periodic[0].case_id == RmsCase::PeriodicCase1);
  CHECK(periodic[0].pairs + periodic[1].pairs == 61 * 60 / 2);
  // Case 2 pairs: columns c, c + 59 share the short index.
  CHECK(periodic[1].pairs == 2);
  double acc = 0;
  long count = 0;
  for (long i = 0; i < 61; ++i) {
    for (long j = i + 1; j < 61; ++j) {
      if (i % 59 == j % 59) continue;
      const Eigen::VectorXcd a = set.matrix().col(i), b = set.matrix().col(j);
      double ss = 0;
      for (long t = 0; t < 120; ++t) ss += std::norm(oracle::periodic_corr(a, b, t) / 120.0);
      acc += std::sqrt(ss / 120.0);
      ++count;
    }
  }
  CHECK(periodic[0].mean_rms == doctest::Approx(acc / static_cast<double>(count)).epsilon(1e-10));
  CHECK_THROWS_AS(measure_rms(circulant_set(bjorck<double>(PrimeQ(7))), ProfileKind::Periodic), ValidationError);
}
