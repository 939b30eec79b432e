#include "cazackit/corr.hpp"

#include <cmath>

namespace cazackit {

std::string_view to_string(RmsCase c) {
  switch (c) {
    case RmsCase::PeriodicCase1: return "periodic_case1";
    case RmsCase::PeriodicCase2: return "periodic_case2";
    case RmsCase::AperiodicCase1: return "aperiodic_case1";
    case RmsCase::AperiodicCase2: return "aperiodic_case2";
  }
  return "periodic_case1";
}

RmsPrediction predict_rms(RmsCase which, long n, long q1, long q2) {
  if (q1 < 2 || q2 < 2 || n != q1 + q2) {
    throw ValidationError("predict_rms: need n = q1 + q2 with q1, q2 >= 2");
  }
  const double nd = static_cast<double>(n);
  const double d1 = static_cast<double>(q1);
  const double d2 = static_cast<double>(q2);
  const double p = d2 * nd + d1 * (d1 - d2 - 1.0);
  const double denom = (2.0 * nd - 1.0) * nd * nd;

  RmsPrediction out{which, 0.0, n, q1, q2};
  switch (which) {
    case RmsCase::PeriodicCase1: out.value = std::sqrt(1.0 - 1.0 / nd) / std::sqrt(nd); break;
    case RmsCase::PeriodicCase2: out.value = std::sqrt(1.0 - 1.0 / nd + (d2 / nd) * (d2 / nd)) / std::sqrt(nd); break;
    case RmsCase::AperiodicCase1: out.value = std::sqrt(2.0 * p / denom); break;
    case RmsCase::AperiodicCase2: out.value = std::sqrt((d2 * d2 + 2.0 * p) / denom); break;
  }
  return out;
}

InnerProductBounds predict_inner_product(const GoldbachSplit& split, SetKind kind, const ColumnAssignment& a,
                                         const ColumnAssignment& b) {
  if (a.parts.size() != split.size() || b.parts.size() != split.size()) {
    throw ValidationError("predict_inner_product: assignment does not match the split");
  }
  const double nd = static_cast<double>(split.n);
  double coherent = 0.0;
  std::vector<double> terms;
  for (std::size_t p = 0; p < split.size(); ++p) {
    const double q = static_cast<double>(split[p]);
    if (a.parts[p] == b.parts[p]) coherent += q;
    else if (kind == SetKind::RootIndex) terms.push_back(std::sqrt(q));
  }
  if (coherent > 0.0) terms.push_back(coherent);

  double total = 0.0, largest = 0.0;
  for (double t : terms) {
    total += t;
    largest = std::max(largest, t);
  }
  return {std::max(0.0, 2.0 * largest - total) / nd, total / nd};
}

std::vector<double> hypothesis_grid(double lo, double hi, double step) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step)) {
    throw ValidationError("hypothesis grid bounds must be finite");
  }
  if (!(step > 0.0)) throw ValidationError("hypothesis step must be positive");
  if (hi < lo) throw ValidationError("hypothesis grid upper bound is below the lower bound");
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 0.5)) + 1;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  return grid;
}

std::vector<RmsMeasurement> measure_rms(const SequenceSet& set, ProfileKind kind) {
  if (set.kind() != SetKind::CyclicShift || !set.split() || set.split()->size() != 2) {
    throw ValidationError("measure_rms needs a two-part cyclic-shift extended set");
  }
  const bool periodic = kind == ProfileKind::Periodic;
  RmsMeasurement distinct{periodic ? RmsCase::PeriodicCase1 : RmsCase::AperiodicCase1, 0.0, 0};
  RmsMeasurement shared{periodic ? RmsCase::PeriodicCase2 : RmsCase::AperiodicCase2, 0.0, 0};
  const auto& a = set.assignment();
  for (Eigen::Index i = 0; i < set.count(); ++i) {
    for (Eigen::Index j = i + 1; j < set.count(); ++j) {
      const auto x = set.matrix().col(i);
      const auto y = set.matrix().col(j);
      const double r = periodic ? periodic_xcorr_fft(x, y).rms : aperiodic_xcorr(x, y).rms;
      RmsMeasurement& m = a[static_cast<std::size_t>(i)].parts[1] == a[static_cast<std::size_t>(j)].parts[1] ? shared : distinct;
      m.mean_rms += r;
      ++m.pairs;
    }
  }
  std::vector<RmsMeasurement> out;
  for (RmsMeasurement* m : {&distinct, &shared}) {
    if (m->pairs > 0) {
      m->mean_rms /= static_cast<double>(m->pairs);
      out.push_back(*m);
    }
  }
  return out;
}

}  // namespace cazackit
