#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "cazackit/sequence.hpp"

namespace cazackit {

/// sum_n a[n] conj(b[n])
template <typename DA, typename DB>
auto inner_product(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  if (a.size() != b.size()) throw ValidationError("inner_product: length mismatch");
  return b.dot(a);
}

template <typename Scalar>
std::complex<Scalar> inner_product(const BasicSequence<Scalar>& a, const BasicSequence<Scalar>& b) {
  return inner_product(a.samples(), b.samples());
}

/// Gram matrix G(i, j) = <col_i, col_j>.
template <typename Scalar>
ComplexMatrix<Scalar> gram(const BasicSequenceSet<Scalar>& set) {
  return (set.matrix().adjoint() * set.matrix()).transpose();
}

enum class ProfileKind { Periodic, Aperiodic };

/// Lag-indexed correlation values normalized by 1/N.
template <typename Scalar = double>
struct BasicCorrelationProfile {
  ProfileKind kind = ProfileKind::Periodic;
  long lag_min = 0;
  ComplexVector<Scalar> values;
  Scalar rms = 0;

  long lag_max() const { return lag_min + static_cast<long>(values.size()) - 1; }
  std::complex<Scalar> at(long lag) const { return values[lag - lag_min]; }
};

using CorrelationProfile = BasicCorrelationProfile<double>;

namespace detail {

template <typename Scalar>
Scalar rms_of(const ComplexVector<Scalar>& v) {
  return v.size() == 0 ? Scalar(0) : std::sqrt(v.squaredNorm() / static_cast<Scalar>(v.size()));
}

// Eigen's FFT backend does not handle length one; it is the identity there.
template <typename Scalar>
void fft_fwd(Eigen::FFT<Scalar>& fft, ComplexVector<Scalar>& out, const ComplexVector<Scalar>& in) {
  if (in.size() <= 1) out = in;
  else fft.fwd(out, in);
}

template <typename Scalar>
void fft_inv(Eigen::FFT<Scalar>& fft, ComplexVector<Scalar>& out, const ComplexVector<Scalar>& in) {
  if (in.size() <= 1) out = in;
  else fft.inv(out, in);
}

template <typename DA, typename DB>
void require_same_length(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b, const char* what) {
  if (a.size() != b.size()) throw ValidationError(std::string(what) + ": length mismatch");
  if (a.size() == 0) throw ValidationError(std::string(what) + ": empty input");
}

}  // namespace detail

/// C(tau) = (1/N) sum_n a[n] conj(b[(n - tau) mod N]), tau in [0, N). O(N^2).
template <typename DA, typename DB>
auto periodic_xcorr(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Scalar = typename Eigen::NumTraits<typename DA::Scalar>::Real;
  detail::require_same_length(a, b, "periodic_xcorr");
  const Eigen::Index n = a.size();
  BasicCorrelationProfile<Scalar> p;
  p.kind = ProfileKind::Periodic;
  p.values.resize(n);
  for (Eigen::Index tau = 0; tau < n; ++tau) {
    std::complex<Scalar> acc(0);
    for (Eigen::Index i = 0; i < n; ++i) acc += a[i] * std::conj(b[(i - tau + n) % n]);
    p.values[tau] = acc / static_cast<Scalar>(n);
  }
  p.rms = detail::rms_of(p.values);
  return p;
}

/// Same profile as periodic_xcorr, via one forward and one inverse FFT.
template <typename DA, typename DB>
auto periodic_xcorr_fft(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Scalar = typename Eigen::NumTraits<typename DA::Scalar>::Real;
  detail::require_same_length(a, b, "periodic_xcorr_fft");
  const Eigen::Index n = a.size();
  Eigen::FFT<Scalar> fft;
  ComplexVector<Scalar> fa, fb, out;
  const ComplexVector<Scalar> ea = a, eb = b;
  detail::fft_fwd(fft, fa, ea);
  detail::fft_fwd(fft, fb, eb);
  const ComplexVector<Scalar> prod = fa.cwiseProduct(fb.conjugate());
  detail::fft_inv(fft, out, prod);
  BasicCorrelationProfile<Scalar> p;
  p.kind = ProfileKind::Periodic;
  p.values = out / static_cast<Scalar>(n);
  p.rms = detail::rms_of(p.values);
  return p;
}

/// C(tau) = (1/N) sum_n a[n + tau] conj(b[n]) over the overlap, tau in [-(N-1), N-1].
/// Negative lags are taken as conj of the swapped correlation, so the
/// symmetry C_ab(-tau) = conj(C_ba(tau)) holds bit-exactly.
template <typename DA, typename DB>
auto aperiodic_xcorr(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Scalar = typename Eigen::NumTraits<typename DA::Scalar>::Real;
  detail::require_same_length(a, b, "aperiodic_xcorr");
  const auto n = static_cast<long>(a.size());
  auto positive = [n](const auto& x, const auto& y, long tau) {
    std::complex<Scalar> acc(0);
    for (long i = 0; i < n - tau; ++i) acc += x[i + tau] * std::conj(y[i]);
    return acc / static_cast<Scalar>(n);
  };
  BasicCorrelationProfile<Scalar> p;
  p.kind = ProfileKind::Aperiodic;
  p.lag_min = -(n - 1);
  p.values.resize(2 * n - 1);
  for (long tau = 0; tau < n; ++tau) {
    p.values[n - 1 + tau] = positive(a, b, tau);
    if (tau > 0) p.values[n - 1 - tau] = std::conj(positive(b, a, tau));
  }
  p.rms = detail::rms_of(p.values);
  return p;
}

template <typename Scalar>
BasicCorrelationProfile<Scalar> periodic_xcorr(const BasicSequence<Scalar>& a, const BasicSequence<Scalar>& b) {
  return periodic_xcorr(a.samples(), b.samples());
}

template <typename Scalar>
BasicCorrelationProfile<Scalar> aperiodic_xcorr(const BasicSequence<Scalar>& a, const BasicSequence<Scalar>& b) {
  return aperiodic_xcorr(a.samples(), b.samples());
}

enum class RmsCase { PeriodicCase1, PeriodicCase2, AperiodicCase1, AperiodicCase2 };

std::string_view to_string(RmsCase c);

struct RmsPrediction {
  RmsCase case_id = RmsCase::PeriodicCase1;
  double value = 0.0;
  long n = 0, q1 = 0, q2 = 0;
};

/// Closed-form cross-correlation RMS for two distinct extended cyclic shifts.
/// Case 1: different short indices, case 2: shared short index. Aperiodic
/// cases return the square root of the expected mean square.
RmsPrediction predict_rms(RmsCase which, long n, long q1, long q2);

struct RmsMeasurement {
  RmsCase case_id = RmsCase::PeriodicCase1;
  double mean_rms = 0.0;  // mean over pairs of the per-pair profile RMS
  long pairs = 0;
};

/// Measured counterparts of predict_rms over all distinct column pairs of a
/// two-part cyclic-shift set, split by shared vs distinct short index.
std::vector<RmsMeasurement> measure_rms(const SequenceSet& set, ProfileKind kind);

/// Closed interval for |<s_a, s_b>| / N predicted from the part indices.
struct InnerProductBounds {
  double lo = 0.0;
  double hi = 0.0;
};

InnerProductBounds predict_inner_product(const GoldbachSplit& split, SetKind kind, const ColumnAssignment& a,
                                         const ColumnAssignment& b);

/// |A(n, k)| over cyclic delay n in [0, N) and hypotheses f_k.
template <typename Scalar = double>
struct BasicAmbiguitySurface {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> magnitudes;  // N x K
  std::vector<double> hypotheses;
  double sample_rate = 0.0;
  Eigen::Index peak_delay = 0;
  Eigen::Index peak_hypothesis = 0;
  Scalar peak_magnitude = 0;

  double peak_frequency() const { return hypotheses.at(static_cast<std::size_t>(peak_hypothesis)); }
};

using AmbiguitySurface = BasicAmbiguitySurface<double>;

namespace detail {

/// Argmax with ties broken toward the smaller delay, then the lower hypothesis.
template <typename Scalar>
void locate_peak(BasicAmbiguitySurface<Scalar>& s) {
  s.peak_magnitude = -1;
  for (Eigen::Index k = 0; k < s.magnitudes.cols(); ++k) {
    for (Eigen::Index n = 0; n < s.magnitudes.rows(); ++n) {
      const Scalar v = s.magnitudes(n, k);
      const bool better = v > s.peak_magnitude ||
                          (v == s.peak_magnitude && (n < s.peak_delay || (n == s.peak_delay && k < s.peak_hypothesis)));
      if (better) {
        s.peak_magnitude = v;
        s.peak_delay = n;
        s.peak_hypothesis = k;
      }
    }
  }
}

}  // namespace detail

/// W(k, l) = conj(ref[l]) exp(-j 2 pi f_k l / fs)
template <typename Derived>
auto hypothesis_matrix(const Eigen::MatrixBase<Derived>& ref, const std::vector<double>& hypotheses,
                       double sample_rate) {
  using C = typename Derived::Scalar;
  using Scalar = typename Eigen::NumTraits<C>::Real;
  ComplexMatrix<Scalar> w(static_cast<Eigen::Index>(hypotheses.size()), ref.size());
  for (std::size_t k = 0; k < hypotheses.size(); ++k) {
    const double step = -2.0 * kPi<double> * hypotheses[k] / sample_rate;
    for (Eigen::Index l = 0; l < ref.size(); ++l) {
      const double ph = std::fmod(step * static_cast<double>(l), 2.0 * kPi<double>);
      w(static_cast<Eigen::Index>(k), l) = std::conj(ref[l]) * std::polar(Scalar(1), static_cast<Scalar>(ph));
    }
  }
  return w;
}

/// A(n, k) = (1/N) sum_l rx[(n + l) mod N] conj(ref[l]) exp(-j 2 pi f_k l / fs)
template <typename DR, typename DX>
auto ambiguity(const Eigen::MatrixBase<DR>& ref, const Eigen::MatrixBase<DX>& rx, const std::vector<double>& hypotheses,
               double sample_rate) {
  using Scalar = typename Eigen::NumTraits<typename DR::Scalar>::Real;
  detail::require_same_length(ref, rx, "ambiguity");
  if (hypotheses.empty()) throw ValidationError("ambiguity: empty hypothesis set");
  if (!(sample_rate > 0.0)) throw ValidationError("ambiguity: sample rate must be positive");
  const Eigen::Index n = ref.size();

  const ComplexMatrix<Scalar> w = hypothesis_matrix(ref, hypotheses, sample_rate);
  ComplexMatrix<Scalar> hankel(n, n);
  for (Eigen::Index d = 0; d < n; ++d) {
    for (Eigen::Index l = 0; l < n; ++l) hankel(l, d) = rx[(d + l) % n];
  }
  const ComplexMatrix<Scalar> a = (w * hankel) / static_cast<Scalar>(n);  // K x N

  BasicAmbiguitySurface<Scalar> s;
  s.magnitudes = a.transpose().cwiseAbs();
  s.hypotheses = hypotheses;
  s.sample_rate = sample_rate;
  detail::locate_peak(s);
  return s;
}

template <typename Scalar>
BasicAmbiguitySurface<Scalar> ambiguity(const BasicSequence<Scalar>& ref, const BasicSequence<Scalar>& rx,
                                        const std::vector<double>& hypotheses, double sample_rate) {
  return ambiguity(ref.samples(), rx.samples(), hypotheses, sample_rate);
}

/// lo, lo + step, ..., up to hi (inclusive within half a step).
std::vector<double> hypothesis_grid(double lo, double hi, double step);

/// Placement of a frequency-domain sequence on the IDFT grid.
struct SubcarrierMap {
  /// Bin holding sample 0; sample m sits in bin (first_bin + m) mod N.
  long first_bin = 0;
  /// Centre the occupied band on DC instead (first_bin ignored).
  bool centered = false;
};

/// x[n] = (1/N) sum_m freq[m] exp(j 2 pi bin(m) n / N), n in [0, N).
template <typename Derived>
auto time_domain(const Eigen::MatrixBase<Derived>& freq, Eigen::Index idft_length, SubcarrierMap map = {}) {
  using Scalar = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  const Eigen::Index q = freq.size();
  if (idft_length < q) throw ValidationError("time_domain: IDFT length is shorter than the sequence");
  if (idft_length < 1) throw ValidationError("time_domain: IDFT length must be positive");
  const Eigen::Index n = idft_length;
  const long first = map.centered ? -static_cast<long>(q / 2) : map.first_bin;

  ComplexVector<Scalar> bins = ComplexVector<Scalar>::Zero(n);
  for (Eigen::Index m = 0; m < q; ++m) {
    const long b = ((first + static_cast<long>(m)) % static_cast<long>(n) + static_cast<long>(n)) % static_cast<long>(n);
    bins[b] = freq[m];
  }
  Eigen::FFT<Scalar> fft;
  ComplexVector<Scalar> out;
  detail::fft_inv(fft, out, bins);  // includes the 1/N factor
  return out;
}

template <typename Scalar>
BasicSequence<Scalar> time_domain(const BasicSequence<Scalar>& freq, Eigen::Index idft_length, SubcarrierMap map = {}) {
  return BasicSequence<Scalar>(time_domain(freq.samples(), idft_length, map), Family::Raw, freq.provenance());
}

/// r[n] = x[n] exp(j 2 pi f n / fs)
template <typename Derived>
auto apply_doppler(const Eigen::MatrixBase<Derived>& x, double f_hz, double sample_rate, long first_index = 0) {
  using Scalar = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  ComplexVector<Scalar> out(x.size());
  const double step = 2.0 * kPi<double> * f_hz / sample_rate;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double ph = std::fmod(step * static_cast<double>(first_index + i), 2.0 * kPi<double>);
    out[i] = x[i] * std::polar(Scalar(1), static_cast<Scalar>(ph));
  }
  return out;
}

}  // namespace cazackit
