#pragma once

#include <cmath>

#include "cazackit/numtheory.hpp"
#include "cazackit/sequence.hpp"

namespace cazackit {

/// Phase step of a Björck sequence: applied with the Legendre sign when
/// q = 1 (mod 4), applied at non-residues only when q = 3 (mod 4).
inline double bjorck_phase(const PrimeQ& q) {
  const double qd = static_cast<double>(q.value());
  if (q.value() % 4 == 1) return std::acos(1.0 / (1.0 + std::sqrt(qd)));
  return std::acos((1.0 - qd) / (1.0 + qd));
}

/// Prime-length Björck sequence b[m] = exp(j theta[m]).
template <typename Scalar = double>
BasicSequence<Scalar> bjorck(const PrimeQ& q) {
  if (q.value() == 2) throw ValidationError("bjorck sequences need an odd prime length");
  const auto len = static_cast<Eigen::Index>(q.value());
  const double phase = bjorck_phase(q);
  const bool one_mod_four = q.value() % 4 == 1;

  ComplexVector<Scalar> s(len);
  for (Eigen::Index m = 0; m < len; ++m) {
    const int chi = legendre(m, q);
    double theta = 0.0;
    if (one_mod_four) theta = chi * phase;
    else if (chi == -1) theta = phase;
    s[m] = std::polar(Scalar(1), static_cast<Scalar>(theta));
  }
  return BasicSequence<Scalar>(std::move(s), Family::Bjorck, Provenance{0, std::nullopt, std::nullopt});
}

/// Odd-prime Zadoff-Chu sequence x_u[m] = exp(-j pi u m (m + 1) / q).
template <typename Scalar = double>
BasicSequence<Scalar> zc(long u, const PrimeQ& q) {
  if (q.value() == 2) throw ValidationError("zc sequences need an odd prime length");
  const auto qq = static_cast<long>(q.value());
  if (u < 1 || u > qq - 1) throw ValidationError("zc root must lie in [1, q-1]");

  ComplexVector<Scalar> s(qq);
  for (long m = 0; m < qq; ++m) {
    // m(m+1) is even, so reduce u*m(m+1)/2 mod q exactly before scaling.
    const auto k = static_cast<long>((static_cast<__int128>(u) * (m * (m + 1) / 2)) % qq);
    const double angle = -2.0 * kPi<double> * static_cast<double>(k) / static_cast<double>(qq);
    s[m] = std::polar(Scalar(1), static_cast<Scalar>(angle));
  }
  return BasicSequence<Scalar>(std::move(s), Family::ZC, Provenance{0, u, std::nullopt});
}

/// out[m] = s[(m - l) mod length]
template <typename Derived>
auto cyclic_shift(const Eigen::MatrixBase<Derived>& s, long l) {
  using Plain = typename Derived::PlainObject;
  const Eigen::Index n = s.size();
  Plain out(n);
  if (n == 0) return out;
  const Eigen::Index k = ((l % n) + n) % n;
  out.head(k) = s.tail(k);
  out.tail(n - k) = s.head(n - k);
  return out;
}

template <typename Scalar>
BasicSequence<Scalar> cyclic_shift(const BasicSequence<Scalar>& s, long l) {
  Provenance p = s.provenance();
  const long len = static_cast<long>(s.length());
  const long base = p.shift.value_or(0);
  p.shift = len > 0 ? (((base + l) % len) + len) % len : 0;
  return BasicSequence<Scalar>(cyclic_shift(s.samples(), l), s.family(), std::move(p));
}

/// Q x Q circulant matrix whose column l is the l-th cyclic shift of base.
template <typename Scalar>
BasicSequenceSet<Scalar> circulant_set(const BasicSequence<Scalar>& base) {
  if (!is_prime(static_cast<std::uint64_t>(base.length()))) {
    throw ValidationError("circulant_set requires a prime-length base");
  }
  const Eigen::Index q = base.length();
  ComplexMatrix<Scalar> m(q, q);
  std::vector<ColumnAssignment> a;
  a.reserve(static_cast<std::size_t>(q));
  for (Eigen::Index l = 0; l < q; ++l) {
    m.col(l) = cyclic_shift(base.samples(), static_cast<long>(l));
    a.push_back({{static_cast<long>(l)}});
  }
  return BasicSequenceSet<Scalar>(std::move(m), SetKind::CyclicShift, base.family(), std::move(a));
}

/// All q - 1 ZC roots of length q; column r holds root r + 1.
template <typename Scalar = double>
BasicSequenceSet<Scalar> root_set(const PrimeQ& q, Family family = Family::ZC) {
  if (family != Family::ZC) throw ValidationError("root-index sets are only defined for the ZC family");
  const auto qq = static_cast<Eigen::Index>(q.value());
  ComplexMatrix<Scalar> m(qq, qq - 1);
  std::vector<ColumnAssignment> a;
  for (Eigen::Index r = 0; r + 1 < qq; ++r) {
    m.col(r) = zc<Scalar>(static_cast<long>(r + 1), q).samples();
    a.push_back({{static_cast<long>(r + 1)}});
  }
  return BasicSequenceSet<Scalar>(std::move(m), SetKind::RootIndex, Family::ZC, std::move(a));
}

}  // namespace cazackit
