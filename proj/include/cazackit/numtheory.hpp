#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cazackit/types.hpp"

namespace cazackit {

/// Deterministic primality test valid for the full uint64_t range
/// (Miller-Rabin with a fixed witness set).
bool is_prime(std::uint64_t n);

/// Smallest prime >= n and largest prime <= n (0 if none).
std::uint64_t next_prime(std::uint64_t n);
std::uint64_t prev_prime(std::uint64_t n);

/// A primality-certified positive integer.
class PrimeQ {
 public:
  explicit PrimeQ(std::uint64_t value);

  std::uint64_t value() const noexcept { return value_; }
  operator std::uint64_t() const noexcept { return value_; }

 private:
  std::uint64_t value_;
};

/// Legendre symbol (m / q) for an odd prime q, via Euler's criterion.
/// Throws ValidationError for q == 2.
int legendre(std::int64_t m, const PrimeQ& q);

/// Ordered prime tuple summing to n. parts[0] is the largest part and the
/// remaining parts are in non-increasing order.
struct GoldbachSplit {
  std::vector<std::uint64_t> parts;
  std::uint64_t n = 0;

  std::size_t size() const noexcept { return parts.size(); }
  std::uint64_t operator[](std::size_t i) const { return parts[i]; }
  bool operator==(const GoldbachSplit&) const = default;

  std::string to_string() const;
};

/// Checks every GoldbachSplit invariant; throws ValidationError on failure.
void validate(const GoldbachSplit& split);

/// Builds and validates a split from explicit parts (any order).
GoldbachSplit make_split(std::vector<std::uint64_t> parts);

struct SplitPolicy {
  enum class Kind { MaxQ1, Balanced, Explicit };

  Kind kind = Kind::MaxQ1;
  std::vector<std::uint64_t> parts;  // Explicit only

  static SplitPolicy max_q1() { return {Kind::MaxQ1, {}}; }
  static SplitPolicy balanced() { return {Kind::Balanced, {}}; }
  static SplitPolicy explicit_parts(std::vector<std::uint64_t> p) { return {Kind::Explicit, std::move(p)}; }
};

/// Two-prime split of an even n > 2.
GoldbachSplit goldbach_even(std::uint64_t n, const SplitPolicy& policy = SplitPolicy::max_q1());

/// Three-prime split of an odd n > 5.
GoldbachSplit goldbach_odd(std::uint64_t n, const SplitPolicy& policy = SplitPolicy::max_q1());

}  // namespace cazackit
