#include "cazackit/numtheory.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace cazackit {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

bool miller_rabin_witness(u64 n, u64 a, u64 d, int s) {
  a %= n;
  if (a == 0) return true;
  u64 x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  // Witness set is deterministic for all n < 2^64.
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    if (!miller_rabin_witness(n, a, d, s)) return false;
  }
  return true;
}

u64 next_prime(u64 n) {
  if (n <= 2) return 2;
  for (u64 k = n | 1U;; k += 2) {
    if (is_prime(k)) return k;
  }
}

u64 prev_prime(u64 n) {
  if (n < 2) return 0;
  if (n == 2) return 2;
  for (u64 k = (n % 2 == 0) ? n - 1 : n; k >= 3; k -= 2) {
    if (is_prime(k)) return k;
  }
  return 2;
}

PrimeQ::PrimeQ(u64 value) : value_(value) {
  if (!is_prime(value)) throw ValidationError(std::to_string(value) + " is not prime");
}

int legendre(std::int64_t m, const PrimeQ& q) {
  const u64 p = q.value();
  if (p == 2) throw ValidationError("legendre symbol requires an odd prime modulus");
  const auto sp = static_cast<std::int64_t>(p);
  const auto r = static_cast<u64>(((m % sp) + sp) % sp);
  if (r == 0) return 0;
  return pow_mod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

std::string GoldbachSplit::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << parts[i];
  return os.str();
}

void validate(const GoldbachSplit& split) {
  const auto& p = split.parts;
  if (p.size() != 2 && p.size() != 3) throw ValidationError("split must have 2 or 3 parts");
  u64 sum = 0;
  for (u64 q : p) {
    if (!is_prime(q)) throw ValidationError("split part " + std::to_string(q) + " is not prime");
    sum += q;
  }
  if (sum != split.n) {
    throw ValidationError("split parts sum to " + std::to_string(sum) + ", expected " + std::to_string(split.n));
  }
  if (!std::is_sorted(p.begin(), p.end(), std::greater<>())) {
    throw ValidationError("split parts must be ordered largest first");
  }
  if (p.size() == 2 && (split.n % 2 != 0 || split.n <= 2)) {
    throw ValidationError("two-part split requires even n > 2");
  }
  if (p.size() == 3 && (split.n % 2 == 0 || split.n <= 5)) {
    throw ValidationError("three-part split requires odd n > 5");
  }
}

GoldbachSplit make_split(std::vector<u64> parts) {
  std::sort(parts.begin(), parts.end(), std::greater<>());
  GoldbachSplit s;
  for (u64 q : parts) s.n += q;
  s.parts = std::move(parts);
  validate(s);
  return s;
}

namespace {

GoldbachSplit explicit_split(u64 n, const SplitPolicy& policy, std::size_t expected_parts) {
  if (policy.parts.size() != expected_parts) {
    throw ValidationError("explicit split needs " + std::to_string(expected_parts) + " parts");
  }
  GoldbachSplit s = make_split(policy.parts);
  if (s.n != n) throw ValidationError("explicit split " + s.to_string() + " does not sum to " + std::to_string(n));
  return s;
}

}  // namespace

GoldbachSplit goldbach_even(u64 n, const SplitPolicy& policy) {
  if (n <= 2 || n % 2 != 0) throw ValidationError("goldbach_even requires an even n > 2");
  if (policy.kind == SplitPolicy::Kind::Explicit) return explicit_split(n, policy, 2);

  if (policy.kind == SplitPolicy::Kind::MaxQ1) {
    for (u64 q1 = prev_prime(n - 2); q1 >= n / 2 && q1 >= 2; q1 = prev_prime(q1 - 1)) {
      if (is_prime(n - q1)) return make_split({q1, n - q1});
      if (q1 == 2) break;
    }
  } else {
    // Smallest gap first; the gap determines the split uniquely.
    for (u64 q1 = next_prime(n / 2); q1 <= n - 2; q1 = next_prime(q1 + 1)) {
      if (is_prime(n - q1)) return make_split({q1, n - q1});
    }
  }
  throw ValidationError("no two-prime split found for " + std::to_string(n));
}

GoldbachSplit goldbach_odd(u64 n, const SplitPolicy& policy) {
  if (n <= 5 || n % 2 == 0) throw ValidationError("goldbach_odd requires an odd n > 5");
  if (policy.kind == SplitPolicy::Kind::Explicit) return explicit_split(n, policy, 3);

  if (policy.kind == SplitPolicy::Kind::MaxQ1) {
    // Largest Q1 <= n - 4 with an even remainder, then the remainder's MaxQ1 split.
    for (u64 q1 = prev_prime(n - 4); q1 >= 3; q1 = prev_prime(q1 - 1)) {
      const u64 rest = n - q1;
      if (rest % 2 != 0) continue;
      const GoldbachSplit tail = goldbach_even(rest, SplitPolicy::max_q1());
      if (tail.parts[0] <= q1) return make_split({q1, tail.parts[0], tail.parts[1]});
    }
    throw ValidationError("no three-prime split found for " + std::to_string(n));
  }

  // Balanced: minimise Q1 - Q3, ties broken toward the largest Q1 (then Q2).
  bool found = false;
  GoldbachSplit best;
  u64 best_spread = 0;
  for (u64 q3 = prev_prime(n / 3); q3 >= 2; q3 = prev_prime(q3 - 1)) {
    const u64 rest = n - q3;
    const u64 lower_q1 = (rest + 1) / 2;
    if (found && lower_q1 > q3 && lower_q1 - q3 > best_spread) break;
    for (u64 q1 = next_prime(lower_q1); q1 + q3 <= rest; q1 = next_prime(q1 + 1)) {
      const u64 q2 = rest - q1;
      if (q2 < q3) break;
      if (!is_prime(q2)) continue;
      const u64 spread = q1 - q3;
      if (!found || spread < best_spread || (spread == best_spread && q1 > best.parts[0])) {
        best = make_split({q1, q2, q3});
        best_spread = spread;
        found = true;
      }
      break;  // larger q1 only widens the spread for this q3
    }
    if (q3 == 2) break;
  }
  if (!found) throw ValidationError("no three-prime split found for " + std::to_string(n));
  return best;
}

}  // namespace cazackit
