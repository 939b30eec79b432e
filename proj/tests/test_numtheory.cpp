#include <doctest.h>

#include "cazackit/numtheory.hpp"
#include "oracles.hpp"

using namespace cazackit;

TEST_CASE("is_prime agrees with a sieve") {
  const auto p = oracle::sieve(200000);
  for (std::uint64_t n = 0; n < p.size(); ++n) REQUIRE(is_prime(n) == static_cast<bool>(p[n]));
}

TEST_CASE("is_prime on large values and strong pseudoprimes") {
  CHECK(is_prime(2147483647ULL));
  CHECK(is_prime(4294967291ULL));
  CHECK(is_prime(18446744073709551557ULL));
  CHECK_FALSE(is_prime(3215031751ULL));
  CHECK_FALSE(is_prime(4294967297ULL));
  CHECK_FALSE(is_prime(561));
  CHECK(is_prime(113));
  CHECK_FALSE(is_prime(120));
}

TEST_CASE("next and previous prime") {
  CHECK(next_prime(0) == 2);
  CHECK(next_prime(114) == 127);
  CHECK(prev_prime(120) == 113);
  CHECK(prev_prime(2) == 2);
  CHECK(prev_prime(1) == 0);
}

TEST_CASE("PrimeQ rejects composites") {
  CHECK_THROWS_AS(PrimeQ(1), ValidationError);
  CHECK_THROWS_AS(PrimeQ(9), ValidationError);
  CHECK(PrimeQ(7).value() == 7);
}

TEST_CASE("legendre matches the exhaustive-squares oracle") {
  CHECK(legendre(0, PrimeQ(7)) == 0);
  CHECK(legendre(2, PrimeQ(7)) == 1);
  CHECK(legendre(3, PrimeQ(7)) == -1);
  const auto p = oracle::sieve(400);
  for (long q = 3; q < 400; ++q) {
    if (!p[q]) continue;
    for (long m = -2 * q; m <= 2 * q; ++m) REQUIRE(legendre(m, PrimeQ(q)) == oracle::legendre(m, q));
  }
}

TEST_CASE("legendre residues are equinumerous and multiplicative") {
  const auto p = oracle::sieve(300);
  for (long q = 3; q < 300; ++q) {
    if (!p[q]) continue;
    const PrimeQ pq(q);
    int plus = 0;
    for (long m = 1; m < q; ++m) plus += legendre(m, pq) == 1;
    CHECK(plus == (q - 1) / 2);
    for (long a = 1; a < q; ++a) {
      for (long b = 1; b < q; b += 7) REQUIRE(legendre(a * b, pq) == legendre(a, pq) * legendre(b, pq));
    }
  }
}

TEST_CASE("legendre rejects q = 2") { CHECK_THROWS_AS(legendre(1, PrimeQ(2)), ValidationError); }

TEST_CASE("goldbach_even examples") {
  CHECK(goldbach_even(120).parts == std::vector<std::uint64_t>{113, 7});
  CHECK(goldbach_even(120, SplitPolicy::balanced()).parts == std::vector<std::uint64_t>{61, 59});
  CHECK(goldbach_even(4).parts == std::vector<std::uint64_t>{2, 2});
  CHECK(goldbach_even(120, SplitPolicy::explicit_parts({19, 101})).parts == std::vector<std::uint64_t>{101, 19});
}

TEST_CASE("goldbach_even rejects bad input") {
  CHECK_THROWS_AS(goldbach_even(7), ValidationError);
  CHECK_THROWS_AS(goldbach_even(2), ValidationError);
  CHECK_THROWS_AS(goldbach_even(120, SplitPolicy::explicit_parts({111, 9})), ValidationError);
  CHECK_THROWS_AS(goldbach_even(120, SplitPolicy::explicit_parts({113, 5})), ValidationError);
  CHECK_THROWS_AS(goldbach_even(120, SplitPolicy::explicit_parts({113})), ValidationError);
}

TEST_CASE("goldbach_odd examples") {
  CHECK(goldbach_odd(9, SplitPolicy::balanced()).parts == std::vector<std::uint64_t>{3, 3, 3});
  CHECK(goldbach_odd(7).parts == std::vector<std::uint64_t>{3, 2, 2});
  CHECK(goldbach_odd(121).parts == std::vector<std::uint64_t>{113, 5, 3});
  CHECK(goldbach_odd(15, SplitPolicy::explicit_parts({3, 7, 5})).parts == std::vector<std::uint64_t>{7, 5, 3});
  CHECK_THROWS_AS(goldbach_odd(5), ValidationError);
  CHECK_THROWS_AS(goldbach_odd(10), ValidationError);
}

TEST_CASE("split validation") {
  CHECK_NOTHROW(validate(make_split({7, 113})));
  CHECK_THROWS_AS(make_split({113, 8}), ValidationError);
  CHECK_THROWS_AS(make_split({5, 3, 2, 2}), ValidationError);
  GoldbachSplit unordered{{7, 113}, 120};
  CHECK_THROWS_AS(validate(unordered), ValidationError);
  GoldbachSplit wrong_sum{{113, 7}, 121};
  CHECK_THROWS_AS(validate(wrong_sum), ValidationError);
}

namespace {

// Search-order oracles over a sieve, no pruning.
std::vector<std::uint64_t> even_max_q1(const std::vector<char>& p, std::uint64_t n) {
  for (std::uint64_t q1 = n - 2; q1 >= n / 2; --q1) {
    if (p[q1] && p[n - q1]) return {q1, n - q1};
  }
  return {};
}

std::vector<std::uint64_t> even_balanced(const std::vector<char>& p, std::uint64_t n) {
  for (std::uint64_t q1 = n / 2; q1 <= n - 2; ++q1) {
    if (p[q1] && p[n - q1]) return {q1, n - q1};
  }
  return {};
}

std::vector<std::uint64_t> odd_max_q1(const std::vector<char>& p, std::uint64_t n) {
  for (std::uint64_t q1 = n - 4; q1 >= 2; --q1) {
    if (!p[q1]) continue;
    const std::uint64_t r = n - q1;
    for (std::uint64_t q2 = std::min(q1, r - 2); q2 >= (r + 1) / 2; --q2) {
      if (p[q2] && p[r - q2]) return {q1, q2, r - q2};
    }
  }
  return {};
}

std::vector<std::uint64_t> odd_balanced(const std::vector<char>& p, std::uint64_t n) {
  for (std::uint64_t d = 0; d < n; ++d) {
    std::vector<std::uint64_t> best;
    for (std::uint64_t q3 = 2; 3 * q3 <= n; ++q3) {
      const std::uint64_t q1 = q3 + d;
      if (q1 + q3 >= n) break;
      const std::uint64_t q2 = n - q1 - q3;
      if (!p[q3] || !p[q1] || !p[q2] || q2 < q3 || q2 > q1) continue;
      best = {q1, q2, q3};
    }
    if (!best.empty()) return best;
  }
  return {};
}

}  // namespace

TEST_CASE("goldbach splits agree with exhaustive oracles up to 10000") {
  const auto p = oracle::sieve(10000);
  for (std::uint64_t n = 4; n <= 10000; n += 2) {
    const auto a = goldbach_even(n);
    REQUIRE(a.parts == even_max_q1(p, n));
    const auto b = goldbach_even(n, SplitPolicy::balanced());
    REQUIRE(b.parts == even_balanced(p, n));
    CHECK_NOTHROW(validate(a));
    CHECK_NOTHROW(validate(b));
  }
  for (std::uint64_t n = 7; n <= 10000; n += 2) {
    const auto a = goldbach_odd(n);
    REQUIRE(a.parts == odd_max_q1(p, n));
    const auto b = goldbach_odd(n, SplitPolicy::balanced());
    REQUIRE(b.parts == odd_balanced(p, n));
    CHECK_NOTHROW(validate(a));
    CHECK_NOTHROW(validate(b));
  }
}
