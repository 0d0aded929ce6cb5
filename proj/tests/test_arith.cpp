#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "sdsieve/arith.hpp"

using namespace sdsieve;

TEST_CASE("primes_up_to basics") {
  CHECK(primes_up_to(1).empty());
  CHECK(primes_up_to(10) == std::vector<std::uint64_t>{2, 3, 5, 7});
  auto p97 = primes_up_to(97);
  CHECK(p97.size() == 25);
  CHECK(p97.back() == 97);
}

TEST_CASE("primes_up_to agrees with a hand sieve") {
  // independent: odd-only trial division
  std::vector<std::uint64_t> slow;
  for (std::uint64_t n = 2; n <= 2000; ++n) {
    bool prime = n >= 2;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) {
        prime = false;
        break;
      }
    if (prime) slow.push_back(n);
  }
  CHECK(primes_up_to(2000) == slow);
}

TEST_CASE("factorize examples") {
  CHECK_THROWS_AS(factorize(0), Error);
  CHECK(factorize(1).factors.empty());

  Factorization f = factorize(4095);  // 2^12 - 1
  REQUIRE(f.factors.size() == 4);
  CHECK(f.factors[0].prime == 3);
  CHECK(f.factors[0].exponent == 2);
  CHECK(f.factors[1].prime == 5);
  CHECK(f.factors[2].prime == 7);
  CHECK(f.factors[3].prime == 13);

  Factorization g = factorize(144);
  REQUIRE(g.factors.size() == 2);
  CHECK(g.factors[0].prime == 2);
  CHECK(g.factors[0].exponent == 4);
  CHECK(g.factors[1].prime == 3);
  CHECK(g.factors[1].exponent == 2);
}

TEST_CASE("factorize handles large semiprimes deterministically") {
  Natural n = Natural("2147483647") * Natural("618970019642690137449562111");  // M31 * M89 > 2^64
  Factorization f = factorize(n);
  REQUIRE(f.factors.size() == 2);
  CHECK(f.factors[0].prime == Natural("2147483647"));
  CHECK(f.value() == n);
  Factorization again = factorize(n);
  CHECK(again.factors[0].prime == f.factors[0].prime);
  // rho budgets are an honest guard, not silent: a hard semiprime times out
  Natural hard = Natural("2305843009213693951") * Natural("618970019642690137449562111");
  Limits tight;
  tight.factor_iteration_budget = 1 << 16;
  CHECK_THROWS_AS(factorize(hard, tight), Error);
}

TEST_CASE("is_prime examples") {
  CHECK_FALSE(is_prime(1));
  CHECK(is_prime(2));
  CHECK(is_prime(8191));        // 2^13 - 1
  CHECK_FALSE(is_prime(2047));  // 23 * 89
  CHECK(classify_prime((Natural(1) << 127) - 1) == Primality::probable_prime);  // M127
  CHECK(classify_prime((Natural(1) << 127) + 1) == Primality::composite);
}

TEST_CASE("is_prime agrees with trial division up to 1e6") {
  std::vector<bool> composite(1'000'001, false);
  for (std::uint64_t p = 2; p <= 1'000'000; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t m = p * p; m <= 1'000'000; m += p) composite[m] = true;
  }
  for (std::uint64_t n = 0; n <= 1'000'000; ++n) {
    bool expect = n >= 2 && !composite[n];
    if (is_prime_u64(n) != expect) {
      CAPTURE(n);
      REQUIRE(is_prime_u64(n) == expect);
    }
  }
}

TEST_CASE("multiplicative functions") {
  CHECK(euler_phi(factorize(12)) == 4);
  CHECK(moebius(factorize(12)) == 0);
  CHECK(euler_phi(factorize(30)) == 8);
  CHECK(moebius(factorize(30)) == -1);
  CHECK(divisors(factorize(12)) ==
        std::vector<Natural>{1, 2, 3, 4, 6, 12});
}

TEST_CASE("factorization identities up to 1e5") {
  // product reconstructs; mu = 0 iff squareful; sum of phi over divisors = n
  for (std::uint64_t n = 1; n <= 100'000; n += (n < 2000 ? 1 : 37)) {
    Factorization f = factorize(n);
    CHECK(f.value() == n);
    bool squarefree = f.squarefree();
    CHECK((moebius(f) == 0) == !squarefree);
    Natural phi_sum = 0;
    for (const Natural& d : divisors(f)) phi_sum += euler_phi(factorize(d));
    CHECK(phi_sum == n);
  }
}

TEST_CASE("divisor guard and cap") {
  // 2^21 divisors would exceed the default guard
  Factorization f;
  for (std::uint64_t p : primes_up_to(79)) f.factors.push_back({Natural(p), 1});
  REQUIRE(f.omega() == 22);
  CHECK_THROWS_AS(divisors(f), Error);
  auto capped = divisors(f, 10);
  REQUIRE(capped.size() == 10);
  CHECK(capped[0] == 1);
  CHECK(capped[1] == 2);
  CHECK(capped[2] == 3);
  CHECK(std::is_sorted(capped.begin(), capped.end()));
}

TEST_CASE("rational arithmetic matches a cross-multiplication oracle") {
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<long> num(-1'000'000, 1'000'000);
  std::uniform_int_distribution<long> den(1, 1'000'000);
  for (int i = 0; i < 10'000; ++i) {
    long a = num(rng), c = num(rng);
    long b = den(rng), d = den(rng);
    Rational x = make_rational(a, b), y = make_rational(c, d);
    Rational sum = x + y;
    // oracle: (ad + cb) / (bd), reduced independently
    Natural n = Natural(a) * d + Natural(c) * b;
    Natural m = Natural(b) * d;
    Natural g = gcd_n(abs(n), m);
    CHECK(sum.get_num() * (m / g) == (n / g) * sum.get_den());
  }
}

TEST_CASE("rational_string is canonical") {
  CHECK(rational_string(make_rational(4, 6)) == "2/3");
  CHECK(rational_string(make_rational(-4, 6)) == "-2/3");
  CHECK(rational_string(Rational(1)) == "1/1");
}
