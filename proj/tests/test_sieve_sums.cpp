#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "sdsieve/sieve_sums.hpp"

using namespace sdsieve;

namespace {

const SequenceSpec kFib = SequenceSpec::fibonacci();
const SequenceSpec kMersenne = SequenceSpec::mersenne();
const SequenceSpec kTrivial = SequenceSpec::trivial();

SquarefreeModulus pi_custom(std::vector<std::uint64_t> ps) {
  return SquarefreeModulus::custom(std::move(ps));
}

}  // namespace

TEST_CASE("modulus constructors") {
  CHECK(SquarefreeModulus::primes_below(10.0).primes == std::vector<std::uint64_t>{2, 3, 5, 7});
  CHECK(SquarefreeModulus::primes_below(1.0).primes.empty());
  CHECK(SquarefreeModulus::primes_below_excluding(8.0, {2}).primes ==
        std::vector<std::uint64_t>{3, 5, 7});
  CHECK(SquarefreeModulus::from_integer(105).primes == std::vector<std::uint64_t>{3, 5, 7});
  CHECK_THROWS_AS(SquarefreeModulus::from_integer(12), Error);  // not squarefree
  CHECK_THROWS_AS(SquarefreeModulus::custom({4}), Error);       // not prime
}

TEST_CASE("M(Pi) worked examples") {
  EntryPointTable trivial(kTrivial), mers(kMersenne), fib(kFib);

  // trivial sequence: M(Pi) = phi(Pi)/Pi, here 4/15 for Pi = 30
  MoebiusSum t30 = moebius_sum(trivial, SquarefreeModulus::from_integer(30));
  CHECK(t30.value == make_rational(4, 15));

  // Mersenne with Pi = 3*5*7: eight-term inclusion-exclusion gives 1/3
  MoebiusSum m105d = moebius_sum_direct(mers, SquarefreeModulus::from_integer(105));
  MoebiusSum m105s = moebius_sum_structured(mers, SquarefreeModulus::from_integer(105));
  CHECK(m105d.value == make_rational(1, 3));
  CHECK(m105s.value == make_rational(1, 3));
  REQUIRE(m105s.m_pi.has_value());
  CHECK(m105s.m_pi->m == 12);  // lcm(2, 4, 3)

  // empty modulus: the single d = 1 term
  CHECK(moebius_sum(mers, pi_custom({})).value == Rational(1));

  // Fibonacci Pi = 210: m = (3,4,5,8), direct equals structured equals 2/5
  MoebiusSum f210 = moebius_sum(fib, SquarefreeModulus::from_integer(210), MoebiusStrategy::both);
  CHECK(f210.value == make_rational(2, 5));
}

TEST_CASE("direct equals structured across subset moduli") {
  std::vector<std::uint64_t> primes{2, 3, 5, 7, 11, 13};
  for (const auto& seq : {kFib, kMersenne, kTrivial, SequenceSpec::parity_demo(),
                          SequenceSpec::parse("eds:0,0,1,-1,0:0,0")}) {
    EntryPointTable table(seq);
    for (unsigned mask = 1; mask < (1u << primes.size()); ++mask) {
      std::vector<std::uint64_t> subset;
      for (std::size_t i = 0; i < primes.size(); ++i)
        if (mask & (1u << i)) subset.push_back(primes[i]);
      MoebiusSum d = moebius_sum_direct(table, pi_custom(subset));
      MoebiusSum s = moebius_sum_structured(table, pi_custom(subset));
      CAPTURE(seq.name());
      CAPTURE(mask);
      CHECK(d.value == s.value);
      CHECK(d.value >= 0);
      CHECK(d.value <= 1);
    }
  }
}

TEST_CASE("infinite-entry primes can be dropped without changing M") {
  EntryPointTable mers(kMersenne);
  MoebiusSum with2 = moebius_sum(mers, pi_custom({2, 3, 5, 7}));
  MoebiusSum without2 = moebius_sum(mers, pi_custom({3, 5, 7}));
  CHECK(with2.value == without2.value);
  CHECK(with2.dropped_primes == std::vector<std::uint64_t>{2});
}

TEST_CASE("M(Pi) dominates phi(m_Pi)/m_Pi when m_Pi is finite") {
  EntryPointTable fib(kFib);
  for (double z : {5.0, 10.0, 20.0}) {
    Rational ratio = phi_ratio_of_mPi(fib, z);
    Rational M = moebius_sum(fib, SquarefreeModulus::primes_below(z)).value;
    CHECK(M >= ratio);
  }
}

TEST_CASE("phi ratio example and failure mode") {
  EntryPointTable mers(kMersenne);
  CHECK(phi_ratio_of_mPi(mers, 8.0, {2}) == make_rational(1, 3));  // m_Pi = lcm(2,4,3) = 12
  CHECK_THROWS_AS(phi_ratio_of_mPi(mers, 8.0), Error);             // m_2 is infinite
}

TEST_CASE("count_A worked example") {
  EntryPointTable mers(kMersenne);
  SieveCount sc = count_A(mers, 100, pi_custom({2, 3, 5}));
  CHECK(sc.count == 50);  // m_2 = inf ignored, m_3 = 2, m_5 = 4: evens excluded
  CHECK(sc.predicted == Rational(50));
  CHECK(sc.within_bound);

  SieveCount all = count_A(mers, 100, pi_custom({}));
  CHECK(all.count == 100);
}

TEST_CASE("sieve counts match the term-level definition") {
  // directly: n <= N with gcd(x_n, Pi) = 1, through exact terms
  for (const auto& seq : {kFib, kMersenne}) {
    EntryPointTable table(seq);
    SquarefreeModulus pi = SquarefreeModulus::primes_below(10.0);
    Natural pival = pi.value();
    SieveCount sc = count_A(table, 300, pi);
    std::uint64_t direct = 0;
    for (std::uint64_t n = 1; n <= 300; ++n)
      if (gcd_n(term(seq, n), pival) == 1) ++direct;
    CHECK(sc.count == direct);
  }
}

TEST_CASE("Lemma-style bound |count - N M| <= 2^omega on a grid") {
  for (const auto& seq : {kFib, kMersenne}) {
    EntryPointTable table(seq);
    for (std::uint64_t N : {1000ull, 10'000ull}) {
      for (double z : {2.0, 7.0, 19.0}) {
        SieveCount sc = count_A(table, N, SquarefreeModulus::primes_below(z));
        CAPTURE(seq.name());
        CAPTURE(N);
        CAPTURE(z);
        CHECK(sc.within_bound);
      }
    }
  }
}

TEST_CASE("count_A is nonincreasing in z") {
  EntryPointTable fib(kFib);
  std::uint64_t prev = 1'000;
  for (double z : {2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0}) {
    SieveCount sc = count_A(fib, 1'000, SquarefreeModulus::primes_below(z));
    CHECK(sc.count <= prev);
    prev = sc.count;
  }
}

TEST_CASE("rough experiment shapes") {
  EntryPointTable fib(kFib);
  CHECK_THROWS_AS(rough_experiment(fib, 15), Error);
  RoughReport r100 = rough_experiment(fib, 100);
  CHECK(r100.z >= 2.0);
  CHECK(r100.count <= 100);
  RoughReport r = rough_experiment(fib, 100'000);
  CHECK(r.count > 0);
  CHECK(r.fitted_c > 0);
  CHECK(r.n_over_loglog > r.n_over_logloglog / 10);  // both are finite, sane
}

TEST_CASE("prime term density checkpoints") {
  PrimeDensityReport parity = prime_term_density(SequenceSpec::parity_demo(), 1000);
  for (const auto& row : parity.rows)
    if (row.horizon >= 100) CHECK(row.fraction == doctest::Approx(0.5).epsilon(0.1));

  PrimeDensityReport mers = prime_term_density(kMersenne, 300);
  REQUIRE(mers.rows.size() == 3);
  CHECK(mers.rows[0].fraction > mers.rows[1].fraction);
  CHECK(mers.rows[1].fraction > mers.rows[2].fraction);

  PrimeDensityReport triv = prime_term_density(kTrivial, 100'000);
  REQUIRE(triv.rows.size() == 3);
  CHECK(triv.rows[0].fraction > triv.rows[1].fraction);
  CHECK(triv.rows[1].fraction > triv.rows[2].fraction);
}

TEST_CASE("primitive divisor checks") {
  // the classical exception: F_12 = 144 = 2^4 3^2 with m_2 = 3, m_3 = 4
  CHECK_FALSE(primitive_divisor_check(kFib, 12).has_value());
  auto f13 = primitive_divisor_check(kFib, 13);
  REQUIRE(f13.has_value());
  CHECK(*f13 == 233);
  // 63 = 7 * 9 with m_7 = 3, m_3 = 2
  CHECK_FALSE(primitive_divisor_check(kMersenne, 6).has_value());
  auto f19 = primitive_divisor_check(kFib, 19);
  REQUIRE(f19.has_value());
  CHECK(*f19 == 37);  // F_19 = 4181 = 37 * 113, both primitive; 37 is smallest
}

TEST_CASE("figure1 sweep emits one row per prime") {
  EntryPointTable mers(kMersenne);
  auto rows = figure1_sweep(mers, 60);
  REQUIRE(rows.size() == 17);
  for (const auto& row : rows) {
    CAPTURE(row.z);
    REQUIRE(row.error.empty());
    REQUIRE(row.value.has_value());
    CHECK(*row.value > 0);
    CHECK(*row.value <= 1);
  }
  // single-row sweep: M = 1 - 1/m_2 with m_2 infinite for Mersenne, so M = 1
  auto tiny = figure1_sweep(mers, 2);
  REQUIRE(tiny.size() == 1);
  CHECK(*tiny[0].value == Rational(1));
  // for Fibonacci, z = 2 gives 1 - 1/m_2 = 1 - 1/3
  EntryPointTable fib(kFib);
  auto tiny_fib = figure1_sweep(fib, 2);
  CHECK(*tiny_fib[0].value == make_rational(2, 3));
}

TEST_CASE("figure1 parallel rows match sequential") {
  EntryPointTable fib(kFib);
  auto seq_rows = figure1_sweep(fib, 40, MoebiusStrategy::auto_select, false, 1);
  auto par_rows = figure1_sweep(fib, 40, MoebiusStrategy::auto_select, false, 4);
  REQUIRE(seq_rows.size() == par_rows.size());
  for (std::size_t i = 0; i < seq_rows.size(); ++i) CHECK(*seq_rows[i].value == *par_rows[i].value);
}

TEST_CASE("trivial-sequence figure1 matches the Euler product") {
  EntryPointTable triv(kTrivial);
  auto rows = figure1_sweep(triv, 30);
  for (const auto& row : rows) {
    Rational product = 1;
    for (std::uint64_t p : primes_up_to(row.z)) product *= make_rational(p - 1, p);
    CHECK(*row.value == product);
  }
}

TEST_CASE("ordered-by-entry sum for the trivial sequence") {
  EntryPointTable triv(kTrivial);
  // m_d = d, so the sum is over squarefree d <= z
  Rational got = ordered_by_md_sum(triv, 10);
  Rational want = 0;
  for (std::uint64_t d = 1; d <= 10; ++d) {
    Factorization f = factorize_u64(d);
    if (!f.squarefree()) continue;
    want += make_rational(moebius(f), d);
  }
  CHECK(got == want);  // 19/210
  CHECK(got == make_rational(19, 210));
}

TEST_CASE("omega guard for the direct strategy") {
  EntryPointTable fib(kFib);
  Limits tight;
  tight.omega_direct_limit = 3;
  EntryPointTable guarded(kFib, tight);
  CHECK_THROWS_AS(moebius_sum_direct(guarded, SquarefreeModulus::primes_below(20.0)), Error);
  CHECK_NOTHROW(moebius_sum_structured(guarded, SquarefreeModulus::primes_below(20.0)));
}
