#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdsieve/errors.hpp"
#include "sdsieve/limits.hpp"

namespace sdsieve {

// Arbitrary-precision non-negative integer. Arithmetic is exact.
using Natural = mpz_class;
// Exact rational, always kept canonical (lowest terms, positive denominator).
using Rational = mpq_class;

inline Rational make_rational(const Natural& num, const Natural& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// "num/den" with canonical sign, e.g. "4/15", "1/1".
std::string rational_string(const Rational& q);

inline Natural gcd_n(const Natural& a, const Natural& b) {
  Natural g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Natural lcm_n(const Natural& a, const Natural& b) {
  Natural l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline Natural pow_mod(const Natural& base, const Natural& exp, const Natural& mod) {
  Natural r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return r;
}

// Non-negative remainder, also for negative a.
inline Natural mod_nonneg(const Natural& a, const Natural& m) {
  Natural r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline bool divides(const Natural& d, const Natural& n) {
  return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

struct PrimePower {
  Natural prime;
  unsigned exponent;
};

// Sorted exact prime factorization; product of p^e reconstructs the input.
struct Factorization {
  std::vector<PrimePower> factors;

  Natural value() const;
  unsigned omega() const { return static_cast<unsigned>(factors.size()); }
  std::uint64_t big_omega() const;
  bool squarefree() const;
};

// Ascending primes p <= z.
std::vector<std::uint64_t> primes_up_to(std::uint64_t z);

enum class Primality { composite, prime, probable_prime };

// Deterministic Miller-Rabin verdict below 2^64; Baillie-PSW above (reported
// as probable_prime).
Primality classify_prime(const Natural& n);
bool is_prime(const Natural& n);
bool is_prime_u64(std::uint64_t n);

// Trial division by primes <= 10^6, then Brent-cycle Pollard rho with a fixed
// seed schedule. Fails with factoring_timeout once the iteration budget is
// exhausted.
Factorization factorize(const Natural& n, const Limits& limits = default_limits());
Factorization factorize_u64(std::uint64_t n);

Natural euler_phi(const Factorization& f);
int moebius(const Factorization& f);

// Ascending divisors. With no cap the count is guarded by limits.divisor_limit;
// with a cap the first `cap` divisors are produced even when the full count
// would overflow the guard.
std::vector<Natural> divisors(const Factorization& f,
                              std::optional<std::uint64_t> cap = std::nullopt,
                              const Limits& limits = default_limits());

}  // namespace sdsieve
