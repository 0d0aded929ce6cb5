#include "sdsieve/arith.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <numeric>
#include <set>

namespace sdsieve {

std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::input_zero: return "InputZero";
    case Errc::divisor_overflow: return "DivisorOverflow";
    case Errc::omega_too_large: return "OmegaTooLarge";
    case Errc::index_too_large: return "IndexTooLarge";
    case Errc::bad_modulus: return "BadModulus";
    case Errc::not_available: return "NotAvailable";
    case Errc::spec_invalid: return "SpecInvalid";
    case Errc::not_squarefree: return "NotSquarefree";
    case Errc::unresolved_entry: return "UnresolvedEntry";
    case Errc::factoring_timeout: return "FactoringTimeout";
    case Errc::seed_too_large: return "SeedTooLarge";
    case Errc::seed_contains_unit: return "SeedContainsUnit";
    case Errc::not_divisor_closed: return "NotDivisorClosed";
    case Errc::no_envelope: return "NoEnvelope";
    case Errc::not_integral_point: return "NotIntegralPoint";
    case Errc::bad_reduction: return "BadReduction";
    case Errc::point_not_on_curve: return "PointNotOnCurve";
    case Errc::non_torsion_required: return "NonTorsionRequired";
    case Errc::cube_extraction_failure: return "CubeExtractionFailure";
    case Errc::internal: return "InternalError";
  }
  return "UnknownError";
}

std::string rational_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t z) {
  if (z > 1'000'000'000ull)
    raise(Errc::index_too_large, "prime sieve bound " + std::to_string(z) + " exceeds 1e9");
  std::vector<std::uint64_t> primes;
  if (z < 2) return primes;
  std::vector<bool> composite(z + 1, false);
  for (std::uint64_t p = 2; p <= z; ++p) {
    if (composite[p]) continue;
    primes.push_back(p);
    if (p <= z / p)
      for (std::uint64_t m = p * p; m <= z; m += p) composite[m] = true;
  }
  return primes;
}

namespace {

const std::vector<std::uint64_t>& trial_primes() {
  static std::once_flag once;
  static std::vector<std::uint64_t> table;
  std::call_once(once, [] { table = primes_up_to(1'000'000); });
  return table;
}

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, b, m);
    b = mulmod_u64(b, b, m);
    e >>= 1;
  }
  return r;
}

bool miller_rabin_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic tiered base sets (Jaeschke / Sinclair bounds).
  static constexpr std::array<std::uint64_t, 12> kAll = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  std::size_t base_count = 12;
  if (n < 1'373'653ull) base_count = 2;
  else if (n < 3'215'031'751ull) base_count = 4;
  else if (n < 3'474'749'660'383ull) base_count = 6;
  else if (n < 341'550'071'728'321ull) base_count = 7;
  else if (n < 3'825'123'056'546'413'051ull) base_count = 9;
  for (std::size_t i = 0; i < base_count; ++i) {
    std::uint64_t a = kAll[i];
    std::uint64_t x = powmod_u64(a % n, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

bool strong_mr_base2(const Natural& n) {
  Natural d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  Natural x = pow_mod(2, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned long r = 1; r < s; ++r) {
    x = mod_nonneg(x * x, n);
    if (x == n - 1) return true;
  }
  return false;
}

// Strong Lucas probable-prime test with Selfridge parameters (method A).
bool strong_lucas_selfridge(const Natural& n) {
  if (mpz_perfect_square_p(n.get_mpz_t())) return false;
  long d_abs = 5;
  int sign = 1;
  Natural D;
  while (true) {
    D = sign > 0 ? Natural(d_abs) : Natural(-d_abs);
    int j = mpz_jacobi(D.get_mpz_t(), n.get_mpz_t());
    if (j == -1) break;
    if (j == 0 && Natural(d_abs) != n) return false;
    d_abs += 2;
    sign = -sign;
    if (d_abs > 1'000'000) return false;  // unreachable for non-squares
  }
  // P = 1, Q = (1 - D) / 4.
  Natural Q = (1 - D) / 4;
  Natural dd = n + 1;
  unsigned long s = mpz_scan1(dd.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(dd.get_mpz_t(), dd.get_mpz_t(), s);

  auto halve = [&](Natural v) {
    if (mpz_odd_p(v.get_mpz_t())) v += n;
    v >>= 1;
    return mod_nonneg(v, n);
  };

  // Walk the bits of dd computing (U_k, V_k, Q^k) mod n.
  Natural U = 0, V = 2, Qk = 1;
  long bits = static_cast<long>(mpz_sizeinbase(dd.get_mpz_t(), 2));
  for (long i = bits - 1; i >= 0; --i) {
    // double: k -> 2k
    U = mod_nonneg(U * V, n);
    V = mod_nonneg(V * V - 2 * Qk, n);
    Qk = mod_nonneg(Qk * Qk, n);
    if (mpz_tstbit(dd.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) {
      // 2k -> 2k+1 with P = 1
      Natural U1 = halve(U + V);
      Natural V1 = halve(mod_nonneg(D, n) * U + V);
      U = U1;
      V = V1;
      Qk = mod_nonneg(Qk * mod_nonneg(Q, n), n);
    }
  }
  if (U == 0 || V == 0) return true;
  for (unsigned long r = 1; r < s; ++r) {
    V = mod_nonneg(V * V - 2 * Qk, n);
    if (V == 0) return true;
    Qk = mod_nonneg(Qk * Qk, n);
  }
  return false;
}

std::uint64_t pollard_brent_u64(std::uint64_t n, std::uint64_t& budget) {
  if ((n & 1) == 0) return 2;
  constexpr std::uint64_t kBatch = 128;
  for (std::uint64_t c = 1; c < 64; ++c) {
    auto step = [&](std::uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
    std::uint64_t y = 2, g = 1, q = 1, x = 0, ys = 0, r = 1;
    while (g == 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = step(y);
      for (std::uint64_t k = 0; k < r && g == 1; k += kBatch) {
        if (budget < kBatch)
          raise(Errc::factoring_timeout, "rho budget exhausted on " + std::to_string(n));
        budget -= kBatch;
        ys = y;
        std::uint64_t steps = std::min(kBatch, r - k);
        for (std::uint64_t i = 0; i < steps; ++i) {
          y = step(y);
          q = mulmod_u64(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
      r <<= 1;
    }
    if (g == n) {
      g = 1;
      while (g == 1) {
        ys = step(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      }
    }
    if (g != n) return g;
  }
  raise(Errc::factoring_timeout, "rho failed on " + std::to_string(n));
}

Natural pollard_brent_mpz(const Natural& n, std::uint64_t& budget) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  constexpr std::uint64_t kBatch = 128;
  for (unsigned c = 1; c < 64; ++c) {
    auto step = [&](const Natural& v) { return mod_nonneg(v * v + c, n); };
    Natural y = 2, g = 1, q = 1, x = 0, ys = 0;
    std::uint64_t r = 1;
    while (g == 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = step(y);
      for (std::uint64_t k = 0; k < r && g == 1; k += kBatch) {
        if (budget < kBatch) raise(Errc::factoring_timeout, "rho budget exhausted");
        budget -= kBatch;
        ys = y;
        std::uint64_t steps = std::min(kBatch, r - k);
        for (std::uint64_t i = 0; i < steps; ++i) {
          y = step(y);
          Natural diff = x > y ? x - y : y - x;
          q = mod_nonneg(q * diff, n);
        }
        g = gcd_n(q, n);
      }
      r <<= 1;
    }
    if (g == n) {
      g = 1;
      while (g == 1) {
        ys = step(ys);
        Natural diff = x > ys ? x - ys : ys - x;
        g = gcd_n(diff, n);
      }
    }
    if (g != n) return g;
  }
  raise(Errc::factoring_timeout, "rho failed");
}

}  // namespace

Primality classify_prime(const Natural& n) {
  if (n < 2) return Primality::composite;
  if (mpz_fits_ulong_p(n.get_mpz_t()))
    return miller_rabin_u64(n.get_ui()) ? Primality::prime : Primality::composite;
  // Quick small-prime screen before the expensive tests.
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                          29ull, 31ull, 37ull, 41ull, 43ull, 47ull}) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return Primality::composite;
  }
  if (!strong_mr_base2(n)) return Primality::composite;
  if (!strong_lucas_selfridge(n)) return Primality::composite;
  return Primality::probable_prime;
}

bool is_prime(const Natural& n) { return classify_prime(n) != Primality::composite; }

bool is_prime_u64(std::uint64_t n) { return miller_rabin_u64(n); }

Natural Factorization::value() const {
  Natural v = 1;
  for (const auto& pp : factors) {
    Natural t;
    mpz_pow_ui(t.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent);
    v *= t;
  }
  return v;
}

std::uint64_t Factorization::big_omega() const {
  std::uint64_t total = 0;
  for (const auto& pp : factors) total += pp.exponent;
  return total;
}

bool Factorization::squarefree() const {
  return std::all_of(factors.begin(), factors.end(),
                     [](const PrimePower& pp) { return pp.exponent == 1; });
}

Factorization factorize(const Natural& n, const Limits& limits) {
  if (n == 0) raise(Errc::input_zero, "factorize(0)");
  if (n < 0) raise(Errc::internal, "factorize of negative value");
  Factorization result;
  if (n == 1) return result;

  Natural m = n;
  for (std::uint64_t p : trial_primes()) {
    if (Natural(p) * p > m) break;
    if (!mpz_divisible_ui_p(m.get_mpz_t(), p)) continue;
    unsigned e = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      ++e;
    }
    result.factors.push_back({Natural(p), e});
  }
  if (m == 1) return result;

  std::uint64_t budget = limits.factor_iteration_budget;
  std::vector<Natural> stack{m};
  std::vector<Natural> primes_found;
  while (!stack.empty()) {
    Natural v = stack.back();
    stack.pop_back();
    if (v == 1) continue;
    if (is_prime(v)) {
      primes_found.push_back(v);
      continue;
    }
    Natural f = mpz_fits_ulong_p(v.get_mpz_t())
                    ? Natural(pollard_brent_u64(v.get_ui(), budget))
                    : pollard_brent_mpz(v, budget);
    stack.push_back(f);
    stack.push_back(v / f);
  }
  std::sort(primes_found.begin(), primes_found.end());
  for (std::size_t i = 0; i < primes_found.size();) {
    std::size_t j = i;
    while (j < primes_found.size() && primes_found[j] == primes_found[i]) ++j;
    result.factors.push_back({primes_found[i], static_cast<unsigned>(j - i)});
    i = j;
  }
  std::sort(result.factors.begin(), result.factors.end(),
            [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
  return result;
}

Factorization factorize_u64(std::uint64_t n) { return factorize(Natural(n)); }

Natural euler_phi(const Factorization& f) {
  Natural v = 1;
  for (const auto& pp : f.factors) {
    Natural t;
    mpz_pow_ui(t.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent - 1);
    v *= t * (pp.prime - 1);
  }
  return v;
}

int moebius(const Factorization& f) {
  if (!f.squarefree()) return 0;
  return f.omega() % 2 == 0 ? 1 : -1;
}

std::vector<Natural> divisors(const Factorization& f, std::optional<std::uint64_t> cap,
                              const Limits& limits) {
  Natural count = 1;
  for (const auto& pp : f.factors) count *= pp.exponent + 1;

  if (count <= limits.divisor_limit) {
    std::vector<Natural> divs{1};
    for (const auto& pp : f.factors) {
      std::size_t base = divs.size();
      Natural pe = 1;
      for (unsigned e = 1; e <= pp.exponent; ++e) {
        pe *= pp.prime;
        for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pe);
      }
    }
    std::sort(divs.begin(), divs.end());
    if (cap && divs.size() > *cap) divs.resize(*cap);
    return divs;
  }

  if (!cap)
    raise(Errc::divisor_overflow,
          "divisor count " + count.get_str() + " exceeds guard " + std::to_string(limits.divisor_limit));

  // Lazily emit the cap smallest divisors.
  std::set<Natural> frontier{Natural(1)};
  std::vector<Natural> out;
  while (!frontier.empty() && out.size() < *cap) {
    Natural d = *frontier.begin();
    frontier.erase(frontier.begin());
    out.push_back(d);
    for (const auto& pp : f.factors) {
      Natural nd = d * pp.prime;
      // extend only while the exponent of pp.prime in nd stays legal
      Natural probe = d;
      unsigned e = 0;
      while (divides(pp.prime, probe)) {
        probe /= pp.prime;
        ++e;
      }
      if (e < pp.exponent) frontier.insert(nd);
    }
  }
  return out;
}

}  // namespace sdsieve
