#include "sdsieve/entry_points.hpp"

#include <algorithm>
#include <numeric>

namespace sdsieve {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t to_mod(long long v, std::uint64_t p) {
  long long r = v % static_cast<long long>(p);
  if (r < 0) r += static_cast<long long>(p);
  return static_cast<std::uint64_t>(r);
}

EntryPoint finite_entry(const Natural& d, Natural m, std::string method) {
  EntryPoint e;
  e.outcome = EntryPoint::Outcome::finite;
  e.d = d;
  e.m = std::move(m);
  e.method = std::move(method);
  return e;
}

EntryPoint infinite_entry(const Natural& d, std::string certificate, std::string method) {
  EntryPoint e;
  e.outcome = EntryPoint::Outcome::infinite;
  e.d = d;
  e.certificate = std::move(certificate);
  e.method = std::move(method);
  return e;
}

EntryPoint unresolved_entry(const Natural& d, std::uint64_t bound, std::string method) {
  EntryPoint e;
  e.outcome = EntryPoint::Outcome::unresolved;
  e.d = d;
  e.search_bound = bound;
  e.method = std::move(method);
  return e;
}

// Multiplicative order of 2 mod p (p odd prime) by divisor descent on p - 1.
std::uint64_t order_of_two(std::uint64_t p) {
  std::uint64_t order = p - 1;
  Factorization f = factorize_u64(p - 1);
  for (const auto& pp : f.factors) {
    std::uint64_t q = pp.prime.get_ui();
    while (order % q == 0) {
      std::uint64_t cand = order / q;
      std::uint64_t r = 1 % p, b = 2 % p, e = cand;
      while (e) {
        if (e & 1) r = mulmod(r, b, p);
        b = mulmod(b, b, p);
        e >>= 1;
      }
      if (r != 1) break;
      order = cand;
    }
  }
  return order;
}

// Certified scan for Lucas kinds at special primes (p | 2D, p coprime to Q):
// the state map on (U_n, U_{n+1}) mod p is invertible, so the orbit is purely
// periodic and one full period decides.
EntryPoint lucas_entry_by_period(const Natural& d, long long P, long long Q, std::uint64_t p) {
  std::uint64_t a = to_mod(P, p);
  std::uint64_t nq = to_mod(-Q, p);
  std::uint64_t u = 1 % p, v = a;  // (U_1, U_2)
  const std::uint64_t u0 = u, v0 = v;
  std::uint64_t n = 1;
  const std::uint64_t cap = p * p + 2;
  while (n <= cap) {
    if (u == 0) return finite_entry(d, Natural(n), "scan");
    std::uint64_t next = (mulmod(a, v, p) + mulmod(nq, u, p)) % p;
    u = v;
    v = next;
    ++n;
    if (u == u0 && v == v0)
      return infinite_entry(d, "full period mod " + std::to_string(p) + " exhausted", "scan");
  }
  raise(Errc::internal, "period scan did not close");
}

EntryPoint lucas_entry_prime(const SequenceSpec& seq, std::uint64_t p) {
  const Natural d(p);
  long long P = std::llabs(seq.lucas_p());
  long long Q = seq.lucas_q();
  long long D = P * P - 4 * Q;
  if (Q % static_cast<long long>(p) == 0) {
    // x_n = |U_n| with U_n == P^{n-1} mod p, and p cannot divide P
    return infinite_entry(d, "p | Q so x_n == P^(n-1) mod p, never 0", "scan");
  }
  if (p == 2 || D % static_cast<long long>(p) == 0) return lucas_entry_by_period(d, P, Q, p);
  // rank of apparition divides p - (D|p)
  Natural Dz(static_cast<long>(D)), pz(p);
  int chi = mpz_legendre(Dz.get_mpz_t(), pz.get_mpz_t());
  std::uint64_t bound = chi == 1 ? p - 1 : p + 1;
  Factorization f = factorize_u64(bound);
  for (const Natural& cand : divisors(f)) {
    if (term_divisible(seq, cand.get_ui(), d))
      return finite_entry(d, cand, "order-divisor");
  }
  raise(Errc::internal, "no divisor of p - (D|p) is an apparition index");
}

EntryPoint eds_entry_prime(const SequenceSpec& seq, std::uint64_t p, const Limits& limits) {
  const Natural d(p);
  const EdsContext& ctx = seq.eds_context();
  if (ctx.curve().good_reduction(p)) {
    std::uint64_t m = point_order(ctx, p, limits);
    return finite_entry(d, Natural(m), "order-divisor");
  }
  CurveModP c(ctx.curve(), p);
  FpPoint base = c.reduce(ctx.base());
  if (c.nonsingular(base)) {
    // reduction is a homomorphism on the smooth locus; scan the orbit
    FpPoint acc = base;
    std::uint64_t cap = 3 * p + 3;
    for (std::uint64_t n = 1; n <= cap; ++n) {
      if (acc.identity) return finite_entry(d, Natural(n), "scan");
      acc = c.add(acc, base);
    }
    raise(Errc::internal, "smooth-locus orbit did not close");
  }
  // Singular reduction: direct divisibility scan up to 24p, within budget.
  // p | b_n iff p divides the denominator of x(nP) (which is b_n^2).
  const std::uint64_t scan_bound = 24 * p;
  AffinePoint acc = ctx.base();
  for (std::uint64_t n = 1; n <= scan_bound; ++n) {
    if (!acc) raise(Errc::internal, "non-torsion point hit the identity");
    const Natural den = acc->first.get_den();
    if (mpz_divisible_ui_p(den.get_mpz_t(), p)) return finite_entry(d, Natural(n), "scan");
    if (mpz_sizeinbase(den.get_mpz_t(), 2) > limits.term_bit_budget)
      return unresolved_entry(d, scan_bound, "scan");
    acc = curve_add(ctx.curve(), acc, ctx.base());
  }
  return unresolved_entry(d, scan_bound, "scan");
}

}  // namespace

std::string EntryPoint::outcome_string() const {
  switch (outcome) {
    case Outcome::finite: return "finite";
    case Outcome::infinite: return "infinite";
    case Outcome::unresolved: return "unresolved";
  }
  return "?";
}

std::string EntryPoint::m_string() const {
  switch (outcome) {
    case Outcome::finite: return m.get_str();
    case Outcome::infinite: return "inf";
    case Outcome::unresolved: return "?<=" + std::to_string(search_bound);
  }
  return "?";
}

EntryPoint entry_point_prime(const SequenceSpec& seq, std::uint64_t p, const Limits& limits) {
  if (!is_prime_u64(p)) raise(Errc::spec_invalid, std::to_string(p) + " is not prime");
  const Natural d(p);
  switch (seq.kind()) {
    case SequenceKind::trivial:
      return finite_entry(d, d, "scan");
    case SequenceKind::parity_demo:
      if (p == 2) return finite_entry(d, Natural(2), "scan");
      return infinite_entry(d, "terms take only the values 1 and 2", "scan");
    case SequenceKind::mersenne:
      if (p == 2) return infinite_entry(d, "2^n - 1 is always odd", "scan");
      return finite_entry(d, Natural(order_of_two(p)), "order-divisor");
    case SequenceKind::fibonacci:
    case SequenceKind::lucas:
      return lucas_entry_prime(seq, p);
    case SequenceKind::eds:
      return eds_entry_prime(seq, p, limits);
  }
  raise(Errc::internal, "unreachable");
}

EntryPoint entry_point(const SequenceSpec& seq, const Natural& d, const Limits& limits) {
  if (d < 1) raise(Errc::spec_invalid, "entry_point requires d >= 1");
  if (d == 1) return finite_entry(d, 1, "lcm-composition");
  Factorization f = factorize(d, limits);
  if (!f.squarefree())
    raise(Errc::not_squarefree, d.get_str() + " has a squared prime factor");
  if (f.omega() == 1 && mpz_fits_ulong_p(d.get_mpz_t()))
    return entry_point_prime(seq, d.get_ui(), limits);

  Natural m = 1;
  std::uint64_t worst_bound = 0;
  bool any_unresolved = false;
  for (const auto& pp : f.factors) {
    if (!mpz_fits_ulong_p(pp.prime.get_mpz_t()))
      raise(Errc::spec_invalid, "prime factor " + pp.prime.get_str() + " too large");
    EntryPoint e = entry_point_prime(seq, pp.prime.get_ui(), limits);
    if (e.infinite()) {
      EntryPoint out = infinite_entry(d, "m_" + pp.prime.get_str() + " is infinite: " + e.certificate,
                                      "lcm-composition");
      return out;
    }
    if (e.unresolved()) {
      any_unresolved = true;
      worst_bound = std::max(worst_bound, e.search_bound);
      continue;
    }
    m = lcm_n(m, e.m);
  }
  if (any_unresolved) return unresolved_entry(d, worst_bound, "lcm-composition");
  return finite_entry(d, m, "lcm-composition");
}

EntryPoint EntryPointTable::prime(std::uint64_t p) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = memo_.find(p);
    if (it != memo_.end()) return it->second;
  }
  EntryPoint e = entry_point_prime(seq_, p, limits_);
  std::lock_guard<std::mutex> lock(mutex_);
  memo_.emplace(p, e);
  return e;
}

EntryLawReport verify_entry_laws(const SequenceSpec& seq, std::uint64_t dmax, std::uint64_t nmax,
                                 const Limits& limits) {
  EntryLawReport report;
  std::vector<Natural> x(nmax + 1);
  for (std::uint64_t n = 1; n <= nmax; ++n) x[n] = term(seq, n, limits);

  std::vector<std::uint64_t> sf;
  std::vector<EntryPoint> eps;
  for (std::uint64_t d = 1; d <= dmax; ++d) {
    if (!factorize_u64(d).squarefree()) continue;
    sf.push_back(d);
    eps.push_back(entry_point(seq, Natural(d), limits));
  }

  auto fail = [&](std::string msg) {
    report.pass = false;
    report.counterexample = std::move(msg);
    return report;
  };

  // Lemma: d | x_n iff m_d | n.
  for (std::size_t i = 0; i < sf.size(); ++i) {
    const EntryPoint& e = eps[i];
    if (e.unresolved()) return fail("unresolved entry point for d = " + std::to_string(sf[i]));
    for (std::uint64_t n = 1; n <= nmax; ++n) {
      bool div = divides(Natural(sf[i]), x[n]);
      bool law = e.finite() && divides(e.m, Natural(n));
      ++report.checks;
      if (div != law)
        return fail("d = " + std::to_string(sf[i]) + ", n = " + std::to_string(n) +
                    ": divisibility and entry point disagree");
    }
  }

  // Lemma: k | j implies m_k | m_j.
  for (std::size_t i = 0; i < sf.size(); ++i) {
    for (std::size_t j = 0; j < sf.size(); ++j) {
      if (sf[j] % sf[i] != 0) continue;
      ++report.checks;
      const EntryPoint &ek = eps[i], &ej = eps[j];
      if (ej.finite()) {
        if (!ek.finite() || !divides(ek.m, ej.m))
          return fail("m_" + std::to_string(sf[i]) + " does not divide m_" + std::to_string(sf[j]));
      }
    }
  }

  // Lemma: m_{[d1,d2]} = [m_{d1}, m_{d2}] for coprime pairs.
  for (std::size_t i = 0; i < sf.size(); ++i) {
    for (std::size_t j = i + 1; j < sf.size(); ++j) {
      if (std::gcd(sf[i], sf[j]) != 1) continue;
      ++report.checks;
      EntryPoint prod = entry_point(seq, Natural(sf[i]) * Natural(sf[j]), limits);
      const EntryPoint &e1 = eps[i], &e2 = eps[j];
      if (e1.finite() && e2.finite()) {
        if (!prod.finite() || prod.m != lcm_n(e1.m, e2.m))
          return fail("lcm law fails for d1 = " + std::to_string(sf[i]) +
                      ", d2 = " + std::to_string(sf[j]));
      } else if (e1.infinite() || e2.infinite()) {
        if (!prod.infinite())
          return fail("product entry should be infinite for d1 = " + std::to_string(sf[i]) +
                      ", d2 = " + std::to_string(sf[j]));
      }
    }
  }
  return report;
}

std::optional<std::uint64_t> smallest_p_with_q_dividing_mp(const SequenceSpec& seq,
                                                           std::uint64_t q, std::uint64_t pmax,
                                                           const Limits& limits) {
  for (std::uint64_t p : primes_up_to(pmax)) {
    EntryPoint e = entry_point_prime(seq, p, limits);
    if (e.finite() && divides(Natural(q), e.m)) return p;
  }
  return std::nullopt;
}

}  // namespace sdsieve
