#include "sdsieve/sieve_sums.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <set>

namespace sdsieve {

namespace {

Natural pow2(unsigned e) {
  Natural v = 1;
  v <<= e;
  return v;
}

struct ResolvedPi {
  std::vector<std::pair<std::uint64_t, Natural>> finite;  // (p, m_p)
  std::vector<std::uint64_t> dropped;                     // infinite entries
  Natural m_pi = 1;                                       // lcm over finite entries
};

ResolvedPi resolve_primes(const EntryPointTable& table, const SquarefreeModulus& pi) {
  ResolvedPi r;
  for (std::uint64_t p : pi.primes) {
    EntryPoint e = table.prime(p);
    if (e.unresolved())
      raise(Errc::unresolved_entry,
            "m_" + std::to_string(p) + " unresolved (bound " + std::to_string(e.search_bound) + ")");
    if (e.infinite()) {
      r.dropped.push_back(p);
      continue;
    }
    r.finite.emplace_back(p, e.m);
    r.m_pi = lcm_n(r.m_pi, e.m);
  }
  return r;
}

EntryPoint compose_pi_entry(const SquarefreeModulus& pi, const ResolvedPi& r) {
  EntryPoint e;
  e.d = pi.value();
  e.method = "lcm-composition";
  if (!r.dropped.empty()) {
    e.outcome = EntryPoint::Outcome::infinite;
    e.certificate = "m_" + std::to_string(r.dropped.front()) + " is infinite";
  } else {
    e.outcome = EntryPoint::Outcome::finite;
    e.m = r.m_pi;
  }
  return e;
}

}  // namespace

SquarefreeModulus SquarefreeModulus::primes_below(double z) {
  SquarefreeModulus m;
  m.provenance = Provenance::all_below;
  m.z = z;
  if (z >= 2.0) m.primes = primes_up_to(static_cast<std::uint64_t>(z));
  return m;
}

SquarefreeModulus SquarefreeModulus::primes_below_excluding(double z, std::vector<std::uint64_t> S) {
  SquarefreeModulus m = primes_below(z);
  m.provenance = Provenance::all_below_excluding;
  std::sort(S.begin(), S.end());
  m.excluded = S;
  std::erase_if(m.primes, [&](std::uint64_t p) { return std::binary_search(S.begin(), S.end(), p); });
  return m;
}

SquarefreeModulus SquarefreeModulus::custom(std::vector<std::uint64_t> primes) {
  SquarefreeModulus m;
  m.provenance = Provenance::custom;
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (std::uint64_t p : primes)
    if (!is_prime_u64(p)) raise(Errc::spec_invalid, std::to_string(p) + " is not prime");
  m.primes = std::move(primes);
  return m;
}

SquarefreeModulus SquarefreeModulus::from_integer(const Natural& pi, const Limits& limits) {
  if (pi < 1) raise(Errc::spec_invalid, "modulus must be >= 1");
  Factorization f = factorize(pi, limits);
  if (!f.squarefree()) raise(Errc::not_squarefree, pi.get_str());
  SquarefreeModulus m;
  m.provenance = Provenance::custom;
  for (const auto& pp : f.factors) {
    if (!mpz_fits_ulong_p(pp.prime.get_mpz_t()))
      raise(Errc::spec_invalid, "prime factor too large for a modulus");
    m.primes.push_back(pp.prime.get_ui());
  }
  return m;
}

SquarefreeModulus SquarefreeModulus::koblitz(std::vector<std::uint64_t> primes, double z) {
  SquarefreeModulus m = custom(std::move(primes));
  m.provenance = Provenance::koblitz_below;
  m.z = z;
  return m;
}

Natural SquarefreeModulus::value() const {
  Natural v = 1;
  for (std::uint64_t p : primes) v *= Natural(p);
  return v;
}

MoebiusSum moebius_sum_direct(const EntryPointTable& table, const SquarefreeModulus& pi) {
  const Limits& limits = table.limits();
  if (pi.omega() > limits.omega_direct_limit)
    raise(Errc::omega_too_large, "omega(Pi) = " + std::to_string(pi.omega()) +
                                     " exceeds the direct-strategy limit " +
                                     std::to_string(limits.omega_direct_limit));
  ResolvedPi r = resolve_primes(table, pi);

  MoebiusSum sum;
  sum.omega = pi.omega();
  sum.used = MoebiusStrategy::direct;
  sum.dropped_primes = r.dropped;
  sum.m_pi = compose_pi_entry(pi, r);
  sum.value = 0;

  // DFS over subsets of the finite-entry primes, composing entry points by lcm.
  const auto& fin = r.finite;
  std::vector<Natural> lcm_stack{Natural(1)};
  std::function<void(std::size_t, int)> walk = [&](std::size_t i, int sign) {
    if (i == fin.size()) {
      Rational t = make_rational(sign, lcm_stack.back());
      sum.value += t;
      return;
    }
    walk(i + 1, sign);
    lcm_stack.push_back(lcm_n(lcm_stack.back(), fin[i].second));
    walk(i + 1, -sign);
    lcm_stack.pop_back();
  };
  walk(0, 1);
  return sum;
}

MoebiusSum moebius_sum_structured(const EntryPointTable& table, const SquarefreeModulus& pi) {
  const Limits& limits = table.limits();
  ResolvedPi r = resolve_primes(table, pi);

  MoebiusSum sum;
  sum.omega = pi.omega();
  sum.used = MoebiusStrategy::structured;
  sum.dropped_primes = r.dropped;
  sum.m_pi = compose_pi_entry(pi, r);
  sum.value = 0;

  // M(Pi) over divisors j of m_Pi (with infinite-entry primes dropped, which
  // leaves the sum unchanged): gcd(x_j, Pi) = 1 iff no m_p divides j.
  Factorization fm = factorize(r.m_pi, limits);
  std::vector<Natural> js = divisors(fm, std::nullopt, limits);
  for (const Natural& j : js) {
    bool coprime = true;
    for (const auto& [p, mp] : r.finite) {
      if (divides(mp, j)) {
        coprime = false;
        break;
      }
    }
    if (!coprime) continue;
    Natural quotient = r.m_pi / j;
    sum.value += make_rational(euler_phi(factorize(quotient, limits)), r.m_pi);
  }
  return sum;
}

MoebiusSum moebius_sum(const EntryPointTable& table, const SquarefreeModulus& pi,
                       MoebiusStrategy strategy) {
  switch (strategy) {
    case MoebiusStrategy::direct:
      return moebius_sum_direct(table, pi);
    case MoebiusStrategy::structured:
      return moebius_sum_structured(table, pi);
    case MoebiusStrategy::both: {
      MoebiusSum a = moebius_sum_direct(table, pi);
      MoebiusSum b = moebius_sum_structured(table, pi);
      if (a.value != b.value)
        raise(Errc::internal, "direct and structured M(Pi) disagree: " + rational_string(a.value) +
                                  " vs " + rational_string(b.value));
      a.used = MoebiusStrategy::both;
      return a;
    }
    case MoebiusStrategy::auto_select: {
      if (pi.omega() <= 10) return moebius_sum(table, pi, MoebiusStrategy::both);
      if (pi.omega() <= table.limits().omega_direct_limit) return moebius_sum_direct(table, pi);
      return moebius_sum_structured(table, pi);
    }
  }
  raise(Errc::internal, "unreachable");
}

Rational phi_ratio_of_mPi(const EntryPointTable& table, double z,
                          const std::vector<std::uint64_t>& S) {
  SquarefreeModulus pi = SquarefreeModulus::primes_below_excluding(z, S);
  Natural m = 1;
  for (std::uint64_t p : pi.primes) {
    EntryPoint e = table.prime(p);
    if (!e.finite())
      raise(Errc::unresolved_entry, "m_" + std::to_string(p) +
                                        " is not finite; exclude p via S before taking the ratio");
    m = lcm_n(m, e.m);
  }
  return make_rational(euler_phi(factorize(m, table.limits())), m);
}

SieveCount count_A(const EntryPointTable& table, std::uint64_t N, const SquarefreeModulus& pi) {
  ResolvedPi r = resolve_primes(table, pi);
  SieveCount sc;
  sc.N = N;
  sc.modulus = pi;

  std::vector<bool> excluded(N + 1, false);
  std::set<std::uint64_t> residues;
  for (const auto& [p, mp] : r.finite) {
    if (mp > N) continue;
    if (!mpz_fits_ulong_p(mp.get_mpz_t())) continue;
    residues.insert(mp.get_ui());
  }
  for (std::uint64_t m : residues)
    for (std::uint64_t n = m; n <= N; n += m) excluded[n] = true;
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= N; ++n)
    if (!excluded[n]) ++count;

  sc.count = count;
  sc.predicted = Rational(N) * moebius_sum(table, pi).value;
  sc.bound = pow2(pi.omega());
  Rational diff = Rational(Natural(count)) - sc.predicted;
  Rational bq(sc.bound);
  sc.within_bound = diff <= bq && -diff <= bq;
  return sc;
}

RoughReport rough_experiment(const EntryPointTable& table, std::uint64_t N) {
  if (N <= 15) raise(Errc::spec_invalid, "rough_experiment needs N > 15");
  RoughReport r;
  r.N = N;
  double logN = std::log(static_cast<double>(N));
  double loglogN = std::log(logN);
  r.z = std::max(2.0, 0.5 * logN * loglogN);
  SieveCount sc = count_A(table, N, SquarefreeModulus::primes_below(r.z));
  r.count = sc.count;
  r.n_over_loglog = static_cast<double>(N) / loglogN;
  r.n_over_logloglog = static_cast<double>(N) / std::log(loglogN);
  r.fitted_c = static_cast<double>(r.count) / r.n_over_loglog;
  return r;
}

PrimeDensityReport prime_term_density(const SequenceSpec& seq, std::uint64_t N,
                                      const Limits& limits) {
  PrimeDensityReport report;
  std::vector<std::uint64_t> checkpoints{std::max<std::uint64_t>(1, N / 10),
                                         std::max<std::uint64_t>(1, N / 3), N};
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

  std::uint64_t primes_seen = 0;
  std::size_t next_cp = 0;
  bool truncated = false;
  for (std::uint64_t n = 1; n <= N && next_cp < checkpoints.size(); ++n) {
    if (!truncated) {
      try {
        Primality verdict = classify_prime(term(seq, n, limits));
        if (verdict != Primality::composite) ++primes_seen;
        if (verdict == Primality::probable_prime) report.probable_used = true;
      } catch (const Error& e) {
        if (e.code() == Errc::index_too_large) truncated = true;
        else throw;
      }
    }
    while (next_cp < checkpoints.size() && n == checkpoints[next_cp]) {
      PrimeDensityRow row;
      row.horizon = checkpoints[next_cp];
      row.prime_terms = primes_seen;
      row.fraction = static_cast<double>(primes_seen) / static_cast<double>(row.horizon);
      row.truncated = truncated;
      report.rows.push_back(row);
      ++next_cp;
    }
  }
  return report;
}

std::optional<Natural> primitive_divisor_check(const SequenceSpec& seq, std::uint64_t n,
                                               const Limits& limits) {
  Natural xn = term(seq, n, limits);
  if (xn == 1) return std::nullopt;
  Factorization fx = factorize(xn, limits);
  Factorization fn = factorize_u64(n);
  for (const auto& pp : fx.factors) {
    // q is primitive for x_n iff m_q = n iff q divides no x_{n/r}, r prime | n
    bool primitive = true;
    for (const auto& rp : fn.factors) {
      std::uint64_t r = rp.prime.get_ui();
      bool div;
      try {
        div = term_divisible(seq, n / r, pp.prime, limits);
      } catch (const Error& e) {
        if (e.code() != Errc::not_available) throw;
        div = divides(pp.prime, term(seq, n / r, limits));
      }
      if (div) {
        primitive = false;
        break;
      }
    }
    if (primitive) return pp.prime;
  }
  return std::nullopt;
}

std::vector<Figure1Row> figure1_sweep(const EntryPointTable& table, std::uint64_t zmax,
                                      MoebiusStrategy strategy, bool order_by_md,
                                      unsigned threads) {
  std::vector<std::uint64_t> zs = primes_up_to(zmax);
  std::vector<Figure1Row> rows(zs.size());

  auto compute_row = [&](std::size_t i) {
    Figure1Row& row = rows[i];
    row.z = zs[i];
    double lz = std::log(static_cast<double>(row.z));
    row.inv_log_z = 1.0 / lz;
    double llz = std::log(lz);
    row.inv_loglog_z = llz > 0 ? 1.0 / llz : std::numeric_limits<double>::quiet_NaN();
    try {
      MoebiusSum ms = moebius_sum(table, SquarefreeModulus::primes_below(static_cast<double>(row.z)),
                                  strategy);
      row.value = ms.value;
      row.strategy = ms.used == MoebiusStrategy::direct ? "direct"
                     : ms.used == MoebiusStrategy::structured ? "structured"
                                                              : "both";
      row.m_times_log_z = ms.value.get_d() * lz;
    } catch (const Error& e) {
      if (!e.resource_guard()) throw;
      row.error = e.what();
    }
    if (order_by_md && row.error.empty()) {
      try {
        row.ordered_sum = ordered_by_md_sum(table, row.z);
      } catch (const Error& e) {
        if (!e.resource_guard()) throw;
        row.error = e.what();
      }
    }
  };

  if (threads <= 1 || rows.size() <= 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) compute_row(i);
    return rows;
  }
  // Resolve entry points once up front so parallel rows only read the memo.
  for (std::uint64_t p : zs) (void)table.prime(p);
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> workers;
  unsigned count = std::min<unsigned>(threads, static_cast<unsigned>(rows.size()));
  for (unsigned t = 0; t < count; ++t) {
    workers.push_back(std::async(std::launch::async, [&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= rows.size()) return;
        compute_row(i);
      }
    }));
  }
  for (auto& w : workers) w.get();
  return rows;
}

Rational ordered_by_md_sum(const EntryPointTable& table, std::uint64_t z) {
  const SequenceSpec& seq = table.seq();
  const Limits& limits = table.limits();
  // every prime q with m_q <= z divides some x_j, j <= z, and conversely
  std::map<Natural, Natural> entry_of;  // q -> m_q
  for (std::uint64_t j = 1; j <= z; ++j) {
    Natural xj = term(seq, j, limits);
    if (xj == 1) continue;
    for (const auto& pp : factorize(xj, limits).factors) {
      if (entry_of.count(pp.prime)) continue;
      // m_q divides j; the least divisor d of j with q | x_d is m_q
      for (const Natural& dv : divisors(factorize_u64(j))) {
        if (term_divisible(seq, dv.get_ui(), pp.prime, limits)) {
          entry_of[pp.prime] = dv;
          break;
        }
      }
    }
  }
  std::vector<Natural> entries;
  entries.reserve(entry_of.size());
  for (const auto& [q, m] : entry_of) entries.push_back(m);
  std::sort(entries.begin(), entries.end());

  Rational sum = 0;
  // DFS over squarefree d (subsets of the found primes) with lcm of entry
  // points staying <= z.
  std::function<void(std::size_t, const Natural&, int)> walk = [&](std::size_t i,
                                                                   const Natural& lcm_acc,
                                                                   int sign) {
    if (i == entries.size()) {
      sum += make_rational(sign, lcm_acc);
      return;
    }
    walk(i + 1, lcm_acc, sign);
    Natural l = lcm_n(lcm_acc, entries[i]);
    if (l <= z) walk(i + 1, l, -sign);
  };
  walk(0, Natural(1), 1);
  return sum;
}

}  // namespace sdsieve
