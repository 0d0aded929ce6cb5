#include "sdsieve/multiples.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sdsieve {

namespace {

void check_horizon(std::uint64_t N, const Limits& limits) {
  if (N < 1) raise(Errc::spec_invalid, "window horizon must be >= 1");
  if (N > limits.window_horizon_cap)
    raise(Errc::index_too_large, "window horizon exceeds cap " + std::to_string(limits.window_horizon_cap));
}

// omega(n) for n <= N via an additive sieve.
std::vector<std::uint8_t> omega_table(std::uint64_t N) {
  std::vector<std::uint8_t> omega(N + 1, 0);
  for (std::uint64_t p = 2; p <= N; ++p) {
    if (omega[p] != 0) continue;  // composite already touched
    for (std::uint64_t m = p; m <= N; m += p) ++omega[m];
  }
  return omega;
}

}  // namespace

FiniteSeedSet FiniteSeedSet::of(std::vector<std::uint64_t> values) {
  if (values.empty()) raise(Errc::spec_invalid, "seed set must be nonempty");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.front() < 1) raise(Errc::spec_invalid, "seed entries must be >= 1");
  return FiniteSeedSet{std::move(values)};
}

std::string FiniteSeedSet::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(elements[i]);
  }
  return s + "}";
}

MultiplesWindow::MultiplesWindow(std::uint64_t horizon, std::string provenance)
    : horizon_(horizon), bits_(horizon + 1, false), provenance_(std::move(provenance)) {}

std::uint64_t MultiplesWindow::count() const {
  std::uint64_t c = 0;
  for (std::uint64_t n = 1; n <= horizon_; ++n)
    if (bits_[n]) ++c;
  return c;
}

std::vector<std::uint64_t> MultiplesWindow::members() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n <= horizon_; ++n)
    if (bits_[n]) out.push_back(n);
  return out;
}

MultiplesWindow MultiplesWindow::complement() const {
  MultiplesWindow out(horizon_, "complement(" + provenance_ + ")");
  for (std::uint64_t n = 1; n <= horizon_; ++n)
    if (!bits_[n]) out.insert(n);
  return out;
}

std::optional<std::uint64_t> MultiplesWindow::first_difference(const MultiplesWindow& other) const {
  std::uint64_t h = std::min(horizon_, other.horizon_);
  for (std::uint64_t n = 1; n <= h; ++n)
    if (contains(n) != other.contains(n)) return n;
  if (horizon_ != other.horizon_) return h + 1;
  return std::nullopt;
}

MultiplesWindow multiples_window(const FiniteSeedSet& seed, std::uint64_t N, const Limits& limits) {
  check_horizon(N, limits);
  MultiplesWindow w(N, "M(" + seed.to_string() + ")");
  for (std::uint64_t a : seed.elements)
    for (std::uint64_t m = a; m <= N; m += a) w.insert(m);
  return w;
}

MultiplesWindow multiples_of(const MultiplesWindow& members) {
  MultiplesWindow w(members.horizon(), "M(" + members.provenance() + ")");
  for (std::uint64_t a = 1; a <= members.horizon(); ++a) {
    if (!members.contains(a)) continue;
    for (std::uint64_t m = a; m <= members.horizon(); m += a) w.insert(m);
  }
  return w;
}

MultiplesWindow star_window(const FiniteSeedSet& seed, std::uint64_t N, const Limits& limits) {
  check_horizon(N, limits);
  if (seed.elements.size() > limits.star_seed_cap)
    raise(Errc::seed_too_large, "star_window seed capped at " + std::to_string(limits.star_seed_cap) +
                                    " elements");
  MultiplesWindow w(N, seed.to_string() + "*");
  // Subsets of size >= 2 with overall gcd 1, pruning on lcm > N. A repeated
  // element only matters for {1,1}, which contributes 1.
  if (seed.contains_unit()) w.insert(1);
  const auto& el = seed.elements;
  std::function<void(std::size_t, std::uint64_t, std::uint64_t, std::size_t)> walk =
      [&](std::size_t i, std::uint64_t lcm_acc, std::uint64_t gcd_acc, std::size_t taken) {
        if (taken >= 2 && gcd_acc == 1) w.insert(lcm_acc);
        for (std::size_t j = i; j < el.size(); ++j) {
          std::uint64_t g = std::gcd(lcm_acc, el[j]);
          if (el[j] / g > N / lcm_acc) continue;  // lcm would exceed N
          std::uint64_t l = lcm_acc / g * el[j];
          walk(j + 1, l, taken == 0 ? el[j] : std::gcd(gcd_acc, el[j]), taken + 1);
        }
      };
  walk(0, 1, 0, 0);
  return w;
}

MultiplesWindow product_window(const MultiplesWindow& S, unsigned m, const Limits& limits) {
  const std::uint64_t N = S.horizon();
  check_horizon(N, limits);
  MultiplesWindow w(N, S.provenance() + "*P_" + std::to_string(m));

  // members of P_m within [1, N]
  std::vector<std::uint64_t> pm;
  if (m == 0) {
    pm.push_back(1);
  } else if (m == 1) {
    pm.push_back(1);
    for (std::uint64_t p : primes_up_to(N))
      for (std::uint64_t q = p; q <= N; q = (q > N / p) ? N + 1 : q * p) pm.push_back(q);
    std::sort(pm.begin(), pm.end());
  } else {
    if (N > 20'000'000)
      raise(Errc::index_too_large, "P_m membership for m >= 2 capped at 2e7");
    std::vector<std::uint8_t> omega = omega_table(N);
    pm.push_back(1);
    for (std::uint64_t q = 2; q <= N; ++q)
      if (omega[q] <= m) pm.push_back(q);
  }

  for (std::uint64_t s = 1; s <= N; ++s) {
    if (!S.contains(s)) continue;
    for (std::uint64_t q : pm) {
      if (q > N / s) break;
      w.insert(s * q);
    }
  }
  return w;
}

MplVerdict verify_prop_mpl(const FiniteSeedSet& seed, std::uint64_t N, const Limits& limits) {
  if (seed.contains_unit()) raise(Errc::seed_contains_unit, "1 in the seed makes M(A) everything");
  check_horizon(N, limits);
  // Left side: complement of M(A*). Every element of A* that matters below N
  // has lcm <= N, so the windowed star set is exact for this comparison.
  MultiplesWindow star = star_window(seed, N, limits);
  MultiplesWindow left = multiples_of(star).complement();
  // Right side: (complement of M(A)) * P_1; every witness t * p^k <= N lies
  // inside the window, so no truncation bias is possible.
  MultiplesWindow right = product_window(multiples_window(seed, N, limits).complement(), 1, limits);
  MplVerdict v;
  v.N = N;
  v.lhs_density = static_cast<double>(left.count()) / static_cast<double>(N);
  v.first_mismatch = left.first_difference(right);
  v.equal = !v.first_mismatch.has_value();
  return v;
}

DensityEstimate density(const MultiplesWindow& S) {
  DensityEstimate d;
  d.N = S.horizon();
  if (d.N == 0) return d;
  double logsum = 0.0;
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= d.N; ++n) {
    if (!S.contains(n)) continue;
    ++count;
    logsum += 1.0 / static_cast<double>(n);
  }
  d.natural = static_cast<double>(count) / static_cast<double>(d.N);
  d.logarithmic = d.N > 1 ? logsum / std::log(static_cast<double>(d.N)) : 0.0;
  d.t_value = 1.0 - d.logarithmic;
  return d;
}

WindowFamily family_pow2() {
  return {"pow2", [](std::uint64_t N) {
            MultiplesWindow w(N, "pow2");
            for (std::uint64_t v = 1; v <= N; v = (v > N / 2) ? N + 1 : v * 2) w.insert(v);
            return w;
          }};
}

WindowFamily family_odds() {
  return {"odds", [](std::uint64_t N) {
            MultiplesWindow w(N, "odds");
            for (std::uint64_t n = 1; n <= N; n += 2) w.insert(n);
            return w;
          }};
}

WindowFamily family_unit() {
  return {"one", [](std::uint64_t N) {
            MultiplesWindow w(N, "{1}");
            w.insert(1);
            return w;
          }};
}

WindowFamily family_from_members(std::string name, std::vector<std::uint64_t> members) {
  return {std::move(name), [members = std::move(members)](std::uint64_t N) {
            MultiplesWindow w(N, "members");
            for (std::uint64_t v : members) w.insert(v);
            return w;
          }};
}

namespace {

void require_divisor_closed(const MultiplesWindow& B) {
  for (std::uint64_t n = 1; n <= B.horizon(); ++n) {
    if (!B.contains(n)) continue;
    std::uint64_t v = n;
    for (std::uint64_t p = 2; p * p <= v; ++p) {
      if (v % p != 0) continue;
      if (!B.contains(n / p))
        raise(Errc::not_divisor_closed,
              "witness n = " + std::to_string(n) + ", d = " + std::to_string(n / p));
      while (v % p == 0) v /= p;
    }
    if (v > 1 && !B.contains(n / v))
      raise(Errc::not_divisor_closed,
            "witness n = " + std::to_string(n) + ", d = " + std::to_string(n / v));
  }
}

}  // namespace

TheoremA1Report theorem_mth_experiment(const WindowFamily& B, unsigned m,
                                       const std::vector<std::uint64_t>& horizons,
                                       const Limits& limits) {
  TheoremA1Report report;
  double prev = 2.0;
  for (std::uint64_t N : horizons) {
    MultiplesWindow b = B.build(N);
    require_divisor_closed(b);
    MultiplesWindow prod = product_window(b, m, limits);
    TheoremA1Row row;
    row.N = N;
    row.count = prod.count();
    row.density = static_cast<double>(row.count) / static_cast<double>(N);
    if (row.density > prev + 1e-15) report.monotone_nonincreasing = false;
    if (row.density >= prev - 1e-15) report.strictly_decreasing = false;
    prev = row.density;
    report.rows.push_back(row);
  }
  if (report.rows.size() < 2) report.strictly_decreasing = false;
  return report;
}

MultiplesWindow remark_a2_demo(std::uint64_t N, const Limits& limits) {
  check_horizon(N, limits);
  MultiplesWindow w(N, "residue-block demo");
  std::vector<std::uint64_t> primes = primes_up_to(200);
  double upper = std::log(static_cast<double>(N));
  std::uint64_t kmax = static_cast<std::uint64_t>(std::sqrt(std::max(upper, 1.0))) + 2;
  for (std::uint64_t k = 1; k <= kmax && k <= primes.size(); ++k) {
    double lo = k == 1 ? 0.0 : std::exp(static_cast<double>((k - 1) * (k - 1)));
    double hi = std::exp(static_cast<double>(k * k));
    std::uint64_t q = primes[k - 1];
    std::uint64_t start = static_cast<std::uint64_t>(lo) + 1;
    std::uint64_t n = start + ((1 + q - start % q) % q);  // least n >= start with n = 1 mod q
    for (; static_cast<double>(n) <= hi && n <= N; n += q) w.insert(n);
  }
  return w;
}

}  // namespace sdsieve
