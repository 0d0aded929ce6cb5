#include "sdsieve/sequences.hpp"

#include <cmath>
#include <numeric>

namespace sdsieve {

namespace {

long long parse_ll(std::string_view s) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(std::string(s), &pos);
    if (pos != s.size()) raise(Errc::spec_invalid, "bad integer '" + std::string(s) + "'");
    return v;
  } catch (const Error&) {
    throw;
  } catch (...) {
    raise(Errc::spec_invalid, "bad integer '" + std::string(s) + "'");
  }
}

Rational parse_rational(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(Natural(std::string(s)));
  Natural num(std::string(s.substr(0, slash)));
  Natural den(std::string(s.substr(slash + 1)));
  if (den == 0) raise(Errc::spec_invalid, "zero denominator in '" + std::string(s) + "'");
  return make_rational(num, den);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// Signed U_n(P, Q) by (U, V) fast doubling; P must be positive.
Natural lucas_u_exact(long long Pll, long long Qll, std::uint64_t n) {
  if (n == 0) return 0;
  const long P = static_cast<long>(Pll), Q = static_cast<long>(Qll);
  Natural D = Natural(P) * P - 4 * Natural(Q);
  Natural U = 0, V = 2, Qk = 1;
  int bits = 0;
  for (std::uint64_t t = n; t; t >>= 1) ++bits;
  for (int i = bits - 1; i >= 0; --i) {
    Natural U2 = U * V;
    Natural V2 = V * V - 2 * Qk;
    Qk *= Qk;
    U = U2;
    V = V2;
    if ((n >> i) & 1) {
      Natural U1 = (P * U + V) / 2;
      Natural V1 = (D * U + P * V) / 2;
      Qk *= Q;
      U = U1;
      V = V1;
    }
  }
  return U;
}

// U_n(P, Q) mod m via 2x2 matrix power; correct up to the sign of U_n.
Natural lucas_u_mod(long long Pll, long long Qll, std::uint64_t n, const Natural& m) {
  const long P = static_cast<long>(Pll), Q = static_cast<long>(Qll);
  Natural a = mod_nonneg(Natural(P), m);
  Natural b = mod_nonneg(Natural(-Q), m);
  // M = [[a, b], [1, 0]]
  Natural m00 = 1, m01 = 0, m10 = 0, m11 = 1;  // identity
  Natural b00 = a, b01 = b, b10 = 1, b11 = 0;
  std::uint64_t k = n;
  while (k) {
    if (k & 1) {
      Natural t00 = mod_nonneg(m00 * b00 + m01 * b10, m);
      Natural t01 = mod_nonneg(m00 * b01 + m01 * b11, m);
      Natural t10 = mod_nonneg(m10 * b00 + m11 * b10, m);
      Natural t11 = mod_nonneg(m10 * b01 + m11 * b11, m);
      m00 = t00;
      m01 = t01;
      m10 = t10;
      m11 = t11;
    }
    k >>= 1;
    if (k) {
      Natural t00 = mod_nonneg(b00 * b00 + b01 * b10, m);
      Natural t01 = mod_nonneg(b00 * b01 + b01 * b11, m);
      Natural t10 = mod_nonneg(b10 * b00 + b11 * b10, m);
      Natural t11 = mod_nonneg(b10 * b01 + b11 * b11, m);
      b00 = t00;
      b01 = t01;
      b10 = t10;
      b11 = t11;
    }
  }
  // [U_{n+1}, U_n]^T = M^n [1, 0]^T
  return m10;
}

// |U_n| is nonnegative as computed when the parameters cannot oscillate.
bool lucas_sign_stable(long long P, long long Q) {
  long long D = P * P - 4 * Q;
  return Q <= 0 || D >= 0;
}

double lucas_bits_per_index(long long P, long long Q) {
  return std::log2(static_cast<double>(std::llabs(P) + std::llabs(Q) + 1));
}

}  // namespace

SequenceSpec SequenceSpec::fibonacci() {
  SequenceSpec s(SequenceKind::fibonacci, "fib");
  s.p_ = 1;
  s.q_ = -1;
  return s;
}

SequenceSpec SequenceSpec::mersenne() {
  SequenceSpec s(SequenceKind::mersenne, "mersenne");
  s.p_ = 3;
  s.q_ = 2;
  return s;
}

SequenceSpec SequenceSpec::lucas(long long P, long long Q) {
  if (P == 0) raise(Errc::spec_invalid, "lucas: P = 0 gives x_2 = 0, not a positive sequence");
  if (std::gcd(std::llabs(P), std::llabs(Q)) != 1)
    raise(Errc::spec_invalid, "lucas: gcd(P,Q) must be 1 for strong divisibility");
  if (std::llabs(P) == 1 && Q == 1)
    raise(Errc::spec_invalid, "lucas: degenerate parameters (roots of unity give x_6k = 0)");
  SequenceSpec s(SequenceKind::lucas,
                 "lucas:" + std::to_string(P) + "," + std::to_string(Q));
  s.p_ = P;
  s.q_ = Q;
  return s;
}

SequenceSpec SequenceSpec::trivial() { return SequenceSpec(SequenceKind::trivial, "trivial"); }

SequenceSpec SequenceSpec::parity_demo() {
  return SequenceSpec(SequenceKind::parity_demo, "paritydemo");
}

SequenceSpec SequenceSpec::eds(std::shared_ptr<const EdsContext> ctx) {
  SequenceSpec s(SequenceKind::eds, ctx->to_string());
  s.eds_ = std::move(ctx);
  return s;
}

SequenceSpec SequenceSpec::parse(std::string_view text) {
  if (text == "fib" || text == "fibonacci") return fibonacci();
  if (text == "mersenne") return mersenne();
  if (text == "trivial") return trivial();
  if (text == "paritydemo") return parity_demo();
  if (text.rfind("lucas:", 0) == 0) {
    auto parts = split(text.substr(6), ',');
    if (parts.size() != 2) raise(Errc::spec_invalid, "expected lucas:P,Q");
    return lucas(parse_ll(parts[0]), parse_ll(parts[1]));
  }
  if (text.rfind("eds:", 0) == 0) {
    auto sections = split(text.substr(4), ':');
    if (sections.size() != 2) raise(Errc::spec_invalid, "expected eds:a1,a2,a3,a4,a6:px,py");
    auto coeffs = split(sections[0], ',');
    if (coeffs.size() != 5) raise(Errc::spec_invalid, "expected five curve coefficients");
    auto coords = split(sections[1], ',');
    if (coords.size() != 2) raise(Errc::spec_invalid, "expected point px,py");
    WeierstrassCurve curve{Natural(std::string(coeffs[0])), Natural(std::string(coeffs[1])),
                           Natural(std::string(coeffs[2])), Natural(std::string(coeffs[3])),
                           Natural(std::string(coeffs[4]))};
    auto ctx = std::make_shared<const EdsContext>(curve, parse_rational(coords[0]),
                                                  parse_rational(coords[1]));
    return eds(std::move(ctx));
  }
  raise(Errc::spec_invalid, "unknown sequence spec '" + std::string(text) + "'");
}

Natural term(const SequenceSpec& seq, std::uint64_t n, const Limits& limits) {
  if (n == 0) raise(Errc::spec_invalid, "term index must be >= 1");
  switch (seq.kind()) {
    case SequenceKind::trivial:
      return Natural(n);
    case SequenceKind::parity_demo:
      return Natural(n % 2 == 0 ? 2 : 1);
    case SequenceKind::mersenne: {
      if (n > limits.term_bit_budget) raise(Errc::index_too_large, "2^n - 1 exceeds bit budget");
      Natural v = 1;
      v <<= n;
      return v - 1;
    }
    case SequenceKind::fibonacci:
    case SequenceKind::lucas: {
      long long a = std::llabs(seq.lucas_p());
      double est_bits = lucas_bits_per_index(a, seq.lucas_q()) * static_cast<double>(n);
      if (est_bits > static_cast<double>(limits.term_bit_budget))
        raise(Errc::index_too_large, "Lucas term exceeds bit budget");
      Natural u = lucas_u_exact(a, seq.lucas_q(), n);
      return abs(u);
    }
    case SequenceKind::eds:
      return seq.eds_context().term(n, limits).b;
  }
  raise(Errc::internal, "unreachable");
}

Natural term_mod(const SequenceSpec& seq, std::uint64_t n, const Natural& m,
                 const Limits& limits) {
  if (n == 0) raise(Errc::spec_invalid, "term index must be >= 1");
  if (m < 2) raise(Errc::bad_modulus, "modulus must be >= 2");
  switch (seq.kind()) {
    case SequenceKind::trivial:
      return mod_nonneg(Natural(n), m);
    case SequenceKind::parity_demo:
      return mod_nonneg(Natural(n % 2 == 0 ? 2 : 1), m);
    case SequenceKind::mersenne:
      return mod_nonneg(pow_mod(2, Natural(n), m) - 1, m);
    case SequenceKind::fibonacci:
    case SequenceKind::lucas: {
      long long a = std::llabs(seq.lucas_p());
      if (lucas_sign_stable(a, seq.lucas_q())) return lucas_u_mod(a, seq.lucas_q(), n, m);
      // Oscillating kind (D < 0): |U_n| needs the archimedean sign, so reduce
      // the exact term.
      return mod_nonneg(term(seq, n, limits), m);
    }
    case SequenceKind::eds: {
      if (!is_prime(m) || !mpz_fits_ulong_p(m.get_mpz_t()))
        raise(Errc::not_available, "eds term_mod needs a prime modulus of good reduction");
      std::uint64_t p = m.get_ui();
      const EdsContext& ctx = seq.eds_context();
      if (!ctx.curve().good_reduction(p))
        raise(Errc::not_available, "p = " + std::to_string(p) + " is a bad-reduction prime");
      CurveModP c(ctx.curve(), p);
      if (c.mul(c.reduce(ctx.base()), n).identity) return 0;
      if (n <= limits.eds_index_limit) return mod_nonneg(ctx.term(n, limits).b, m);
      raise(Errc::not_available, "nonzero eds residue beyond the exact index limit");
    }
  }
  raise(Errc::internal, "unreachable");
}

bool term_divisible(const SequenceSpec& seq, std::uint64_t n, const Natural& d,
                    const Limits& limits) {
  if (d <= 0) raise(Errc::spec_invalid, "divisor must be >= 1");
  if (d == 1) return true;
  switch (seq.kind()) {
    case SequenceKind::trivial:
      return divides(d, Natural(n));
    case SequenceKind::parity_demo:
      return d == 2 && n % 2 == 0;
    case SequenceKind::mersenne:
      return pow_mod(2, Natural(n), d) == 1;
    case SequenceKind::fibonacci:
    case SequenceKind::lucas:
      // the zero test is sign-free for every parameter choice
      return lucas_u_mod(std::llabs(seq.lucas_p()), seq.lucas_q(), n, d) == 0;
    case SequenceKind::eds: {
      const EdsContext& ctx = seq.eds_context();
      if (mpz_fits_ulong_p(d.get_mpz_t()) && is_prime(d)) {
        std::uint64_t p = d.get_ui();
        CurveModP c(ctx.curve(), p);
        FpPoint base = c.reduce(ctx.base());
        if (c.nonsingular(base)) return c.mul(base, n).identity;
      }
      return divides(d, ctx.term(n, limits).b);
    }
  }
  raise(Errc::internal, "unreachable");
}

StrongDivReport strong_divisibility_check(const SequenceSpec& seq, std::uint64_t bound,
                                          const Limits& limits) {
  StrongDivReport report;
  std::vector<Natural> x(bound + 1);
  for (std::uint64_t n = 1; n <= bound; ++n) x[n] = term(seq, n, limits);
  for (std::uint64_t n = 2; n <= bound; ++n) {
    for (std::uint64_t m = 1; m < n; ++m) {
      ++report.pairs_checked;
      Natural g = gcd_n(x[n], x[m]);
      if (g != x[std::gcd(n, m)]) {
        report.pass = false;
        report.counterexample = "gcd(x_" + std::to_string(n) + ", x_" + std::to_string(m) +
                                ") = " + g.get_str() + " != x_" + std::to_string(std::gcd(n, m));
        return report;
      }
    }
  }
  return report;
}

GrowthEnvelope growth_envelope(const SequenceSpec& seq, const Limits& limits) {
  GrowthEnvelope env;
  switch (seq.kind()) {
    case SequenceKind::fibonacci: {
      const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
      const double s5 = std::sqrt(5.0);
      env.f = [phi, s5](double z) { return std::log(s5 * z - 1.0) / std::log(phi); };
      env.g = [phi, s5](double y) { return (std::pow(phi, y) + 1.0) / s5; };
      env.certified_primitive_divisors = true;
      env.primitive_index_bound = 12;
      env.note = "F_n <= (phi^n + 1)/sqrt(5)";
      break;
    }
    case SequenceKind::mersenne: {
      env.f = [](double z) { return std::log2(z + 1.0); };
      env.g = [](double y) { return std::pow(2.0, y) - 1.0; };
      env.certified_primitive_divisors = true;
      env.primitive_index_bound = 6;
      env.note = "exact inverse of 2^n - 1";
      break;
    }
    case SequenceKind::lucas: {
      long long a = std::llabs(seq.lucas_p());
      long long D = seq.lucas_disc();
      if (D < 0)
        raise(Errc::no_envelope, "|x_n| is not eventually monotone for negative discriminant");
      if (D == 0) raise(Errc::no_envelope, "degenerate discriminant");
      const double sD = std::sqrt(static_cast<double>(D));
      const double alpha = (static_cast<double>(a) + sD) / 2.0;
      env.f = [sD, alpha](double z) { return std::log(sD * z / 2.0) / std::log(alpha); };
      env.g = [sD, alpha](double y) { return 2.0 * std::pow(alpha, y) / sD; };
      env.certified_primitive_divisors = true;
      env.primitive_index_bound = 30;
      env.note = "|U_n| <= 2 alpha^n / sqrt(D)";
      break;
    }
    case SequenceKind::eds: {
      const EdsContext& ctx = seq.eds_context();
      std::uint64_t nmax = std::min<std::uint64_t>(40, limits.eds_index_limit);
      HeightEstimate est = height_estimate(ctx, nmax, limits);
      if (est.h_hat <= 0) raise(Errc::no_envelope, "height estimate degenerate");
      const double h = est.h_hat;
      env.f = [h](double z) { return std::sqrt(std::max(std::log(z), 0.0) / h); };
      env.g = [h](double y) { return std::exp(h * y * y); };
      env.certified_primitive_divisors = true;
      env.primitive_index_bound = 0;  // exists but no explicit index is certified
      env.heuristic = true;
      env.note = "log b_n ~ h n^2 with empirical h";
      break;
    }
    case SequenceKind::trivial:
    case SequenceKind::parity_demo:
      raise(Errc::no_envelope, "no useful envelope for this kind");
  }
  env.g_domain_min = env.f(1.0);
  return env;
}

namespace {

bool divisor_closed_check(const std::vector<std::uint64_t>& members, std::uint64_t N,
                          std::string* witness) {
  std::vector<bool> in_set(N + 1, false);
  for (std::uint64_t m : members) in_set[m] = true;
  for (std::uint64_t m : members) {
    std::uint64_t v = m;
    for (std::uint64_t p = 2; p * p <= v; ++p) {
      if (v % p == 0) {
        if (!in_set[m / p]) {
          if (witness) *witness = "n = " + std::to_string(m) + ", d = " + std::to_string(m / p);
          return false;
        }
        while (v % p == 0) v /= p;
      }
    }
    if (v > 1 && !in_set[m / v]) {
      if (witness) *witness = "n = " + std::to_string(m) + ", d = " + std::to_string(m / v);
      return false;
    }
  }
  return true;
}

}  // namespace

UnitIndexSet unit_index_set(const SequenceSpec& seq, std::uint64_t N, const Limits& limits) {
  UnitIndexSet set;
  set.horizon = N;
  switch (seq.kind()) {
    case SequenceKind::trivial:
      if (N >= 1) set.members.push_back(1);
      break;
    case SequenceKind::parity_demo:
      for (std::uint64_t n = 1; n <= N; n += 2) set.members.push_back(n);
      break;
    case SequenceKind::mersenne:
      if (N >= 1) set.members.push_back(1);
      break;
    case SequenceKind::fibonacci:
    case SequenceKind::lucas: {
      const long a = static_cast<long>(std::llabs(seq.lucas_p()));
      const long Q = static_cast<long>(seq.lucas_q());
      bool monotone = lucas_sign_stable(a, Q);
      Natural prev = 0, cur = 1;  // U_0, U_1
      for (std::uint64_t n = 1; n <= N; ++n) {
        Natural absu = abs(cur);
        if (absu == 1) set.members.push_back(n);
        if (monotone && absu > 1) break;
        if (mpz_sizeinbase(cur.get_mpz_t(), 2) > limits.term_bit_budget) {
          set.certified = false;
          break;
        }
        Natural next = a * cur - Q * prev;
        prev = cur;
        cur = next;
      }
      break;
    }
    case SequenceKind::eds: {
      std::uint64_t bound = std::min<std::uint64_t>(N, limits.eds_index_limit);
      for (std::uint64_t n = 1; n <= bound; ++n)
        if (seq.eds_context().term(n, limits).b == 1) set.members.push_back(n);
      set.certified = N <= limits.eds_index_limit;
      break;
    }
  }
  set.density = N == 0 ? 0.0 : static_cast<double>(set.members.size()) / static_cast<double>(N);
  set.divisor_closed = divisor_closed_check(set.members, N, nullptr);
  return set;
}

}  // namespace sdsieve
