#include "sdsieve/eds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace sdsieve {

namespace {

Natural pow_int(const Natural& b, unsigned e) {
  Natural r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  a += b;
  if (a >= m) a -= m;
  return a;
}

std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return a >= b ? a - b : a + m - b;
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
  // extended Euclid; p prime, a != 0 mod p
  std::int64_t t = 0, newt = 1;
  std::int64_t r = static_cast<std::int64_t>(p), newr = static_cast<std::int64_t>(a % p);
  while (newr != 0) {
    std::int64_t q = r / newr;
    std::int64_t tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (r != 1) raise(Errc::internal, "invmod of non-invertible element");
  if (t < 0) t += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(t);
}

// Tonelli-Shanks; returns a square root of a mod odd prime p, if one exists.
std::optional<std::uint64_t> sqrtmod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  if (p == 2) return a;
  if (powmod(a, (p - 1) / 2, p) != 1) return std::nullopt;
  if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
  std::uint64_t q = p - 1, s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  std::uint64_t z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  std::uint64_t m = s;
  std::uint64_t c = powmod(z, q, p);
  std::uint64_t t = powmod(a, q, p);
  std::uint64_t r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    std::uint64_t i = 0, tt = t;
    while (tt != 1) {
      tt = mulmod(tt, tt, p);
      ++i;
      if (i == m) return std::nullopt;
    }
    std::uint64_t b = powmod(c, 1ull << (m - i - 1), p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

std::uint64_t reduce_mpz(const Natural& v, std::uint64_t p) {
  Natural r = mod_nonneg(v, Natural(p));
  return r.get_ui();
}

// splitmix64, used for deterministic point sampling in BSGS.
std::uint64_t splitmix(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

Natural WeierstrassCurve::discriminant() const {
  Natural b2 = a1 * a1 + 4 * a2;
  Natural b4 = 2 * a4 + a1 * a3;
  Natural b6 = a3 * a3 + 4 * a6;
  Natural b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

bool WeierstrassCurve::good_reduction(std::uint64_t p) const {
  return !mpz_divisible_ui_p(discriminant().get_mpz_t(), p);
}

std::string WeierstrassCurve::to_string() const {
  return a1.get_str() + "," + a2.get_str() + "," + a3.get_str() + "," + a4.get_str() + "," +
         a6.get_str();
}

std::string RationalPoint::to_string() const {
  return "(" + x.get_str() + ":" + y.get_str() + ":" + z.get_str() + ")";
}

bool curve_contains(const WeierstrassCurve& c, const AffinePoint& a) {
  if (!a) return true;
  const Rational& x = a->first;
  const Rational& y = a->second;
  Rational lhs = y * y + Rational(c.a1) * x * y + Rational(c.a3) * y;
  Rational rhs = x * x * x + Rational(c.a2) * x * x + Rational(c.a4) * x + Rational(c.a6);
  return lhs == rhs;
}

AffinePoint curve_negate(const WeierstrassCurve& c, const AffinePoint& a) {
  if (!a) return a;
  return std::make_pair(a->first, -a->second - Rational(c.a1) * a->first - Rational(c.a3));
}

AffinePoint curve_add(const WeierstrassCurve& c, const AffinePoint& a, const AffinePoint& b) {
  if (!a) return b;
  if (!b) return a;
  const Rational &x1 = a->first, &y1 = a->second;
  const Rational &x2 = b->first, &y2 = b->second;
  Rational lambda;
  if (x1 == x2) {
    // vertical chord / 2-torsion tangent
    if (y1 + y2 + Rational(c.a1) * x1 + Rational(c.a3) == 0) return std::nullopt;
    Rational num = 3 * x1 * x1 + 2 * Rational(c.a2) * x1 + Rational(c.a4) - Rational(c.a1) * y1;
    Rational den = 2 * y1 + Rational(c.a1) * x1 + Rational(c.a3);
    lambda = num / den;
  } else {
    lambda = (y2 - y1) / (x2 - x1);
  }
  Rational x3 = lambda * lambda + Rational(c.a1) * lambda - Rational(c.a2) - x1 - x2;
  Rational y3 = lambda * (x1 - x3) - y1 - Rational(c.a1) * x3 - Rational(c.a3);
  return std::make_pair(x3, y3);
}

RationalPoint normalize_projective(const AffinePoint& a) {
  if (!a) return RationalPoint{0, 1, 0};
  const Natural& dx = a->first.get_den();
  const Natural& dy = a->second.get_den();
  // x = A/b^2 and y = C/b^3 in lowest terms for a curve with integer
  // coefficients, so b recovers exactly.
  if (!divides(dx, dy)) raise(Errc::cube_extraction_failure, "denominator shape violated");
  Natural b = dy / dx;
  if (b * b != dx || b * b * b != dy)
    raise(Errc::cube_extraction_failure, "denominators are not (b^2, b^3)");
  return RationalPoint{a->first.get_num() * b, a->second.get_num(), b * b * b};
}

RationalPoint multiply_point(const WeierstrassCurve& curve, const AffinePoint& base,
                             std::uint64_t n, const Limits& limits) {
  if (n == 0) raise(Errc::spec_invalid, "multiply_point requires n >= 1");
  if (n > limits.eds_index_limit)
    raise(Errc::index_too_large,
          "index " + std::to_string(n) + " exceeds EDS limit " + std::to_string(limits.eds_index_limit));
  if (!base) raise(Errc::spec_invalid, "base point must not be the identity");
  if (!curve_contains(curve, base)) raise(Errc::point_not_on_curve, "base point is not on the curve");
  AffinePoint acc;  // identity
  AffinePoint addend = base;
  std::uint64_t k = n;
  while (k) {
    if (k & 1) acc = curve_add(curve, acc, addend);
    k >>= 1;
    if (k) addend = curve_add(curve, addend, addend);
  }
  return normalize_projective(acc);
}

EdsContext::EdsContext(WeierstrassCurve curve, const Rational& px, const Rational& py,
                       const Limits& limits)
    : curve_(std::move(curve)) {
  if (curve_.discriminant() == 0) raise(Errc::spec_invalid, "singular curve (discriminant 0)");
  base_ = std::make_pair(px, py);
  if (!curve_contains(curve_, base_))
    raise(Errc::point_not_on_curve, "(" + px.get_str() + "," + py.get_str() + ") is not on the curve");
  if (px.get_den() != 1 || py.get_den() != 1)
    raise(Errc::not_integral_point,
          "base point must be integral so that b_1 = 1; substitute x -> u^2 x', y -> u^3 y' "
          "with u the denominator scale to obtain an integral model first");
  // Mazur: a rational torsion point has order at most 12.
  AffinePoint acc = base_;
  for (unsigned n = 2; n <= 12; ++n) {
    acc = curve_add(curve_, acc, base_);
    if (!acc)
      raise(Errc::non_torsion_required, "base point is torsion (order " + std::to_string(n) + ")");
  }
  (void)limits;
}

EdsTerm EdsContext::term(std::uint64_t n, const Limits& limits) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = term_cache_.find(n);
    if (it != term_cache_.end()) return it->second;
  }
  RationalPoint pt = multiply_point(curve_, base_, n, limits);
  if (pt.is_identity()) raise(Errc::non_torsion_required, "nP is the identity");
  Natural b;
  mpz_root(b.get_mpz_t(), pt.z.get_mpz_t(), 3);
  if (b * b * b != pt.z) raise(Errc::cube_extraction_failure, "z_n is not a perfect cube");
  if (mpz_sizeinbase(b.get_mpz_t(), 2) > limits.term_bit_budget)
    raise(Errc::index_too_large, "term exceeds bit budget");
  EdsTerm t{n, pt.x / b, b};
  std::lock_guard<std::mutex> lock(mutex_);
  term_cache_.emplace(n, t);
  return t;
}

std::string EdsContext::to_string() const {
  return "eds:" + curve_.to_string() + ":" + base_->first.get_num().get_str() + "," +
         base_->second.get_num().get_str();
}

EdsTerm eds_term(const EdsContext& ctx, std::uint64_t n, const Limits& limits) {
  return ctx.term(n, limits);
}

CurveModP::CurveModP(const WeierstrassCurve& curve, std::uint64_t p) : p_(p) {
  a1_ = reduce_mpz(curve.a1, p);
  a2_ = reduce_mpz(curve.a2, p);
  a3_ = reduce_mpz(curve.a3, p);
  a4_ = reduce_mpz(curve.a4, p);
  a6_ = reduce_mpz(curve.a6, p);
  good_ = curve.good_reduction(p);
}

FpPoint CurveModP::reduce(const AffinePoint& a) const {
  if (!a) return FpPoint{};
  if (a->first.get_den() != 1 || a->second.get_den() != 1)
    raise(Errc::internal, "reduce expects an integral point");
  return FpPoint{reduce_mpz(a->first.get_num(), p_), reduce_mpz(a->second.get_num(), p_), false};
}

bool CurveModP::on_curve(const FpPoint& pt) const {
  if (pt.identity) return true;
  std::uint64_t x = pt.x % p_, y = pt.y % p_;
  std::uint64_t lhs = addmod(mulmod(y, y, p_),
                             addmod(mulmod(mulmod(a1_, x, p_), y, p_), mulmod(a3_, y, p_), p_), p_);
  std::uint64_t x2 = mulmod(x, x, p_);
  std::uint64_t rhs = addmod(mulmod(x2, x, p_),
                             addmod(mulmod(a2_, x2, p_), addmod(mulmod(a4_, x, p_), a6_, p_), p_), p_);
  return lhs == rhs;
}

bool CurveModP::nonsingular(const FpPoint& pt) const {
  if (pt.identity) return true;
  if (!on_curve(pt)) return false;
  std::uint64_t x = pt.x, y = pt.y;
  // F_y = 2y + a1 x + a3, F_x = a1 y - 3x^2 - 2 a2 x - a4
  std::uint64_t fy = addmod(addmod(y, y, p_), addmod(mulmod(a1_, x, p_), a3_, p_), p_);
  std::uint64_t x2 = mulmod(x, x, p_);
  std::uint64_t fx = submod(mulmod(a1_, y, p_),
                            addmod(addmod(mulmod(3 % p_, x2, p_), mulmod(mulmod(2 % p_, a2_, p_), x, p_), p_),
                                   a4_, p_),
                            p_);
  return fx != 0 || fy != 0;
}

FpPoint CurveModP::negate(const FpPoint& pt) const {
  if (pt.identity) return pt;
  std::uint64_t ny = submod(0, addmod(pt.y, addmod(mulmod(a1_, pt.x, p_), a3_, p_), p_), p_);
  return FpPoint{pt.x, ny, false};
}

FpPoint CurveModP::add(const FpPoint& a, const FpPoint& b) const {
  if (a.identity) return b;
  if (b.identity) return a;
  std::uint64_t lambda;
  if (a.x == b.x) {
    std::uint64_t ysum = addmod(a.y, addmod(b.y, addmod(mulmod(a1_, a.x, p_), a3_, p_), p_), p_);
    if (ysum == 0) return FpPoint{};
    // tangent (the two points coincide here)
    std::uint64_t num = submod(addmod(mulmod(3 % p_, mulmod(a.x, a.x, p_), p_),
                                      addmod(mulmod(mulmod(2 % p_, a2_, p_), a.x, p_), a4_, p_), p_),
                               mulmod(a1_, a.y, p_), p_);
    std::uint64_t den = addmod(addmod(a.y, a.y, p_), addmod(mulmod(a1_, a.x, p_), a3_, p_), p_);
    lambda = mulmod(num, invmod(den, p_), p_);
  } else {
    std::uint64_t num = submod(b.y, a.y, p_);
    std::uint64_t den = submod(b.x, a.x, p_);
    lambda = mulmod(num, invmod(den, p_), p_);
  }
  std::uint64_t x3 = submod(submod(addmod(mulmod(lambda, lambda, p_), mulmod(a1_, lambda, p_), p_), a2_, p_),
                            addmod(a.x, b.x, p_), p_);
  std::uint64_t y3 = submod(mulmod(lambda, submod(a.x, x3, p_), p_),
                            addmod(a.y, addmod(mulmod(a1_, x3, p_), a3_, p_), p_), p_);
  return FpPoint{x3, y3, false};
}

FpPoint CurveModP::mul(const FpPoint& a, std::uint64_t n) const {
  FpPoint acc{};
  FpPoint addend = a;
  while (n) {
    if (n & 1) acc = add(acc, addend);
    n >>= 1;
    if (n) addend = add(addend, addend);
  }
  return acc;
}

std::vector<FpPoint> CurveModP::lift_x(std::uint64_t x) const {
  std::vector<FpPoint> out;
  x %= p_;
  if (p_ == 2) {
    for (std::uint64_t y = 0; y < 2; ++y) {
      FpPoint pt{x, y, false};
      if (on_curve(pt)) out.push_back(pt);
    }
    return out;
  }
  // complete the square: (2y + a1 x + a3)^2 = 4 f(x) + (a1 x + a3)^2
  std::uint64_t h = addmod(mulmod(a1_, x, p_), a3_, p_);
  std::uint64_t x2 = mulmod(x, x, p_);
  std::uint64_t f = addmod(mulmod(x2, x, p_),
                           addmod(mulmod(a2_, x2, p_), addmod(mulmod(a4_, x, p_), a6_, p_), p_), p_);
  std::uint64_t rhs = addmod(mulmod(4 % p_, f, p_), mulmod(h, h, p_), p_);
  auto s = sqrtmod(rhs, p_);
  if (!s) return out;
  std::uint64_t inv2 = invmod(2 % p_, p_);
  std::uint64_t y1 = mulmod(submod(*s, h, p_), inv2, p_);
  out.push_back(FpPoint{x, y1, false});
  std::uint64_t y2 = mulmod(submod(submod(0, *s, p_), h, p_), inv2, p_);
  if (y2 != y1) out.push_back(FpPoint{x, y2, false});
  return out;
}

std::uint64_t CurveModP::count_points() const {
  std::uint64_t total = 1;  // infinity
  if (p_ == 2) {
    for (std::uint64_t x = 0; x < 2; ++x)
      for (std::uint64_t y = 0; y < 2; ++y)
        if (on_curve(FpPoint{x, y, false})) ++total;
    return total;
  }
  // chi table of squares
  std::vector<signed char> chi(p_, -1);
  chi[0] = 0;
  for (std::uint64_t i = 1; i < p_; ++i) chi[mulmod(i, i, p_)] = 1;
  for (std::uint64_t x = 0; x < p_; ++x) {
    std::uint64_t h = addmod(mulmod(a1_, x, p_), a3_, p_);
    std::uint64_t x2 = mulmod(x, x, p_);
    std::uint64_t f = addmod(mulmod(x2, x, p_),
                             addmod(mulmod(a2_, x2, p_), addmod(mulmod(a4_, x, p_), a6_, p_), p_), p_);
    std::uint64_t rhs = addmod(mulmod(4 % p_, f, p_), mulmod(h, h, p_), p_);
    total += static_cast<std::uint64_t>(1 + chi[rhs]);
  }
  return total;
}

std::uint64_t curve_order_exhaustive(const WeierstrassCurve& curve, std::uint64_t p) {
  if (!curve.good_reduction(p)) raise(Errc::bad_reduction, "p = " + std::to_string(p));
  return CurveModP(curve, p).count_points();
}

std::uint64_t point_order(const CurveModP& curve, const FpPoint& pt, std::uint64_t group_order) {
  if (pt.identity) raise(Errc::internal, "point_order of the identity");
  std::uint64_t order = group_order;
  Factorization f = factorize_u64(group_order);
  for (const auto& pp : f.factors) {
    std::uint64_t q = pp.prime.get_ui();
    while (order % q == 0 && curve.mul(pt, order / q).identity) order /= q;
  }
  return order;
}

std::uint64_t curve_order_bsgs(const WeierstrassCurve& curve, std::uint64_t p) {
  if (!curve.good_reduction(p)) raise(Errc::bad_reduction, "p = " + std::to_string(p));
  CurveModP c(curve, p);
  const std::uint64_t two_sqrt = static_cast<std::uint64_t>(2.0 * std::sqrt(static_cast<double>(p))) + 1;
  const std::uint64_t lo = p + 1 - two_sqrt;
  const std::uint64_t hi = p + 1 + two_sqrt;

  auto multiples_in_window = [&](std::uint64_t step) {
    std::vector<std::uint64_t> out;
    std::uint64_t first = ((lo + step - 1) / step) * step;
    for (std::uint64_t m = first; m <= hi; m += step) out.push_back(m);
    return out;
  };

  std::uint64_t state = p * 0x9e3779b97f4a7c15ull + 12345;
  std::uint64_t acc = 1;
  for (int attempt = 0; attempt < 64; ++attempt) {
    // deterministic random point
    FpPoint q{};
    while (q.identity) {
      std::uint64_t x = splitmix(state) % p;
      auto lifts = c.lift_x(x);
      if (!lifts.empty()) q = lifts[splitmix(state) % lifts.size()];
    }
    // find one multiple of ord(q) in [lo, hi] with baby-step giant-step
    std::uint64_t w = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi - lo))) + 1;
    std::unordered_map<std::uint64_t, std::uint64_t> baby;  // key x * p + y
    FpPoint bj{};
    baby.reserve(w + 1);
    for (std::uint64_t j = 0; j <= w; ++j) {
      if (!bj.identity) baby[bj.x * p + bj.y] = j;
      else baby[p * p + 7] = j;  // encode identity separately
      bj = c.add(bj, q);
    }
    FpPoint wq = c.mul(q, w);
    FpPoint giant = c.mul(q, lo);
    std::uint64_t found = 0;
    for (std::uint64_t i = 0; lo + i * w <= hi + w; ++i) {
      std::uint64_t key = giant.identity ? p * p + 7 : giant.x * p + giant.y;
      auto it = baby.find(key);
      if (it != baby.end()) {
        // (lo + i w) Q = j Q  =>  (lo + i w - j) Q = O
        std::uint64_t m = lo + i * w - it->second;
        if (m >= lo && m <= hi && c.mul(q, m).identity) {
          found = m;
          break;
        }
      }
      // also try the negative match: (lo + i w + j) Q = O
      FpPoint neg = c.negate(giant);
      std::uint64_t nkey = neg.identity ? p * p + 7 : neg.x * p + neg.y;
      auto nit = baby.find(nkey);
      if (nit != baby.end()) {
        std::uint64_t m = lo + i * w + nit->second;
        if (m >= lo && m <= hi && c.mul(q, m).identity) {
          found = m;
          break;
        }
      }
      giant = c.add(giant, wq);
    }
    if (found == 0) continue;  // should not happen
    std::uint64_t ord = point_order(c, q, found);
    acc = std::lcm(acc, ord);
    auto candidates = multiples_in_window(acc);
    if (candidates.size() == 1) return candidates[0];
  }
  // ambiguous after many samples (tiny group exponent); fall back
  return c.count_points();
}

std::uint64_t curve_order(const WeierstrassCurve& curve, std::uint64_t p, const Limits& limits) {
  if (!curve.good_reduction(p)) raise(Errc::bad_reduction, "p = " + std::to_string(p));
  std::uint64_t n = p < limits.curve_order_exhaustive_below ? curve_order_exhaustive(curve, p)
                                                            : curve_order_bsgs(curve, p);
  // Hasse window check
  double slack = 2.0 * std::sqrt(static_cast<double>(p));
  double diff = static_cast<double>(n) - static_cast<double>(p) - 1.0;
  if (std::abs(diff) > slack + 1e-9) raise(Errc::internal, "Hasse bound violated");
  return n;
}

std::uint64_t point_order(const EdsContext& ctx, std::uint64_t p, const Limits& limits) {
  if (!ctx.curve().good_reduction(p)) raise(Errc::bad_reduction, "p = " + std::to_string(p));
  CurveModP c(ctx.curve(), p);
  FpPoint pt = c.reduce(ctx.base());
  std::uint64_t n = curve_order(ctx.curve(), p, limits);
  return point_order(c, pt, n);
}

KoblitzProfile koblitz_profile(const EdsContext& ctx, std::uint64_t z, const Limits& limits) {
  KoblitzProfile profile;
  profile.z = z;
  profile.h = 1;
  std::map<std::uint64_t, std::uint64_t> by_entry;  // m_p -> least p
  for (std::uint64_t p : primes_up_to(z)) {
    if (!ctx.curve().good_reduction(p)) continue;
    std::uint64_t n = curve_order(ctx.curve(), p, limits);
    if (!is_prime_u64(n)) continue;
    profile.primes.push_back(p);
    // m_p | #E(F_p) prime and m_p > 1 since p does not divide b_1 = 1
    if (!by_entry.count(n)) by_entry[n] = p;
  }
  for (const auto& [m, p] : by_entry) profile.dedup.emplace_back(p, m);
  std::sort(profile.dedup.begin(), profile.dedup.end());
  for (const auto& [p, m] : profile.dedup) profile.h *= make_rational(Natural(m) - 1, Natural(m));
  profile.delta_hat = profile.h.get_d();
  return profile;
}

KoblitzSieveReport koblitz_sieve_check(const EdsContext& ctx, std::uint64_t N, std::uint64_t z,
                                       const Limits& limits) {
  KoblitzSieveReport report;
  report.N = N;
  report.z = z;
  report.profile = koblitz_profile(ctx, z, limits);
  std::vector<bool> excluded(N + 1, false);
  for (const auto& [p, m] : report.profile.dedup)
    for (std::uint64_t n = m; n <= N; n += m) excluded[n] = true;
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= N; ++n)
    if (!excluded[n]) ++count;
  report.count = count;
  report.predicted = Rational(N) * report.profile.h;
  report.bound = pow_int(2, static_cast<unsigned>(report.profile.dedup.size()));
  Rational diff = Rational(Natural(count)) - report.predicted;
  Rational bound_q(report.bound);
  report.within_bound = diff <= bound_q && -diff <= bound_q;
  report.observed_delta = static_cast<double>(count) / static_cast<double>(N);
  return report;
}

HeightEstimate height_estimate(const EdsContext& ctx, std::uint64_t nmax, const Limits& limits) {
  if (nmax < 10) raise(Errc::spec_invalid, "height_estimate requires nmax >= 10");
  if (nmax > limits.eds_index_limit) raise(Errc::index_too_large, "nmax exceeds EDS index limit");
  HeightEstimate est;
  est.h_hat = 0.0;
  for (std::uint64_t n = 10; n <= nmax; ++n) {
    EdsTerm t = ctx.term(n, limits);
    // log via mpz size: exact enough at desk scale
    double lb = std::log(t.b.get_d());
    if (t.b == 1) lb = 0.0;
    double ratio = lb / (static_cast<double>(n) * static_cast<double>(n));
    est.ratios.emplace_back(n, ratio);
    est.h_hat = std::max(est.h_hat, ratio);
  }
  return est;
}

}  // namespace sdsieve
