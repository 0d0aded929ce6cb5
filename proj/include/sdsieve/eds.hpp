#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sdsieve/arith.hpp"

namespace sdsieve {

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with integer coefficients.
struct WeierstrassCurve {
  Natural a1, a2, a3, a4, a6;

  Natural discriminant() const;
  bool good_reduction(std::uint64_t p) const;
  std::string to_string() const;  // "a1,a2,a3,a4,a6"
};

// Normalized projective point: gcd(x,y,z) = 1, z >= 0; identity is (0:1:0).
struct RationalPoint {
  Natural x, y, z;

  bool is_identity() const { return z == 0; }
  std::string to_string() const;
};

// Affine point over Q, or the identity when absent.
using AffinePoint = std::optional<std::pair<Rational, Rational>>;

AffinePoint curve_add(const WeierstrassCurve& curve, const AffinePoint& a, const AffinePoint& b);
AffinePoint curve_negate(const WeierstrassCurve& curve, const AffinePoint& a);
bool curve_contains(const WeierstrassCurve& curve, const AffinePoint& a);
RationalPoint normalize_projective(const AffinePoint& a);

// nP as a normalized projective point, exact.
RationalPoint multiply_point(const WeierstrassCurve& curve, const AffinePoint& base,
                             std::uint64_t n, const Limits& limits = default_limits());

// x_n = a_n b_n and z_n = b_n^3 for nP = (x_n : y_n : z_n).
struct EdsTerm {
  std::uint64_t n;
  Natural a;  // signed
  Natural b;  // positive
};

// A curve together with an integral non-torsion base point (so b_1 = 1), plus
// a memo of computed terms. Immutable after construction and safe to share.
class EdsContext {
 public:
  EdsContext(WeierstrassCurve curve, const Rational& px, const Rational& py,
             const Limits& limits = default_limits());

  const WeierstrassCurve& curve() const { return curve_; }
  AffinePoint base() const { return base_; }
  EdsTerm term(std::uint64_t n, const Limits& limits = default_limits()) const;
  std::string to_string() const;  // "eds:a1,a2,a3,a4,a6:px,py"

 private:
  WeierstrassCurve curve_;
  AffinePoint base_;
  mutable std::map<std::uint64_t, EdsTerm> term_cache_;
  mutable std::mutex mutex_;
};

EdsTerm eds_term(const EdsContext& ctx, std::uint64_t n, const Limits& limits = default_limits());

// Point over F_p in affine coordinates, or the identity.
struct FpPoint {
  std::uint64_t x = 0, y = 0;
  bool identity = true;
};

// Reduction of a Weierstrass curve mod p with the full characteristic-free
// chord-tangent law. Valid on nonsingular points also when p divides the
// discriminant.
class CurveModP {
 public:
  CurveModP(const WeierstrassCurve& curve, std::uint64_t p);

  std::uint64_t p() const { return p_; }
  bool good() const { return good_; }
  FpPoint reduce(const AffinePoint& a) const;  // integral points only
  bool on_curve(const FpPoint& pt) const;
  bool nonsingular(const FpPoint& pt) const;
  FpPoint negate(const FpPoint& pt) const;
  FpPoint add(const FpPoint& a, const FpPoint& b) const;
  FpPoint mul(const FpPoint& a, std::uint64_t n) const;

  // All affine points plus infinity, by direct enumeration.
  std::uint64_t count_points() const;
  // Points with a given x, used by random sampling.
  std::vector<FpPoint> lift_x(std::uint64_t x) const;

 private:
  std::uint64_t p_;
  std::uint64_t a1_, a2_, a3_, a4_, a6_;
  bool good_;
};

// #E(F_p) for a good prime: exhaustive below limits.curve_order_exhaustive_below,
// baby-step giant-step with Mestre disambiguation above.
std::uint64_t curve_order(const WeierstrassCurve& curve, std::uint64_t p,
                          const Limits& limits = default_limits());
std::uint64_t curve_order_exhaustive(const WeierstrassCurve& curve, std::uint64_t p);
std::uint64_t curve_order_bsgs(const WeierstrassCurve& curve, std::uint64_t p);

// Order of the reduced base point in E(F_p); good reduction required.
std::uint64_t point_order(const EdsContext& ctx, std::uint64_t p,
                          const Limits& limits = default_limits());
std::uint64_t point_order(const CurveModP& curve, const FpPoint& pt, std::uint64_t group_order);

struct KoblitzProfile {
  std::uint64_t z;
  std::vector<std::uint64_t> primes;  // p <= z with #E(F_p) prime
  // Deduplicated by entry value: (p, m_p), keeping the least p per m-value.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> dedup;
  Rational h;        // product of (1 - 1/m_p) over the dedup set; 1 when empty
  double delta_hat;  // h as a float
};

KoblitzProfile koblitz_profile(const EdsContext& ctx, std::uint64_t z,
                               const Limits& limits = default_limits());

struct KoblitzSieveReport {
  std::uint64_t N;
  std::uint64_t z;
  KoblitzProfile profile;
  std::uint64_t count;   // #{n <= N : p in P, p <= z => p does not divide b_n}
  Rational predicted;    // N * h(z)
  Natural bound;         // 2^{|P'|}
  bool within_bound;
  double observed_delta;  // count / N
};

KoblitzSieveReport koblitz_sieve_check(const EdsContext& ctx, std::uint64_t N, std::uint64_t z,
                                       const Limits& limits = default_limits());

struct HeightEstimate {
  double h_hat;  // max of log(b_n)/n^2 over the window
  std::vector<std::pair<std::uint64_t, double>> ratios;
};

HeightEstimate height_estimate(const EdsContext& ctx, std::uint64_t nmax,
                               const Limits& limits = default_limits());

}  // namespace sdsieve
