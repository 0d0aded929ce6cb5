#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sdsieve/arith.hpp"
#include "sdsieve/eds.hpp"

namespace sdsieve {

enum class SequenceKind { fibonacci, lucas, mersenne, trivial, parity_demo, eds };

// An immutable strong divisibility sequence description. Lucas sequences are
// first-kind U_n(P,Q) with gcd(P,Q) = 1; terms are |U_n|.
class SequenceSpec {
 public:
  static SequenceSpec fibonacci();
  static SequenceSpec mersenne();
  static SequenceSpec lucas(long long P, long long Q);
  static SequenceSpec trivial();
  static SequenceSpec parity_demo();
  static SequenceSpec eds(std::shared_ptr<const EdsContext> ctx);

  // Grammar: fib | mersenne | lucas:P,Q | trivial | paritydemo |
  //          eds:a1,a2,a3,a4,a6:px,py  (point coordinates as integers or num/den)
  static SequenceSpec parse(std::string_view text);

  SequenceKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  long long lucas_p() const { return p_; }
  long long lucas_q() const { return q_; }
  long long lucas_disc() const { return p_ * p_ - 4 * q_; }
  const EdsContext& eds_context() const { return *eds_; }
  std::shared_ptr<const EdsContext> eds_shared() const { return eds_; }

 private:
  SequenceSpec(SequenceKind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  SequenceKind kind_;
  std::string name_;
  long long p_ = 0, q_ = 0;
  std::shared_ptr<const EdsContext> eds_;
};

// Exact x_n (x_1 = 1 for every kind).
Natural term(const SequenceSpec& seq, std::uint64_t n, const Limits& limits = default_limits());

// x_n mod m without forming the full term (matrix power / powmod / curve
// arithmetic); for the eds kind m must be a prime of good reduction.
Natural term_mod(const SequenceSpec& seq, std::uint64_t n, const Natural& m,
                 const Limits& limits = default_limits());

// Zero test for d | x_n that works for any d >= 1.
bool term_divisible(const SequenceSpec& seq, std::uint64_t n, const Natural& d,
                    const Limits& limits = default_limits());

struct StrongDivReport {
  bool pass = true;
  std::uint64_t pairs_checked = 0;
  std::string counterexample;
};

StrongDivReport strong_divisibility_check(const SequenceSpec& seq, std::uint64_t bound,
                                          const Limits& limits = default_limits());

struct GrowthEnvelope {
  std::function<double(double)> f;  // n <= f(z) implies x_n <= z
  std::function<double(double)> g;  // compositional inverse, f(g(y)) = y
  double g_domain_min = 0.0;        // g defined on [f(1), inf)
  bool certified_primitive_divisors = false;
  std::uint64_t primitive_index_bound = 0;  // primitive prime divisor beyond this index
  bool heuristic = false;                   // EDS envelope rests on a height estimate
  std::string note;
};

GrowthEnvelope growth_envelope(const SequenceSpec& seq, const Limits& limits = default_limits());

struct UnitIndexSet {
  std::uint64_t horizon = 0;
  std::vector<std::uint64_t> members;  // {n <= N : x_n = 1}, ascending
  double density = 0.0;
  bool divisor_closed = false;
  bool certified = true;  // membership exact over the whole window
};

UnitIndexSet unit_index_set(const SequenceSpec& seq, std::uint64_t N,
                            const Limits& limits = default_limits());

}  // namespace sdsieve
