#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "sdsieve/arith.hpp"
#include "sdsieve/sequences.hpp"

namespace sdsieve {

// The entry point m_d: least index m with d | x_m. Infinite outcomes carry a
// machine-checkable certificate; truncated searches stay Unresolved.
struct EntryPoint {
  enum class Outcome { finite, infinite, unresolved };

  Outcome outcome = Outcome::unresolved;
  Natural d = 0;
  Natural m = 0;                // when finite
  std::string certificate;     // when infinite
  std::uint64_t search_bound = 0;  // when unresolved
  std::string method;          // scan | order-divisor | lcm-composition

  bool finite() const { return outcome == Outcome::finite; }
  bool infinite() const { return outcome == Outcome::infinite; }
  bool unresolved() const { return outcome == Outcome::unresolved; }

  // g(d) = 1/m_d with the convention 1/infinity = 0.
  Rational g() const {
    if (unresolved()) raise(Errc::unresolved_entry, "g(d) of an unresolved entry point");
    if (infinite()) return Rational(0);
    return make_rational(1, m);
  }

  std::string outcome_string() const;
  std::string m_string() const;  // "12", "inf", or "?<=bound"
};

EntryPoint entry_point_prime(const SequenceSpec& seq, std::uint64_t p,
                             const Limits& limits = default_limits());

// Squarefree d only; composes prime entry points by lcm.
EntryPoint entry_point(const SequenceSpec& seq, const Natural& d,
                       const Limits& limits = default_limits());

// Read-mostly memo of prime entry points for one sequence.
class EntryPointTable {
 public:
  explicit EntryPointTable(SequenceSpec seq, Limits limits = default_limits())
      : seq_(std::move(seq)), limits_(limits) {}

  const SequenceSpec& seq() const { return seq_; }
  const Limits& limits() const { return limits_; }
  EntryPoint prime(std::uint64_t p) const;

 private:
  SequenceSpec seq_;
  Limits limits_;
  mutable std::map<std::uint64_t, EntryPoint> memo_;
  mutable std::mutex mutex_;
};

struct EntryLawReport {
  bool pass = true;
  std::uint64_t checks = 0;
  std::string counterexample;
};

// Exhaustively verifies, over squarefree d <= dmax and n <= nmax:
//   d | x_n  iff  m_d | n,
//   k | j implies m_k | m_j,
//   m_{[d1,d2]} = [m_{d1}, m_{d2}] for coprime squarefree pairs.
EntryLawReport verify_entry_laws(const SequenceSpec& seq, std::uint64_t dmax, std::uint64_t nmax,
                                 const Limits& limits = default_limits());

// Least prime p <= pmax with q | m_p, if any.
std::optional<std::uint64_t> smallest_p_with_q_dividing_mp(const SequenceSpec& seq,
                                                           std::uint64_t q, std::uint64_t pmax,
                                                           const Limits& limits = default_limits());

}  // namespace sdsieve
