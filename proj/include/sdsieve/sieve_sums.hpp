#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdsieve/arith.hpp"
#include "sdsieve/entry_points.hpp"
#include "sdsieve/sequences.hpp"

namespace sdsieve {

// A squarefree modulus Pi given as its ascending list of distinct primes.
struct SquarefreeModulus {
  enum class Provenance { custom, all_below, all_below_excluding, koblitz_below };

  std::vector<std::uint64_t> primes;
  Provenance provenance = Provenance::custom;
  double z = 0.0;
  std::vector<std::uint64_t> excluded;

  static SquarefreeModulus primes_below(double z);  // all p <= z
  static SquarefreeModulus primes_below_excluding(double z, std::vector<std::uint64_t> S);
  static SquarefreeModulus custom(std::vector<std::uint64_t> primes);
  static SquarefreeModulus from_integer(const Natural& pi, const Limits& limits = default_limits());
  static SquarefreeModulus koblitz(std::vector<std::uint64_t> primes, double z);

  unsigned omega() const { return static_cast<unsigned>(primes.size()); }
  Natural value() const;
};

enum class MoebiusStrategy { auto_select, direct, structured, both };

struct MoebiusSum {
  Rational value;
  MoebiusStrategy used = MoebiusStrategy::direct;
  unsigned omega = 0;
  std::optional<EntryPoint> m_pi;  // entry point of Pi when composed
  std::vector<std::uint64_t> dropped_primes;  // infinite-entry primes of Pi
};

// Direct evaluation of the 2^omega inclusion-exclusion sum; infinite-entry
// primes contribute nothing and are skipped.
MoebiusSum moebius_sum_direct(const EntryPointTable& table, const SquarefreeModulus& pi);
// Structured evaluation through divisors of m_Pi with the coprimality filter.
MoebiusSum moebius_sum_structured(const EntryPointTable& table, const SquarefreeModulus& pi);
// Strategy selection: both (self-checking) up to omega 10, then direct up to
// the omega guard, then structured.
MoebiusSum moebius_sum(const EntryPointTable& table, const SquarefreeModulus& pi,
                       MoebiusStrategy strategy = MoebiusStrategy::auto_select);

// phi(m_Pi)/m_Pi for Pi = prod of p <= z, p not in S; every entry point must
// resolve finite.
Rational phi_ratio_of_mPi(const EntryPointTable& table, double z,
                          const std::vector<std::uint64_t>& S = {});

struct SieveCount {
  std::uint64_t N = 0;
  SquarefreeModulus modulus;
  std::uint64_t count = 0;  // #A(N,z)
  Rational predicted;       // N * M(Pi)
  Natural bound;            // 2^omega(Pi)
  bool within_bound = false;
};

// Exact #A(N,z) = #{n <= N : gcd(x_n, Pi) = 1} by a boolean residue sieve.
SieveCount count_A(const EntryPointTable& table, std::uint64_t N, const SquarefreeModulus& pi);

struct RoughReport {
  std::uint64_t N = 0;
  double z = 0.0;
  std::uint64_t count = 0;
  double n_over_loglog = 0.0;
  double n_over_logloglog = 0.0;
  double fitted_c = 0.0;  // count / (N / log log N)
};

RoughReport rough_experiment(const EntryPointTable& table, std::uint64_t N);

struct PrimeDensityRow {
  std::uint64_t horizon = 0;
  std::uint64_t prime_terms = 0;
  double fraction = 0.0;
  bool truncated = false;
};

struct PrimeDensityReport {
  std::vector<PrimeDensityRow> rows;
  bool probable_used = false;
};

PrimeDensityReport prime_term_density(const SequenceSpec& seq, std::uint64_t N,
                                      const Limits& limits = default_limits());

// Some prime q | x_n with m_q = n, or absent.
std::optional<Natural> primitive_divisor_check(const SequenceSpec& seq, std::uint64_t n,
                                               const Limits& limits = default_limits());

struct Figure1Row {
  std::uint64_t z = 0;
  std::optional<Rational> value;
  std::string strategy;
  std::string error;
  double inv_log_z = 0.0;
  double inv_loglog_z = 0.0;   // NaN when log log z <= 0
  double m_times_log_z = 0.0;
  std::optional<Rational> ordered_sum;  // Grantham-Granville reordering, when requested
};

std::vector<Figure1Row> figure1_sweep(const EntryPointTable& table, std::uint64_t zmax,
                                      MoebiusStrategy strategy = MoebiusStrategy::auto_select,
                                      bool order_by_md = false, unsigned threads = 1);

// Experimental: sum of mu(d)/m_d over all squarefree d with m_d <= z.
Rational ordered_by_md_sum(const EntryPointTable& table, std::uint64_t z);

}  // namespace sdsieve
