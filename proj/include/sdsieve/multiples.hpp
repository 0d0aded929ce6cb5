#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sdsieve/arith.hpp"

namespace sdsieve {

struct FiniteSeedSet {
  std::vector<std::uint64_t> elements;  // ascending, distinct, >= 1

  static FiniteSeedSet of(std::vector<std::uint64_t> values);
  bool contains_unit() const { return !elements.empty() && elements.front() == 1; }
  std::string to_string() const;
};

// Dense membership bitmap over [1, N].
class MultiplesWindow {
 public:
  MultiplesWindow() = default;
  MultiplesWindow(std::uint64_t horizon, std::string provenance);

  std::uint64_t horizon() const { return horizon_; }
  const std::string& provenance() const { return provenance_; }
  bool contains(std::uint64_t n) const { return n >= 1 && n <= horizon_ && bits_[n]; }
  void insert(std::uint64_t n) {
    if (n >= 1 && n <= horizon_) bits_[n] = true;
  }
  std::uint64_t count() const;
  std::vector<std::uint64_t> members() const;
  MultiplesWindow complement() const;
  bool operator==(const MultiplesWindow& other) const {
    return horizon_ == other.horizon_ && bits_ == other.bits_;
  }
  std::optional<std::uint64_t> first_difference(const MultiplesWindow& other) const;

 private:
  std::uint64_t horizon_ = 0;
  std::vector<bool> bits_;
  std::string provenance_;
};

// M(A) over [1, N]: all multiples of seed elements.
MultiplesWindow multiples_window(const FiniteSeedSet& seed, std::uint64_t N,
                                 const Limits& limits = default_limits());
// Multiples of an arbitrary window's members.
MultiplesWindow multiples_of(const MultiplesWindow& members);

// A* over [1, N]: lcms of subsets of size >= 2 with overall gcd 1 (plus 1
// itself when 1 is in the seed).
MultiplesWindow star_window(const FiniteSeedSet& seed, std::uint64_t N,
                            const Limits& limits = default_limits());

// (S * P_m) over [1, N] where P_m = {q : omega(q) <= m}.
MultiplesWindow product_window(const MultiplesWindow& S, unsigned m,
                               const Limits& limits = default_limits());

struct MplVerdict {
  bool equal = false;
  std::uint64_t N = 0;
  double lhs_density = 0.0;  // density of complement(M(A*)) at N
  std::optional<std::uint64_t> first_mismatch;
};

// Exact check of: complement(M(A*)) == complement(M(A)) * P_1 on [1, N].
MplVerdict verify_prop_mpl(const FiniteSeedSet& seed, std::uint64_t N,
                           const Limits& limits = default_limits());

enum class DensityMode { natural, logarithmic };

struct DensityEstimate {
  std::uint64_t N = 0;
  double natural = 0.0;
  double logarithmic = 0.0;
  double t_value = 0.0;  // 1 - logarithmic
};

DensityEstimate density(const MultiplesWindow& S);

// A window family: the same set expression instantiated at each horizon.
struct WindowFamily {
  std::string name;
  std::function<MultiplesWindow(std::uint64_t)> build;
};

WindowFamily family_pow2();
WindowFamily family_odds();
WindowFamily family_unit();  // {1}
WindowFamily family_from_members(std::string name, std::vector<std::uint64_t> members);

struct TheoremA1Row {
  std::uint64_t N = 0;
  std::uint64_t count = 0;
  double density = 0.0;
};

struct TheoremA1Report {
  std::vector<TheoremA1Row> rows;
  bool monotone_nonincreasing = true;
  bool strictly_decreasing = true;
};

// Densities of B * P_m across horizons; B must be divisor closed at every
// horizon (not_divisor_closed with a witness otherwise).
TheoremA1Report theorem_mth_experiment(const WindowFamily& B, unsigned m,
                                       const std::vector<std::uint64_t>& horizons,
                                       const Limits& limits = default_limits());

// Illustrative generator for the remark that divisor-closedness is needed:
// union over blocks (e^(k-1)^2, e^k^2] of the class 1 mod q_k, q_k the k-th
// prime.
MultiplesWindow remark_a2_demo(std::uint64_t N, const Limits& limits = default_limits());

}  // namespace sdsieve
