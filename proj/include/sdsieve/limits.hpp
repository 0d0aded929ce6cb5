#pragma once

#include <cstdint>

namespace sdsieve {

// Resource guards. Every guard fails loudly with a typed Error instead of
// hanging; the defaults cover everything the desk-scale experiments need.
struct Limits {
  // Largest exact term, in bits. EDS terms grow like exp(n^2) and must fail
  // predictably.
  std::uint64_t term_bit_budget = 1ull << 20;
  // Exact rational point multiplication refuses indices beyond this.
  std::uint64_t eds_index_limit = 200;
  // Divisor enumeration guard when no explicit cap is passed.
  std::uint64_t divisor_limit = 1ull << 20;
  // Direct (subset) Moebius-sum strategy refuses omega(Pi) above this.
  unsigned omega_direct_limit = 24;
  // Pollard-rho iteration budget per factoring call.
  std::uint64_t factor_iteration_budget = 1ull << 26;
  // Naive point counting below this prime, BSGS at or above.
  std::uint64_t curve_order_exhaustive_below = 3000;
  // Largest horizon for dense membership bitmaps.
  std::uint64_t window_horizon_cap = 100'000'000;
  // star_window refuses seeds with more elements than this.
  unsigned star_seed_cap = 20;
};

inline const Limits& default_limits() {
  static const Limits limits{};
  return limits;
}

}  // namespace sdsieve
