#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sdsieve {

// Typed failure conditions. The CLI maps guarded-resource exhaustion
// (omega_too_large, divisor_overflow, index_too_large, unresolved_entry,
// factoring_timeout, seed_too_large) to exit code 3 and everything else to 2.
enum class Errc {
  input_zero,
  divisor_overflow,
  omega_too_large,
  index_too_large,
  bad_modulus,
  not_available,
  spec_invalid,
  not_squarefree,
  unresolved_entry,
  factoring_timeout,
  seed_too_large,
  seed_contains_unit,
  not_divisor_closed,
  no_envelope,
  not_integral_point,
  bad_reduction,
  point_not_on_curve,
  non_torsion_required,
  cube_extraction_failure,
  internal,
};

std::string_view errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

  bool resource_guard() const {
    switch (code_) {
      case Errc::omega_too_large:
      case Errc::divisor_overflow:
      case Errc::index_too_large:
      case Errc::unresolved_entry:
      case Errc::factoring_timeout:
      case Errc::seed_too_large:
        return true;
      default:
        return false;
    }
  }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace sdsieve
