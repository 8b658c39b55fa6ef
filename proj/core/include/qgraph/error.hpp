#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qgraph {

enum class Errc {
  invalid_argument,
  construction_failure,
  convergence_failure,
  ill_conditioned_resolvent,
  internal_consistency,
  spectral_inconsistency,
  not_invertible,
  invalid_coset_point,
  action_undefined,
  rescale_required,
  invalid_pattern,
  io_error,
};

std::string_view to_string(Errc code) noexcept;

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(Errc::invalid_argument, what);
}

}  // namespace qgraph
