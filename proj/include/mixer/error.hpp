#pragma once

#include <stdexcept>
#include <string>

namespace mixer {

// Numeric values are shared with the C API status codes and the CLI exit codes.
enum class Errc : int {
  ok = 0,
  internal = 1,
  spec_syntax = 2,
  unsupported_parameters = 3,
  non_prime_characteristic = 4,
  no_irreducible_found = 5,
  cap_exceeded = 6,
  mixed_groups = 7,
  no_suitable_prime = 8,
  eigensplit_failure = 9,
  loop_budget_exceeded = 10,
  arity_mismatch = 11,
  uncovered_probe = 12,
  invalid_argument = 13,
  io_error = 14,
  bound_violation = 15,
  golden_mismatch = 16,
  no_representation = 17,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace mixer
