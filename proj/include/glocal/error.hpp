#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <cstdint>

namespace glocal {

enum class Errc {
  bad_spec,
  no_half,
  not_a_unit,
  cap_exceeded,
  budget_exceeded,
  dimension_mismatch,
  ring_mismatch,
  not_invertible,
  bad_index,
  not_involution,
  not_commuting,
  parse,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Default limits shared by every exhaustive routine.
struct Limits {
  std::uint64_t element_cap = 1'000'000;
  std::uint64_t matrix_cap = 10'000'000;
  std::uint64_t budget = 100'000'000;
  unsigned workers = 1;
};

}  // namespace glocal
