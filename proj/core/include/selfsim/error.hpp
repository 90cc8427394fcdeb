#pragma once

#include <stdexcept>
#include <string>

namespace selfsim {

enum class Errc {
  invalid_degree,
  invalid_vertex,
  parse_error,
  unknown_symbol,
  invalid_preset,
  precondition,
  not_in_level_stabilizer,
  level_too_large,
  budget_exhausted,
  stage_failure,
  internal,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace selfsim
