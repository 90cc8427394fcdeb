#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace selfsim {

using BigInt = boost::multiprecision::cpp_int;

inline std::string to_decimal(const BigInt& value) { return value.str(); }

/// Three-valued answer of a semi-decision: `undecided` means a budget ran out.
enum class Verdict { no, yes, undecided };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    default: return "undecided";
  }
}

/// Default node budget for recursions on presets that are not certified contracting.
inline constexpr std::size_t kDefaultRecursionBudget = 200000;

}  // namespace selfsim
