#pragma once

#include <string_view>

namespace retina {

enum class Decision { Accept, Reject, Timeout };

constexpr std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Accept: return "accept";
    case Decision::Reject: return "reject";
    case Decision::Timeout: return "timeout";
  }
  return "?";
}

}  // namespace retina
