#include "visc/diagnostics.hpp"

#include <algorithm>

#include "visc/error.hpp"

namespace visc {

void Diagnostics::schedule_violation(const std::string& message) {
  if (strict_) throw Error(ErrorKind::ScheduleViolation, message);
  auto it = std::find_if(warnings_.begin(), warnings_.end(),
                         [&](const Warning& w) { return w.message == message; });
  if (it == warnings_.end()) {
    warnings_.push_back({message, 1});
  } else {
    ++it->count;
  }
}

}  // namespace visc
