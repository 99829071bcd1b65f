#pragma once

#include <chrono>
#include <cstdint>

namespace npart::detail {

using Clock = std::chrono::steady_clock;

inline std::int64_t elapsed_us(Clock::time_point since) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - since).count();
}

}  // namespace npart::detail
