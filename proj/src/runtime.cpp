#include "smashline/runtime.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>

namespace smashline {

int worker_count() {
  if (const char* env = std::getenv("SMASHLINE_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return std::min(n, 256);
    } catch (...) {
      // fall through to the hardware default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace smashline
