#pragma once

#include <span>
#include <vector>

namespace smashline {

// Enumerates all weak compositions of `total` into `parts` nonnegative
// integers, in ascending colexicographic order (the last part varies
// slowest). The callback receives the same buffer each time.
template <typename Fn>
void for_each_composition(int total, int parts, Fn&& fn) {
  std::vector<int> c(static_cast<size_t>(parts), 0);
  auto rec = [&](auto&& self, int idx, int remaining) -> void {
    if (idx == 0) {
      c[0] = remaining;
      fn(std::span<const int>(c));
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      c[static_cast<size_t>(idx)] = v;
      self(self, idx - 1, remaining - v);
    }
  };
  if (parts <= 0) return;
  rec(rec, parts - 1, total);
}

// k! / prod parts!, evaluated as a product of binomials; exact in double for
// the degrees used here.
inline double multinomial(int total, std::span<const int> parts) {
  double acc = 1.0;
  int seen = 0;
  for (int p : parts) {
    seen += p;
    // C(seen, p) by the multiplicative formula
    double binom = 1.0;
    for (int i = 1; i <= p; ++i) {
      binom *= static_cast<double>(seen - p + i);
      binom /= static_cast<double>(i);
    }
    acc *= binom;
  }
  (void)total;
  return acc;
}

}  // namespace smashline
