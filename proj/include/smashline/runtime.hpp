#pragma once

namespace smashline {

// Worker count for internally parallel loops: SMASHLINE_THREADS if set
// (clamped to [1, 256]), otherwise the hardware concurrency.
int worker_count();

}  // namespace smashline
