// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <functional>

namespace genrec {

// Effective worker count. requested == 0 means "ambient": hardware
// concurrency capped by the GENREC_THREADS environment variable. An
// explicit request bypasses the cap (tests pin thread counts that way).
int thread_budget(int requested = 0);

// Runs fn over [0, n) split into contiguous ranges, one per worker. Workers
// write disjoint outputs, so results do not depend on scheduling.
void parallel_for(std::uint64_t n, int n_threads,
                  const std::function<void(std::uint64_t, std::uint64_t)>& fn);

}  // namespace genrec
