// parallel.hpp — fork-join worker pool for embarrassingly parallel sweeps.
//
// Design constraints:
//   * Results must be independent of the worker count so that CLI output is
//     byte-identical regardless of --threads / OSCHAM_THREADS. parallel_for
//     hands out item indices; workers write only to their own item's slot,
//     and any reduction is performed sequentially by the caller in index order.
//   * Monte-Carlo work is split into a FIXED number of chunks, each with its
//     own deterministic seed, so the sample stream never depends on scheduling.

#pragma once

#include <cstddef>
#include <functional>

namespace oscham {

// Resolve the worker count: OSCHAM_THREADS env var (if set and positive)
// overrides `requested`; `requested` = 0 means hardware concurrency.
unsigned resolve_thread_count(unsigned requested);

// Global default used by operations that do not take an explicit count.
void set_default_thread_count(unsigned n);
unsigned default_thread_count();

// Run fn(i) for i in [0, n) across `threads` workers (0 = default count).
// fn must be safe to call concurrently for distinct i. Exceptions thrown by
// fn are captured and the first one (lowest index) is rethrown after join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned threads = 0);

}  // namespace oscham
