#pragma once

#include <cstddef>
#include <functional>

namespace speclab {

/// Worker count used by parallel_for. The LANDAU_SPECLAB_THREADS
/// environment variable, when set to a positive integer, wins over the
/// value given here.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; the
/// caller writes results into per-index slots so the outcome never depends
/// on scheduling. If any call throws, the exception of the lowest failing
/// index is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace speclab
