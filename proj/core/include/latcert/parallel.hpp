#pragma once

#include <cstddef>

#include <functional>

namespace latcert {

// Worker-count resolution: explicit request > LATCERT_WORKERS environment
// variable > hardware concurrency.  Always >= 1.
int default_workers();
int resolve_workers(int requested);

// Runs body(i) for i in [0, n) on `workers` threads.  Work is handed out in
// fixed-size blocks; outputs must be written to per-index slots so the result
// is independent of scheduling.  Exceptions are captured and rethrown on the
// calling thread.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

}  // namespace latcert
