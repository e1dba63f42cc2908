#pragma once

#if defined(_OPENMP)
#include <omp.h>
#else
inline int omp_get_max_threads() { return 1; }
inline int omp_get_thread_num() { return 0; }
inline void omp_set_num_threads(int) {}
#endif

namespace rwalk {

// Worker-count control for every parallel loop in the library.
// n <= 0 restores the runtime default. Results never depend on the
// worker count; this only affects wall time.
void set_workers(int n);
int max_workers();

} // namespace rwalk
