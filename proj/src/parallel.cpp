#include "rwalk/parallel.hpp"

namespace rwalk {

namespace {
int g_default_threads = -1;
}

void set_workers(int n) {
    if (g_default_threads < 0) g_default_threads = omp_get_max_threads();
    omp_set_num_threads(n > 0 ? n : g_default_threads);
}

int max_workers() { return omp_get_max_threads(); }

} // namespace rwalk
