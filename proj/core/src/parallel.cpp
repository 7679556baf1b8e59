#include "fracdpg/parallel.hpp"

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fracdpg {

void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void apply_thread_env() {
  const char* value = std::getenv("FRACDPG_THREADS");
  if (value == nullptr) return;
  char* end = nullptr;
  const long threads = std::strtol(value, &end, 10);
  if (end != value && *end == '\0' && threads > 0) set_thread_count(static_cast<int>(threads));
}

}  // namespace fracdpg
