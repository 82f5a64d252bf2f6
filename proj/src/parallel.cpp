#include "hydro/parallel.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace hydro {

int thread_budget() {
  // Auto is single-threaded: the per-step working set sits in cache and the
  // solver loops are memory-bound, so extra threads only pay off on machines
  // with real spare cores; opt in by setting LBGK_HYDRO_THREADS.
  static const int budget = [] {
    const char* env = std::getenv("LBGK_HYDRO_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    try {
      const int requested = std::stoi(env);
      const int hw = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
      if (requested <= 0) return 1;
      return std::min(requested, hw);
    } catch (...) {
      return 1;
    }
  }();
  return budget;
}

}  // namespace hydro
