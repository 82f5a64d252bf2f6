#pragma once

namespace hydro {

/// Thread cap for internal data parallelism, from LBGK_HYDRO_THREADS
/// (0 or unset = auto). Always >= 1.
int thread_budget();

}  // namespace hydro
