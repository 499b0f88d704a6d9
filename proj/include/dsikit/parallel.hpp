#pragma once

namespace dsikit {

/// Worker count for the OpenMP kernels: an explicit override if set, else
/// DSIKIT_THREADS, else the hardware parallelism reported by OpenMP.
int worker_count();

/// 0 clears the override.
void set_worker_count(int n);

}  // namespace dsikit
