#include "dsikit/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include <omp.h>

namespace dsikit {
namespace {
std::atomic<int> g_override{0};
}

int worker_count() {
  if (const int n = g_override.load(); n > 0) return n;
  if (const char* env = std::getenv("DSIKIT_THREADS"); env != nullptr && *env != '\0') {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
      // fall through to the default
    }
  }
  return omp_get_max_threads();
}

void set_worker_count(int n) { g_override.store(n > 0 ? n : 0); }

}  // namespace dsikit
