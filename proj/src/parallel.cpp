#include "irs/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace irs {

namespace {

int& configured_threads() {
  static int n = [] {
    if (const char* env = std::getenv("IRS_THREADS")) {
      try {
        const int v = std::stoi(env);
        if (v >= 1) return v;
      } catch (...) {
      }
    }
    return 0;
  }();
  return n;
}

}  // namespace

int thread_count() {
  const int n = configured_threads();
  return n >= 1 ? n : omp_get_max_threads();
}

void set_thread_count(int n) {
  configured_threads() = n >= 1 ? n : 0;
}

double ordered_sum(std::span<const double> values) noexcept {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value();
}

}  // namespace irs
