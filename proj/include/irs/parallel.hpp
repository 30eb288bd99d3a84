#pragma once

#include <cstddef>
#include <span>

namespace irs {

// Number of OpenMP threads used by the parallel kernels. Defaults to the
// IRS_THREADS environment variable when set, else the OpenMP default.
int thread_count();
// n < 1 restores the default.
void set_thread_count(int n);

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if ((sum_ >= 0 ? sum_ : -sum_) >= (v >= 0 ? v : -v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  void add(const CompensatedSum& o) noexcept {
    add(o.sum_);
    add(o.comp_);
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Sums values in index order; the result does not depend on threading.
double ordered_sum(std::span<const double> values) noexcept;

}  // namespace irs
