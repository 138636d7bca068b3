#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace umse::detail {

// Neumaier's variant of Kahan summation; also exact when a term is larger
// in magnitude than the running sum.
class CompensatedSum {
 public:
  void add(double term) noexcept {
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      compensation_ += (sum_ - t) + term;
    } else {
      compensation_ += (term - t) + sum_;
    }
    sum_ = t;
  }

  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Fixed block length for parallel reductions. The reduction order depends
// only on n, never on the thread count.
inline constexpr std::size_t kReductionBlock = 4096;

// Sum of term(i) for i in [0, n). Blocks are summed in parallel with
// compensated summation, then the per-block partials are combined serially in
// block order.
template <typename Term>
double blocked_sum(std::size_t n, Term&& term) {
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t end = begin + kReductionBlock < n ? begin + kReductionBlock : n;
    CompensatedSum acc;
    for (std::size_t i = begin; i < end; ++i) acc.add(term(i));
    partial[static_cast<std::size_t>(b)] = acc.value();
  }
  CompensatedSum total;
  for (double p : partial) total.add(p);
  return total.value();
}

}  // namespace umse::detail
