#pragma once

#include <cmath>
#include <cstddef>

namespace regp::numeric {

/// Neumaier compensated summation.
class CompensatedSum {
public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Mean and standard error of the mean, sigma = sqrt(sum (f - mean)^2 / (N (N - 1))).
///
/// Accumulates shifted sums around the first value, which keeps constant
/// data at exactly zero spread and avoids cancellation when |mean| << spread.
class MeanAccumulator {
public:
  void add(double f) noexcept {
    if (n_ == 0) shift_ = f;
    const double d = f - shift_;
    s1_.add(d);
    s2_.add(d * d);
    ++n_;
  }
  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return n_ ? shift_ + s1_.value() / static_cast<double>(n_) : 0.0; }
  double standard_error() const noexcept {
    if (n_ < 2) return 0.0;
    const double n = static_cast<double>(n_);
    const double m = s1_.value() / n;
    const double ss = s2_.value() - n * m * m;
    return ss > 0.0 ? std::sqrt(ss / (n * (n - 1.0))) : 0.0;
  }

private:
  std::size_t n_ = 0;
  double shift_ = 0.0;
  CompensatedSum s1_;
  CompensatedSum s2_;
};

} // namespace regp::numeric
