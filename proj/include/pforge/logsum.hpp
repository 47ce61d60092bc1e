#pragma once

#include <cmath>
#include <limits>

namespace pforge {

/// Sum of exp(x_i) kept as exp(shift) * (sum + comp) with Neumaier
/// compensation; the shift follows the largest exponent seen.
class LogSumExp {
 public:
  void add_log(double x) {
    if (x == -std::numeric_limits<double>::infinity()) return;
    if (empty_) {
      shift_ = x;
      sum_ = 1.0;
      comp_ = 0.0;
      empty_ = false;
      return;
    }
    if (x > shift_) {
      double scale = std::exp(shift_ - x);
      sum_ *= scale;
      comp_ *= scale;
      shift_ = x;
    }
    add_scaled(std::exp(x - shift_));
  }

  void merge(const LogSumExp& other) {
    if (other.empty_) return;
    if (empty_) {
      *this = other;
      return;
    }
    if (other.shift_ > shift_) {
      double scale = std::exp(shift_ - other.shift_);
      sum_ *= scale;
      comp_ *= scale;
      shift_ = other.shift_;
    }
    double scale = std::exp(other.shift_ - shift_);
    add_scaled(other.sum_ * scale);
    add_scaled(other.comp_ * scale);
  }

  bool empty() const { return empty_; }
  double log() const {
    if (empty_) return -std::numeric_limits<double>::infinity();
    return shift_ + std::log(sum_ + comp_);
  }

 private:
  void add_scaled(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }

  bool empty_ = true;
  double shift_ = 0.0;
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  double m = a > b ? a : b;
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace pforge
