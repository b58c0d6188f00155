#include "dipole/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dipole/config.hpp"

namespace dipole {

Schedule Schedule::from_deltas(const std::vector<double>& deltas) {
  Schedule s;
  s.log2_.reserve(deltas.size());
  for (double d : deltas) {
    if (!(d > 0.0) || !std::isfinite(d)) fail(ErrorKind::InvalidArgument, "schedule: deltas must be positive");
    s.log2_.push_back(std::log2(d));
  }
  s.validate();
  return s;
}

Schedule Schedule::quadratic(double a, double b, double c, std::size_t count) {
  Schedule s;
  for (std::size_t k = 1; k <= count; ++k) {
    const double kk = static_cast<double>(k);
    s.log2_.push_back(-(a * kk * kk + b * kk + c));
  }
  s.validate();
  return s;
}

Schedule Schedule::doubly_exponential(std::size_t count) {
  Schedule s;
  for (std::size_t k = 1; k <= count; ++k) {
    const double kk = static_cast<double>(k);
    s.log2_.push_back(-std::exp2(kk * kk));
  }
  s.validate();
  return s;
}

Schedule Schedule::from_log2_unchecked(std::vector<double> log2_deltas) {
  Schedule s;
  s.log2_ = std::move(log2_deltas);
  return s;
}

double Schedule::log2_delta(std::size_t k) const {
  if (k == 0 || k > log2_.size()) {
    fail(ErrorKind::Precondition, "schedule: index " + std::to_string(k) + " outside 1.." + std::to_string(log2_.size()));
  }
  return log2_[k - 1];
}

double Schedule::delta(std::size_t k) const { return std::exp2(log2_delta(k)); }

bool Schedule::is_valid() const {
  for (std::size_t i = 1; i < log2_.size(); ++i) {
    if (!(log2_[i] < log2_[i - 1])) return false;
  }
  // Tail sums, relative to δ_k, evaluated from the back in log space.
  long double tail_log2 = -INFINITY;
  for (std::size_t i = log2_.size(); i-- > 0;) {
    if (std::isfinite(static_cast<double>(tail_log2)) && tail_log2 > log2_[i] + 1e-12L) return false;
    const long double hi = std::max<long double>(tail_log2, log2_[i]);
    const long double lo = std::min<long double>(tail_log2, log2_[i]);
    tail_log2 = std::isfinite(static_cast<double>(lo)) ? hi + std::log2(1.0L + std::exp2(lo - hi)) : hi;
  }
  return true;
}

void Schedule::validate() const {
  if (!is_valid()) {
    fail(ErrorKind::InvalidArgument, "schedule must be strictly decreasing with tail sums bounded by each term");
  }
}

}  // namespace dipole
