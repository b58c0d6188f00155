#pragma once

#include <cstddef>
#include <vector>

namespace dipole {

/// Scale schedule δ_1 > δ_2 > ... > 0, stored as log2 values so that
/// super-exponential schedules stay representable.
class Schedule {
 public:
  Schedule() = default;

  /// Validated schedule from explicit values.
  static Schedule from_deltas(const std::vector<double>& deltas);
  /// δ_k = 2^{-(a k² + b k + c)}, k = 1..count. The desk default is (1, 0, 2).
  static Schedule quadratic(double a, double b, double c, std::size_t count);
  /// δ_k = 2^{-2^{k²}}, k = 1..count; only the log2 values are finite.
  static Schedule doubly_exponential(std::size_t count);
  /// No validation; for evaluating bounds on arbitrary sequences.
  static Schedule from_log2_unchecked(std::vector<double> log2_deltas);

  std::size_t size() const { return log2_.size(); }
  /// 1-based, matching δ_1, δ_2, ...
  double log2_delta(std::size_t k) const;
  double delta(std::size_t k) const;

  /// Strictly decreasing with every tail sum Σ_{i>k} δ_i ≤ δ_k.
  bool is_valid() const;
  void validate() const;

  const std::vector<double>& log2_values() const { return log2_; }

 private:
  std::vector<double> log2_;
};

}  // namespace dipole
