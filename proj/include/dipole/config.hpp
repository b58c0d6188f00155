#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dipole {

/// Numeric tolerances shared by every module.
struct Tolerances {
  /// Exact geometric identities (unit distances, rotations, arc endpoints).
  double geometric = 1e-12;
  /// Slack allowed on per-stage containment and direction-density contracts.
  double contract = 1e-9;
  /// Unit-distance tolerance when accepting externally supplied pairs.
  double unit_pair = 1e-9;
  /// Relative slack used when counting how many steps of size delta fit.
  double count_slack = 1e-12;
};

inline constexpr Tolerances kTol{};

/// Defaults for resource guards.
struct Limits {
  /// Upper bound on materialized construction points.
  std::uint64_t point_cap = 50'000'000;
  /// Smallest covering scale accepted by the recursion check.
  double min_scale = 0x1p-40;
};

inline constexpr Limits kLimits{};

enum class ErrorKind {
  InvalidArgument,
  Precondition,
  ResourceCap,
  CoverageInsufficient,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace dipole
