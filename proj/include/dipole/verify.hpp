#pragma once

// The acceptance checks, shared by the acceptance binary and `verify-all`.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace dipole::verify {

struct Profile {
  std::string name = "desk";
  /// Construction A stages built (P_{stages+1} is streamed where needed).
  std::size_t a_stages = 4;
  /// Construction B splitting rounds.
  std::size_t b_levels = 9;
  std::size_t annuli_draws = 200;
  std::size_t tangent_draws = 50;
  std::uint64_t seed = 20240611;
};

/// Only "desk" is defined.
Profile profile_named(const std::string& name);

struct Result {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// "[PASS] 3 title | detail (1.2s)".
std::string format_line(const Result& r);

inline constexpr int kCriterionCount = 10;

class Runner {
 public:
  explicit Runner(Profile profile);
  ~Runner();
  Runner(const Runner&) = delete;
  Runner& operator=(const Runner&) = delete;

  /// Runs criterion `id` in 1..10; exceptions become failed results.
  Result run(int id);
  std::vector<Result> run_all(const std::function<void(const Result&)>& on_result = {});

 private:
  struct State;
  Profile profile_;
  std::unique_ptr<State> state_;
};

}  // namespace dipole::verify
