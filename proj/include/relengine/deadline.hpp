#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>

namespace relengine {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wall-clock limit shared by the long-running backends. A default-constructed
/// deadline never expires.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;
  static Deadline after(std::chrono::duration<double> budget);

  bool bounded() const { return limit_.has_value(); }
  bool expired() const { return limit_ && Clock::now() >= *limit_; }
  void check() const;

 private:
  std::optional<Clock::time_point> limit_;
};

/// Polls a Deadline once every `granule` ticks so inner loops stay cheap.
class BudgetGuard {
 public:
  static constexpr std::uint64_t kGranule = 1024;

  explicit BudgetGuard(const Deadline& deadline) : deadline_(deadline) {}

  void tick() {
    if (deadline_.bounded() && (++ticks_ % kGranule) == 0) deadline_.check();
  }

 private:
  const Deadline& deadline_;
  std::uint64_t ticks_ = 0;
};

}  // namespace relengine
