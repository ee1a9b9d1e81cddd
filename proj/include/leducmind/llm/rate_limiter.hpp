#pragma once

#include <functional>
#include <mutex>

namespace leducmind::llm {

// Client-side requests-per-minute cap. Departures are spaced at least
// max(60/R, 61/(R+1)) seconds apart, which keeps every 61-second window at
// R+1 departures or fewer for any R (plain 60/R spacing fails that bound
// once R exceeds 60). Clock and sleep are injectable for testing.
class RateLimiter {
 public:
  using Clock = std::function<double()>;          // seconds, monotonic
  using Sleep = std::function<void(double)>;      // seconds

  RateLimiter(double per_minute, Clock now, Sleep sleep);
  explicit RateLimiter(double per_minute);

  // Blocks until a departure slot is available, then claims it.
  void acquire();

  double min_interval() const { return interval_; }

 private:
  double interval_;
  Clock now_;
  Sleep sleep_;
  std::mutex mutex_;
  double next_allowed_ = 0.0;
  bool any_ = false;
};

}  // namespace leducmind::llm
