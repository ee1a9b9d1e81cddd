#include "leducmind/llm/rate_limiter.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <thread>

namespace leducmind::llm {

namespace {

double steady_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void real_sleep(double seconds) {
  if (seconds > 0) {
    std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
  }
}

}  // namespace

RateLimiter::RateLimiter(double per_minute, Clock now, Sleep sleep)
    : interval_(0.0), now_(std::move(now)), sleep_(std::move(sleep)) {
  if (per_minute <= 0) throw std::invalid_argument("rate limit must be positive");
  // The 1ns pad keeps accumulated floating-point rounding from letting one
  // extra departure slip inside a window boundary.
  interval_ = std::max(60.0 / per_minute, 61.0 / (per_minute + 1.0)) + 1e-9;
}

RateLimiter::RateLimiter(double per_minute)
    : RateLimiter(per_minute, steady_seconds, real_sleep) {}

void RateLimiter::acquire() {
  double wait = 0.0;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    const double now = now_();
    const double slot = any_ ? std::max(now, next_allowed_) : now;
    wait = slot - now;
    next_allowed_ = slot + interval_;
    any_ = true;
  }
  if (wait > 0) sleep_(wait);
}

}  // namespace leducmind::llm
