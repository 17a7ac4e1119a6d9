#include "timing/clock.hpp"

#include <cmath>

namespace socsim {

SimClock::SimClock(const ClockConfig& cfg) : cfg_(cfg) {
  last_issued_ = cfg_.epoch_seconds - 1;
}

std::int64_t SimClock::wall_seconds() const {
  return cfg_.epoch_seconds +
         static_cast<std::int64_t>(std::llround(step_ * cfg_.minutes_per_step * 60.0));
}

void SimClock::advance() {
  ++step_;
  counter_ = 0;
}

Stamp SimClock::stamp() {
  Stamp s;
  s.seq = counter_;
  if (cfg_.mode == TimeMode::step) {
    s.at = wall_seconds();
  } else {
    std::int64_t at = wall_seconds() +
                      static_cast<std::int64_t>(std::llround(
                          static_cast<double>(counter_) * cfg_.scale_factor));
    if (at <= last_issued_) at = last_issued_ + 1;
    s.at = at;
    last_issued_ = at;
  }
  ++counter_;
  return s;
}

int SimClock::hour_of_day() const {
  std::int64_t secs = wall_seconds();
  std::int64_t day = 86400;
  std::int64_t rem = ((secs % day) + day) % day;
  return static_cast<int>(rem / 3600);
}

}  // namespace socsim
