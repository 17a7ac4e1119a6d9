#pragma once

#include <cstdint>

namespace socsim {

enum class TimeMode { step, linear };

struct ClockConfig {
  TimeMode mode = TimeMode::step;
  double minutes_per_step = 3.0;
  // Simulated seconds added per action inside a step (linear mode only).
  double scale_factor = 1.0;
  // Simulated start time, seconds since the Unix epoch. Defaults to a
  // midnight-aligned instant so hour-of-day starts at 0.
  std::int64_t epoch_seconds = 1722470400;  // 2024-08-01 00:00:00 UTC
};

// A timestamp plus the intra-step sequence that disambiguates actions
// sharing the same wall time in step mode.
struct Stamp {
  std::int64_t at = 0;
  std::uint64_t seq = 0;
};

class SimClock {
 public:
  explicit SimClock(const ClockConfig& cfg);

  int step() const { return step_; }
  const ClockConfig& config() const { return cfg_; }

  // Wall time of the current step: epoch + step * minutes_per_step.
  std::int64_t wall_seconds() const;

  // step+1 and the intra-step counter resets.
  void advance();

  // Issues the next action timestamp. Step mode: the step's wall time with an
  // increasing sequence. Linear mode: wall time + counter * scale_factor,
  // nudged forward if a heavy step already ran past the next step boundary so
  // stamps stay strictly increasing.
  Stamp stamp();

  // Hour of the simulated day, 0..23.
  int hour_of_day() const;

  std::uint64_t intra_step_counter() const { return counter_; }

 private:
  ClockConfig cfg_;
  int step_ = 0;
  std::uint64_t counter_ = 0;
  std::int64_t last_issued_ = 0;
};

}  // namespace socsim
