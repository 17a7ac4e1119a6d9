#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "util/rng.hpp"

namespace socsim {

// Per-user hourly activation probabilities, index = hour of day.
struct ActivityProfile {
  std::array<double, 24> p{};

  static ActivityProfile constant(double v);
};

// True when the user's hourly coin comes up active.
bool activation_draw(const ActivityProfile& prof, int hour, Rng& rng);

// Builds profiles from hourly action counts: each cell is the user's count
// for that hour divided by the max count any user has in that hour. Hours
// where nobody acted get probability 0.
// counts is row-major, one row of 24 per user.
std::vector<ActivityProfile> profiles_from_counts(
    const std::vector<std::array<std::uint64_t, 24>>& counts);

// Reads a CSV of hourly counts (user_id,h0..h23 header optional) and returns
// profiles in row order. Throws std::runtime_error on malformed rows.
std::vector<ActivityProfile> profiles_from_csv(const std::string& path);

}  // namespace socsim
