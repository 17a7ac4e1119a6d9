#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "engine/config.hpp"

namespace socsim {

// Totals from one completed run plus the export footprint.
struct RunReport {
  int steps_run = 0;
  std::int64_t agents = 0;
  std::int64_t decisions = 0;
  std::int64_t backend_failures = 0;
  std::int64_t parse_failures = 0;
  std::int64_t actions_ok = 0;
  std::int64_t actions_rejected = 0;
  std::int64_t survey_rows = 0;
  std::int64_t injected_posts = 0;
  std::vector<std::string> files;  // relative to export_dir, sorted
  std::string manifest_path;
};

using ProgressFn = std::function<void(int step, int total, const std::string& note)>;

// One scenario end to end: population, stepping, injections, surveys, table
// and metric exports, manifest. Output bytes depend only on the config; the
// worker count never changes them, because decisions commit in agent order
// against feeds sampled before any same-step commit. Throws
// std::runtime_error on an invalid config or a failed export.
RunReport run_scenario(RunConfig cfg, const ProgressFn& progress = {});

}  // namespace socsim
