#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "actions/envelope.hpp"
#include "actions/kinds.hpp"
#include "recsys/recommender.hpp"
#include "store/store.hpp"
#include "timing/clock.hpp"
#include "util/rng.hpp"

namespace socsim {

struct ActionResult {
  int index = 0;
  bool ok = false;
  // Created row id for mutations, a JSON id array for read calls, or the
  // rejection tag.
  std::string detail;
};

// Popular-now query: top posts by like count from the last two simulated days.
inline constexpr std::int64_t kTrendWindowSeconds = 2 * 86400;
inline constexpr std::size_t kTrendCount = 10;
// Searches return at most this many matches, ascending id, so one call stays
// bounded no matter how broad the query is.
inline constexpr std::size_t kSearchResultCap = 50;
// Feed size for refresh when no recommender is wired in.
inline constexpr std::size_t kRefreshFallbackCount = 5;

struct ExecOptions {
  const ActionSet* subset = nullptr;   // null allows every action
  Recommender* recommender = nullptr;  // refresh feed source
  Rng* rng = nullptr;                  // refresh sampling stream
};

// Runs the calls in listed order. Every call stamps exactly one trace row,
// ok or rejected; a rejection never stops the calls after it. Throws
// std::invalid_argument when user_id is not registered.
std::vector<ActionResult> execute_envelope(Store& store, SimClock& clock,
                                           std::int64_t user_id,
                                           const ActionEnvelope& env,
                                           const ExecOptions& opts = {});

// Read-call semantics, shared with the executor.
std::vector<std::int64_t> trend_posts(const Store& store, std::int64_t t_now_seconds);
std::vector<std::int64_t> search_post_ids(const Store& store, std::string_view query);
std::vector<std::int64_t> search_user_ids(const Store& store, std::string_view query);

}  // namespace socsim
