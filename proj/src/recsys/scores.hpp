#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace socsim {

// Submission-time hot score: log10(max(|u-d|,1)) + sign(u-d)*(t-t0)/45000.
// t is the post's creation time in seconds since the Unix epoch.
inline constexpr std::int64_t kHotScoreEpoch = 1134028003;
double reddit_hot_score(std::int64_t upvotes, std::int64_t downvotes,
                        std::int64_t t_seconds);

// ln((271.8 - dt)/100), dt in minutes; nullopt once a post ages past 271.8
// minutes and leaves out-of-network candidacy.
inline constexpr double kRecencyHorizonMinutes = 271.8;
std::optional<double> recency_score(double t_now_minutes, double t_created_minutes);

// max(1, log base 1000 of (fan_count + 1)).
double fan_score(std::int64_t fan_count);

// Standard cosine; zero-norm input yields 0. Throws std::invalid_argument on
// dimension mismatch.
double cosine_sim(std::span<const double> a, std::span<const double> b);

struct RankedPost {
  std::int64_t post_id = 0;
  std::int64_t created_at = 0;  // seconds
  std::int64_t num_likes = 0;
  std::int64_t num_dislikes = 0;
};

// Hot-score ranking, ties by newer created_at then lower post_id.
std::vector<std::int64_t> rank_reddit(std::span<const RankedPost> posts,
                                      std::size_t k);

// Like-count ranking with the same tie rules (in-network feed order).
std::vector<std::int64_t> rank_by_likes(std::span<const RankedPost> posts,
                                        std::size_t k);

struct XCandidate {
  std::int64_t post_id = 0;
  std::int64_t created_at = 0;        // seconds
  std::int64_t author_fan_count = 0;  // author's follower count
  double similarity = 0.0;            // S term, cosine(post, user)
};

// Score = R * F * S per candidate; aged-out posts drop; ties by newer
// created_at then lower post_id.
std::vector<std::int64_t> x_out_network_rank(std::span<const XCandidate> candidates,
                                             std::int64_t t_now_seconds,
                                             std::size_t k_out);

}  // namespace socsim
