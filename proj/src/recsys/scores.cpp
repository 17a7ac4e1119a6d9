#include "recsys/scores.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace socsim {

double reddit_hot_score(std::int64_t upvotes, std::int64_t downvotes,
                        std::int64_t t_seconds) {
  const std::int64_t net = upvotes - downvotes;
  const double mag = std::log10(static_cast<double>(std::max<std::int64_t>(
      net >= 0 ? net : -net, 1)));
  const double sgn = net > 0 ? 1.0 : (net < 0 ? -1.0 : 0.0);
  return mag + sgn * static_cast<double>(t_seconds - kHotScoreEpoch) / 45000.0;
}

std::optional<double> recency_score(double t_now_minutes, double t_created_minutes) {
  const double dt = t_now_minutes - t_created_minutes;
  if (dt >= kRecencyHorizonMinutes) return std::nullopt;
  return std::log((kRecencyHorizonMinutes - dt) / 100.0);
}

double fan_score(std::int64_t fan_count) {
  const double lg = std::log(static_cast<double>(fan_count) + 1.0) / std::log(1000.0);
  return std::max(1.0, lg);
}

double cosine_sim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("cosine_sim: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

template <typename Scored>
std::vector<std::int64_t> take_top(std::vector<Scored>& scored, std::size_t k) {
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.created_at != b.created_at) return a.created_at > b.created_at;
    return a.post_id < b.post_id;
  });
  if (scored.size() > k) scored.resize(k);
  std::vector<std::int64_t> out;
  out.reserve(scored.size());
  for (const Scored& s : scored) out.push_back(s.post_id);
  return out;
}

struct ScoredPost {
  double score;
  std::int64_t created_at;
  std::int64_t post_id;
};

}  // namespace

std::vector<std::int64_t> rank_reddit(std::span<const RankedPost> posts,
                                      std::size_t k) {
  std::vector<ScoredPost> scored;
  scored.reserve(posts.size());
  for (const RankedPost& p : posts)
    scored.push_back({reddit_hot_score(p.num_likes, p.num_dislikes, p.created_at),
                      p.created_at, p.post_id});
  return take_top(scored, k);
}

std::vector<std::int64_t> rank_by_likes(std::span<const RankedPost> posts,
                                        std::size_t k) {
  std::vector<ScoredPost> scored;
  scored.reserve(posts.size());
  for (const RankedPost& p : posts)
    scored.push_back({static_cast<double>(p.num_likes), p.created_at, p.post_id});
  return take_top(scored, k);
}

std::vector<std::int64_t> x_out_network_rank(std::span<const XCandidate> candidates,
                                             std::int64_t t_now_seconds,
                                             std::size_t k_out) {
  const double now_min = static_cast<double>(t_now_seconds) / 60.0;
  std::vector<ScoredPost> scored;
  scored.reserve(candidates.size());
  for (const XCandidate& c : candidates) {
    const double created_min = static_cast<double>(c.created_at) / 60.0;
    auto r = recency_score(now_min, created_min);
    if (!r) continue;
    const double score = *r * fan_score(c.author_fan_count) * c.similarity;
    scored.push_back({score, c.created_at, c.post_id});
  }
  return take_top(scored, k_out);
}

}  // namespace socsim
