#include "recsys/recommender.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace socsim {

Recommender::Recommender(RecConfig cfg, EmbeddingProvider* provider)
    : cfg_(cfg), provider_(provider) {
  if (cfg_.cache_size < cfg_.feed_sample_size || cfg_.feed_sample_size < 1)
    throw std::invalid_argument("rec config: need cache_size >= feed_sample_size >= 1");
  if (cfg_.kind == RecKind::x && !provider_)
    throw std::invalid_argument("rec config: x kind needs an embedding provider");
}

void Recommender::refresh(Store& store, std::int64_t t_now_seconds) {
  if (cfg_.kind == RecKind::reddit)
    refresh_reddit(store);
  else
    refresh_x(store, t_now_seconds);
}

void Recommender::refresh_reddit(Store& store) {
  std::vector<RankedPost> ranked;
  ranked.reserve(store.posts().size());
  for (const PostRow& p : store.posts())
    ranked.push_back({p.post_id, p.created_at, p.num_likes, p.num_dislikes});
  store.set_rec_global(rank_reddit(ranked, cfg_.cache_size));
}

const std::vector<double>& Recommender::post_vector(const Store& store,
                                                    std::int64_t post_id) {
  auto it = post_vecs_.find(post_id);
  if (it != post_vecs_.end()) return it->second;
  auto vec = provider_->embed(store.post(post_id).content);
  return post_vecs_.emplace(post_id, std::move(vec)).first->second;
}

void Recommender::refresh_x(Store& store, std::int64_t t_now_seconds) {
  store.clear_rec();
  for (const UserRow& u : store.users()) {
    // In-network: followee posts by like count.
    std::vector<RankedPost> in_posts;
    std::unordered_set<std::int64_t> followees;
    for (std::int64_t f : store.followees_of(u.user_id)) {
      followees.insert(f);
      for (std::int64_t pid : store.posts_by_author(f)) {
        const PostRow& p = store.post(pid);
        in_posts.push_back({p.post_id, p.created_at, p.num_likes, p.num_dislikes});
      }
    }
    std::vector<std::int64_t> cache = rank_by_likes(in_posts, cfg_.k_in);

    // Out-of-network: everything not authored by the user or a followee,
    // scored by recency * fan * interest similarity.
    const auto& authored = store.posts_by_author(u.user_id);
    std::vector<std::string> recent;
    const std::size_t take = std::min<std::size_t>(authored.size(), 5);
    for (std::size_t i = authored.size() - take; i < authored.size(); ++i)
      recent.push_back(store.post(authored[i]).content);
    const std::vector<double> user_vec =
        provider_->embed(user_embedding_text(u.bio, recent));

    std::vector<XCandidate> candidates;
    for (const PostRow& p : store.posts()) {
      if (p.user_id == u.user_id || followees.count(p.user_id)) continue;
      XCandidate c;
      c.post_id = p.post_id;
      c.created_at = p.created_at;
      c.author_fan_count = store.user(p.user_id).num_followers;
      c.similarity = cosine_sim(post_vector(store, p.post_id), user_vec);
      candidates.push_back(c);
    }
    for (std::int64_t pid : x_out_network_rank(candidates, t_now_seconds, cfg_.k_out))
      cache.push_back(pid);

    store.set_rec_user(u.user_id, std::move(cache));
  }
}

std::vector<std::int64_t> Recommender::sample_feed(const Store& store,
                                                   std::int64_t user_id,
                                                   Rng& rng) const {
  const auto& cache = store.rec_for(user_id);
  return rng.sample(std::span<const std::int64_t>(cache), cfg_.feed_sample_size);
}

}  // namespace socsim
