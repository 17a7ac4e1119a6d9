#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "recsys/embedding.hpp"
#include "recsys/scores.hpp"
#include "store/store.hpp"
#include "util/rng.hpp"

namespace socsim {

enum class RecKind { reddit, x };

struct RecConfig {
  RecKind kind = RecKind::reddit;
  std::size_t cache_size = 300;
  std::size_t k_in = 10;        // in-network slots, x kind
  std::size_t k_out = 10;       // out-of-network slots, x kind
  std::size_t feed_sample_size = 5;
};

// Rebuilds the rec table each pass. Reddit ranking is user-independent, so
// one global list is stored and virtualized per user; the x ranking writes a
// per-user cache of in-network then out-of-network ids.
class Recommender {
 public:
  Recommender(RecConfig cfg, EmbeddingProvider* provider);

  const RecConfig& config() const { return cfg_; }

  void refresh(Store& store, std::int64_t t_now_seconds);

  // Uniform sample without replacement from the user's cache.
  std::vector<std::int64_t> sample_feed(const Store& store, std::int64_t user_id,
                                        Rng& rng) const;

 private:
  void refresh_reddit(Store& store);
  void refresh_x(Store& store, std::int64_t t_now_seconds);
  const std::vector<double>& post_vector(const Store& store, std::int64_t post_id);

  RecConfig cfg_;
  EmbeddingProvider* provider_;  // needed for x kind, may be null for reddit
  std::unordered_map<std::int64_t, std::vector<double>> post_vecs_;
};

}  // namespace socsim
