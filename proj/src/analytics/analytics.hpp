#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "store/store.hpp"
#include "util/stats.hpp"

namespace socsim {

// ---- repost cascades ----

struct TreeNode {
  std::int64_t user_id = 0;
  std::int64_t post_id = 0;
  int parent = -1;               // index into PropagationTree::nodes, -1 at the root
  std::int64_t repost_time = 0;  // epoch seconds; the root keeps its creation time
};

// Single-rooted repost cascade. nodes[0] is the root author; the rest come
// from replaying successful repost trace rows in order, so a parent always
// precedes its children and each user appears at most once.
struct PropagationTree {
  std::int64_t root_post = 0;
  std::vector<TreeNode> nodes;
};

PropagationTree build_propagation_tree(const Store& store, std::int64_t root_post);

// Cumulative per-minute curves for one cascade, minutes 0..horizon inclusive.
// A node lands in bucket floor((repost_time - root_time) / 60); stamps before
// the root count from minute 0.
struct TreeMetricSeries {
  std::vector<std::int64_t> scale;        // unique users reached so far
  std::vector<std::int64_t> depth;        // max edge distance from the root
  std::vector<std::int64_t> max_breadth;  // widest level, root level included
};

TreeMetricSeries metric_series(const PropagationTree& tree, int horizon_minutes);

// sqrt(mean((simu_i - real_i)^2)) / real.back(). Throws when the series are
// empty, differ in length, or the final real value is zero.
double normalized_rmse(std::span<const double> simu, std::span<const double> real);

// e_i = |simu_i - real_i| / real.back(), same preconditions as above.
std::vector<double> per_minute_error(std::span<const double> simu,
                                     std::span<const double> real);

// ---- vote treatments ----

// likes minus dislikes; can go negative.
std::int64_t post_score(const Store& store, std::int64_t post_id);

enum class TreatmentGroup { up_treated, control, down_treated };

struct TreatmentAssignment {
  std::vector<std::int64_t> up_treated;
  std::vector<std::int64_t> control;
  std::vector<std::int64_t> down_treated;
  std::optional<TreatmentGroup> group_of(std::int64_t item) const;
  std::size_t size() const {
    return up_treated.size() + control.size() + down_treated.size();
  }
};

// Three-way split keyed on (seed, item id), so the outcome ignores input
// order. Spare items beyond an even third go to control first, then
// up_treated, keeping the seeded groups no larger than control.
TreatmentAssignment assign_treatments(std::span<const std::int64_t> items,
                                      std::uint64_t seed);

// One like per up_treated item and one dislike per down_treated item, all from
// seeding_user; the store traces every edge as usual. Throws on rejection.
void seed_treatments(Store& store, const TreatmentAssignment& assignment,
                     std::int64_t seeding_user, Now now);

TreatmentAssignment assign_and_seed_treatments(Store& store,
                                               std::span<const std::int64_t> items,
                                               std::uint64_t seed,
                                               std::int64_t seeding_user, Now now);

// ---- judged disagreement ----

class DisagreeJudge {
 public:
  virtual ~DisagreeJudge() = default;
  // 1..10, or nullopt when no usable rating came back.
  virtual std::optional<int> rate(const std::string& post_content,
                                  const std::string& comment_content) = 0;
};

// POSTs the filled rating prompt as plain text, expects {"score": n} back.
class HttpDisagreeJudge : public DisagreeJudge {
 public:
  struct Config {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string path = "/judge";
    int timeout_ms = 30000;
  };
  explicit HttpDisagreeJudge(Config cfg) : cfg_(std::move(cfg)) {}
  std::optional<int> rate(const std::string& post_content,
                          const std::string& comment_content) override;

 private:
  Config cfg_;
};

struct JudgedPair {
  std::string post_content;
  std::string comment_content;
  int step = 0;
};

struct StepScore {
  int step = 0;
  MeanCi stats;
};

struct DisagreeReport {
  std::vector<StepScore> per_step;  // ascending step; only steps with ratings
  std::size_t judged = 0;
  std::size_t skipped = 0;  // judge failures and out-of-range ratings
};

DisagreeReport disagree_scores(std::span<const JudgedPair> pairs,
                               DisagreeJudge& judge);

// ---- relevance counting ----

struct StampedDoc {
  std::string content;
  int step = 0;
};

// counts[r][s] = posts at step s whose cosine similarity to references[r]
// exceeds threshold. Vectors are term count times ln(N / df) over the union
// of posts and references, L2-normalized; tokens are lowercased alphanumeric
// runs. threshold must lie in (0, 1).
std::vector<std::vector<std::int64_t>> tfidf_relevance_counts(
    std::span<const StampedDoc> posts, std::span<const std::string> references,
    double threshold);

// ---- evaluation prompts ----

const std::string& dilemma_question();
const std::string& extremeness_judge_prompt_template();
const std::string& helpfulness_judge_prompt_template();
const std::string& disagree_judge_prompt_template();

std::string extremeness_judge_prompt(const std::string& question,
                                     const std::string& answer1,
                                     const std::string& answer2);
std::string helpfulness_judge_prompt(const std::string& question,
                                     const std::string& answer1,
                                     const std::string& answer2);
std::string disagree_judge_prompt(const std::string& post_content,
                                  const std::string& comment_content);

// ---- metric export ----

// Writes "minute,<value_name>" then one row per index.
bool write_series_csv(const std::string& path, std::string_view value_name,
                      std::span<const std::int64_t> values, std::string* error);
bool write_series_csv(const std::string& path, std::string_view value_name,
                      std::span<const double> values, std::string* error);

}  // namespace socsim
