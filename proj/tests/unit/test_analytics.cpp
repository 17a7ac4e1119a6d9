#include "doctest.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "analytics/analytics.hpp"
#include "httplib.h"
#include "json.hpp"
#include "store/store.hpp"
#include "util/rng.hpp"
#include "util/text.hpp"

using namespace socsim;

namespace {

constexpr std::int64_t kT0 = 1722470400;

std::unique_ptr<Store> open_store() {
  std::string err;
  auto s = Store::open(StoreConfig{}, &err);
  REQUIRE(s != nullptr);
  return s;
}

void add_users(Store& store, int count) {
  for (int i = 1; i <= count; ++i) {
    OpResult r = store.register_user(i, "user" + std::to_string(i),
                                     "User " + std::to_string(i), "", Now{kT0});
    REQUIRE(r.ok());
  }
}

// Judge stub that replays a fixed per-comment mapping.
class MapJudge : public DisagreeJudge {
 public:
  std::unordered_map<std::string, std::optional<int>> by_comment;
  std::optional<int> fallback = 7;
  std::optional<int> rate(const std::string&, const std::string& comment) override {
    auto it = by_comment.find(comment);
    return it == by_comment.end() ? fallback : it->second;
  }
};

class QueueJudge : public DisagreeJudge {
 public:
  explicit QueueJudge(std::vector<int> scores) : scores_(std::move(scores)) {}
  std::optional<int> rate(const std::string&, const std::string&) override {
    REQUIRE(next_ < scores_.size());
    return scores_[next_++];
  }

 private:
  std::vector<int> scores_;
  std::size_t next_ = 0;
};

}  // namespace

TEST_CASE("propagation tree replays repost chains from the trace") {
  auto store = open_store();
  add_users(*store, 5);
  REQUIRE(store->insert_post(1, "root message", Now{kT0}).ok());  // post 1

  SUBCASE("no reposts yields the single-node tree") {
    PropagationTree tree = build_propagation_tree(*store, 1);
    CHECK(tree.root_post == 1);
    REQUIRE(tree.nodes.size() == 1);
    CHECK(tree.nodes[0].user_id == 1);
    CHECK(tree.nodes[0].post_id == 1);
    CHECK(tree.nodes[0].parent == -1);
    CHECK(tree.nodes[0].repost_time == kT0);
  }

  SUBCASE("chained reposts extend the tree, other cascades stay out") {
    OpResult r2 = store->insert_repost(2, 1, Now{kT0 + 120});
    REQUIRE(r2.ok());
    OpResult r3 = store->insert_repost(3, r2.id, Now{kT0 + 300});
    REQUIRE(r3.ok());

    // A separate cascade by user 4 must not leak into the tree for post 1.
    OpResult other = store->insert_post(4, "unrelated", Now{kT0 + 10});
    REQUIRE(other.ok());
    REQUIRE(store->insert_repost(5, other.id, Now{kT0 + 400}).ok());

    // Duplicate repost inside the cascade is rejected and leaves no node.
    CHECK(store->insert_repost(2, r2.id, Now{kT0 + 500}).err ==
          StoreError::already_reposted);

    PropagationTree tree = build_propagation_tree(*store, 1);
    REQUIRE(tree.nodes.size() == 3);
    CHECK(tree.nodes[1].user_id == 2);
    CHECK(tree.nodes[1].post_id == r2.id);
    CHECK(tree.nodes[1].parent == 0);
    CHECK(tree.nodes[1].repost_time == kT0 + 120);
    CHECK(tree.nodes[2].user_id == 3);
    CHECK(tree.nodes[2].post_id == r3.id);
    CHECK(tree.nodes[2].parent == 1);
    CHECK(tree.nodes[2].repost_time == kT0 + 300);
  }

  SUBCASE("missing root throws") {
    CHECK_THROWS_AS(build_propagation_tree(*store, 999), std::invalid_argument);
  }
}

TEST_CASE("propagation tree matches an independent trace replay on fuzzed runs") {
  for (std::uint64_t run = 0; run < 3; ++run) {
    auto store = open_store();
    add_users(*store, 12);
    std::vector<std::int64_t> posts;
    for (int author = 1; author <= 3; ++author) {
      OpResult r = store->insert_post(author, "seed " + std::to_string(author),
                                      Now{kT0});
      REQUIRE(r.ok());
      posts.push_back(r.id);
    }

    Rng rng(mix_seed(4242, run));
    for (int i = 0; i < 200; ++i) {
      const std::int64_t t = kT0 + 5 + i * 37;
      const auto user = static_cast<std::int64_t>(1 + rng.next_u64() % 12);
      const std::int64_t target =
          posts[static_cast<std::size_t>(rng.next_u64() % posts.size())];
      switch (rng.next_u64() % 4) {
        case 0: {
          OpResult r = store->insert_repost(user, target, Now{t});
          if (r.ok()) posts.push_back(r.id);
          break;
        }
        case 1: {
          OpResult r = store->insert_post(user, "post " + std::to_string(i), Now{t});
          REQUIRE(r.ok());
          posts.push_back(r.id);
          break;
        }
        case 2:
          store->upsert_edge(EdgeKind::like_post, user, target, Now{t});
          break;
        default:
          store->insert_comment(user, target, "c" + std::to_string(i), Now{t});
          break;
      }
    }

    // Oracle: reparse the trace into a child map, then walk the closure.
    std::unordered_map<std::int64_t,
                       std::vector<std::array<std::int64_t, 3>>>
        children;  // parent post -> {user, new post, time}
    for (const TraceRow& row : store->trace()) {
      if (row.action != "repost") continue;
      nlohmann::json info = nlohmann::json::parse(row.info, nullptr, false);
      if (!info.is_object() || !info.contains("new_post_id")) continue;
      children[info["original_post_id"].get<std::int64_t>()].push_back(
          {row.user_id, info["new_post_id"].get<std::int64_t>(), row.created_at});
    }

    for (std::int64_t root : {posts[0], posts[1], posts[2]}) {
      std::set<std::array<std::int64_t, 4>> expect;  // user, post, parent post, t
      std::vector<std::int64_t> frontier{root};
      while (!frontier.empty()) {
        const std::int64_t parent = frontier.back();
        frontier.pop_back();
        auto it = children.find(parent);
        if (it == children.end()) continue;
        for (const auto& [user, fresh, t] : it->second) {
          expect.insert({user, fresh, parent, t});
          frontier.push_back(fresh);
        }
      }

      PropagationTree tree = build_propagation_tree(*store, root);
      std::set<std::array<std::int64_t, 4>> got;
      std::unordered_set<std::int64_t> users;
      for (std::size_t i = 1; i < tree.nodes.size(); ++i) {
        const TreeNode& node = tree.nodes[i];
        got.insert({node.user_id, node.post_id,
                    tree.nodes[static_cast<std::size_t>(node.parent)].post_id,
                    node.repost_time});
        CHECK(users.insert(node.user_id).second);  // one repost per user
      }
      CHECK(got == expect);
    }
  }
}

TEST_CASE("metric series closed forms") {
  PropagationTree tree;
  tree.root_post = 1;
  tree.nodes.push_back({10, 1, -1, kT0});

  SUBCASE("single node") {
    for (int horizon : {0, 5}) {
      TreeMetricSeries s = metric_series(tree, horizon);
      REQUIRE(s.scale.size() == static_cast<std::size_t>(horizon) + 1);
      for (std::size_t m = 0; m < s.scale.size(); ++m) {
        CHECK(s.scale[m] == 1);
        CHECK(s.depth[m] == 0);
        CHECK(s.max_breadth[m] == 1);
      }
    }
  }

  SUBCASE("chain of three at minute zero") {
    tree.nodes.push_back({11, 2, 0, kT0});
    tree.nodes.push_back({12, 3, 1, kT0});
    TreeMetricSeries s = metric_series(tree, 0);
    CHECK(s.scale[0] == 3);
    CHECK(s.depth[0] == 2);
    CHECK(s.max_breadth[0] == 1);
  }

  SUBCASE("star with seven leaves") {
    for (int i = 0; i < 7; ++i)
      tree.nodes.push_back({20 + i, 2 + i, 0, kT0});
    TreeMetricSeries s = metric_series(tree, 3);
    CHECK(s.scale[3] == 8);
    CHECK(s.depth[3] == 1);
    CHECK(s.max_breadth[3] == 7);
  }

  SUBCASE("minute binning floors at 60-second boundaries") {
    const std::int64_t deltas[] = {59, 60, 119, 120, 121};
    for (int i = 0; i < 5; ++i)
      tree.nodes.push_back({30 + i, 2 + i, 0, kT0 + deltas[i]});
    TreeMetricSeries s = metric_series(tree, 2);
    CHECK(s.scale == std::vector<std::int64_t>{2, 4, 6});
    CHECK(s.depth == std::vector<std::int64_t>{1, 1, 1});
    CHECK(s.max_breadth == std::vector<std::int64_t>{1, 3, 5});

    // Nodes past the horizon never surface.
    TreeMetricSeries cut = metric_series(tree, 1);
    CHECK(cut.scale == std::vector<std::int64_t>{2, 4});
  }

  SUBCASE("negative horizon throws") {
    CHECK_THROWS_AS(metric_series(tree, -1), std::invalid_argument);
  }
}

TEST_CASE("metric series matches a brute-force BFS oracle on random trees") {
  for (std::uint64_t k = 0; k < 500; ++k) {
    Rng rng(mix_seed(777, k));
    const int n = static_cast<int>(1 + rng.next_u64() % 40);
    PropagationTree tree;
    tree.root_post = 1;
    tree.nodes.push_back({1000, 1, -1, kT0});
    for (int i = 1; i < n; ++i) {
      const int parent = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i));
      const std::int64_t t =
          tree.nodes[static_cast<std::size_t>(parent)].repost_time +
          static_cast<std::int64_t>(rng.next_u64() % 2400);
      tree.nodes.push_back({1000 + i, 1 + i, parent, t});
    }
    const int horizon = static_cast<int>(rng.next_u64() % 45);
    TreeMetricSeries s = metric_series(tree, horizon);
    REQUIRE(s.scale.size() == static_cast<std::size_t>(horizon) + 1);

    for (int m = 0; m <= horizon; ++m) {
      std::int64_t count = 0, deepest = 0, widest = 0;
      std::map<int, std::int64_t> breadth;
      for (const TreeNode& node : tree.nodes) {
        if ((node.repost_time - kT0) / 60 > m) continue;
        int depth = 0;
        for (int at = node.parent; at != -1;
             at = tree.nodes[static_cast<std::size_t>(at)].parent)
          ++depth;
        ++count;
        deepest = std::max<std::int64_t>(deepest, depth);
        widest = std::max(widest, ++breadth[depth]);
      }
      CHECK(s.scale[static_cast<std::size_t>(m)] == count);
      CHECK(s.depth[static_cast<std::size_t>(m)] == deepest);
      CHECK(s.max_breadth[static_cast<std::size_t>(m)] == widest);
    }

    for (std::size_t m = 0; m + 1 < s.scale.size(); ++m) {
      CHECK(s.scale[m] <= s.scale[m + 1]);
      CHECK(s.depth[m] <= s.depth[m + 1]);
    }
    for (std::size_t m = 0; m < s.scale.size(); ++m) {
      CHECK(s.max_breadth[m] <= s.scale[m]);
      CHECK(s.depth[m] <= s.scale[m] - 1);
    }
  }
}

TEST_CASE("normalized rmse and per-minute error closed forms") {
  const std::vector<double> real{3.0, 5.0, 10.0};

  SUBCASE("identical series score zero") {
    CHECK(normalized_rmse(real, real) == 0.0);
    for (double e : per_minute_error(real, real)) CHECK(e == 0.0);
  }

  SUBCASE("constant offset divides by the final real value") {
    const std::vector<double> simu{5.0, 7.0, 12.0};
    CHECK(normalized_rmse(simu, real) == doctest::Approx(0.2).epsilon(1e-15));
  }

  SUBCASE("doubling a flat series gives unit errors") {
    const std::vector<double> flat{10.0, 10.0, 10.0};
    const std::vector<double> twice{20.0, 20.0, 20.0};
    for (double e : per_minute_error(twice, flat)) CHECK(e == 1.0);
  }

  SUBCASE("swapping roles only swaps the normalizer") {
    // Final values 4 and 8 are exact binary divisors, so the identity is exact.
    const std::vector<double> a{1.0, 3.0, 4.0};
    const std::vector<double> b{2.0, 7.0, 8.0};
    CHECK(normalized_rmse(b, a) == 2.0 * normalized_rmse(a, b));
  }

  SUBCASE("precondition violations throw") {
    const std::vector<double> shorter{1.0};
    const std::vector<double> zero_tail{1.0, 2.0, 0.0};
    const std::vector<double> empty;
    CHECK_THROWS_AS(normalized_rmse(shorter, real), std::invalid_argument);
    CHECK_THROWS_AS(normalized_rmse(real, zero_tail), std::invalid_argument);
    CHECK_THROWS_AS(normalized_rmse(empty, empty), std::invalid_argument);
    CHECK_THROWS_AS(per_minute_error(real, zero_tail), std::invalid_argument);
    // A zero at the end of simu is fine; only the real tail normalizes.
    CHECK_NOTHROW(normalized_rmse(zero_tail, real));
  }

  SUBCASE("150-point fuzz matches a high-precision oracle") {
    for (std::uint64_t k = 0; k < 20; ++k) {
      Rng rng(mix_seed(555, k));
      std::vector<double> simu(150), real_run(150);
      for (int i = 0; i < 150; ++i) {
        simu[static_cast<std::size_t>(i)] = rng.next_u01() * 100.0;
        real_run[static_cast<std::size_t>(i)] = rng.next_u01() * 100.0;
      }
      real_run.back() = 50.0 + rng.next_u01() * 50.0;

      long double acc = 0.0L;
      for (int i = 149; i >= 0; --i) {
        const long double d =
            static_cast<long double>(simu[static_cast<std::size_t>(i)]) -
            static_cast<long double>(real_run[static_cast<std::size_t>(i)]);
        acc += d * d;
      }
      const long double want =
          std::sqrt(acc / 150.0L) / static_cast<long double>(real_run.back());
      CHECK(normalized_rmse(simu, real_run) ==
            doctest::Approx(static_cast<double>(want)).epsilon(1e-12));

      std::vector<double> errs = per_minute_error(simu, real_run);
      for (int i = 0; i < 150; ++i) {
        const long double e =
            std::fabs(static_cast<long double>(simu[static_cast<std::size_t>(i)]) -
                      static_cast<long double>(real_run[static_cast<std::size_t>(i)])) /
            static_cast<long double>(real_run.back());
        CHECK(errs[static_cast<std::size_t>(i)] ==
              doctest::Approx(static_cast<double>(e)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("post score is likes minus dislikes and can go negative") {
  auto store = open_store();
  add_users(*store, 8);
  REQUIRE(store->insert_post(1, "scored", Now{kT0}).ok());   // post 1
  REQUIRE(store->insert_post(2, "panned", Now{kT0}).ok());   // post 2
  for (std::int64_t u = 2; u <= 6; ++u)
    REQUIRE(store->upsert_edge(EdgeKind::like_post, u, 1, Now{kT0 + u}).ok());
  for (std::int64_t u = 7; u <= 8; ++u)
    REQUIRE(store->upsert_edge(EdgeKind::dislike_post, u, 1, Now{kT0 + u}).ok());
  for (std::int64_t u = 3; u <= 6; ++u)
    REQUIRE(store->upsert_edge(EdgeKind::dislike_post, u, 2, Now{kT0 + u}).ok());

  CHECK(post_score(*store, 1) == 3);
  CHECK(post_score(*store, 2) == -4);
  CHECK_THROWS_AS(post_score(*store, 99), std::invalid_argument);
}

TEST_CASE("treatment assignment partitions into near-equal thirds") {
  auto ids = [](std::int64_t n) {
    std::vector<std::int64_t> v(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i + 1;
    return v;
  };

  SUBCASE("219 items split 73/73/73") {
    TreatmentAssignment a = assign_treatments(ids(219), 99);
    CHECK(a.up_treated.size() == 73);
    CHECK(a.control.size() == 73);
    CHECK(a.down_treated.size() == 73);
  }

  SUBCASE("remainders pad control first, then up_treated") {
    TreatmentAssignment one = assign_treatments(ids(220), 99);
    CHECK(one.up_treated.size() == 73);
    CHECK(one.control.size() == 74);
    CHECK(one.down_treated.size() == 73);
    TreatmentAssignment two = assign_treatments(ids(221), 99);
    CHECK(two.up_treated.size() == 74);
    CHECK(two.control.size() == 74);
    CHECK(two.down_treated.size() == 73);
  }

  SUBCASE("partition covers every item exactly once") {
    TreatmentAssignment a = assign_treatments(ids(100), 7);
    std::set<std::int64_t> seen;
    for (const auto* group : {&a.up_treated, &a.control, &a.down_treated})
      for (std::int64_t item : *group) CHECK(seen.insert(item).second);
    CHECK(seen.size() == 100);
    CHECK(a.size() == 100);
    CHECK(a.group_of(a.up_treated.front()) == TreatmentGroup::up_treated);
    CHECK(a.group_of(a.down_treated.front()) == TreatmentGroup::down_treated);
    CHECK_FALSE(a.group_of(5000).has_value());
  }

  SUBCASE("outcome ignores input order but tracks the seed") {
    std::vector<std::int64_t> items = ids(219);
    std::vector<std::int64_t> shuffled = items;
    std::mt19937 gen(12345);
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    TreatmentAssignment a = assign_treatments(items, 99);
    TreatmentAssignment b = assign_treatments(shuffled, 99);
    CHECK(a.up_treated == b.up_treated);
    CHECK(a.control == b.control);
    CHECK(a.down_treated == b.down_treated);

    TreatmentAssignment other = assign_treatments(items, 100);
    CHECK(a.up_treated != other.up_treated);
  }

  SUBCASE("duplicate items are rejected") {
    const std::vector<std::int64_t> dupes{1, 2, 2};
    CHECK_THROWS_AS(assign_treatments(dupes, 1), std::invalid_argument);
  }
}

TEST_CASE("treatment seeding stamps one vote per item and traces it") {
  auto store = open_store();
  add_users(*store, 4);
  std::vector<std::int64_t> items;
  for (std::int64_t author = 2; author <= 4; ++author)
    for (int i = 0; i < 3; ++i) {
      OpResult r = store->insert_post(author, "item", Now{kT0});
      REQUIRE(r.ok());
      items.push_back(r.id);
    }

  const std::size_t traced_before = store->trace().size();
  TreatmentAssignment a = assign_and_seed_treatments(*store, items, 31, 1, Now{kT0 + 60});
  CHECK(a.size() == 9);
  CHECK(a.up_treated.size() == 3);

  for (std::int64_t p : a.up_treated) CHECK(post_score(*store, p) == 1);
  for (std::int64_t p : a.control) CHECK(post_score(*store, p) == 0);
  for (std::int64_t p : a.down_treated) CHECK(post_score(*store, p) == -1);

  std::size_t likes = 0, dislikes = 0;
  for (std::size_t i = traced_before; i < store->trace().size(); ++i) {
    const TraceRow& row = store->trace()[i];
    CHECK(row.user_id == 1);
    if (row.action == "like_post") ++likes;
    if (row.action == "dislike_post") ++dislikes;
  }
  CHECK(likes == a.up_treated.size());
  CHECK(dislikes == a.down_treated.size());

  SUBCASE("an unregistered seeding user is rejected") {
    CHECK_THROWS_AS(seed_treatments(*store, assign_treatments(items, 32), 99,
                                    Now{kT0 + 120}),
                    std::runtime_error);
  }
}

TEST_CASE("disagree scores aggregate per step with a normal CI") {
  SUBCASE("uniform sevens collapse the interval") {
    MapJudge judge;
    const std::vector<JudgedPair> pairs{
        {"claim", "c1", 0}, {"claim", "c2", 0}, {"claim", "c3", 1}};
    DisagreeReport report = disagree_scores(pairs, judge);
    CHECK(report.judged == 3);
    CHECK(report.skipped == 0);
    REQUIRE(report.per_step.size() == 2);
    CHECK(report.per_step[0].step == 0);
    CHECK(report.per_step[0].stats.n == 2);
    CHECK(report.per_step[0].stats.mean == 7.0);
    CHECK(report.per_step[0].stats.lo == 7.0);
    CHECK(report.per_step[0].stats.hi == 7.0);
    CHECK(report.per_step[1].step == 1);
    CHECK(report.per_step[1].stats.n == 1);
    CHECK(report.per_step[1].stats.lo == report.per_step[1].stats.hi);
  }

  SUBCASE("an equal 1/10 mix lands at 5.5") {
    MapJudge judge;
    judge.by_comment["agree"] = 1;
    judge.by_comment["oppose"] = 10;
    const std::vector<JudgedPair> pairs{{"claim", "agree", 0}, {"claim", "oppose", 0}};
    DisagreeReport report = disagree_scores(pairs, judge);
    REQUIRE(report.per_step.size() == 1);
    CHECK(report.per_step[0].stats.mean == doctest::Approx(5.5).epsilon(1e-15));
    // Two points a, b: sample sd is |a-b|/sqrt(2), so the half-width is z|a-b|/2.
    const double half = 1.959963984540054 * 9.0 / 2.0;
    CHECK(report.per_step[0].stats.lo == doctest::Approx(5.5 - half).epsilon(1e-12));
    CHECK(report.per_step[0].stats.hi == doctest::Approx(5.5 + half).epsilon(1e-12));
  }

  SUBCASE("failures and out-of-range ratings are skipped and tallied") {
    MapJudge judge;
    judge.by_comment["mute"] = std::nullopt;
    judge.by_comment["low"] = 0;
    judge.by_comment["high"] = 11;
    const std::vector<JudgedPair> pairs{
        {"claim", "mute", 0}, {"claim", "low", 0}, {"claim", "high", 0},
        {"claim", "fine", 0}};
    DisagreeReport report = disagree_scores(pairs, judge);
    CHECK(report.judged == 1);
    CHECK(report.skipped == 3);
    REQUIRE(report.per_step.size() == 1);
    CHECK(report.per_step[0].stats.n == 1);
    CHECK(report.per_step[0].stats.mean == 7.0);
  }

  SUBCASE("no pairs, no steps") {
    MapJudge judge;
    DisagreeReport report = disagree_scores({}, judge);
    CHECK(report.per_step.empty());
    CHECK(report.judged == 0);
  }

  SUBCASE("fuzzed scores match an independent statistics oracle") {
    Rng rng(909);
    std::vector<int> scores;
    std::vector<JudgedPair> pairs;
    std::map<int, std::vector<double>> expect;
    for (int i = 0; i < 200; ++i) {
      const int score = static_cast<int>(1 + rng.next_u64() % 10);
      const int step = i % 5;
      scores.push_back(score);
      pairs.push_back({"claim", "c" + std::to_string(i), step});
      expect[step].push_back(score);
    }
    QueueJudge judge(scores);
    DisagreeReport report = disagree_scores(pairs, judge);
    REQUIRE(report.per_step.size() == expect.size());
    for (const StepScore& s : report.per_step) {
      const std::vector<double>& xs = expect.at(s.step);
      long double sum = 0.0L;
      for (double x : xs) sum += x;
      const long double mean = sum / static_cast<long double>(xs.size());
      long double var = 0.0L;
      for (double x : xs) var += (x - mean) * (x - mean);
      var /= static_cast<long double>(xs.size() - 1);
      const long double half = 1.959963984540054L * std::sqrt(var) /
                               std::sqrt(static_cast<long double>(xs.size()));
      CHECK(s.stats.n == xs.size());
      CHECK(s.stats.mean == doctest::Approx(static_cast<double>(mean)).epsilon(1e-12));
      CHECK(s.stats.lo ==
            doctest::Approx(static_cast<double>(mean - half)).epsilon(1e-12));
      CHECK(s.stats.hi ==
            doctest::Approx(static_cast<double>(mean + half)).epsilon(1e-12));
    }
  }
}

TEST_CASE("http judge posts the filled prompt and parses the score") {
  httplib::Server svr;
  std::mutex body_m;
  std::string last_body;
  svr.Post("/judge", [&](const httplib::Request& req, httplib::Response& res) {
    {
      std::lock_guard<std::mutex> lock(body_m);
      last_body = req.body;
    }
    res.set_content(R"({"score": 4})", "application/json");
  });
  svr.Post("/string", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"score": "high"})", "application/json");
  });
  svr.Post("/range", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"score": 12})", "application/json");
  });
  svr.Post("/garbage", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content("not json at all", "text/plain");
  });
  svr.Post("/boom", [&](const httplib::Request&, httplib::Response& res) {
    res.status = 500;
  });
  const int port = svr.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread server([&] { svr.listen_after_bind(); });
  svr.wait_until_ready();

  auto judge_at = [&](const std::string& path) {
    HttpDisagreeJudge::Config cfg;
    cfg.port = port;
    cfg.path = path;
    cfg.timeout_ms = 5000;
    return HttpDisagreeJudge(cfg);
  };

  HttpDisagreeJudge ok = judge_at("/judge");
  std::optional<int> score = ok.rate("The moon is cheese", "Surely not.");
  CHECK(score == 4);
  {
    std::lock_guard<std::mutex> lock(body_m);
    CHECK(last_body == disagree_judge_prompt("The moon is cheese", "Surely not."));
    CHECK(last_body.find("\"The moon is cheese\"") != std::string::npos);
    CHECK(last_body.find("\"Surely not.\"") != std::string::npos);
    CHECK(last_body.find("{post_content}") == std::string::npos);
  }

  CHECK_FALSE(judge_at("/string").rate("p", "c").has_value());
  CHECK_FALSE(judge_at("/range").rate("p", "c").has_value());
  CHECK_FALSE(judge_at("/garbage").rate("p", "c").has_value());
  CHECK_FALSE(judge_at("/boom").rate("p", "c").has_value());

  svr.stop();
  server.join();
}

TEST_CASE("tfidf relevance counting") {
  SUBCASE("an echoed reference is counted, disjoint text is not") {
    const std::vector<StampedDoc> posts{{"alpha beta gamma", 0},
                                        {"delta epsilon", 0}};
    const std::vector<std::string> refs{"alpha beta gamma"};
    auto counts = tfidf_relevance_counts(posts, refs, 0.2);
    REQUIRE(counts.size() == 1);
    CHECK(counts[0] == std::vector<std::int64_t>{1});
  }

  SUBCASE("counts land in the step of the matching post") {
    const std::vector<StampedDoc> posts{{"alpha beta gamma", 0},
                                        {"noise words here", 1},
                                        {"beta gamma alpha", 2}};
    const std::vector<std::string> refs{"alpha beta gamma"};
    auto counts = tfidf_relevance_counts(posts, refs, 0.2);
    CHECK(counts[0] == std::vector<std::int64_t>{1, 0, 1});
  }

  SUBCASE("no references yields no rows") {
    const std::vector<StampedDoc> posts{{"alpha", 0}};
    CHECK(tfidf_relevance_counts(posts, {}, 0.2).empty());
  }

  SUBCASE("preconditions") {
    const std::vector<StampedDoc> posts{{"alpha", 0}};
    const std::vector<std::string> refs{"alpha"};
    CHECK_THROWS_AS(tfidf_relevance_counts({}, refs, 0.2), std::invalid_argument);
    for (double bad : {0.0, 1.0, -0.3, 1.2})
      CHECK_THROWS_AS(tfidf_relevance_counts(posts, refs, bad), std::invalid_argument);
    const std::vector<StampedDoc> negative{{"alpha", -1}};
    CHECK_THROWS_AS(tfidf_relevance_counts(negative, refs, 0.2), std::invalid_argument);
  }

  SUBCASE("synthetic corpus matches a brute-force oracle") {
    Rng rng(616);
    std::vector<std::string> words;
    for (int w = 0; w < 40; ++w) words.push_back("w" + std::to_string(w));
    auto pick_words = [&](int count) {
      std::string text;
      for (int i = 0; i < count; ++i) {
        if (i) text += ' ';
        text += words[static_cast<std::size_t>(rng.next_u64() % words.size())];
      }
      return text;
    };

    std::vector<std::string> refs;
    for (int r = 0; r < 3; ++r) refs.push_back(pick_words(6));
    std::vector<StampedDoc> posts;
    std::size_t planted = 0;
    for (int i = 0; i < 1000; ++i) {
      StampedDoc doc;
      doc.step = i % 20;
      if (i % 37 == 0) {
        doc.content = refs[static_cast<std::size_t>(i / 37) % 3];
        ++planted;
      } else {
        doc.content = pick_words(static_cast<int>(3 + rng.next_u64() % 10));
      }
      posts.push_back(std::move(doc));
    }

    auto counts = tfidf_relevance_counts(posts, refs, 0.2);

    // Oracle: dense recomputation with ordered maps.
    std::vector<std::vector<std::string>> docs;
    for (const StampedDoc& p : posts) docs.push_back(tokenize(p.content));
    for (const std::string& r : refs) docs.push_back(tokenize(r));
    std::map<std::string, int> df;
    for (const auto& tokens : docs) {
      std::set<std::string> uniq(tokens.begin(), tokens.end());
      for (const std::string& t : uniq) ++df[t];
    }
    const double total = static_cast<double>(docs.size());
    std::vector<std::map<std::string, double>> vecs;
    for (const auto& tokens : docs) {
      std::map<std::string, double> tf;
      for (const std::string& t : tokens) tf[t] += 1.0;
      double norm = 0.0;
      for (auto& [t, c] : tf) {
        c *= std::log(total / df[t]);
        norm += c * c;
      }
      if (norm > 0.0)
        for (auto& [t, c] : tf) c /= std::sqrt(norm);
      vecs.push_back(std::move(tf));
    }
    std::vector<std::vector<std::int64_t>> want(refs.size(),
                                                std::vector<std::int64_t>(20, 0));
    for (std::size_t r = 0; r < refs.size(); ++r) {
      const auto& ref_vec = vecs[posts.size() + r];
      for (std::size_t p = 0; p < posts.size(); ++p) {
        double dot = 0.0;
        for (const auto& [t, c] : vecs[p]) {
          auto it = ref_vec.find(t);
          if (it != ref_vec.end()) dot += c * it->second;
        }
        if (dot > 0.2) ++want[r][static_cast<std::size_t>(posts[p].step)];
      }
    }
    CHECK(counts == want);

    std::size_t matched = 0;
    for (const auto& row : counts)
      for (std::int64_t c : row) matched += static_cast<std::size_t>(c);
    CHECK(matched >= planted);  // every planted echo scores ~1.0
  }
}

TEST_CASE("evaluation prompts expose their slots and fill cleanly") {
  CHECK(dilemma_question().find("Helen is a successful writer") == 0);
  CHECK(extremeness_judge_prompt_template().find("more extreme") != std::string::npos);
  CHECK(extremeness_judge_prompt_template().find(
            "Choice: Answer1 or Answer2 or neutral") != std::string::npos);
  CHECK(helpfulness_judge_prompt_template().find("1. \"Accurate Information\"") !=
        std::string::npos);
  CHECK(helpfulness_judge_prompt_template().find("9. \"User Engagement\"") !=
        std::string::npos);
  // The helpfulness verdict line has no neutral option.
  const std::string& helpful = helpfulness_judge_prompt_template();
  CHECK(helpful.rfind("Choice: Answer1 or Answer2") == helpful.size() - 26);

  std::string filled = extremeness_judge_prompt("Q?", "first take", "second take");
  CHECK(filled.find("[User Question]\nQ?") != std::string::npos);
  CHECK(filled.find("[Answer1]\nfirst take") != std::string::npos);
  CHECK(filled.find("[Answer2]\nsecond take") != std::string::npos);
  CHECK(filled.find("{question}") == std::string::npos);

  std::string rated = disagree_judge_prompt("post body", "comment body");
  CHECK(rated.find("counterfactual statement: \"post body\"") != std::string::npos);
  CHECK(rated.find("commented: \"comment body\"") != std::string::npos);
  CHECK(rated.find("{\n    \"score\": 7\n}") != std::string::npos);
  CHECK(rated.find("{comment_content}") == std::string::npos);
}

TEST_CASE("series csv export writes minute-indexed rows") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "socsim_series_test.csv";
  std::string error;

  const std::vector<std::int64_t> scale{2, 4, 6};
  REQUIRE(write_series_csv(path.string(), "scale", scale, &error));
  {
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    CHECK(text == "minute,scale\n0,2\n1,4\n2,6\n");
  }

  const std::vector<double> errs{0.5, 1.0};
  REQUIRE(write_series_csv(path.string(), "error", errs, &error));
  {
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    CHECK(text == "minute,error\n0," + format_double(0.5) + "\n1," +
                      format_double(1.0) + "\n");
  }
  fs::remove(path);

  CHECK_FALSE(write_series_csv("/nonexistent_dir_xyz/out.csv", "scale", scale, &error));
  CHECK_FALSE(error.empty());
}
