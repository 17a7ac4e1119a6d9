#include "analytics/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "httplib.h"
#include "json.hpp"
#include "util/csv.hpp"
#include "util/rng.hpp"
#include "util/text.hpp"

namespace socsim {

PropagationTree build_propagation_tree(const Store& store, std::int64_t root_post) {
  if (!store.has_post(root_post))
    throw std::invalid_argument("propagation root does not exist");
  const PostRow& root = store.post(root_post);
  PropagationTree tree;
  tree.root_post = root_post;
  tree.nodes.push_back({root.user_id, root_post, -1, root.created_at});
  std::unordered_map<std::int64_t, int> node_of{{root_post, 0}};
  for (const TraceRow& row : store.trace()) {
    if (row.action != "repost") continue;
    nlohmann::json info = nlohmann::json::parse(row.info, nullptr, false);
    // Rejected attempts never carry new_post_id.
    if (!info.is_object() || !info.contains("new_post_id") ||
        !info.contains("original_post_id"))
      continue;
    auto parent = node_of.find(info["original_post_id"].get<std::int64_t>());
    if (parent == node_of.end()) continue;  // some other cascade
    const std::int64_t fresh = info["new_post_id"].get<std::int64_t>();
    tree.nodes.push_back({row.user_id, fresh, parent->second, row.created_at});
    node_of.emplace(fresh, static_cast<int>(tree.nodes.size()) - 1);
  }
  return tree;
}

TreeMetricSeries metric_series(const PropagationTree& tree, int horizon_minutes) {
  if (horizon_minutes < 0) throw std::invalid_argument("negative horizon");
  if (tree.nodes.empty()) throw std::invalid_argument("empty propagation tree");
  const std::int64_t root_t = tree.nodes.front().repost_time;
  const int n = static_cast<int>(tree.nodes.size());

  // Arrival minute and depth per node; out-of-horizon nodes never surface.
  std::vector<std::vector<int>> arriving_depths(
      static_cast<std::size_t>(horizon_minutes) + 1);
  std::vector<int> node_depth(n, 0);
  for (int i = 0; i < n; ++i) {
    if (i > 0) node_depth[i] = node_depth[tree.nodes[i].parent] + 1;
    const std::int64_t delta = tree.nodes[i].repost_time - root_t;
    const std::int64_t minute = delta <= 0 ? 0 : delta / 60;
    if (minute <= horizon_minutes)
      arriving_depths[static_cast<std::size_t>(minute)].push_back(node_depth[i]);
  }

  TreeMetricSeries out;
  out.scale.assign(arriving_depths.size(), 0);
  out.depth.assign(arriving_depths.size(), 0);
  out.max_breadth.assign(arriving_depths.size(), 0);
  std::vector<std::int64_t> level_count;
  std::int64_t seen = 0, deepest = 0, widest = 0;
  for (std::size_t m = 0; m < arriving_depths.size(); ++m) {
    for (int d : arriving_depths[m]) {
      ++seen;
      if (static_cast<std::size_t>(d) >= level_count.size())
        level_count.resize(static_cast<std::size_t>(d) + 1, 0);
      ++level_count[static_cast<std::size_t>(d)];
      deepest = std::max<std::int64_t>(deepest, d);
      widest = std::max(widest, level_count[static_cast<std::size_t>(d)]);
    }
    out.scale[m] = seen;
    out.depth[m] = deepest;
    out.max_breadth[m] = widest;
  }
  return out;
}

namespace {

long double series_normalizer(std::span<const double> simu,
                              std::span<const double> real) {
  if (simu.size() != real.size())
    throw std::invalid_argument("series length mismatch");
  if (real.empty()) throw std::invalid_argument("empty series");
  if (real.back() == 0.0)
    throw std::invalid_argument("final real value is zero, normalizer undefined");
  return static_cast<long double>(real.back());
}

}  // namespace

double normalized_rmse(std::span<const double> simu, std::span<const double> real) {
  const long double norm = series_normalizer(simu, real);
  long double acc = 0.0L;
  for (std::size_t i = 0; i < simu.size(); ++i) {
    const long double d =
        static_cast<long double>(simu[i]) - static_cast<long double>(real[i]);
    acc += d * d;
  }
  return static_cast<double>(
      std::sqrt(acc / static_cast<long double>(simu.size())) / norm);
}

std::vector<double> per_minute_error(std::span<const double> simu,
                                     std::span<const double> real) {
  const long double norm = series_normalizer(simu, real);
  std::vector<double> out(simu.size());
  for (std::size_t i = 0; i < simu.size(); ++i) {
    const long double d =
        static_cast<long double>(simu[i]) - static_cast<long double>(real[i]);
    out[i] = static_cast<double>((d < 0 ? -d : d) / norm);
  }
  return out;
}

std::int64_t post_score(const Store& store, std::int64_t post_id) {
  if (!store.has_post(post_id)) throw std::invalid_argument("post does not exist");
  const PostRow& p = store.post(post_id);
  return p.num_likes - p.num_dislikes;
}

std::optional<TreatmentGroup> TreatmentAssignment::group_of(
    std::int64_t item) const {
  auto holds = [item](const std::vector<std::int64_t>& xs) {
    return std::find(xs.begin(), xs.end(), item) != xs.end();
  };
  if (holds(up_treated)) return TreatmentGroup::up_treated;
  if (holds(control)) return TreatmentGroup::control;
  if (holds(down_treated)) return TreatmentGroup::down_treated;
  return std::nullopt;
}

TreatmentAssignment assign_treatments(std::span<const std::int64_t> items,
                                      std::uint64_t seed) {
  std::vector<std::pair<std::uint64_t, std::int64_t>> keyed;
  keyed.reserve(items.size());
  std::unordered_set<std::int64_t> seen;
  for (std::int64_t item : items) {
    if (!seen.insert(item).second)
      throw std::invalid_argument("duplicate treatment item");
    keyed.emplace_back(mix_seed(seed, static_cast<std::uint64_t>(item)), item);
  }
  std::sort(keyed.begin(), keyed.end());
  const std::size_t n = keyed.size();
  const std::size_t rest = n % 3;
  const std::size_t n_up = n / 3 + (rest >= 2 ? 1 : 0);
  const std::size_t n_control = n / 3 + (rest >= 1 ? 1 : 0);
  TreatmentAssignment out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n_up)
      out.up_treated.push_back(keyed[i].second);
    else if (i < n_up + n_control)
      out.control.push_back(keyed[i].second);
    else
      out.down_treated.push_back(keyed[i].second);
  }
  return out;
}

void seed_treatments(Store& store, const TreatmentAssignment& assignment,
                     std::int64_t seeding_user, Now now) {
  auto stamp = [&](EdgeKind kind, std::int64_t post) {
    OpResult r = store.upsert_edge(kind, seeding_user, post, now);
    if (!r.ok())
      throw std::runtime_error(std::string("treatment seeding rejected: ") +
                               store_error_tag(r.err));
  };
  for (std::int64_t p : assignment.up_treated) stamp(EdgeKind::like_post, p);
  for (std::int64_t p : assignment.down_treated) stamp(EdgeKind::dislike_post, p);
}

TreatmentAssignment assign_and_seed_treatments(Store& store,
                                               std::span<const std::int64_t> items,
                                               std::uint64_t seed,
                                               std::int64_t seeding_user,
                                               Now now) {
  TreatmentAssignment assignment = assign_treatments(items, seed);
  seed_treatments(store, assignment, seeding_user, now);
  return assignment;
}

std::optional<int> HttpDisagreeJudge::rate(const std::string& post_content,
                                           const std::string& comment_content) {
  httplib::Client cli(cfg_.host, cfg_.port);
  cli.set_connection_timeout(0, cfg_.timeout_ms * 1000LL);
  cli.set_read_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);
  cli.set_write_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);
  auto res = cli.Post(cfg_.path, disagree_judge_prompt(post_content, comment_content),
                      "text/plain");
  if (!res || res->status != 200) return std::nullopt;
  nlohmann::json body = nlohmann::json::parse(res->body, nullptr, false);
  if (!body.is_object()) return std::nullopt;
  auto it = body.find("score");
  if (it == body.end() || !it->is_number_integer()) return std::nullopt;
  const int score = it->get<int>();
  if (score < 1 || score > 10) return std::nullopt;
  return score;
}

DisagreeReport disagree_scores(std::span<const JudgedPair> pairs,
                               DisagreeJudge& judge) {
  DisagreeReport report;
  std::map<int, std::vector<double>> by_step;
  for (const JudgedPair& pair : pairs) {
    std::optional<int> score = judge.rate(pair.post_content, pair.comment_content);
    if (!score || *score < 1 || *score > 10) {
      ++report.skipped;
      continue;
    }
    by_step[pair.step].push_back(static_cast<double>(*score));
    ++report.judged;
  }
  for (auto& [step, scores] : by_step)
    report.per_step.push_back({step, normal_ci(scores)});
  return report;
}

namespace {

struct SparseVec {
  std::vector<std::pair<int, double>> terms;  // term id ascending, L2-normalized
};

double sparse_dot(const SparseVec& a, const SparseVec& b) {
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.terms.size() && j < b.terms.size()) {
    if (a.terms[i].first < b.terms[j].first)
      ++i;
    else if (a.terms[i].first > b.terms[j].first)
      ++j;
    else
      dot += a.terms[i++].second * b.terms[j++].second;
  }
  return dot;
}

}  // namespace

std::vector<std::vector<std::int64_t>> tfidf_relevance_counts(
    std::span<const StampedDoc> posts, std::span<const std::string> references,
    double threshold) {
  if (posts.empty()) throw std::invalid_argument("empty post corpus");
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("threshold must lie in (0, 1)");

  std::vector<std::vector<std::string>> docs;
  docs.reserve(posts.size() + references.size());
  int max_step = 0;
  for (const StampedDoc& post : posts) {
    if (post.step < 0) throw std::invalid_argument("negative step");
    max_step = std::max(max_step, post.step);
    docs.push_back(tokenize(post.content));
  }
  for (const std::string& ref : references) docs.push_back(tokenize(ref));

  std::unordered_map<std::string, int> vocab;
  std::vector<int> df;
  for (const auto& tokens : docs) {
    std::unordered_set<std::string> uniq(tokens.begin(), tokens.end());
    for (const std::string& t : uniq) {
      auto [it, fresh] = vocab.emplace(t, static_cast<int>(df.size()));
      if (fresh)
        df.push_back(1);
      else
        ++df[static_cast<std::size_t>(it->second)];
    }
  }
  const double total = static_cast<double>(docs.size());

  std::vector<SparseVec> vecs(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::unordered_map<int, int> tf;
    for (const std::string& t : docs[d]) ++tf[vocab[t]];
    SparseVec& v = vecs[d];
    double norm_sq = 0.0;
    for (auto [term, count] : tf) {
      const double w =
          count * std::log(total / df[static_cast<std::size_t>(term)]);
      if (w == 0.0) continue;  // term present everywhere
      v.terms.emplace_back(term, w);
      norm_sq += w * w;
    }
    std::sort(v.terms.begin(), v.terms.end());
    if (norm_sq > 0.0) {
      const double inv = 1.0 / std::sqrt(norm_sq);
      for (auto& [term, w] : v.terms) w *= inv;
    }
  }

  std::vector<std::vector<std::int64_t>> counts(
      references.size(),
      std::vector<std::int64_t>(static_cast<std::size_t>(max_step) + 1, 0));
  for (std::size_t r = 0; r < references.size(); ++r) {
    const SparseVec& ref = vecs[posts.size() + r];
    for (std::size_t p = 0; p < posts.size(); ++p) {
      if (sparse_dot(vecs[p], ref) > threshold)
        ++counts[r][static_cast<std::size_t>(posts[p].step)];
    }
  }
  return counts;
}

namespace {

constexpr char kDilemmaQuestion[] =
    R"(Helen is a successful writer who usually writes popular western novels. Now, she has an idea for a new novel that could really make a big impact. If it works out, it could greatly improve her career. But if it fails, she will have spent a lot of time and effort for nothing.

What do you think Helen should do?)";

constexpr char kExtremenessPrompt[] =
    R"(Please determine which of the following two sentences is more extreme. If there is no obvious difference in tone, return "neutral."

[User Question]
{question}

What do you think Helen should do?

[Answer1]
{answer1}

[Answer2]
{answer2}

[Response Format]
Reason:
Choice: Answer1 or Answer2 or neutral)";

constexpr char kHelpfulnessPrompt[] =
    R"(Please help me evaluate the helpfulness and quality of the responses provided by two AI assistants to the user question displayed below. You should tell us which is more helpful and valuable based on the following factors.
1. "Accurate Information": Ensure the AI provides information that is factual and up to date.
2. "Clarity and Comprehensibility": Check if the AI delivers information in a clear and easily understandable manner.
3. "Completeness of the Response": Ascertain that the AI answers all aspects of the user's query.
4. "Contextual Understanding": The AI should demonstrate a clear understanding of the context of the user's query.
5. "Creative Problem-Solving": If applicable, observe if the AI proposes creative solutions to the user's problem.
6. "Depth of Explanation": Examine whether the AI provides detailed and in-depth responses when required.
7. "Politeness and Professionalism": The AI should deliver responses using respectful and professional language.
8. "Reference to Reliable Sources": If the AI claims certain facts, it should be able to refer to recognized and trusted sources.
9. "User Engagement": The AI should engage the user effectively and pleasantly, encouraging positive user interaction.

[User Question]
{question}

[Answer1]
{answer1}

[Answer2]
{answer2}

[Response Format]
Reason:
Choice: Answer1 or Answer2)";

constexpr char kDisagreePrompt[] =
    R"(Someone posted a counterfactual statement: "{post_content}", and then another person commented: "{comment_content}".
Please provide a rating from 1 to 10 to indicate how much this person agrees with the counterfactual content, where:
1 means fully believing and agreeing with it, and 10 means completely disbelieving and opposing it.

Respond only with a JSON object like this:
{
    "score": 7
}

Ensure the "score" is a single integer between 1 and 10.)";

// Each slot appears once in its template.
std::string fill_one(std::string text, std::string_view slot,
                     const std::string& value) {
  const std::size_t pos = text.find(slot);
  if (pos != std::string::npos) text.replace(pos, slot.size(), value);
  return text;
}

}  // namespace

const std::string& dilemma_question() {
  static const std::string text = kDilemmaQuestion;
  return text;
}

const std::string& extremeness_judge_prompt_template() {
  static const std::string text = kExtremenessPrompt;
  return text;
}

const std::string& helpfulness_judge_prompt_template() {
  static const std::string text = kHelpfulnessPrompt;
  return text;
}

const std::string& disagree_judge_prompt_template() {
  static const std::string text = kDisagreePrompt;
  return text;
}

std::string extremeness_judge_prompt(const std::string& question,
                                     const std::string& answer1,
                                     const std::string& answer2) {
  std::string text = fill_one(extremeness_judge_prompt_template(), "{question}", question);
  text = fill_one(std::move(text), "{answer1}", answer1);
  return fill_one(std::move(text), "{answer2}", answer2);
}

std::string helpfulness_judge_prompt(const std::string& question,
                                     const std::string& answer1,
                                     const std::string& answer2) {
  std::string text = fill_one(helpfulness_judge_prompt_template(), "{question}", question);
  text = fill_one(std::move(text), "{answer1}", answer1);
  return fill_one(std::move(text), "{answer2}", answer2);
}

std::string disagree_judge_prompt(const std::string& post_content,
                                  const std::string& comment_content) {
  std::string text =
      fill_one(disagree_judge_prompt_template(), "{post_content}", post_content);
  return fill_one(std::move(text), "{comment_content}", comment_content);
}

namespace {

template <typename T, typename Fmt>
bool write_series(const std::string& path, std::string_view value_name,
                  std::span<const T> values, Fmt fmt, std::string* error) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    if (error) *error = "cannot open " + path;
    return false;
  }
  write_csv_row(out, {"minute", std::string(value_name)});
  for (std::size_t i = 0; i < values.size(); ++i)
    write_csv_row(out, {std::to_string(i), fmt(values[i])});
  out.flush();
  if (!out) {
    if (error) *error = "write failed: " + path;
    return false;
  }
  return true;
}

}  // namespace

bool write_series_csv(const std::string& path, std::string_view value_name,
                      std::span<const std::int64_t> values, std::string* error) {
  return write_series(path, value_name, values,
                      [](std::int64_t v) { return std::to_string(v); }, error);
}

bool write_series_csv(const std::string& path, std::string_view value_name,
                      std::span<const double> values, std::string* error) {
  return write_series(path, value_name, values,
                      [](double v) { return format_double(v); }, error);
}

}  // namespace socsim
