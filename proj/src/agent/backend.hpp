#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "actions/kinds.hpp"

namespace socsim {

// A decision source. Implementations see nothing but the prompt text, so two
// agents handed identical prompts (and identical backend seeds) decide
// identically.
class DecisionBackend {
 public:
  virtual ~DecisionBackend() = default;
  virtual std::string identity() const = 0;
  // Raw response text for a decision or survey prompt. Throws
  // std::runtime_error when the backend cannot answer.
  virtual std::string decide(const std::string& prompt) = 0;
};

// One behavior rule. Post rules run per rendered post, comment rules per
// rendered comment, global rules once per decision.
struct PolicyRule {
  ActionKind action = ActionKind::do_nothing;
  double prob = 1.0;
  // Score is likes minus dislikes of the matched post or comment.
  enum class Cond { always, score_pos, score_neg, score_zero };
  Cond cond = Cond::always;
  // fresh draws from the decision stream; sticky re-derives the same coin
  // for the same (persona, target, rule) on every step.
  enum class Coin { fresh, sticky };
  Coin coin = Coin::fresh;
};

struct ScriptedPolicy {
  std::vector<PolicyRule> rules;
  std::string survey_answer = "no opinion";
  std::string comment_text = "I see it the same way.";
  std::string post_text = "Sharing my thoughts today.";
  std::string search_query = "news";
};

// Deterministic test double for the model-backed agent: parses the feed back
// out of the prompt, fires its rules, and emits a wire-format response. A
// prompt containing a survey question block answers with the canned text.
class ScriptedBackend : public DecisionBackend {
 public:
  ScriptedBackend(ScriptedPolicy policy, std::uint64_t seed);
  std::string identity() const override;
  std::string decide(const std::string& prompt) override;

 private:
  ScriptedPolicy policy_;
  std::uint64_t seed_;
};

struct RemoteBackendConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string path = "/v1/chat/completions";
  std::string model = "default";
  double temperature = 0.0;
  int timeout_ms = 30000;
  // Total attempts per decision before the call is declared failed.
  int max_retries = 3;
};

// Chat-completion client: system message carries the persona half of the
// prompt, the user message the feed and format half; the first choice's
// content comes back verbatim.
class RemoteBackend : public DecisionBackend {
 public:
  explicit RemoteBackend(RemoteBackendConfig cfg);
  std::string identity() const override;
  std::string decide(const std::string& prompt) override;

 private:
  RemoteBackendConfig cfg_;
};

}  // namespace socsim
