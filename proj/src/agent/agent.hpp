#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "actions/envelope.hpp"
#include "actions/execute.hpp"
#include "actions/kinds.hpp"
#include "agent/backend.hpp"
#include "recsys/recommender.hpp"
#include "store/store.hpp"
#include "timing/activity.hpp"
#include "timing/clock.hpp"
#include "util/rng.hpp"

namespace socsim {

struct AgentRuntimeConfig {
  std::size_t memory_bound = 20;
  // Most recent entries rendered into the prompt digest.
  std::size_t memory_prompt_entries = 5;
};

struct MemoryEntry {
  int step = 0;
  std::string feed_digest;            // rendered feed as seen at decision time
  std::vector<std::string> actions;   // rendered calls with rejection marks
  std::string reason;
};

class AgentState {
 public:
  AgentState(std::int64_t agent_id, std::int64_t user_id, std::string persona,
             ActivityProfile activity, AgentRuntimeConfig cfg = {});

  std::int64_t agent_id() const { return agent_id_; }
  std::int64_t user_id() const { return user_id_; }
  const std::string& persona() const { return persona_; }
  const ActivityProfile& activity() const { return activity_; }
  const AgentRuntimeConfig& config() const { return cfg_; }

  // Oldest entries leave once the bound is hit.
  void remember(MemoryEntry entry);
  const std::deque<MemoryEntry>& memory() const { return memory_; }
  // Compact one-line-per-entry rendering of the latest entries; empty string
  // when there is nothing remembered yet.
  std::string memory_digest(std::size_t last_n) const;

 private:
  std::int64_t agent_id_ = 0;
  std::int64_t user_id_ = 0;
  std::string persona_;
  ActivityProfile activity_;
  AgentRuntimeConfig cfg_;
  std::deque<MemoryEntry> memory_;
};

// Prompt rendering bounds. Contents render single-line (newlines fold to
// spaces) so the feed stays line-parseable. The comment limit is sized so a
// five-post maximal feed stays under 8k characters with any scenario menu.
inline constexpr std::size_t kPostContentLimit = 280;
inline constexpr std::size_t kCommentContentLimit = 70;
inline constexpr std::size_t kMaxCommentsShown = 5;
inline constexpr std::size_t kReasonDigestLimit = 160;

// "# POSTS" block: ids, authors, contents, vote counts, and up to five
// comments per post with their counts.
std::string render_feed(const Store& store, std::span<const std::int64_t> post_ids);

// objective + action menu + persona + feed + response format, with the
// memory digest appended when the agent has history.
std::string assemble_prompt(const AgentState& agent, const Store& store,
                            std::span<const std::int64_t> feed,
                            const ActionSet& subset);

struct StepOutcome {
  std::vector<std::int64_t> feed;
  std::string prompt;
  std::string raw_response;
  ActionEnvelope envelope;
  std::vector<ActionResult> results;
  bool backend_failed = false;
};

// The read-only half of a turn: feed sampled from the current cache plus the
// assembled prompt. Safe to batch across agents before any commit.
struct PendingStep {
  std::vector<std::int64_t> feed;
  std::string prompt;
};

PendingStep prepare_step(const AgentState& agent, const Store& store,
                         Recommender* rec, Rng& rng, const ActionSet& subset);

// The write half: parse the backend reply (or degrade to a traced do_nothing
// when backend_failed), execute, and remember. backend_error feeds the
// degraded reason text.
StepOutcome commit_step(AgentState& agent, Store& store, SimClock& clock,
                        Recommender* rec, Rng& rng, const ActionSet& subset,
                        PendingStep pending, std::string raw_response,
                        bool backend_failed, const std::string& backend_error);

// One activated-agent turn: sample feed, assemble prompt, decide, execute,
// remember. A backend failure degrades to a traced do_nothing.
StepOutcome step_agent(AgentState& agent, Store& store, SimClock& clock,
                       Recommender* rec, Rng& rng, DecisionBackend& backend,
                       const ActionSet& subset);

// Questionnaire outside the timeline; never touches the store.
std::string survey_prompt(const AgentState& agent, const std::string& question);

struct SurveyAnswer {
  std::int64_t agent_id = 0;
  int step = 0;
  std::string answer;
  bool failed = false;
};

SurveyAnswer survey_agent(const AgentState& agent, DecisionBackend& backend,
                          int step, const std::string& question);

// One export row: {"agent_id":..,"step":..,"answer":..}, plus "failed" only
// when the backend gave nothing.
std::string survey_jsonl_line(const SurveyAnswer& answer);

}  // namespace socsim
