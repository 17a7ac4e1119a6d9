#include "agent/agent.hpp"

#include <algorithm>
#include <utility>

#include "actions/menu.hpp"
#include "util/text.hpp"

namespace socsim {
namespace {

// Newlines fold to spaces so every rendered content stays on its own line.
std::string flatten(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
  }
  return out;
}

std::string render_value(const nlohmann::json& v) {
  return truncate(v.dump(), 48);
}

std::string render_call(const ActionCall& call, bool ok) {
  std::string out = call.name.empty() ? "?" : call.name;
  out += '(';
  if (call.arguments.is_object()) {
    bool first = true;
    for (const auto& [key, value] : call.arguments.items()) {
      if (!first) out += ", ";
      first = false;
      out += key;
      out += '=';
      out += render_value(value);
    }
  } else if (!call.arguments.is_null()) {
    out += render_value(call.arguments);
  }
  out += ')';
  if (!ok) out += " [rejected]";
  return out;
}

}  // namespace

AgentState::AgentState(std::int64_t agent_id, std::int64_t user_id,
                       std::string persona, ActivityProfile activity,
                       AgentRuntimeConfig cfg)
    : agent_id_(agent_id),
      user_id_(user_id),
      persona_(std::move(persona)),
      activity_(activity),
      cfg_(cfg) {}

void AgentState::remember(MemoryEntry entry) {
  memory_.push_back(std::move(entry));
  while (memory_.size() > cfg_.memory_bound) memory_.pop_front();
}

std::string AgentState::memory_digest(std::size_t last_n) const {
  if (memory_.empty() || last_n == 0) return {};
  const std::size_t n = std::min(last_n, memory_.size());
  std::string out;
  for (std::size_t i = memory_.size() - n; i < memory_.size(); ++i) {
    const MemoryEntry& e = memory_[i];
    if (!out.empty()) out += '\n';
    out += "[step " + std::to_string(e.step) + "] actions: ";
    if (e.actions.empty()) {
      out += "none";
    } else {
      for (std::size_t j = 0; j < e.actions.size(); ++j) {
        if (j) out += ", ";
        out += e.actions[j];
      }
    }
    out += " | reason: ";
    out += truncate(flatten(e.reason), kReasonDigestLimit);
  }
  return out;
}

std::string render_feed(const Store& store,
                        std::span<const std::int64_t> post_ids) {
  std::string out = "# POSTS";
  bool any = false;
  for (std::int64_t pid : post_ids) {
    if (!store.has_post(pid)) continue;
    const PostRow& post = store.post(pid);
    any = true;
    out += "\nPost ID: " + std::to_string(post.post_id);
    out += "\nUser ID: " + std::to_string(post.user_id);
    out += "\nContent: " + truncate(flatten(post.content), kPostContentLimit);
    out += "\nLikes: " + std::to_string(post.num_likes);
    out += "\nDislikes: " + std::to_string(post.num_dislikes);
    const std::vector<std::int64_t>& cids = store.comments_of_post(pid);
    if (!cids.empty()) {
      out += "\nComments:";
      const std::size_t shown = std::min(cids.size(), kMaxCommentsShown);
      for (std::size_t i = 0; i < shown; ++i) {
        const CommentRow& c = store.comment(cids[i]);
        out += "\n- Comment ID: " + std::to_string(c.comment_id);
        out += " | Likes: " + std::to_string(c.num_likes);
        out += " | Dislikes: " + std::to_string(c.num_dislikes);
        out += " | Content: " + truncate(flatten(c.content), kCommentContentLimit);
      }
    }
    out += '\n';
  }
  if (!any) return out + "\nNo posts to show.";
  out.pop_back();  // trailing newline from the last block
  return out;
}

std::string assemble_prompt(const AgentState& agent, const Store& store,
                            std::span<const std::int64_t> feed,
                            const ActionSet& subset) {
  std::string out;
  out += menu_objective();
  out += "\n\n";
  out += menu_actions_text(subset);
  out += "\n\n";
  out += menu_self_description_header();
  out += "\n\n";
  out += agent.persona();
  out += "\n\n";
  out += render_feed(store, feed);
  out += "\n\n";
  out += menu_response_format();
  const std::string digest =
      agent.memory_digest(agent.config().memory_prompt_entries);
  if (!digest.empty()) {
    out += "\n\n# MEMORY\n";
    out += digest;
  }
  return out;
}

PendingStep prepare_step(const AgentState& agent, const Store& store,
                         Recommender* rec, Rng& rng, const ActionSet& subset) {
  PendingStep out;
  if (rec != nullptr) {
    out.feed = rec->sample_feed(store, agent.user_id(), rng);
  } else {
    const std::vector<std::int64_t>& cache = store.rec_for(agent.user_id());
    out.feed.assign(cache.begin(),
                    cache.begin() +
                        std::min(cache.size(), kRefreshFallbackCount));
  }
  out.prompt = assemble_prompt(agent, store, out.feed, subset);
  return out;
}

StepOutcome commit_step(AgentState& agent, Store& store, SimClock& clock,
                        Recommender* rec, Rng& rng, const ActionSet& subset,
                        PendingStep pending, std::string raw_response,
                        bool backend_failed, const std::string& backend_error) {
  StepOutcome out;
  out.feed = std::move(pending.feed);
  out.prompt = std::move(pending.prompt);
  out.raw_response = std::move(raw_response);

  if (backend_failed) {
    // Degraded turn: the agent sits this step out, and the memory entry keeps
    // the error text so the failure stays visible downstream.
    out.backend_failed = true;
    ActionCall call;
    call.name = action_name(ActionKind::do_nothing);
    call.kind = ActionKind::do_nothing;
    call.arguments = nlohmann::json::object();
    out.envelope.reason = "backend failure: " + backend_error;
    out.envelope.calls.push_back(std::move(call));
  } else {
    out.envelope = parse_action_envelope(out.raw_response);
  }

  ExecOptions opts;
  opts.subset = &subset;
  opts.recommender = rec;
  opts.rng = &rng;
  out.results = execute_envelope(store, clock, agent.user_id(), out.envelope, opts);

  MemoryEntry entry;
  entry.step = clock.step();
  entry.feed_digest = render_feed(store, out.feed);
  entry.actions.reserve(out.envelope.calls.size());
  for (std::size_t i = 0; i < out.envelope.calls.size(); ++i) {
    entry.actions.push_back(render_call(out.envelope.calls[i], out.results[i].ok));
  }
  entry.reason = out.envelope.reason;
  agent.remember(std::move(entry));
  return out;
}

StepOutcome step_agent(AgentState& agent, Store& store, SimClock& clock,
                       Recommender* rec, Rng& rng, DecisionBackend& backend,
                       const ActionSet& subset) {
  PendingStep pending = prepare_step(agent, store, rec, rng, subset);
  std::string raw;
  bool failed = false;
  std::string error;
  try {
    raw = backend.decide(pending.prompt);
  } catch (const std::exception& e) {
    failed = true;
    error = e.what();
  }
  return commit_step(agent, store, clock, rec, rng, subset, std::move(pending),
                     std::move(raw), failed, error);
}

std::string survey_prompt(const AgentState& agent, const std::string& question) {
  std::string out;
  out += menu_self_description_header();
  out += "\n\n";
  out += agent.persona();
  const std::string digest =
      agent.memory_digest(agent.config().memory_prompt_entries);
  if (!digest.empty()) {
    out += "\n\n# MEMORY\n";
    out += digest;
  }
  out += "\n\n# QUESTION\n";
  out += question;
  out += "\n\nAnswer in plain text only.";
  return out;
}

SurveyAnswer survey_agent(const AgentState& agent, DecisionBackend& backend,
                          int step, const std::string& question) {
  SurveyAnswer out;
  out.agent_id = agent.agent_id();
  out.step = step;
  try {
    out.answer = backend.decide(survey_prompt(agent, question));
  } catch (const std::exception&) {
    out.failed = true;
  }
  return out;
}

std::string survey_jsonl_line(const SurveyAnswer& answer) {
  nlohmann::ordered_json line;
  line["agent_id"] = answer.agent_id;
  line["step"] = answer.step;
  line["answer"] = answer.answer;
  if (answer.failed) line["failed"] = true;
  return line.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace socsim
