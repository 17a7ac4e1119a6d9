#include "agent/backend.hpp"

#include <charconv>
#include <string_view>

#include "actions/envelope.hpp"
#include "actions/menu.hpp"
#include "util/hash.hpp"
#include "util/rng.hpp"

namespace socsim {
namespace {

struct ParsedComment {
  std::int64_t id = 0;
  std::int64_t likes = 0;
  std::int64_t dislikes = 0;
};

struct ParsedPost {
  std::int64_t id = 0;
  std::int64_t author = 0;
  std::int64_t likes = 0;
  std::int64_t dislikes = 0;
};

bool read_i64_after(std::string_view line, std::string_view prefix,
                    std::int64_t* out) {
  if (line.substr(0, prefix.size()) != prefix) return false;
  std::string_view rest = line.substr(prefix.size());
  std::size_t end = 0;
  while (end < rest.size() && (rest[end] == '-' || (rest[end] >= '0' && rest[end] <= '9'))) {
    ++end;
  }
  if (end == 0) return false;
  auto [p, ec] = std::from_chars(rest.data(), rest.data() + end, *out);
  return ec == std::errc();
}

// Reads the feed back out of the rendered prompt lines.
void parse_feed(std::string_view prompt, std::vector<ParsedPost>* posts,
                std::vector<ParsedComment>* comments) {
  std::size_t pos = 0;
  while (pos <= prompt.size()) {
    const std::size_t eol = prompt.find('\n', pos);
    const std::string_view line =
        prompt.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                         : eol - pos);
    std::int64_t v = 0;
    if (read_i64_after(line, "Post ID: ", &v)) {
      posts->push_back({v, 0, 0, 0});
    } else if (!posts->empty() && read_i64_after(line, "User ID: ", &v)) {
      posts->back().author = v;
    } else if (!posts->empty() && read_i64_after(line, "Likes: ", &v)) {
      posts->back().likes = v;
    } else if (!posts->empty() && read_i64_after(line, "Dislikes: ", &v)) {
      posts->back().dislikes = v;
    } else if (read_i64_after(line, "- Comment ID: ", &v)) {
      ParsedComment c;
      c.id = v;
      const std::size_t lp = line.find("| Likes: ");
      const std::size_t dp = line.find("| Dislikes: ");
      if (lp != std::string_view::npos) {
        read_i64_after(line.substr(lp), "| Likes: ", &c.likes);
      }
      if (dp != std::string_view::npos) {
        read_i64_after(line.substr(dp), "| Dislikes: ", &c.dislikes);
      }
      comments->push_back(c);
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
}

std::string_view extract_persona(std::string_view prompt) {
  const std::string_view header = menu_self_description_header();
  const std::size_t hp = prompt.find(header);
  if (hp == std::string_view::npos) return {};
  std::size_t start = hp + header.size();
  while (start < prompt.size() && prompt[start] == '\n') ++start;
  const std::size_t end = prompt.find("\n\n# ", start);
  if (end == std::string_view::npos) return prompt.substr(start);
  return prompt.substr(start, end - start);
}

bool cond_holds(PolicyRule::Cond cond, std::int64_t score) {
  switch (cond) {
    case PolicyRule::Cond::always: return true;
    case PolicyRule::Cond::score_pos: return score > 0;
    case PolicyRule::Cond::score_neg: return score < 0;
    case PolicyRule::Cond::score_zero: return score == 0;
  }
  return false;
}

bool post_rule(ActionKind a) {
  switch (a) {
    case ActionKind::like_post:
    case ActionKind::unlike_post:
    case ActionKind::dislike_post:
    case ActionKind::undo_dislike_post:
    case ActionKind::repost:
    case ActionKind::create_comment:
    case ActionKind::follow:
    case ActionKind::unfollow:
    case ActionKind::mute:
    case ActionKind::unmute:
      return true;
    default:
      return false;
  }
}

bool comment_rule(ActionKind a) {
  switch (a) {
    case ActionKind::like_comment:
    case ActionKind::unlike_comment:
    case ActionKind::dislike_comment:
    case ActionKind::undo_dislike_comment:
      return true;
    default:
      return false;
  }
}

}  // namespace

ScriptedBackend::ScriptedBackend(ScriptedPolicy policy, std::uint64_t seed)
    : policy_(std::move(policy)), seed_(seed) {}

std::string ScriptedBackend::identity() const { return "scripted"; }

std::string ScriptedBackend::decide(const std::string& prompt) {
  if (prompt.find("\n# QUESTION\n") != std::string::npos) {
    return policy_.survey_answer;
  }

  std::vector<ParsedPost> posts;
  std::vector<ParsedComment> comments;
  parse_feed(prompt, &posts, &comments);
  const std::string_view persona = extract_persona(prompt);

  // Fresh coins come from the (prompt, seed) stream; sticky coins re-derive
  // from (persona, target, rule, seed) so the same agent keeps the same mind
  // about the same target across steps.
  Rng fresh(mix_seed(seed_, fnv1a64(prompt)));
  auto coin = [&](const PolicyRule& rule, std::size_t rule_idx,
                  std::int64_t target) {
    if (rule.coin == PolicyRule::Coin::fresh) return fresh.next_u01();
    std::uint64_t h = fnv1a64(persona);
    h = fnv1a64_mix(h, static_cast<std::uint64_t>(target));
    h = fnv1a64_mix(h, static_cast<std::uint64_t>(rule_idx));
    h = fnv1a64_mix(h, seed_);
    return static_cast<double>(mix64(h) >> 11) * 0x1.0p-53;
  };

  ActionEnvelope env;
  auto add_call = [&](ActionKind kind, nlohmann::json args) {
    ActionCall call;
    call.name = action_name(kind);
    call.kind = kind;
    call.arguments = std::move(args);
    env.calls.push_back(std::move(call));
  };

  for (std::size_t ri = 0; ri < policy_.rules.size(); ++ri) {
    const PolicyRule& rule = policy_.rules[ri];
    if (post_rule(rule.action)) {
      for (const ParsedPost& p : posts) {
        if (!cond_holds(rule.cond, p.likes - p.dislikes)) continue;
        if (coin(rule, ri, p.id) >= rule.prob) continue;
        switch (rule.action) {
          case ActionKind::create_comment:
            add_call(rule.action,
                     {{"post_id", p.id}, {"content", policy_.comment_text}});
            break;
          case ActionKind::follow:
          case ActionKind::unfollow:
            add_call(rule.action, {{"followee_id", p.author}});
            break;
          case ActionKind::mute:
          case ActionKind::unmute:
            add_call(rule.action, {{"mutee_id", p.author}});
            break;
          default:
            add_call(rule.action, {{"post_id", p.id}});
        }
      }
    } else if (comment_rule(rule.action)) {
      for (const ParsedComment& c : comments) {
        if (!cond_holds(rule.cond, c.likes - c.dislikes)) continue;
        if (coin(rule, ri, c.id) >= rule.prob) continue;
        add_call(rule.action, {{"comment_id", c.id}});
      }
    } else {
      // Global rules have no score target; they only support plain chance.
      if (rule.cond != PolicyRule::Cond::always) continue;
      if (coin(rule, ri, 0) >= rule.prob) continue;
      switch (rule.action) {
        case ActionKind::create_post:
          add_call(rule.action, {{"content", policy_.post_text}});
          break;
        case ActionKind::search_posts:
        case ActionKind::search_user:
          add_call(rule.action, {{"query", policy_.search_query}});
          break;
        case ActionKind::sign_up:
          break;  // registration is not a scripted behavior
        default:
          add_call(rule.action, nlohmann::json::object());
      }
    }
  }

  if (env.calls.empty()) {
    add_call(ActionKind::do_nothing, nlohmann::json::object());
  }
  env.reason = "rule decision with " + std::to_string(env.calls.size()) +
               " call(s)";
  return envelope_to_json(env);
}

}  // namespace socsim
