#include "actions/kinds.hpp"

namespace socsim {
namespace {

constexpr const char* kNames[kActionKindCount] = {
    "sign_up",        "refresh",        "trend",
    "search_posts",   "search_user",    "create_post",
    "repost",         "follow",         "unfollow",
    "mute",           "unmute",         "like_post",
    "unlike_post",    "dislike_post",   "undo_dislike_post",
    "create_comment", "like_comment",   "unlike_comment",
    "dislike_comment", "undo_dislike_comment", "do_nothing",
};

constexpr ArgSpec kSignUpArgs[] = {{"user_name", ArgType::text},
                                   {"name", ArgType::text},
                                   {"bio", ArgType::text}};
constexpr ArgSpec kQueryArgs[] = {{"query", ArgType::text}};
constexpr ArgSpec kContentArgs[] = {{"content", ArgType::text}};
constexpr ArgSpec kPostIdArgs[] = {{"post_id", ArgType::int64}};
constexpr ArgSpec kFolloweeArgs[] = {{"followee_id", ArgType::int64}};
constexpr ArgSpec kMuteeArgs[] = {{"mutee_id", ArgType::int64}};
constexpr ArgSpec kCommentArgs[] = {{"post_id", ArgType::int64},
                                    {"content", ArgType::text}};
constexpr ArgSpec kCommentIdArgs[] = {{"comment_id", ArgType::int64}};

}  // namespace

const char* action_name(ActionKind k) { return kNames[static_cast<int>(k)]; }

std::optional<ActionKind> action_from_name(std::string_view name) {
  for (int i = 0; i < kActionKindCount; ++i) {
    if (name == kNames[i]) return static_cast<ActionKind>(i);
  }
  return std::nullopt;
}

std::span<const ArgSpec> action_args(ActionKind k) {
  switch (k) {
    case ActionKind::sign_up:
      return kSignUpArgs;
    case ActionKind::search_posts:
    case ActionKind::search_user:
      return kQueryArgs;
    case ActionKind::create_post:
      return kContentArgs;
    case ActionKind::repost:
    case ActionKind::like_post:
    case ActionKind::unlike_post:
    case ActionKind::dislike_post:
    case ActionKind::undo_dislike_post:
      return kPostIdArgs;
    case ActionKind::follow:
    case ActionKind::unfollow:
      return kFolloweeArgs;
    case ActionKind::mute:
    case ActionKind::unmute:
      return kMuteeArgs;
    case ActionKind::create_comment:
      return kCommentArgs;
    case ActionKind::like_comment:
    case ActionKind::unlike_comment:
    case ActionKind::dislike_comment:
    case ActionKind::undo_dislike_comment:
      return kCommentIdArgs;
    case ActionKind::refresh:
    case ActionKind::trend:
    case ActionKind::do_nothing:
      return {};
  }
  return {};
}

const ActionSet& action_set_all() {
  static const ActionSet s = [] {
    ActionSet a;
    for (int i = 0; i < kActionKindCount; ++i) a.add(static_cast<ActionKind>(i));
    return a;
  }();
  return s;
}

const ActionSet& action_set_info_spread() {
  static const ActionSet s{ActionKind::like_post, ActionKind::repost,
                           ActionKind::follow, ActionKind::do_nothing};
  return s;
}

const ActionSet& action_set_polarization() {
  static const ActionSet s{
      ActionKind::do_nothing,     ActionKind::repost,
      ActionKind::like_post,      ActionKind::dislike_post,
      ActionKind::follow,         ActionKind::create_comment,
      ActionKind::like_comment,   ActionKind::dislike_comment};
  return s;
}

const ActionSet& action_set_herd() {
  static const ActionSet s{
      ActionKind::create_comment, ActionKind::like_comment,
      ActionKind::dislike_comment, ActionKind::like_post,
      ActionKind::dislike_post,   ActionKind::search_user,
      ActionKind::trend,          ActionKind::refresh,
      ActionKind::do_nothing};
  return s;
}

const ActionSet& action_set_herd_human() {
  static const ActionSet s{
      ActionKind::like_comment,   ActionKind::dislike_comment,
      ActionKind::like_post,      ActionKind::dislike_post,
      ActionKind::search_posts,   ActionKind::search_user,
      ActionKind::trend,          ActionKind::refresh,
      ActionKind::do_nothing};
  return s;
}

const ActionSet& action_set_misinfo() {
  static const ActionSet s{
      ActionKind::create_post,    ActionKind::repost,
      ActionKind::like_post,      ActionKind::dislike_post,
      ActionKind::follow,         ActionKind::create_comment,
      ActionKind::like_comment,   ActionKind::dislike_comment,
      ActionKind::do_nothing};
  return s;
}

std::optional<ActionSet> action_set_by_name(std::string_view name) {
  if (name == "full") return action_set_all();
  if (name == "info_spread") return action_set_info_spread();
  if (name == "polarization") return action_set_polarization();
  if (name == "herd") return action_set_herd();
  if (name == "herd_human") return action_set_herd_human();
  if (name == "misinfo") return action_set_misinfo();
  return std::nullopt;
}

}  // namespace socsim
