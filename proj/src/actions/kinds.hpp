#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>

namespace socsim {

// The full interaction protocol: exactly these 21 calls exist on the wire.
// Some prompt sentences use short spellings (like, unlike, dislike,
// undo_dislike, search_users); those are flavor text, not wire names, and a
// call using one is flagged unknown.
enum class ActionKind {
  sign_up = 0,
  refresh,
  trend,
  search_posts,
  search_user,
  create_post,
  repost,
  follow,
  unfollow,
  mute,
  unmute,
  like_post,
  unlike_post,
  dislike_post,
  undo_dislike_post,
  create_comment,
  like_comment,
  unlike_comment,
  dislike_comment,
  undo_dislike_comment,
  do_nothing,
};
inline constexpr int kActionKindCount = 21;

const char* action_name(ActionKind k);
// Exact wire names only; anything else is an unknown action.
std::optional<ActionKind> action_from_name(std::string_view name);

enum class ArgType { int64, text };

struct ArgSpec {
  const char* name;
  ArgType type;
};

// Declared arguments in prompt order. Extra keys are ignored at validation;
// missing or mistyped ones reject the call.
std::span<const ArgSpec> action_args(ActionKind k);

// Membership mask over the 21 kinds.
class ActionSet {
 public:
  ActionSet() = default;
  ActionSet(std::initializer_list<ActionKind> kinds) {
    for (ActionKind k : kinds) add(k);
  }

  void add(ActionKind k) { mask_[static_cast<int>(k)] = true; }
  bool contains(ActionKind k) const { return mask_[static_cast<int>(k)]; }

  std::size_t size() const {
    std::size_t n = 0;
    for (bool b : mask_) n += b ? 1 : 0;
    return n;
  }
  bool empty() const { return size() == 0; }

 private:
  std::array<bool, kActionKindCount> mask_{};
};

// Scenario menus. The names describe the experiment family each one drives.
const ActionSet& action_set_all();
const ActionSet& action_set_info_spread();
const ActionSet& action_set_polarization();
// Herd scenario where agents write their own comments.
const ActionSet& action_set_herd();
// Herd scenario replaying human comments; agents only react to them.
const ActionSet& action_set_herd_human();
const ActionSet& action_set_misinfo();

// full | info_spread | polarization | herd | herd_human | misinfo.
std::optional<ActionSet> action_set_by_name(std::string_view name);

}  // namespace socsim
