#include "actions/menu.hpp"

#include <stdexcept>

namespace socsim {
namespace {

constexpr std::string_view kObjective =
    R"__(# OBJECTIVE
You're a Twitter/Reddit user, and I'll present you with some posts. After you see the posts, choose some actions from the following functions.)__";

constexpr std::string_view kSelfDescriptionHeader =
    R"__(# SELF-DESCRIPTION
Your actions should be consistent with your self-description and personality.)__";

constexpr std::string_view kResponseFormat =
    R"__(# RESPONSE FORMAT
Your answer should follow the response format:

{
    "reason": "your feeling about these posts and users, then choose some functions based on the feeling. Reasons and explanations can only appear here.",
    "functions": [{
        "name": "Function name 1",
        "arguments": {
            "argument_1": "Function argument",
            "argument_2": "Function argument"
        }
    }, {
        "name": "Function name 2",
        "arguments": {
            "argument_1": "Function argument",
            "argument_2": "Function argument"
        }
    }]   })
}

Ensure that your output can be directly converted into **JSON format**, and avoid outputting anything unnecessary! Don't forget the key `name`.)__";

struct MenuEntry {
  ActionKind kind;
  std::string_view text;
};

// Listing order and wording are part of the protocol surface; agents tuned
// against this phrasing parse argument names out of it.
constexpr MenuEntry kMenu[] = {
    {ActionKind::sign_up,
     R"__(- sign_up: Signs up a new user with the provided username, name, and bio.
    - Arguments:
        "user_name" (str): The username for the new user.
        "name" (str): The full name of the new user.
        "bio" (str): A brief biography of the new user.)__"},
    {ActionKind::create_post,
     R"__(- create_post: Create a new post with the given content.
    - Arguments: "content" (str): The content of the post to be created.)__"},
    {ActionKind::repost,
     R"__(- repost: Repost a post.
    - Arguments: "post_id" (integer) - The ID of the post to be reposted. You can `repost` when you want to spread it.)__"},
    {ActionKind::like_post,
     R"__(- like_post: Likes a specified post.
    - Arguments: "post_id" (integer) - The ID of the post to be liked. You can `like` when you feel something interesting or you agree with.)__"},
    {ActionKind::unlike_post,
     R"__(- unlike_post: Removes a previous like from a post.
    - Arguments: "post_id" (int): The ID of the post from which to remove the like. You can `unlike` when you reconsider your stance or if the like was made unintentionally.)__"},
    {ActionKind::dislike_post,
     R"__(- dislike_post: Dislikes a specified post.
    - Arguments: "post_id" (integer) - The ID of the post to be disliked. You can use `dislike` when you disagree with a post or find it uninteresting.)__"},
    {ActionKind::undo_dislike_post,
     R"__(- undo_dislike_post: Removes a previous dislike from a post.
    - Arguments: "post_id" (int): The ID of the post from which to remove the dislike. You can `undo_dislike` when you change your mind or if the dislike was made by mistake.)__"},
    {ActionKind::create_comment,
     R"__(- create_comment: Creates a comment on a specified post to engage in conversations or share your thoughts on a post.
    - Arguments:
        "post_id" (integer) - The ID of the post to comment on.
        "content" (str) - The content of the comment.)__"},
    {ActionKind::like_comment,
     R"__(- like_comment: Likes a specified comment.
    - Arguments: "comment_id" (integer) - The ID of the comment to be liked. Use `like_comment` to show agreement or appreciation for a comment.)__"},
    {ActionKind::unlike_comment,
     R"__(- unlike_comment: Removes a previous like from a comment.
    - Arguments: "comment_id" (integer) - The ID of the comment from which to remove the like. Use `unlike_comment` when you change your opinion about the comment or if the like was made by accident.)__"},
    {ActionKind::dislike_comment,
     R"__(- dislike_comment: Dislikes a specified comment.
    - Arguments: "comment_id" (integer) - The ID of the comment to be disliked. Use `dislike_comment` when you disagree with a comment or find it unhelpful.)__"},
    {ActionKind::undo_dislike_comment,
     R"__(- undo_dislike_comment: Removes a previous dislike from a comment.
    - Arguments: "comment_id" (integer) - The ID of the comment from which to remove the dislike. Use `undo_dislike_comment` when you reconsider your initial reaction or if the dislike was made unintentionally.)__"},
    {ActionKind::follow,
     R"__(- follow: Follow a user specified by 'followee_id'. You can `follow' when you respect someone, love someone, or care about someone.
    - Arguments: "followee_id" (integer) - The ID of the user to be followed.)__"},
    {ActionKind::unfollow,
     R"__(- unfollow: Stops following a user.
    - Arguments:
        "followee_id" (int): The user ID of the user to stop following.)__"},
    {ActionKind::mute,
     R"__(- mute: Mute a user specified by 'mutee_id'. You can `mute' when you hate someone, dislike someone, or disagree with someone.
    - Arguments: "mutee_id" (integer) - The ID of the user to be muted.)__"},
    {ActionKind::unmute,
     R"__(- unmute: Unmute a user specified by 'mutee_id'. You can unmute when you decide to stop ignoring their content or wish to see their messages and posts again.
    - Arguments: "mutee_id" (integer) - The ID of the user to be unmuted.)__"},
    {ActionKind::search_posts,
     R"__(- search_posts: Searches for posts based on specified criteria.
    - Arguments: "query" (str) - The search query to find relevant posts. Use `search_posts` to explore posts related to specific topics or hashtags.)__"},
    {ActionKind::search_user,
     R"__(- search_user: Searches for a user based on specified criteria.
    - Arguments: "query" (str) - The search query to find relevant users. Use `search_user` to find profiles of interest or to explore their posts.)__"},
    {ActionKind::trend,
     R"__(- trend: Retrieves the current trending topics.
    - No arguments required. Use `trend` to stay updated with what's currently popular or being widely discussed on the platform.)__"},
    {ActionKind::refresh,
     R"__(- refresh: Refreshes the feed to get the latest posts.
    - No arguments required. Use `refresh` to update your feed with the most recent posts )__"},
    {ActionKind::do_nothing,
     R"__(- do_nothing: Most of the time, you just don't feel like reposting or liking a post, and you just want to look at it. In such cases, choose this action "do_nothing")__"},
};

}  // namespace

std::string_view menu_objective() { return kObjective; }
std::string_view menu_self_description_header() { return kSelfDescriptionHeader; }
std::string_view menu_response_format() { return kResponseFormat; }

std::string menu_actions_text(const ActionSet& subset) {
  if (subset.empty()) {
    throw std::invalid_argument("action menu needs a nonempty subset");
  }
  ActionSet offered = subset;
  offered.add(ActionKind::do_nothing);

  std::string out;
  bool first = true;
  for (const MenuEntry& entry : kMenu) {
    if (!offered.contains(entry.kind)) continue;
    if (!first) out += '\n';
    out += entry.text;
    first = false;
  }
  return out;
}

std::string render_action_menu(const ActionSet& subset, std::string_view persona) {
  std::string out;
  out += kObjective;
  out += "\n\n";
  out += menu_actions_text(subset);
  out += "\n\n";
  out += kSelfDescriptionHeader;
  out += "\n\n";
  out += persona;
  out += "\n\n";
  out += kResponseFormat;
  return out;
}

}  // namespace socsim
