#pragma once

#include <cstdint>
#include <string>

namespace socsim {

// Row shapes mirror the exported table layouts; counters are denormalized
// and kept equal to the edge tables at all times.

struct UserRow {
  std::int64_t user_id = 0;
  std::int64_t agent_id = 0;
  std::string user_name;
  std::string name;
  std::string bio;
  std::int64_t created_at = 0;
  std::int64_t num_followings = 0;
  std::int64_t num_followers = 0;
};

struct PostRow {
  std::int64_t post_id = 0;
  std::int64_t user_id = 0;
  std::string content;
  std::int64_t created_at = 0;
  std::int64_t num_likes = 0;
  std::int64_t num_dislikes = 0;
};

struct CommentRow {
  std::int64_t comment_id = 0;
  std::int64_t post_id = 0;
  std::int64_t user_id = 0;
  std::string content;
  std::int64_t created_at = 0;
  std::int64_t num_likes = 0;
  std::int64_t num_dislikes = 0;
};

struct EdgeRow {
  std::int64_t edge_id = 0;
  std::int64_t source_id = 0;
  std::int64_t target_id = 0;
  std::int64_t created_at = 0;
  bool dead = false;  // removed edges stay in place so ids never shift
};

struct TraceRow {
  std::int64_t user_id = 0;
  std::int64_t created_at = 0;
  std::string action;
  std::string info;  // JSON argument map, plus "error" on rejected attempts
};

struct RecRow {
  std::int64_t user_id = 0;
  std::int64_t post_id = 0;
};

enum class EdgeKind {
  like_post = 0,
  dislike_post,
  comment_like,
  comment_dislike,
  follow,
  mute,
};
inline constexpr int kEdgeKindCount = 6;

enum class StoreError {
  ok = 0,
  duplicate_user_name,
  absent_target,
  self_edge,
  duplicate_edge,
  absent_edge,
  already_reposted,
  usage_error,
  io_error,
};

const char* store_error_tag(StoreError e);

// Result of one mutation attempt. id is the created row id when meaningful.
struct OpResult {
  StoreError err = StoreError::ok;
  std::int64_t id = 0;
  bool ok() const { return err == StoreError::ok; }
};

}  // namespace socsim
