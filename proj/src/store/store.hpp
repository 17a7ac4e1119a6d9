#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "store/types.hpp"

namespace socsim {

struct StoreConfig {
  enum class Backing { in_memory, file_backed };
  Backing backing = Backing::in_memory;
  std::string path;  // snapshot directory, file-backed only
  std::uint64_t seed = 0;
};

// Stamp for a mutation: simulated seconds plus intra-step sequence, used only
// for trace ordering documentation; rows store the seconds value.
struct Now {
  std::int64_t at = 0;
};

struct EdgeTable {
  std::vector<EdgeRow> rows;
  std::unordered_map<std::uint64_t, std::size_t> by_pair;  // live rows only
  std::int64_t next_id = 1;
  std::size_t live = 0;
};

// All simulation state. Not internally synchronized: the engine guarantees a
// single mutating thread, with reads and writes in separate phases.
class Store {
 public:
  static std::unique_ptr<Store> open(const StoreConfig& cfg, std::string* error);
  ~Store();

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  // Flushes the snapshot in file-backed mode. Safe to call more than once.
  bool close(std::string* error = nullptr);

  // --- mutations (each appends exactly one trace row, ok or rejected) ---

  OpResult register_user(std::int64_t agent_id, const std::string& user_name,
                         const std::string& name, const std::string& bio, Now now);
  OpResult insert_post(std::int64_t user_id, const std::string& content, Now now);
  OpResult insert_repost(std::int64_t user_id, std::int64_t post_id, Now now);
  OpResult insert_comment(std::int64_t user_id, std::int64_t post_id,
                          const std::string& content, Now now);
  OpResult upsert_edge(EdgeKind kind, std::int64_t source, std::int64_t target, Now now);
  OpResult remove_edge(EdgeKind kind, std::int64_t source, std::int64_t target, Now now);

  // Trace rows for calls that do not themselves mutate tables (refresh,
  // searches, do_nothing, validation rejections).
  void append_trace(std::int64_t user_id, Now now, const std::string& action,
                    nlohmann::json info);

  // --- reads ---

  const std::vector<UserRow>& users() const { return users_; }
  const std::vector<PostRow>& posts() const { return posts_; }
  const std::vector<CommentRow>& comments() const { return comments_; }
  const std::vector<TraceRow>& trace() const { return trace_; }
  const EdgeTable& edges(EdgeKind kind) const {
    return edges_[static_cast<int>(kind)];
  }

  bool has_user(std::int64_t id) const {
    return id >= 1 && id <= static_cast<std::int64_t>(users_.size());
  }
  bool has_post(std::int64_t id) const {
    return id >= 1 && id <= static_cast<std::int64_t>(posts_.size());
  }
  bool has_comment(std::int64_t id) const {
    return id >= 1 && id <= static_cast<std::int64_t>(comments_.size());
  }
  // Borrowed references, valid until the next mutation.
  const UserRow& user(std::int64_t id) const { return users_[id - 1]; }
  const PostRow& post(std::int64_t id) const { return posts_[id - 1]; }
  const CommentRow& comment(std::int64_t id) const { return comments_[id - 1]; }

  std::int64_t user_id_by_name(const std::string& user_name) const;
  bool has_edge(EdgeKind kind, std::int64_t source, std::int64_t target) const;

  const std::vector<std::int64_t>& posts_by_author(std::int64_t user_id) const;
  const std::vector<std::int64_t>& comments_of_post(std::int64_t post_id) const;
  const std::vector<std::int64_t>& followees_of(std::int64_t user_id) const;
  const std::vector<std::int64_t>& muted_by(std::int64_t user_id) const;

  // Index of the first post with created_at >= since (posts are stamped in
  // non-decreasing order).
  std::size_t first_post_since(std::int64_t since) const;

  // Root of the repost cascade containing post_id (itself when original).
  std::int64_t cascade_root(std::int64_t post_id) const;

  // --- rec cache ---

  // Global cache: one ranked list shared by every user (materialized per user
  // only on export). Per-user mode replaces individual rows.
  void set_rec_global(std::vector<std::int64_t> post_ids);
  void set_rec_user(std::int64_t user_id, std::vector<std::int64_t> post_ids);
  void clear_rec();
  bool rec_is_global() const { return rec_global_; }
  const std::vector<std::int64_t>& rec_for(std::int64_t user_id) const;
  // Rows exactly as exported: per user in id order, cache rank order inside.
  std::vector<RecRow> rec_rows() const;

  // --- generic view dispatch (read-only) ---
  // views: user_by_id, posts_by_author, feed_from_cache, followees_of,
  // trace_of, all_posts_since, comments_of_post.
  // Throws std::runtime_error on an unknown view or missing param.
  nlohmann::json query(const std::string& view, const nlohmann::json& params) const;

  const StoreConfig& config() const { return cfg_; }

 private:
  friend struct StoreIo;
  Store() = default;

  OpResult trace_result(std::int64_t user_id, Now now, const char* action,
                        nlohmann::json info, OpResult r);
  void rebuild_indexes();

  StoreConfig cfg_;
  bool closed_ = false;

  std::vector<UserRow> users_;
  std::vector<PostRow> posts_;
  std::vector<CommentRow> comments_;
  std::array<EdgeTable, kEdgeKindCount> edges_;
  std::vector<TraceRow> trace_;

  std::unordered_map<std::string, std::int64_t> user_by_name_;
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> posts_by_author_;
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> comments_by_post_;
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> follow_out_;
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> mute_out_;

  // Repost bookkeeping: cascade root per repost, and one entry per user
  // already present in a cascade (authors of originals included).
  std::unordered_map<std::int64_t, std::int64_t> root_of_;
  std::unordered_set<std::uint64_t> cascade_users_;

  bool rec_global_ = false;
  std::vector<std::int64_t> rec_global_posts_;
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> rec_user_posts_;
};

}  // namespace socsim
