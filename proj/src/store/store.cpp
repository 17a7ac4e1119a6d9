#include "store/store.hpp"

#include <algorithm>
#include <cassert>
#include <filesystem>
#include <stdexcept>

#include "store/io.hpp"

namespace socsim {

namespace {

std::uint64_t pair_key(std::int64_t a, std::int64_t b) {
  assert(a >= 0 && a < (1LL << 32) && b >= 0 && b < (1LL << 32));
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

enum class TargetDomain { user, post, comment };

struct EdgeMeta {
  const char* add_action;
  const char* remove_action;
  const char* arg_key;
  TargetDomain domain;
  bool self_forbidden;
};

const EdgeMeta& edge_meta(EdgeKind kind) {
  static const EdgeMeta metas[kEdgeKindCount] = {
      {"like_post", "unlike_post", "post_id", TargetDomain::post, false},
      {"dislike_post", "undo_dislike_post", "post_id", TargetDomain::post, false},
      {"like_comment", "unlike_comment", "comment_id", TargetDomain::comment, false},
      {"dislike_comment", "undo_dislike_comment", "comment_id", TargetDomain::comment, false},
      {"follow", "unfollow", "followee_id", TargetDomain::user, true},
      {"mute", "unmute", "mutee_id", TargetDomain::user, true},
  };
  return metas[static_cast<int>(kind)];
}

const std::vector<std::int64_t> kEmptyIds;

}  // namespace

const char* store_error_tag(StoreError e) {
  switch (e) {
    case StoreError::ok: return "ok";
    case StoreError::duplicate_user_name: return "duplicate_user_name";
    case StoreError::absent_target: return "absent_target";
    case StoreError::self_edge: return "self_edge";
    case StoreError::duplicate_edge: return "duplicate_edge";
    case StoreError::absent_edge: return "absent_edge";
    case StoreError::already_reposted: return "already_reposted";
    case StoreError::usage_error: return "usage_error";
    case StoreError::io_error: return "io_error";
  }
  return "unknown";
}

std::unique_ptr<Store> Store::open(const StoreConfig& cfg, std::string* error) {
  auto store = std::unique_ptr<Store>(new Store());
  store->cfg_ = cfg;
  if (cfg.backing == StoreConfig::Backing::file_backed) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.path, ec);
    const fs::path probe = fs::path(cfg.path) / ".probe";
    {
      std::FILE* f = std::fopen(probe.string().c_str(), "wb");
      if (!f) {
        if (error) *error = "store path not writable: " + cfg.path;
        return nullptr;
      }
      std::fclose(f);
      fs::remove(probe, ec);
    }
    if (fs::exists(fs::path(cfg.path) / "meta.json")) {
      std::string err;
      if (!StoreIo::restore(*store, cfg.path, &err)) {
        if (error) *error = err;
        return nullptr;
      }
    }
  }
  return store;
}

Store::~Store() { close(nullptr); }

bool Store::close(std::string* error) {
  if (closed_) return true;
  closed_ = true;
  if (cfg_.backing == StoreConfig::Backing::file_backed)
    return StoreIo::snapshot(*this, cfg_.path, error);
  return true;
}

OpResult Store::trace_result(std::int64_t user_id, Now now, const char* action,
                             nlohmann::json info, OpResult r) {
  if (!r.ok()) info["error"] = store_error_tag(r.err);
  append_trace(user_id, now, action, std::move(info));
  return r;
}

void Store::append_trace(std::int64_t user_id, Now now, const std::string& action,
                         nlohmann::json info) {
  TraceRow row;
  row.user_id = user_id;
  row.created_at = now.at;
  row.action = action;
  row.info = info.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
  trace_.push_back(std::move(row));
}

OpResult Store::register_user(std::int64_t agent_id, const std::string& user_name,
                              const std::string& name, const std::string& bio,
                              Now now) {
  nlohmann::json info{{"agent_id", agent_id},
                      {"bio", bio},
                      {"name", name},
                      {"user_name", user_name}};
  if (user_by_name_.count(user_name))
    return trace_result(0, now, "sign_up", std::move(info),
                        {StoreError::duplicate_user_name, 0});
  UserRow row;
  row.user_id = static_cast<std::int64_t>(users_.size()) + 1;
  row.agent_id = agent_id;
  row.user_name = user_name;
  row.name = name;
  row.bio = bio;
  row.created_at = now.at;
  user_by_name_.emplace(user_name, row.user_id);
  info["user_id"] = row.user_id;
  const std::int64_t id = row.user_id;
  users_.push_back(std::move(row));
  return trace_result(id, now, "sign_up", std::move(info), {StoreError::ok, id});
}

OpResult Store::insert_post(std::int64_t user_id, const std::string& content, Now now) {
  nlohmann::json info{{"content", content}};
  if (!has_user(user_id))
    return trace_result(user_id, now, "create_post", std::move(info),
                        {StoreError::absent_target, 0});
  PostRow row;
  row.post_id = static_cast<std::int64_t>(posts_.size()) + 1;
  row.user_id = user_id;
  row.content = content;
  row.created_at = now.at;
  info["post_id"] = row.post_id;
  const std::int64_t id = row.post_id;
  posts_.push_back(std::move(row));
  posts_by_author_[user_id].push_back(id);
  // The author occupies this cascade's root node.
  cascade_users_.insert(pair_key(user_id, id));
  return trace_result(user_id, now, "create_post", std::move(info),
                      {StoreError::ok, id});
}

OpResult Store::insert_repost(std::int64_t user_id, std::int64_t post_id, Now now) {
  nlohmann::json info{{"post_id", post_id}};
  if (!has_user(user_id) || !has_post(post_id))
    return trace_result(user_id, now, "repost", std::move(info),
                        {StoreError::absent_target, 0});
  const std::int64_t root = cascade_root(post_id);
  if (cascade_users_.count(pair_key(user_id, root)))
    return trace_result(user_id, now, "repost", std::move(info),
                        {StoreError::already_reposted, 0});
  PostRow row;
  row.post_id = static_cast<std::int64_t>(posts_.size()) + 1;
  row.user_id = user_id;
  row.content = post(post_id).content;
  row.created_at = now.at;
  const std::int64_t id = row.post_id;
  info["original_post_id"] = post_id;
  info["new_post_id"] = id;
  posts_.push_back(std::move(row));
  posts_by_author_[user_id].push_back(id);
  root_of_[id] = root;
  cascade_users_.insert(pair_key(user_id, root));
  return trace_result(user_id, now, "repost", std::move(info), {StoreError::ok, id});
}

OpResult Store::insert_comment(std::int64_t user_id, std::int64_t post_id,
                               const std::string& content, Now now) {
  nlohmann::json info{{"content", content}, {"post_id", post_id}};
  if (!has_user(user_id) || !has_post(post_id))
    return trace_result(user_id, now, "create_comment", std::move(info),
                        {StoreError::absent_target, 0});
  CommentRow row;
  row.comment_id = static_cast<std::int64_t>(comments_.size()) + 1;
  row.post_id = post_id;
  row.user_id = user_id;
  row.content = content;
  row.created_at = now.at;
  info["comment_id"] = row.comment_id;
  const std::int64_t id = row.comment_id;
  comments_.push_back(std::move(row));
  comments_by_post_[post_id].push_back(id);
  return trace_result(user_id, now, "create_comment", std::move(info),
                      {StoreError::ok, id});
}

OpResult Store::upsert_edge(EdgeKind kind, std::int64_t source, std::int64_t target,
                            Now now) {
  const EdgeMeta& meta = edge_meta(kind);
  nlohmann::json info{{meta.arg_key, target}};
  auto reject = [&](StoreError e) {
    return trace_result(source, now, meta.add_action, info, {e, 0});
  };
  if (!has_user(source)) return reject(StoreError::absent_target);
  switch (meta.domain) {
    case TargetDomain::user:
      if (!has_user(target)) return reject(StoreError::absent_target);
      break;
    case TargetDomain::post:
      if (!has_post(target)) return reject(StoreError::absent_target);
      break;
    case TargetDomain::comment:
      if (!has_comment(target)) return reject(StoreError::absent_target);
      break;
  }
  if (meta.self_forbidden && source == target) return reject(StoreError::self_edge);

  EdgeTable& table = edges_[static_cast<int>(kind)];
  const std::uint64_t key = pair_key(source, target);
  if (table.by_pair.count(key)) return reject(StoreError::duplicate_edge);

  EdgeRow row;
  row.edge_id = table.next_id++;
  row.source_id = source;
  row.target_id = target;
  row.created_at = now.at;
  table.by_pair.emplace(key, table.rows.size());
  table.rows.push_back(row);
  ++table.live;

  switch (kind) {
    case EdgeKind::like_post: ++posts_[target - 1].num_likes; break;
    case EdgeKind::dislike_post: ++posts_[target - 1].num_dislikes; break;
    case EdgeKind::comment_like: ++comments_[target - 1].num_likes; break;
    case EdgeKind::comment_dislike: ++comments_[target - 1].num_dislikes; break;
    case EdgeKind::follow:
      ++users_[source - 1].num_followings;
      ++users_[target - 1].num_followers;
      follow_out_[source].push_back(target);
      break;
    case EdgeKind::mute:
      mute_out_[source].push_back(target);
      break;
  }
  return trace_result(source, now, meta.add_action, std::move(info),
                      {StoreError::ok, row.edge_id});
}

OpResult Store::remove_edge(EdgeKind kind, std::int64_t source, std::int64_t target,
                            Now now) {
  const EdgeMeta& meta = edge_meta(kind);
  nlohmann::json info{{meta.arg_key, target}};
  EdgeTable& table = edges_[static_cast<int>(kind)];
  const std::uint64_t key = pair_key(source, target);
  auto it = table.by_pair.find(key);
  if (it == table.by_pair.end())
    return trace_result(source, now, meta.remove_action, std::move(info),
                        {StoreError::absent_edge, 0});
  EdgeRow& row = table.rows[it->second];
  row.dead = true;
  const std::int64_t edge_id = row.edge_id;
  table.by_pair.erase(it);
  --table.live;

  auto drop_from = [](std::vector<std::int64_t>& v, std::int64_t x) {
    v.erase(std::find(v.begin(), v.end(), x));
  };
  switch (kind) {
    case EdgeKind::like_post: --posts_[target - 1].num_likes; break;
    case EdgeKind::dislike_post: --posts_[target - 1].num_dislikes; break;
    case EdgeKind::comment_like: --comments_[target - 1].num_likes; break;
    case EdgeKind::comment_dislike: --comments_[target - 1].num_dislikes; break;
    case EdgeKind::follow:
      --users_[source - 1].num_followings;
      --users_[target - 1].num_followers;
      drop_from(follow_out_[source], target);
      break;
    case EdgeKind::mute:
      drop_from(mute_out_[source], target);
      break;
  }
  return trace_result(source, now, meta.remove_action, std::move(info),
                      {StoreError::ok, edge_id});
}

std::int64_t Store::user_id_by_name(const std::string& user_name) const {
  auto it = user_by_name_.find(user_name);
  return it == user_by_name_.end() ? 0 : it->second;
}

bool Store::has_edge(EdgeKind kind, std::int64_t source, std::int64_t target) const {
  if (source < 0 || target < 0 || source >= (1LL << 32) || target >= (1LL << 32))
    return false;
  return edges_[static_cast<int>(kind)].by_pair.count(pair_key(source, target)) > 0;
}

const std::vector<std::int64_t>& Store::posts_by_author(std::int64_t user_id) const {
  auto it = posts_by_author_.find(user_id);
  return it == posts_by_author_.end() ? kEmptyIds : it->second;
}

const std::vector<std::int64_t>& Store::comments_of_post(std::int64_t post_id) const {
  auto it = comments_by_post_.find(post_id);
  return it == comments_by_post_.end() ? kEmptyIds : it->second;
}

const std::vector<std::int64_t>& Store::followees_of(std::int64_t user_id) const {
  auto it = follow_out_.find(user_id);
  return it == follow_out_.end() ? kEmptyIds : it->second;
}

const std::vector<std::int64_t>& Store::muted_by(std::int64_t user_id) const {
  auto it = mute_out_.find(user_id);
  return it == mute_out_.end() ? kEmptyIds : it->second;
}

std::size_t Store::first_post_since(std::int64_t since) const {
  auto it = std::lower_bound(posts_.begin(), posts_.end(), since,
                             [](const PostRow& p, std::int64_t s) {
                               return p.created_at < s;
                             });
  return static_cast<std::size_t>(it - posts_.begin());
}

std::int64_t Store::cascade_root(std::int64_t post_id) const {
  auto it = root_of_.find(post_id);
  return it == root_of_.end() ? post_id : it->second;
}

void Store::set_rec_global(std::vector<std::int64_t> post_ids) {
  rec_global_ = true;
  rec_global_posts_ = std::move(post_ids);
  rec_user_posts_.clear();
}

void Store::set_rec_user(std::int64_t user_id, std::vector<std::int64_t> post_ids) {
  rec_global_ = false;
  rec_global_posts_.clear();
  rec_user_posts_[user_id] = std::move(post_ids);
}

void Store::clear_rec() {
  rec_global_ = false;
  rec_global_posts_.clear();
  rec_user_posts_.clear();
}

const std::vector<std::int64_t>& Store::rec_for(std::int64_t user_id) const {
  if (rec_global_) return rec_global_posts_;
  auto it = rec_user_posts_.find(user_id);
  return it == rec_user_posts_.end() ? kEmptyIds : it->second;
}

std::vector<RecRow> Store::rec_rows() const {
  std::vector<RecRow> rows;
  for (const UserRow& u : users_) {
    const auto& ids = rec_for(u.user_id);
    for (std::int64_t p : ids) rows.push_back({u.user_id, p});
  }
  return rows;
}

nlohmann::json Store::query(const std::string& view,
                            const nlohmann::json& params) const {
  auto need = [&](const char* key) -> std::int64_t {
    if (!params.contains(key))
      throw std::runtime_error("query: missing param " + std::string(key));
    return params.at(key).get<std::int64_t>();
  };
  auto user_json = [&](const UserRow& u) {
    return nlohmann::json{{"user_id", u.user_id},   {"agent_id", u.agent_id},
                          {"user_name", u.user_name}, {"name", u.name},
                          {"bio", u.bio},           {"created_at", u.created_at},
                          {"num_followings", u.num_followings},
                          {"num_followers", u.num_followers}};
  };
  auto post_json = [&](const PostRow& p) {
    return nlohmann::json{{"post_id", p.post_id},   {"user_id", p.user_id},
                          {"content", p.content},   {"created_at", p.created_at},
                          {"num_likes", p.num_likes},
                          {"num_dislikes", p.num_dislikes}};
  };
  auto comment_json = [&](const CommentRow& c) {
    return nlohmann::json{{"comment_id", c.comment_id}, {"post_id", c.post_id},
                          {"user_id", c.user_id},       {"content", c.content},
                          {"created_at", c.created_at}, {"num_likes", c.num_likes},
                          {"num_dislikes", c.num_dislikes}};
  };

  if (view == "user_by_id") {
    const std::int64_t id = need("user_id");
    if (!has_user(id)) return nlohmann::json(nullptr);
    return user_json(user(id));
  }
  if (view == "posts_by_author") {
    nlohmann::json out = nlohmann::json::array();
    for (std::int64_t id : posts_by_author(need("user_id")))
      out.push_back(post_json(post(id)));
    return out;
  }
  if (view == "feed_from_cache") {
    nlohmann::json out = nlohmann::json::array();
    for (std::int64_t id : rec_for(need("user_id")))
      if (has_post(id)) out.push_back(post_json(post(id)));
    return out;
  }
  if (view == "followees_of") {
    nlohmann::json out = nlohmann::json::array();
    for (std::int64_t id : followees_of(need("user_id"))) out.push_back(id);
    return out;
  }
  if (view == "trace_of") {
    const std::int64_t id = need("user_id");
    nlohmann::json out = nlohmann::json::array();
    for (const TraceRow& t : trace_) {
      if (t.user_id != id) continue;
      out.push_back({{"user_id", t.user_id},
                     {"created_at", t.created_at},
                     {"action", t.action},
                     {"info", t.info}});
    }
    return out;
  }
  if (view == "all_posts_since") {
    const std::int64_t since = need("since");
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = first_post_since(since); i < posts_.size(); ++i)
      out.push_back(post_json(posts_[i]));
    return out;
  }
  if (view == "comments_of_post") {
    nlohmann::json out = nlohmann::json::array();
    for (std::int64_t id : comments_of_post(need("post_id")))
      out.push_back(comment_json(comment(id)));
    return out;
  }
  throw std::runtime_error("query: unknown view " + view);
}

void Store::rebuild_indexes() {
  user_by_name_.clear();
  posts_by_author_.clear();
  comments_by_post_.clear();
  follow_out_.clear();
  mute_out_.clear();
  root_of_.clear();
  cascade_users_.clear();

  for (const UserRow& u : users_) user_by_name_.emplace(u.user_name, u.user_id);
  for (const PostRow& p : posts_) posts_by_author_[p.user_id].push_back(p.post_id);
  for (const CommentRow& c : comments_)
    comments_by_post_[c.post_id].push_back(c.comment_id);

  for (int k = 0; k < kEdgeKindCount; ++k) {
    EdgeTable& table = edges_[k];
    table.by_pair.clear();
    table.live = 0;
    table.next_id = 1;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const EdgeRow& row = table.rows[i];
      table.next_id = std::max(table.next_id, row.edge_id + 1);
      if (row.dead) continue;
      table.by_pair.emplace(pair_key(row.source_id, row.target_id), i);
      ++table.live;
      if (static_cast<EdgeKind>(k) == EdgeKind::follow)
        follow_out_[row.source_id].push_back(row.target_id);
      else if (static_cast<EdgeKind>(k) == EdgeKind::mute)
        mute_out_[row.source_id].push_back(row.target_id);
    }
  }

  // Cascade state replays from the trace: ok reposts carry original/new ids.
  for (const TraceRow& t : trace_) {
    if (t.action != "repost") continue;
    nlohmann::json info = nlohmann::json::parse(t.info, nullptr, false);
    if (!info.is_object() || info.contains("error")) continue;
    if (!info.contains("original_post_id") || !info.contains("new_post_id")) continue;
    const std::int64_t parent = info["original_post_id"].get<std::int64_t>();
    const std::int64_t fresh = info["new_post_id"].get<std::int64_t>();
    auto it = root_of_.find(parent);
    const std::int64_t root = it == root_of_.end() ? parent : it->second;
    root_of_[fresh] = root;
  }
  // Every author is a member of the cascade their post belongs to.
  for (const PostRow& p : posts_) {
    auto it = root_of_.find(p.post_id);
    const std::int64_t root = it == root_of_.end() ? p.post_id : it->second;
    cascade_users_.insert(pair_key(p.user_id, root));
  }
}

}  // namespace socsim
