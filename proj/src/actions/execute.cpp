#include "actions/execute.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "recsys/scores.hpp"
#include "util/text.hpp"

namespace socsim {
namespace {

// Integer arguments accept JSON integers, integral doubles, and plain
// decimal strings; anything else rejects the call.
bool coerce_int(const nlohmann::json& v, std::int64_t& out) {
  if (v.is_number_unsigned()) {
    const std::uint64_t u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      return false;
    }
    out = static_cast<std::int64_t>(u);
    return true;
  }
  if (v.is_number_integer()) {
    out = v.get<std::int64_t>();
    return true;
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::nearbyint(d) != d || std::fabs(d) > 9007199254740992.0) return false;
    out = static_cast<std::int64_t>(d);
    return true;
  }
  if (v.is_string()) {
    const std::string& s = v.get_ref<const std::string&>();
    const char* first = s.data();
    const char* last = first + s.size();
    auto [p, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && p == last;
  }
  return false;
}

// Canonicalizes declared arguments into canon; extra keys are dropped.
bool read_args(const ActionCall& call, nlohmann::json& canon) {
  const std::span<const ArgSpec> specs = action_args(*call.kind);
  if (specs.empty()) return true;
  if (!call.arguments.is_object()) return false;
  for (const ArgSpec& spec : specs) {
    auto it = call.arguments.find(spec.name);
    if (it == call.arguments.end()) return false;
    if (spec.type == ArgType::int64) {
      std::int64_t v = 0;
      if (!coerce_int(*it, v)) return false;
      canon[spec.name] = v;
    } else {
      if (!it->is_string()) return false;
      canon[spec.name] = *it;
    }
  }
  return true;
}

ActionResult reject(Store& store, std::int64_t user_id, Now now,
                    const std::string& label, const nlohmann::json& raw_args,
                    const char* tag, int index) {
  nlohmann::json info = raw_args.is_object()
                            ? raw_args
                            : nlohmann::json{{"raw", raw_args}};
  info["error"] = tag;
  store.append_trace(user_id, now, label, std::move(info));
  return {index, false, tag};
}

std::string ids_json(const std::vector<std::int64_t>& ids) {
  return nlohmann::json(ids).dump();
}

ActionResult run_call(Store& store, Now now, std::int64_t user_id,
                      const ActionCall& call, int index, const ExecOptions& opts) {
  if (!call.kind) {
    return reject(store, user_id, now, call.name, call.arguments,
                  "unknown_action", index);
  }
  const ActionKind kind = *call.kind;
  const char* label = action_name(kind);
  if (opts.subset && kind != ActionKind::do_nothing &&
      !opts.subset->contains(kind)) {
    return reject(store, user_id, now, label, call.arguments, "not_in_subset",
                  index);
  }
  nlohmann::json canon = nlohmann::json::object();
  if (!read_args(call, canon)) {
    return reject(store, user_id, now, label, call.arguments, "bad_arguments",
                  index);
  }

  auto from_op = [&](OpResult r) {
    ActionResult out;
    out.index = index;
    out.ok = r.ok();
    out.detail = r.ok() ? std::to_string(r.id) : store_error_tag(r.err);
    return out;
  };
  auto arg_i64 = [&](const char* key) {
    return canon[key].get<std::int64_t>();
  };
  auto arg_text = [&](const char* key) -> const std::string& {
    return canon[key].get_ref<const std::string&>();
  };

  switch (kind) {
    case ActionKind::sign_up:
      // A run-time registration is not driven by any scripted agent slot.
      return from_op(store.register_user(0, arg_text("user_name"),
                                         arg_text("name"), arg_text("bio"), now));
    case ActionKind::create_post:
      return from_op(store.insert_post(user_id, arg_text("content"), now));
    case ActionKind::repost:
      return from_op(store.insert_repost(user_id, arg_i64("post_id"), now));
    case ActionKind::create_comment:
      return from_op(store.insert_comment(user_id, arg_i64("post_id"),
                                          arg_text("content"), now));
    case ActionKind::like_post:
      return from_op(store.upsert_edge(EdgeKind::like_post, user_id,
                                       arg_i64("post_id"), now));
    case ActionKind::unlike_post:
      return from_op(store.remove_edge(EdgeKind::like_post, user_id,
                                       arg_i64("post_id"), now));
    case ActionKind::dislike_post:
      return from_op(store.upsert_edge(EdgeKind::dislike_post, user_id,
                                       arg_i64("post_id"), now));
    case ActionKind::undo_dislike_post:
      return from_op(store.remove_edge(EdgeKind::dislike_post, user_id,
                                       arg_i64("post_id"), now));
    case ActionKind::like_comment:
      return from_op(store.upsert_edge(EdgeKind::comment_like, user_id,
                                       arg_i64("comment_id"), now));
    case ActionKind::unlike_comment:
      return from_op(store.remove_edge(EdgeKind::comment_like, user_id,
                                       arg_i64("comment_id"), now));
    case ActionKind::dislike_comment:
      return from_op(store.upsert_edge(EdgeKind::comment_dislike, user_id,
                                       arg_i64("comment_id"), now));
    case ActionKind::undo_dislike_comment:
      return from_op(store.remove_edge(EdgeKind::comment_dislike, user_id,
                                       arg_i64("comment_id"), now));
    case ActionKind::follow:
      return from_op(store.upsert_edge(EdgeKind::follow, user_id,
                                       arg_i64("followee_id"), now));
    case ActionKind::unfollow:
      return from_op(store.remove_edge(EdgeKind::follow, user_id,
                                       arg_i64("followee_id"), now));
    case ActionKind::mute:
      return from_op(store.upsert_edge(EdgeKind::mute, user_id,
                                       arg_i64("mutee_id"), now));
    case ActionKind::unmute:
      return from_op(store.remove_edge(EdgeKind::mute, user_id,
                                       arg_i64("mutee_id"), now));

    case ActionKind::refresh: {
      std::vector<std::int64_t> feed;
      if (opts.recommender && opts.rng) {
        feed = opts.recommender->sample_feed(store, user_id, *opts.rng);
      } else {
        const auto& cache = store.rec_for(user_id);
        std::size_t take = opts.recommender
                               ? opts.recommender->config().feed_sample_size
                               : kRefreshFallbackCount;
        take = std::min(take, cache.size());
        feed.assign(cache.begin(), cache.begin() + take);
      }
      store.append_trace(user_id, now, label, nlohmann::json::object());
      return {index, true, ids_json(feed)};
    }
    case ActionKind::trend: {
      std::vector<std::int64_t> ids = trend_posts(store, now.at);
      store.append_trace(user_id, now, label, nlohmann::json::object());
      return {index, true, ids_json(ids)};
    }
    case ActionKind::search_posts: {
      std::vector<std::int64_t> ids = search_post_ids(store, arg_text("query"));
      store.append_trace(user_id, now, label, std::move(canon));
      return {index, true, ids_json(ids)};
    }
    case ActionKind::search_user: {
      std::vector<std::int64_t> ids = search_user_ids(store, arg_text("query"));
      store.append_trace(user_id, now, label, std::move(canon));
      return {index, true, ids_json(ids)};
    }
    case ActionKind::do_nothing:
      store.append_trace(user_id, now, label, nlohmann::json::object());
      return {index, true, ""};
  }
  return {index, false, "unknown_action"};
}

}  // namespace

std::vector<ActionResult> execute_envelope(Store& store, SimClock& clock,
                                           std::int64_t user_id,
                                           const ActionEnvelope& env,
                                           const ExecOptions& opts) {
  if (!store.has_user(user_id)) {
    throw std::invalid_argument("execute_envelope: user is not registered");
  }
  std::vector<ActionResult> results;
  results.reserve(env.calls.size());
  for (std::size_t i = 0; i < env.calls.size(); ++i) {
    const Stamp st = clock.stamp();
    results.push_back(run_call(store, Now{st.at}, user_id, env.calls[i],
                               static_cast<int>(i), opts));
  }
  return results;
}

std::vector<std::int64_t> trend_posts(const Store& store,
                                      std::int64_t t_now_seconds) {
  const auto& posts = store.posts();
  const std::size_t from = store.first_post_since(t_now_seconds - kTrendWindowSeconds);
  std::vector<RankedPost> window;
  window.reserve(posts.size() - from);
  for (std::size_t i = from; i < posts.size(); ++i) {
    const PostRow& p = posts[i];
    window.push_back({p.post_id, p.created_at, p.num_likes, p.num_dislikes});
  }
  return rank_by_likes(window, kTrendCount);
}

std::vector<std::int64_t> search_post_ids(const Store& store,
                                          std::string_view query) {
  std::vector<std::int64_t> out;
  for (const PostRow& p : store.posts()) {
    if (!contains_ci(p.content, query)) continue;
    out.push_back(p.post_id);
    if (out.size() == kSearchResultCap) break;
  }
  return out;
}

std::vector<std::int64_t> search_user_ids(const Store& store,
                                          std::string_view query) {
  std::vector<std::int64_t> out;
  for (const UserRow& u : store.users()) {
    if (!contains_ci(u.user_name, query) && !contains_ci(u.bio, query)) continue;
    out.push_back(u.user_id);
    if (out.size() == kSearchResultCap) break;
  }
  return out;
}

}  // namespace socsim
