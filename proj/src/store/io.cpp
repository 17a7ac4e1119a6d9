#include "store/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <variant>

#include "json.hpp"
#include "util/csv.hpp"

namespace socsim {

namespace fs = std::filesystem;

const char* const kTableNames[11] = {"user",         "post",  "comment",
                                     "like",         "dislike", "comment_like",
                                     "comment_dislike", "follow", "mute",
                                     "trace",        "rec"};

namespace {

enum class ColType { int64, text };

struct Col {
  const char* name;
  ColType type;
};

using Cell = std::variant<std::int64_t, std::string>;
using Row = std::vector<Cell>;

struct Table {
  const char* name;
  std::vector<Col> cols;
  std::vector<Row> rows;
};

Row edge_row(const EdgeRow& e) {
  return {e.edge_id, e.source_id, e.target_id, e.created_at};
}

std::vector<Table> collect_tables(const Store& store, bool materialize_rec) {
  std::vector<Table> tables;

  Table user{"user",
             {{"user_id", ColType::int64},
              {"agent_id", ColType::int64},
              {"user_name", ColType::text},
              {"name", ColType::text},
              {"bio", ColType::text},
              {"created_at", ColType::int64},
              {"num_followings", ColType::int64},
              {"num_followers", ColType::int64}},
             {}};
  for (const UserRow& u : store.users())
    user.rows.push_back({u.user_id, u.agent_id, u.user_name, u.name, u.bio,
                         u.created_at, u.num_followings, u.num_followers});
  tables.push_back(std::move(user));

  Table post{"post",
             {{"post_id", ColType::int64},
              {"user_id", ColType::int64},
              {"content", ColType::text},
              {"created_at", ColType::int64},
              {"num_likes", ColType::int64},
              {"num_dislikes", ColType::int64}},
             {}};
  for (const PostRow& p : store.posts())
    post.rows.push_back({p.post_id, p.user_id, p.content, p.created_at,
                         p.num_likes, p.num_dislikes});
  tables.push_back(std::move(post));

  Table comment{"comment",
                {{"comment_id", ColType::int64},
                 {"post_id", ColType::int64},
                 {"user_id", ColType::int64},
                 {"content", ColType::text},
                 {"created_at", ColType::int64},
                 {"num_likes", ColType::int64},
                 {"num_dislikes", ColType::int64}},
                {}};
  for (const CommentRow& c : store.comments())
    comment.rows.push_back({c.comment_id, c.post_id, c.user_id, c.content,
                            c.created_at, c.num_likes, c.num_dislikes});
  tables.push_back(std::move(comment));

  struct EdgeSpec {
    const char* table;
    const char* id_col;
    const char* src_col;
    const char* tgt_col;
    EdgeKind kind;
  };
  const EdgeSpec edge_specs[] = {
      {"like", "like_id", "user_id", "post_id", EdgeKind::like_post},
      {"dislike", "dislike_id", "user_id", "post_id", EdgeKind::dislike_post},
      {"comment_like", "comment_like_id", "user_id", "comment_id",
       EdgeKind::comment_like},
      {"comment_dislike", "comment_dislike_id", "user_id", "comment_id",
       EdgeKind::comment_dislike},
      {"follow", "follow_id", "follower_id", "followee_id", EdgeKind::follow},
      {"mute", "mute_id", "muter_id", "mutee_id", EdgeKind::mute},
  };
  for (const EdgeSpec& spec : edge_specs) {
    Table t{spec.table,
            {{spec.id_col, ColType::int64},
             {spec.src_col, ColType::int64},
             {spec.tgt_col, ColType::int64},
             {"created_at", ColType::int64}},
            {}};
    for (const EdgeRow& e : store.edges(spec.kind).rows)
      if (!e.dead) t.rows.push_back(edge_row(e));
    tables.push_back(std::move(t));
  }

  Table trace{"trace",
              {{"user_id", ColType::int64},
               {"created_at", ColType::int64},
               {"action", ColType::text},
               {"info", ColType::text}},
              {}};
  for (const TraceRow& t : store.trace())
    trace.rows.push_back({t.user_id, t.created_at, t.action, t.info});
  tables.push_back(std::move(trace));

  Table rec{"rec",
            {{"user_id", ColType::int64}, {"post_id", ColType::int64}},
            {}};
  if (materialize_rec)
    for (const RecRow& r : store.rec_rows()) rec.rows.push_back({r.user_id, r.post_id});
  tables.push_back(std::move(rec));

  return tables;
}

bool write_file(const fs::path& path, const std::string& content,
                std::string* error) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    if (error) *error = "cannot write " + path.string();
    return false;
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) {
    if (error) *error = "write failed: " + path.string();
    return false;
  }
  return true;
}

std::string render_csv(const Table& table) {
  std::string out;
  std::vector<std::string> header;
  for (const Col& c : table.cols) header.push_back(c.name);
  write_csv_row(out, header);
  std::vector<std::string> cells;
  for (const Row& row : table.rows) {
    cells.clear();
    for (const Cell& cell : row) {
      if (std::holds_alternative<std::int64_t>(cell))
        cells.push_back(std::to_string(std::get<std::int64_t>(cell)));
      else
        cells.push_back(std::get<std::string>(cell));
    }
    write_csv_row(out, cells);
  }
  return out;
}

std::string render_jsonl(const Table& table) {
  std::string out;
  for (const Row& row : table.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < table.cols.size(); ++i) {
      if (std::holds_alternative<std::int64_t>(row[i]))
        obj[table.cols[i].name] = std::get<std::int64_t>(row[i]);
      else
        obj[table.cols[i].name] = std::get<std::string>(row[i]);
    }
    out += obj.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

bool write_all(const Store& store, const std::string& dir, ExportFormat format,
               bool materialize_rec, std::string* error) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const char* ext = format == ExportFormat::csv ? ".csv" : ".jsonl";
  for (const Table& table : collect_tables(store, materialize_rec)) {
    const std::string body =
        format == ExportFormat::csv ? render_csv(table) : render_jsonl(table);
    if (!write_file(fs::path(dir) / (table.name + std::string(ext)), body, error))
      return false;
  }
  return true;
}

bool load_rows(const fs::path& dir, const char* name,
               const std::vector<Col>& cols, std::vector<Row>* out,
               std::string* error) {
  out->clear();
  const fs::path csv_path = dir / (std::string(name) + ".csv");
  const fs::path jsonl_path = dir / (std::string(name) + ".jsonl");

  auto fail = [&](const std::string& msg) {
    if (error) *error = "table " + std::string(name) + ": " + msg;
    return false;
  };

  if (fs::exists(csv_path)) {
    std::ifstream in(csv_path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    auto rows = parse_csv(buf.str());
    if (rows.empty()) return fail("missing header");
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& r = rows[i];
      if (r.size() == 1 && r[0].empty()) continue;
      if (r.size() != cols.size()) return fail("column count mismatch");
      Row row;
      for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c].type == ColType::int64) {
          try {
            row.emplace_back(static_cast<std::int64_t>(std::stoll(r[c])));
          } catch (...) {
            return fail("bad integer in column " + std::string(cols[c].name));
          }
        } else {
          row.emplace_back(r[c]);
        }
      }
      out->push_back(std::move(row));
    }
    return true;
  }

  if (fs::exists(jsonl_path)) {
    std::ifstream in(jsonl_path, std::ios::binary);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
      if (!obj.is_object()) return fail("bad jsonl line");
      Row row;
      for (const Col& c : cols) {
        if (!obj.contains(c.name)) return fail("missing key " + std::string(c.name));
        if (c.type == ColType::int64)
          row.emplace_back(obj[c.name].get<std::int64_t>());
        else
          row.emplace_back(obj[c.name].get<std::string>());
      }
      out->push_back(std::move(row));
    }
    return true;
  }

  return true;  // absent file = empty table
}

std::int64_t as_int(const Cell& c) { return std::get<std::int64_t>(c); }
const std::string& as_text(const Cell& c) { return std::get<std::string>(c); }

}  // namespace

bool StoreIo::export_tables(const Store& store, const std::string& dir,
                            ExportFormat format, std::string* error) {
  return write_all(store, dir, format, /*materialize_rec=*/true, error);
}

bool StoreIo::import_tables(Store& store, const std::string& dir,
                            std::string* error) {
  const fs::path base(dir);
  const auto defs = collect_tables(store, false);  // column specs only

  auto def_of = [&](const char* name) -> const Table& {
    for (const Table& t : defs)
      if (std::string(t.name) == name) return t;
    throw std::logic_error("no table def");
  };

  std::vector<Row> rows;

  if (!load_rows(base, "user", def_of("user").cols, &rows, error)) return false;
  store.users_.clear();
  for (const Row& r : rows) {
    UserRow u;
    u.user_id = as_int(r[0]);
    u.agent_id = as_int(r[1]);
    u.user_name = as_text(r[2]);
    u.name = as_text(r[3]);
    u.bio = as_text(r[4]);
    u.created_at = as_int(r[5]);
    u.num_followings = as_int(r[6]);
    u.num_followers = as_int(r[7]);
    store.users_.push_back(std::move(u));
  }

  if (!load_rows(base, "post", def_of("post").cols, &rows, error)) return false;
  store.posts_.clear();
  for (const Row& r : rows) {
    PostRow p;
    p.post_id = as_int(r[0]);
    p.user_id = as_int(r[1]);
    p.content = as_text(r[2]);
    p.created_at = as_int(r[3]);
    p.num_likes = as_int(r[4]);
    p.num_dislikes = as_int(r[5]);
    store.posts_.push_back(std::move(p));
  }

  if (!load_rows(base, "comment", def_of("comment").cols, &rows, error)) return false;
  store.comments_.clear();
  for (const Row& r : rows) {
    CommentRow c;
    c.comment_id = as_int(r[0]);
    c.post_id = as_int(r[1]);
    c.user_id = as_int(r[2]);
    c.content = as_text(r[3]);
    c.created_at = as_int(r[4]);
    c.num_likes = as_int(r[5]);
    c.num_dislikes = as_int(r[6]);
    store.comments_.push_back(std::move(c));
  }

  const std::pair<const char*, EdgeKind> edge_tables[] = {
      {"like", EdgeKind::like_post},
      {"dislike", EdgeKind::dislike_post},
      {"comment_like", EdgeKind::comment_like},
      {"comment_dislike", EdgeKind::comment_dislike},
      {"follow", EdgeKind::follow},
      {"mute", EdgeKind::mute},
  };
  for (const auto& [name, kind] : edge_tables) {
    if (!load_rows(base, name, def_of(name).cols, &rows, error)) return false;
    EdgeTable& table = store.edges_[static_cast<int>(kind)];
    table.rows.clear();
    for (const Row& r : rows) {
      EdgeRow e;
      e.edge_id = as_int(r[0]);
      e.source_id = as_int(r[1]);
      e.target_id = as_int(r[2]);
      e.created_at = as_int(r[3]);
      table.rows.push_back(e);
    }
  }

  if (!load_rows(base, "trace", def_of("trace").cols, &rows, error)) return false;
  store.trace_.clear();
  for (const Row& r : rows) {
    TraceRow t;
    t.user_id = as_int(r[0]);
    t.created_at = as_int(r[1]);
    t.action = as_text(r[2]);
    t.info = as_text(r[3]);
    store.trace_.push_back(std::move(t));
  }

  if (!load_rows(base, "rec", def_of("rec").cols, &rows, error)) return false;
  store.rec_global_ = false;
  store.rec_global_posts_.clear();
  store.rec_user_posts_.clear();
  for (const Row& r : rows)
    store.rec_user_posts_[as_int(r[0])].push_back(as_int(r[1]));

  store.rebuild_indexes();
  return true;
}

bool StoreIo::snapshot(const Store& store, const std::string& dir,
                       std::string* error) {
  // The global rec list lives in meta so huge caches are not multiplied out.
  if (!write_all(store, dir, ExportFormat::jsonl,
                 /*materialize_rec=*/!store.rec_is_global(), error))
    return false;
  nlohmann::json meta{{"format_version", 1},
                      {"rec_global", store.rec_is_global()},
                      {"seed", store.config().seed}};
  meta["rec_global_posts"] = nlohmann::json::array();
  if (store.rec_is_global())
    for (std::int64_t p : store.rec_for(0)) meta["rec_global_posts"].push_back(p);
  return write_file(fs::path(dir) / "meta.json", meta.dump(2) + "\n", error);
}

bool StoreIo::restore(Store& store, const std::string& dir, std::string* error) {
  std::ifstream in(fs::path(dir) / "meta.json", std::ios::binary);
  if (!in) {
    if (error) *error = "missing snapshot meta in " + dir;
    return false;
  }
  nlohmann::json meta = nlohmann::json::parse(in, nullptr, false);
  if (!meta.is_object()) {
    if (error) *error = "bad snapshot meta in " + dir;
    return false;
  }
  if (!import_tables(store, dir, error)) return false;
  if (meta.value("rec_global", false)) {
    std::vector<std::int64_t> posts;
    for (const auto& p : meta["rec_global_posts"])
      posts.push_back(p.get<std::int64_t>());
    store.set_rec_global(std::move(posts));
  }
  return true;
}

}  // namespace socsim
