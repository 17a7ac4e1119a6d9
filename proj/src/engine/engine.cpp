#include "engine/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "analytics/analytics.hpp"
#include "channel/channel.hpp"
#include "recsys/embedding.hpp"
#include "store/io.hpp"
#include "store/store.hpp"
#include "timing/activity.hpp"
#include "usergen/usergen.hpp"
#include "util/hash.hpp"
#include "util/rng.hpp"

namespace socsim {
namespace {

// Stream salts, one per independent consumer of the run seed.
constexpr std::uint64_t kPopulationStream = 0x706f70756c617465ULL;  // "populate"
constexpr std::uint64_t kProfileStream = 0x70726f66696c6573ULL;     // "profiles"
constexpr std::uint64_t kNetworkStream = 0x6e6574776f726bULL;       // "network"
constexpr std::uint64_t kAgentStream = 0x6167656e74ULL;             // "agent"
constexpr std::uint64_t kBackendStream = 0x6261636b656e64ULL;       // "backend"
constexpr std::uint64_t kTreatmentStream = 0x7472656174ULL;         // "treat"
constexpr std::uint64_t kChannelStream = 0x6368616e6e656cULL;       // "channel"

struct EngineAgent {
  AgentState state;
  Rng rng;
};

// Per-schedule cursor; contents are consumed exactly once across fires.
struct InjectionRun {
  InjectionSchedule* sched = nullptr;
  std::size_t next = 0;
  std::vector<TreatmentGroup> groups;  // index-aligned, treated only
};

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t file_hash(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash missing file " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string bytes = std::move(ss).str();
  return fnv1a64(bytes);
}

}  // namespace

RunReport run_scenario(RunConfig cfg, const ProgressFn& progress) {
  ValidationReport checks = validate_run_config(cfg);
  if (!checks.ok())
    throw std::runtime_error("invalid run config: " + join(checks.errors, "; "));

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.export_dir, ec);
  if (ec)
    throw std::runtime_error("cannot create export dir " + cfg.export_dir + ": " +
                             ec.message());
  const fs::path dir(cfg.export_dir);

  auto note = [&](int step, const std::string& text) {
    if (progress) progress(step, cfg.steps, text);
    else if (cfg.progress) std::cerr << "[socsim] " << text << "\n";
  };

  std::string err;
  std::unique_ptr<Store> store = Store::open(StoreConfig{}, &err);
  if (!store) throw std::runtime_error("store open failed: " + err);
  SimClock clock(cfg.clock);

  // Population. Import wins; otherwise sample demographics, fill the profile
  // templates, and wire the core-follow network, all off dedicated streams.
  struct Seat {
    std::int64_t user_id = 0;
    std::int64_t agent_id = 0;
    std::string persona;
    bool core = false;
  };
  std::vector<Seat> seats;
  if (!cfg.population.import_dir.empty()) {
    if (!StoreIo::import_tables(*store, cfg.population.import_dir, &err))
      throw std::runtime_error("population import failed: " + err);
    for (const UserRow& u : store->users()) {
      Seat s;
      s.user_id = u.user_id;
      s.agent_id = u.agent_id;
      s.persona = u.bio.empty() ? std::string("A social media user.") : u.bio;
      seats.push_back(std::move(s));
    }
  } else {
    DemographicSpec spec = cfg.platform == Platform::x
                               ? DemographicSpec::x_defaults()
                               : DemographicSpec::reddit_defaults();
    Rng pop_rng(mix_seed(cfg.seed, kPopulationStream));
    std::vector<DemographicRow> rows = sample_population(
        spec, static_cast<std::size_t>(cfg.population.agents), pop_rng);
    std::vector<GeneratedProfile> profiles =
        generate_profiles(rows, spec.topic, mix_seed(cfg.seed, kProfileStream));
    std::vector<GeneratedProfile> cores(
        profiles.begin(), profiles.begin() + cfg.population.cores);
    std::vector<GeneratedProfile> ordinary(
        profiles.begin() + cfg.population.cores, profiles.end());
    for (GeneratedProfile& c : cores) c.is_core = true;
    NetworkSpec net;
    net.p_follow_core = cfg.population.p_follow_core;
    std::vector<FollowEdge> edges =
        build_network(ordinary, cores, net, mix_seed(cfg.seed, kNetworkStream));
    PopulationIds ids =
        populate_store(*store, cores, ordinary, edges, Now{clock.wall_seconds()});
    for (std::size_t i = 0; i < cores.size(); ++i)
      seats.push_back({ids.first_core_user + static_cast<std::int64_t>(i),
                       static_cast<std::int64_t>(i) + 1, cores[i].persona, true});
    for (std::size_t i = 0; i < ordinary.size(); ++i)
      seats.push_back({ids.first_ordinary_user + static_cast<std::int64_t>(i),
                       static_cast<std::int64_t>(cores.size() + i) + 1,
                       ordinary[i].persona, false});
  }
  const std::int64_t n_agents = static_cast<std::int64_t>(seats.size());
  if (n_agents == 0) throw std::runtime_error("population is empty");

  // Hourly activation per seat: csv rows in agent order, or flat rates.
  std::vector<ActivityProfile> activity;
  if (!cfg.activation.csv_path.empty()) {
    std::vector<ActivityProfile> rows = profiles_from_csv(cfg.activation.csv_path);
    if (static_cast<std::int64_t>(rows.size()) < n_agents)
      throw std::runtime_error("activation csv has " + std::to_string(rows.size()) +
                               " rows for " + std::to_string(n_agents) + " agents");
    activity.assign(rows.begin(), rows.begin() + n_agents);
  } else {
    double core_rate = cfg.activation.core_rate < 0 ? cfg.activation.rate
                                                    : cfg.activation.core_rate;
    activity.reserve(seats.size());
    for (const Seat& s : seats)
      activity.push_back(
          ActivityProfile::constant(s.core ? core_rate : cfg.activation.rate));
  }

  // One private stream per agent keyed by user id, so population edits leave
  // unrelated agents' draws untouched.
  std::vector<EngineAgent> agents;
  agents.reserve(seats.size());
  for (std::size_t i = 0; i < seats.size(); ++i) {
    const Seat& s = seats[i];
    agents.push_back(EngineAgent{
        AgentState(s.agent_id, s.user_id, s.persona, activity[i], cfg.agent),
        Rng(mix_seed(mix_seed(cfg.seed, kAgentStream),
                     static_cast<std::uint64_t>(s.user_id)))});
  }

  // Resolve the auto knobs now that the population size is known; the
  // manifest echoes the resolved values.
  if (cfg.rec.cache_size == 0)
    cfg.rec.cache_size =
        std::max<std::size_t>(1, static_cast<std::size_t>(n_agents) / 2);
  if (cfg.metrics.horizon_minutes < 0)
    cfg.metrics.horizon_minutes = std::max<int>(
        0,
        static_cast<int>(std::llround(cfg.steps * cfg.clock.minutes_per_step)) - 1);

  // The controlled poster is a plain user, not an agent; agent id 0 is free
  // because generated agents start at 1.
  std::int64_t controlled_id = 0;
  bool need_controlled = false;
  for (const InjectionSchedule& inj : cfg.injections)
    if (inj.user_id == 0) need_controlled = true;
  if (need_controlled) {
    for (int k = 0;; ++k) {
      std::string name =
          k == 0 ? std::string("controlled_user") : "controlled_user_" + std::to_string(k);
      OpResult r = store->register_user(0, name, "Controlled User",
                                        "Operator account for scheduled posts.",
                                        Now{clock.wall_seconds()});
      if (r.ok()) {
        controlled_id = r.id;
        break;
      }
      if (r.err != StoreError::duplicate_user_name || k > 64)
        throw std::runtime_error(std::string("controlled user registration failed: ") +
                                 store_error_tag(r.err));
    }
  }

  std::vector<InjectionRun> inj_runs;
  for (std::size_t si = 0; si < cfg.injections.size(); ++si) {
    InjectionSchedule& sched = cfg.injections[si];
    if (!sched.contents_file.empty()) {
      std::ifstream in(sched.contents_file);
      if (!in)
        throw std::runtime_error("cannot read contents file " + sched.contents_file);
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) sched.contents.push_back(line);
      }
    }
    if (sched.contents.empty())
      throw std::runtime_error("injections[" + std::to_string(si) + "] has no contents");
    if (sched.user_id == 0) sched.user_id = controlled_id;
    else if (!store->has_user(sched.user_id))
      throw std::runtime_error("injection user " + std::to_string(sched.user_id) +
                               " is not registered");
    if (sched.per_step == 0)
      sched.per_step = std::max<int>(1, static_cast<int>(3 * n_agents / 10));
    InjectionRun run;
    run.sched = &sched;
    if (sched.treated) {
      std::vector<std::int64_t> items(sched.contents.size());
      std::iota(items.begin(), items.end(), 0);
      TreatmentAssignment groups = assign_treatments(
          items, mix_seed(mix_seed(cfg.seed, kTreatmentStream), si));
      run.groups.assign(items.size(), TreatmentGroup::control);
      for (std::int64_t it : groups.up_treated)
        run.groups[static_cast<std::size_t>(it)] = TreatmentGroup::up_treated;
      for (std::int64_t it : groups.down_treated)
        run.groups[static_cast<std::size_t>(it)] = TreatmentGroup::down_treated;
    }
    inj_runs.push_back(std::move(run));
  }

  std::unique_ptr<DecisionBackend> backend;
  if (cfg.backend.kind == "remote") {
    backend = std::make_unique<RemoteBackend>(cfg.backend.remote);
  } else {
    backend = std::make_unique<ScriptedBackend>(
        cfg.backend.policy,
        cfg.backend.scripted_seed.value_or(mix_seed(cfg.seed, kBackendStream)));
  }

  HashedEmbeddingProvider provider;
  Recommender rec(cfg.rec, &provider);

  // Decision fan-out. The scripted backend is stateless and the remote one
  // guards its own transport, so one handler serves every worker.
  std::optional<Channel> channel;
  std::chrono::milliseconds await_ms(60000);
  if (!cfg.same_step_visibility) {
    DecisionBackend* raw = backend.get();
    Handler decide = [raw](RequestKind, const std::string& payload, std::string* out,
                           std::string* error) {
      try {
        *out = raw->decide(payload);
        return true;
      } catch (const std::exception& e) {
        *error = e.what();
        return false;
      } catch (...) {
        *error = "unknown backend error";
        return false;
      }
    };
    ChannelConfig ch;
    for (int w = 0; w < cfg.workers; ++w)
      ch.workers.push_back({decide, 1, "decide-" + std::to_string(w)});
    ch.writer = [](RequestKind, const std::string&, std::string* out, std::string*) {
      *out = "ok";
      return true;
    };
    ch.retry_bound = cfg.channel_retry_bound;
    ch.seed = mix_seed(cfg.seed, kChannelStream);
    channel.emplace(std::move(ch));
    if (cfg.backend.kind == "remote") {
      std::int64_t per_try = static_cast<std::int64_t>(cfg.backend.remote.timeout_ms) *
                             std::max(1, cfg.backend.remote.max_retries);
      await_ms = std::chrono::milliseconds(per_try * (cfg.channel_retry_bound + 1) +
                                           60000);
    }
  }

  RunReport report;
  report.agents = n_agents;
  std::vector<std::string> survey_lines;

  auto tally = [&](const StepOutcome& out) {
    ++report.decisions;
    if (out.backend_failed) ++report.backend_failures;
    if (out.envelope.parse_failed) ++report.parse_failures;
    for (const ActionResult& r : out.results)
      ++(r.ok ? report.actions_ok : report.actions_rejected);
  };

  // point 0 is the pre-run fire; point s runs after step s commits, which is
  // the beginning of step s+1 as the agents see it.
  auto fire_injections = [&](int point) {
    for (InjectionRun& run : inj_runs) {
      const InjectionSchedule& sched = *run.sched;
      if (point < sched.start_step) continue;
      if ((point - sched.start_step) % sched.every != 0) continue;
      int quota = sched.per_step;
      while (quota-- > 0 && run.next < sched.contents.size()) {
        OpResult r = store->insert_post(sched.user_id, sched.contents[run.next],
                                        Now{clock.stamp().at});
        if (!r.ok())
          throw std::runtime_error(std::string("injection rejected: ") +
                                   store_error_tag(r.err));
        ++report.injected_posts;
        if (sched.treated) {
          TreatmentGroup g = run.groups[run.next];
          if (g != TreatmentGroup::control) {
            EdgeKind kind = g == TreatmentGroup::up_treated ? EdgeKind::like_post
                                                            : EdgeKind::dislike_post;
            OpResult er =
                store->upsert_edge(kind, sched.user_id, r.id, Now{clock.stamp().at});
            if (!er.ok())
              throw std::runtime_error(std::string("treatment seeding rejected: ") +
                                       store_error_tag(er.err));
          }
        }
        ++run.next;
      }
    }
  };

  auto draw_active = [&]() {
    int hour = clock.hour_of_day();
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < agents.size(); ++i)
      if (activation_draw(agents[i].state.activity(), hour, agents[i].rng))
        active.push_back(i);
    return active;
  };

  // Default mode: every feed is sampled from the pre-step cache before any
  // commit, then decisions land in agent order. Ordering, stamps, and rng
  // draws are all fixed, so worker count cannot leak into the output.
  auto run_step_parallel = [&](const std::vector<std::size_t>& active) {
    struct Slot {
      std::size_t agent;
      PendingStep pending;
      std::optional<RequestId> id;
    };
    std::vector<Slot> slots;
    slots.reserve(active.size());
    for (std::size_t i : active) {
      PendingStep p =
          prepare_step(agents[i].state, *store, &rec, agents[i].rng, cfg.subset);
      std::optional<RequestId> id =
          channel->send_request(RequestKind::llm_decide, p.prompt);
      slots.push_back({i, std::move(p), std::move(id)});
    }
    for (Slot& slot : slots) {
      std::string raw;
      bool failed = false;
      std::string failure;
      if (!slot.id) {
        failed = true;
        failure = "channel rejected request";
      } else {
        ChannelResponse resp = channel->await_response(*slot.id, await_ms);
        if (resp.ok()) raw = std::move(resp.payload);
        else {
          failed = true;
          failure = resp.error.empty() ? "channel timeout" : resp.error;
        }
      }
      EngineAgent& ea = agents[slot.agent];
      tally(commit_step(ea.state, *store, clock, &rec, ea.rng, cfg.subset,
                        std::move(slot.pending), std::move(raw), failed, failure));
    }
  };

  // Same-step visibility: serial turns with a cache rebuild before each one,
  // so earlier agents' posts reach later agents inside one step.
  auto run_step_serial = [&](const std::vector<std::size_t>& active) {
    for (std::size_t i : active) {
      rec.refresh(*store, clock.wall_seconds());
      tally(step_agent(agents[i].state, *store, clock, &rec, agents[i].rng,
                       *backend, cfg.subset));
    }
  };

  auto run_survey = [&](int s) {
    if (cfg.survey.every <= 0 || s % cfg.survey.every != 0) return;
    if (channel) {
      std::vector<std::optional<RequestId>> ids;
      ids.reserve(agents.size());
      for (EngineAgent& ea : agents)
        ids.push_back(channel->send_request(
            RequestKind::llm_decide, survey_prompt(ea.state, cfg.survey.question)));
      for (std::size_t i = 0; i < agents.size(); ++i) {
        SurveyAnswer ans;
        ans.agent_id = agents[i].state.agent_id();
        ans.step = s;
        if (!ids[i]) {
          ans.failed = true;
        } else {
          ChannelResponse resp = channel->await_response(*ids[i], await_ms);
          if (resp.ok()) ans.answer = std::move(resp.payload);
          else ans.failed = true;
        }
        survey_lines.push_back(survey_jsonl_line(ans));
      }
    } else {
      for (EngineAgent& ea : agents)
        survey_lines.push_back(survey_jsonl_line(
            survey_agent(ea.state, *backend, s, cfg.survey.question)));
    }
    report.survey_rows += static_cast<std::int64_t>(agents.size());
  };

  fire_injections(0);
  for (int s = 1; s <= cfg.steps; ++s) {
    rec.refresh(*store, clock.wall_seconds());
    std::vector<std::size_t> active = draw_active();
    if (cfg.same_step_visibility) run_step_serial(active);
    else run_step_parallel(active);
    run_survey(s);
    fire_injections(s);
    note(s, "step " + std::to_string(s) + "/" + std::to_string(cfg.steps) +
                " active=" + std::to_string(active.size()) +
                " posts=" + std::to_string(store->posts().size()));
    clock.advance();
  }
  report.steps_run = cfg.steps;
  if (channel) channel->shutdown();

  // Exports: every table twice (csv + jsonl), survey rows, metric series.
  std::vector<std::string> files;
  if (!StoreIo::export_tables(*store, cfg.export_dir, ExportFormat::csv, &err))
    throw std::runtime_error("csv export failed: " + err);
  if (!StoreIo::export_tables(*store, cfg.export_dir, ExportFormat::jsonl, &err))
    throw std::runtime_error("jsonl export failed: " + err);
  for (const char* const name : kTableNames) {
    files.push_back(std::string(name) + ".csv");
    files.push_back(std::string(name) + ".jsonl");
  }
  if (!survey_lines.empty()) {
    std::ofstream out(dir / "surveys.jsonl", std::ios::binary | std::ios::trunc);
    for (const std::string& line : survey_lines) out << line << '\n';
    out.flush();
    if (!out) throw std::runtime_error("cannot write surveys.jsonl");
    files.push_back("surveys.jsonl");
  }

  std::vector<std::int64_t> roots = cfg.metrics.cascade_roots;
  if (roots.empty()) {
    std::set<std::int64_t> seen;
    for (const TraceRow& t : store->trace()) {
      if (t.action != "repost") continue;
      nlohmann::json info = nlohmann::json::parse(t.info, nullptr, false);
      if (!info.is_object() || !info.contains("new_post_id")) continue;
      seen.insert(store->cascade_root(info["new_post_id"].get<std::int64_t>()));
    }
    roots.assign(seen.begin(), seen.end());
  } else {
    for (std::int64_t root : roots)
      if (!store->has_post(root))
        throw std::runtime_error("cascade root " + std::to_string(root) +
                                 " is not in the store");
  }
  for (std::int64_t root : roots) {
    PropagationTree tree = build_propagation_tree(*store, root);
    TreeMetricSeries series = metric_series(tree, cfg.metrics.horizon_minutes);
    const struct {
      const char* name;
      const std::vector<std::int64_t>* values;
    } cols[3] = {{"scale", &series.scale},
                 {"depth", &series.depth},
                 {"max_breadth", &series.max_breadth}};
    for (const auto& c : cols) {
      std::string fname = std::string(c.name) + "_" + std::to_string(root) + ".csv";
      if (!write_series_csv((dir / fname).string(), c.name, *c.values, &err))
        throw std::runtime_error("metric export failed: " + err);
      files.push_back(fname);
    }
  }

  std::sort(files.begin(), files.end());
  nlohmann::json manifest;
  manifest["version"] = 1;
  manifest["seed"] = cfg.seed;
  manifest["config"] = run_config_json(cfg);
  nlohmann::json file_map = nlohmann::json::object();
  for (const std::string& f : files) file_map[f] = hash_hex(file_hash(dir / f));
  manifest["files"] = file_map;
  manifest["report"] = {{"steps_run", report.steps_run},
                        {"agents", report.agents},
                        {"decisions", report.decisions},
                        {"backend_failures", report.backend_failures},
                        {"parse_failures", report.parse_failures},
                        {"actions_ok", report.actions_ok},
                        {"actions_rejected", report.actions_rejected},
                        {"survey_rows", report.survey_rows},
                        {"injected_posts", report.injected_posts}};
  manifest["row_counts"] = {{"users", store->users().size()},
                            {"posts", store->posts().size()},
                            {"comments", store->comments().size()},
                            {"trace", store->trace().size()}};
  {
    std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
    out << manifest.dump(2) << '\n';
    out.flush();
    if (!out) throw std::runtime_error("cannot write manifest.json");
  }
  report.files = std::move(files);
  report.manifest_path = (dir / "manifest.json").string();
  note(cfg.steps, "exported " + std::to_string(report.files.size()) +
                      " files to " + cfg.export_dir);
  return report;
}

}  // namespace socsim
