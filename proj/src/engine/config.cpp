#include "engine/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "analytics/analytics.hpp"
#include "httplib.h"

namespace socsim {
namespace {

constexpr const char* kScenarioNames[] = {"info_spread", "polarization",
                                          "herd_reddit", "misinfo_x", "custom"};

const char* cond_name(PolicyRule::Cond c) {
  switch (c) {
    case PolicyRule::Cond::always: return "always";
    case PolicyRule::Cond::score_pos: return "score_pos";
    case PolicyRule::Cond::score_neg: return "score_neg";
    case PolicyRule::Cond::score_zero: return "score_zero";
  }
  return "always";
}

std::optional<PolicyRule::Cond> cond_from_name(std::string_view name) {
  if (name == "always") return PolicyRule::Cond::always;
  if (name == "score_pos") return PolicyRule::Cond::score_pos;
  if (name == "score_neg") return PolicyRule::Cond::score_neg;
  if (name == "score_zero") return PolicyRule::Cond::score_zero;
  return std::nullopt;
}

bool set_equal(const ActionSet& a, const ActionSet& b) {
  for (int k = 0; k < kActionKindCount; ++k) {
    const auto kind = static_cast<ActionKind>(k);
    if (a.contains(kind) != b.contains(kind)) return false;
  }
  return true;
}

std::vector<std::string> subset_names(const ActionSet& set) {
  std::vector<std::string> names;
  for (int k = 0; k < kActionKindCount; ++k) {
    const auto kind = static_cast<ActionKind>(k);
    if (set.contains(kind)) names.emplace_back(action_name(kind));
  }
  return names;
}

bool fail(std::string* error, std::string message) {
  if (error) *error = std::move(message);
  return false;
}

bool read_string(const nlohmann::json& o, const char* key, std::string* dst,
                 std::string* error) {
  if (!o.contains(key)) return true;
  if (!o[key].is_string()) return fail(error, std::string(key) + " must be a string");
  *dst = o[key].get<std::string>();
  return true;
}

bool read_bool(const nlohmann::json& o, const char* key, bool* dst,
               std::string* error) {
  if (!o.contains(key)) return true;
  if (!o[key].is_boolean()) return fail(error, std::string(key) + " must be a boolean");
  *dst = o[key].get<bool>();
  return true;
}

bool read_double(const nlohmann::json& o, const char* key, double* dst,
                 std::string* error) {
  if (!o.contains(key)) return true;
  if (!o[key].is_number()) return fail(error, std::string(key) + " must be a number");
  *dst = o[key].get<double>();
  return true;
}

template <typename Int>
bool read_int(const nlohmann::json& o, const char* key, Int* dst,
              std::string* error) {
  if (!o.contains(key)) return true;
  if (!o[key].is_number_integer())
    return fail(error, std::string(key) + " must be an integer");
  *dst = o[key].get<Int>();
  return true;
}

bool parse_backend(const nlohmann::json& o, BackendChoice* backend,
                   std::string* error) {
  if (!read_string(o, "kind", &backend->kind, error)) return false;
  if (o.contains("seed")) {
    if (!o["seed"].is_number_unsigned() && !o["seed"].is_number_integer())
      return fail(error, "backend.seed must be an integer");
    backend->scripted_seed = o["seed"].get<std::uint64_t>();
  }
  ScriptedPolicy& p = backend->policy;
  if (!read_string(o, "survey_answer", &p.survey_answer, error)) return false;
  if (!read_string(o, "comment_text", &p.comment_text, error)) return false;
  if (!read_string(o, "post_text", &p.post_text, error)) return false;
  if (!read_string(o, "search_query", &p.search_query, error)) return false;
  if (o.contains("rules")) {
    if (!o["rules"].is_array()) return fail(error, "backend.rules must be an array");
    p.rules.clear();
    for (const auto& rj : o["rules"]) {
      if (!rj.is_object()) return fail(error, "backend.rules entries must be objects");
      PolicyRule rule;
      std::string action, cond, coin;
      if (!read_string(rj, "action", &action, error)) return false;
      if (!read_double(rj, "prob", &rule.prob, error)) return false;
      if (!read_string(rj, "cond", &cond, error)) return false;
      if (!read_string(rj, "coin", &coin, error)) return false;
      auto kind = action_from_name(action);
      if (!kind) return fail(error, "backend rule names unknown action: " + action);
      rule.action = *kind;
      if (!cond.empty()) {
        auto c = cond_from_name(cond);
        if (!c) return fail(error, "backend rule has unknown cond: " + cond);
        rule.cond = *c;
      }
      if (coin == "sticky")
        rule.coin = PolicyRule::Coin::sticky;
      else if (!coin.empty() && coin != "fresh")
        return fail(error, "backend rule has unknown coin: " + coin);
      p.rules.push_back(rule);
    }
  }
  RemoteBackendConfig& r = backend->remote;
  if (!read_string(o, "host", &r.host, error)) return false;
  if (!read_int(o, "port", &r.port, error)) return false;
  if (!read_string(o, "path", &r.path, error)) return false;
  if (!read_string(o, "model", &r.model, error)) return false;
  if (!read_double(o, "temperature", &r.temperature, error)) return false;
  if (!read_int(o, "timeout_ms", &r.timeout_ms, error)) return false;
  if (!read_int(o, "max_retries", &r.max_retries, error)) return false;
  return true;
}

}  // namespace

const char* scenario_name(Scenario s) {
  return kScenarioNames[static_cast<int>(s)];
}

std::optional<Scenario> scenario_from_name(std::string_view name) {
  for (int i = 0; i < 5; ++i)
    if (name == kScenarioNames[i]) return static_cast<Scenario>(i);
  return std::nullopt;
}

const char* platform_name(Platform p) {
  return p == Platform::x ? "x" : "reddit";
}

std::optional<Platform> platform_from_name(std::string_view name) {
  if (name == "x") return Platform::x;
  if (name == "reddit") return Platform::reddit;
  return std::nullopt;
}

RunConfig preset_run_config(Scenario s) {
  RunConfig cfg;
  cfg.scenario = s;
  switch (s) {
    case Scenario::info_spread:
      cfg.platform = Platform::x;
      cfg.subset = action_set_info_spread();
      cfg.subset_label = "info_spread";
      cfg.steps = 50;
      cfg.clock.minutes_per_step = 3.0;
      cfg.rec.kind = RecKind::x;
      cfg.activation.rate = 1.0;
      break;
    case Scenario::polarization:
      cfg.platform = Platform::x;
      cfg.subset = action_set_polarization();
      cfg.subset_label = "polarization";
      cfg.steps = 80;
      cfg.rec.kind = RecKind::x;
      cfg.activation.rate = 1.0;
      cfg.survey.every = 10;
      cfg.survey.question = dilemma_question();
      break;
    case Scenario::herd_reddit:
      cfg.platform = Platform::reddit;
      cfg.subset = action_set_herd();
      cfg.subset_label = "herd";
      cfg.steps = 30;
      cfg.rec.kind = RecKind::reddit;
      cfg.rec.cache_size = 0;  // auto: half the agent count
      cfg.rec.feed_sample_size = 5;
      cfg.activation.rate = 0.1;
      break;
    case Scenario::misinfo_x:
      cfg.platform = Platform::x;
      cfg.subset = action_set_misinfo();
      cfg.subset_label = "misinfo";
      cfg.steps = 60;
      cfg.rec.kind = RecKind::x;
      cfg.activation.rate = 0.01;
      cfg.activation.core_rate = 0.1;
      break;
    case Scenario::custom:
      break;
  }
  return cfg;
}

bool parse_run_config(const nlohmann::json& j, RunConfig* out, std::string* error) {
  if (!j.is_object()) return fail(error, "config must be a JSON object");

  Scenario scenario = Scenario::custom;
  if (j.contains("scenario")) {
    if (!j["scenario"].is_string())
      return fail(error, "scenario must be a string");
    auto s = scenario_from_name(j["scenario"].get<std::string>());
    if (!s)
      return fail(error,
                  "unknown scenario: " + j["scenario"].get<std::string>());
    scenario = *s;
  }
  RunConfig cfg = preset_run_config(scenario);

  static const char* const known[] = {
      "scenario", "platform", "seed", "steps", "subset", "rec", "clock",
      "activation", "agent", "same_step_visibility", "workers",
      "channel_retry_bound", "backend", "population", "injections", "survey",
      "metrics", "export_dir", "progress"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) cfg.parse_warnings.push_back("unknown config key: " + key);
  }

  if (j.contains("platform")) {
    if (!j["platform"].is_string()) return fail(error, "platform must be a string");
    auto p = platform_from_name(j["platform"].get<std::string>());
    if (!p) return fail(error, "unknown platform: " + j["platform"].get<std::string>());
    cfg.platform = *p;
    cfg.rec.kind = *p == Platform::reddit ? RecKind::reddit : RecKind::x;
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() && !j["seed"].is_number_unsigned())
      return fail(error, "seed must be an integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (!read_int(j, "steps", &cfg.steps, error)) return false;

  if (j.contains("subset")) {
    cfg.subset_overridden = scenario != Scenario::custom;
    const nlohmann::json& s = j["subset"];
    if (s.is_string()) {
      auto set = action_set_by_name(s.get<std::string>());
      if (!set) return fail(error, "unknown action set: " + s.get<std::string>());
      cfg.subset = *set;
      cfg.subset_label = s.get<std::string>();
    } else if (s.is_array()) {
      ActionSet set;
      for (const auto& name : s) {
        if (!name.is_string())
          return fail(error, "subset entries must be action names");
        auto kind = action_from_name(name.get<std::string>());
        if (!kind)
          return fail(error, "unknown action in subset: " + name.get<std::string>());
        set.add(*kind);
      }
      cfg.subset = set;
      cfg.subset_label = "custom";
    } else {
      return fail(error, "subset must be a set name or an array of actions");
    }
  }

  if (j.contains("rec")) {
    const nlohmann::json& o = j["rec"];
    if (!o.is_object()) return fail(error, "rec must be an object");
    std::string kind;
    if (!read_string(o, "kind", &kind, error)) return false;
    if (kind == "reddit")
      cfg.rec.kind = RecKind::reddit;
    else if (kind == "x")
      cfg.rec.kind = RecKind::x;
    else if (!kind.empty())
      return fail(error, "rec.kind must be reddit or x");
    if (!read_int(o, "cache_size", &cfg.rec.cache_size, error)) return false;
    if (!read_int(o, "k_in", &cfg.rec.k_in, error)) return false;
    if (!read_int(o, "k_out", &cfg.rec.k_out, error)) return false;
    if (!read_int(o, "feed_sample_size", &cfg.rec.feed_sample_size, error))
      return false;
  }

  if (j.contains("clock")) {
    const nlohmann::json& o = j["clock"];
    if (!o.is_object()) return fail(error, "clock must be an object");
    std::string mode;
    if (!read_string(o, "mode", &mode, error)) return false;
    if (mode == "step")
      cfg.clock.mode = TimeMode::step;
    else if (mode == "linear")
      cfg.clock.mode = TimeMode::linear;
    else if (!mode.empty())
      return fail(error, "clock.mode must be step or linear");
    if (!read_double(o, "minutes_per_step", &cfg.clock.minutes_per_step, error))
      return false;
    if (!read_double(o, "scale_factor", &cfg.clock.scale_factor, error))
      return false;
    if (!read_int(o, "epoch_seconds", &cfg.clock.epoch_seconds, error))
      return false;
  }

  if (j.contains("activation")) {
    const nlohmann::json& o = j["activation"];
    if (!o.is_object()) return fail(error, "activation must be an object");
    if (!read_double(o, "rate", &cfg.activation.rate, error)) return false;
    if (!read_double(o, "core_rate", &cfg.activation.core_rate, error))
      return false;
    if (!read_string(o, "csv", &cfg.activation.csv_path, error)) return false;
  }

  if (j.contains("agent")) {
    const nlohmann::json& o = j["agent"];
    if (!o.is_object()) return fail(error, "agent must be an object");
    if (!read_int(o, "memory_bound", &cfg.agent.memory_bound, error))
      return false;
    if (!read_int(o, "memory_prompt_entries", &cfg.agent.memory_prompt_entries,
                  error))
      return false;
  }

  if (!read_bool(j, "same_step_visibility", &cfg.same_step_visibility, error))
    return false;
  if (!read_int(j, "workers", &cfg.workers, error)) return false;
  if (!read_int(j, "channel_retry_bound", &cfg.channel_retry_bound, error))
    return false;

  if (j.contains("backend")) {
    if (!j["backend"].is_object()) return fail(error, "backend must be an object");
    if (!parse_backend(j["backend"], &cfg.backend, error)) return false;
  }

  if (j.contains("population")) {
    const nlohmann::json& o = j["population"];
    if (!o.is_object()) return fail(error, "population must be an object");
    if (!read_string(o, "import_dir", &cfg.population.import_dir, error))
      return false;
    if (!read_int(o, "agents", &cfg.population.agents, error)) return false;
    if (!read_int(o, "cores", &cfg.population.cores, error)) return false;
    if (!read_double(o, "p_follow_core", &cfg.population.p_follow_core, error))
      return false;
  }

  if (j.contains("injections")) {
    if (!j["injections"].is_array())
      return fail(error, "injections must be an array");
    cfg.injections.clear();
    for (const auto& o : j["injections"]) {
      if (!o.is_object()) return fail(error, "injection entries must be objects");
      InjectionSchedule inj;
      if (!read_int(o, "user_id", &inj.user_id, error)) return false;
      if (!read_int(o, "start_step", &inj.start_step, error)) return false;
      if (!read_int(o, "every", &inj.every, error)) return false;
      if (!read_int(o, "per_step", &inj.per_step, error)) return false;
      if (!read_bool(o, "treated", &inj.treated, error)) return false;
      if (!read_string(o, "contents_file", &inj.contents_file, error))
        return false;
      if (o.contains("contents")) {
        if (!o["contents"].is_array())
          return fail(error, "injection contents must be an array");
        for (const auto& c : o["contents"]) {
          if (!c.is_string())
            return fail(error, "injection contents must be strings");
          inj.contents.push_back(c.get<std::string>());
        }
      }
      cfg.injections.push_back(std::move(inj));
    }
  }

  if (j.contains("survey")) {
    const nlohmann::json& o = j["survey"];
    if (!o.is_object()) return fail(error, "survey must be an object");
    if (!read_int(o, "every", &cfg.survey.every, error)) return false;
    if (!read_string(o, "question", &cfg.survey.question, error)) return false;
  }

  if (j.contains("metrics")) {
    const nlohmann::json& o = j["metrics"];
    if (!o.is_object()) return fail(error, "metrics must be an object");
    if (o.contains("cascade_roots")) {
      if (!o["cascade_roots"].is_array())
        return fail(error, "metrics.cascade_roots must be an array");
      cfg.metrics.cascade_roots.clear();
      for (const auto& r : o["cascade_roots"]) {
        if (!r.is_number_integer())
          return fail(error, "metrics.cascade_roots entries must be integers");
        cfg.metrics.cascade_roots.push_back(r.get<std::int64_t>());
      }
    }
    if (!read_int(o, "horizon_minutes", &cfg.metrics.horizon_minutes, error))
      return false;
  }

  if (!read_string(j, "export_dir", &cfg.export_dir, error)) return false;
  if (!read_bool(j, "progress", &cfg.progress, error)) return false;

  *out = std::move(cfg);
  return true;
}

bool load_run_config(const std::string& path, RunConfig* out, std::string* error) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return fail(error, "cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json j = nlohmann::json::parse(buf.str(), nullptr, false);
  if (j.is_discarded()) return fail(error, "config is not valid JSON: " + path);
  if (!parse_run_config(j, out, error)) return false;

  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  auto resolve = [&](std::string* p) {
    if (p->empty() || std::filesystem::path(*p).is_absolute()) return;
    *p = (base / *p).string();
  };
  resolve(&out->population.import_dir);
  resolve(&out->activation.csv_path);
  for (InjectionSchedule& inj : out->injections) resolve(&inj.contents_file);
  return true;
}

nlohmann::json run_config_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["scenario"] = scenario_name(cfg.scenario);
  j["platform"] = platform_name(cfg.platform);
  j["seed"] = cfg.seed;
  j["steps"] = cfg.steps;
  j["subset"] = subset_names(cfg.subset);
  j["rec"] = {{"kind", cfg.rec.kind == RecKind::reddit ? "reddit" : "x"},
              {"cache_size", cfg.rec.cache_size},
              {"k_in", cfg.rec.k_in},
              {"k_out", cfg.rec.k_out},
              {"feed_sample_size", cfg.rec.feed_sample_size}};
  j["clock"] = {{"mode", cfg.clock.mode == TimeMode::step ? "step" : "linear"},
                {"minutes_per_step", cfg.clock.minutes_per_step},
                {"scale_factor", cfg.clock.scale_factor},
                {"epoch_seconds", cfg.clock.epoch_seconds}};
  j["activation"] = {{"rate", cfg.activation.rate},
                     {"core_rate", cfg.activation.core_rate},
                     {"csv", cfg.activation.csv_path}};
  j["agent"] = {{"memory_bound", cfg.agent.memory_bound},
                {"memory_prompt_entries", cfg.agent.memory_prompt_entries}};
  j["same_step_visibility"] = cfg.same_step_visibility;
  j["workers"] = cfg.workers;
  j["channel_retry_bound"] = cfg.channel_retry_bound;

  nlohmann::json b;
  b["kind"] = cfg.backend.kind;
  if (cfg.backend.kind == "remote") {
    b["host"] = cfg.backend.remote.host;
    b["port"] = cfg.backend.remote.port;
    b["path"] = cfg.backend.remote.path;
    b["model"] = cfg.backend.remote.model;
    b["temperature"] = cfg.backend.remote.temperature;
    b["timeout_ms"] = cfg.backend.remote.timeout_ms;
    b["max_retries"] = cfg.backend.remote.max_retries;
  } else {
    if (cfg.backend.scripted_seed) b["seed"] = *cfg.backend.scripted_seed;
    b["survey_answer"] = cfg.backend.policy.survey_answer;
    b["comment_text"] = cfg.backend.policy.comment_text;
    b["post_text"] = cfg.backend.policy.post_text;
    b["search_query"] = cfg.backend.policy.search_query;
    nlohmann::json rules = nlohmann::json::array();
    for (const PolicyRule& r : cfg.backend.policy.rules) {
      rules.push_back(
          {{"action", action_name(r.action)},
           {"prob", r.prob},
           {"cond", cond_name(r.cond)},
           {"coin", r.coin == PolicyRule::Coin::sticky ? "sticky" : "fresh"}});
    }
    b["rules"] = std::move(rules);
  }
  j["backend"] = std::move(b);

  j["population"] = {{"import_dir", cfg.population.import_dir},
                     {"agents", cfg.population.agents},
                     {"cores", cfg.population.cores},
                     {"p_follow_core", cfg.population.p_follow_core}};
  nlohmann::json injections = nlohmann::json::array();
  for (const InjectionSchedule& inj : cfg.injections) {
    injections.push_back({{"user_id", inj.user_id},
                          {"start_step", inj.start_step},
                          {"every", inj.every},
                          {"per_step", inj.per_step},
                          {"treated", inj.treated},
                          {"contents_count", inj.contents.size()},
                          {"contents_file", inj.contents_file}});
  }
  j["injections"] = std::move(injections);
  j["survey"] = {{"every", cfg.survey.every}, {"question", cfg.survey.question}};
  j["metrics"] = {{"cascade_roots", cfg.metrics.cascade_roots},
                  {"horizon_minutes", cfg.metrics.horizon_minutes}};
  j["export_dir"] = cfg.export_dir;
  j["progress"] = cfg.progress;
  return j;
}

ValidationReport validate_run_config(RunConfig& cfg, bool probe_backend) {
  ValidationReport rep;
  rep.warnings = cfg.parse_warnings;
  auto err = [&](std::string m) { rep.errors.push_back(std::move(m)); };

  if (cfg.steps < 1) err("steps must be >= 1");
  if (cfg.workers < 1) err("workers must be >= 1");
  if (cfg.channel_retry_bound < 1) err("channel_retry_bound must be >= 1");
  if (cfg.clock.minutes_per_step <= 0) err("clock.minutes_per_step must be > 0");
  if (cfg.clock.mode == TimeMode::linear && cfg.clock.scale_factor <= 0)
    err("clock.scale_factor must be > 0");
  if (cfg.rec.feed_sample_size < 1) err("rec.feed_sample_size must be >= 1");

  if (cfg.subset.empty()) {
    err("action subset is empty");
  } else if (!cfg.subset.contains(ActionKind::do_nothing)) {
    cfg.subset.add(ActionKind::do_nothing);
    rep.warnings.push_back("subset lacked do_nothing; added it");
  }
  if (cfg.scenario != Scenario::custom && cfg.subset_overridden &&
      !set_equal(cfg.subset, preset_run_config(cfg.scenario).subset)) {
    err(std::string("subset conflicts with the ") + scenario_name(cfg.scenario) +
        " preset; use scenario custom to change it");
  }

  if (cfg.activation.rate < 0 || cfg.activation.rate > 1)
    err("activation.rate must lie in [0, 1]");
  if (cfg.activation.core_rate > 1) err("activation.core_rate must be <= 1");
  if (!cfg.activation.csv_path.empty() &&
      !std::filesystem::exists(cfg.activation.csv_path))
    err("activation csv missing: " + cfg.activation.csv_path);

  if (!cfg.population.import_dir.empty()) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(cfg.population.import_dir)) {
      err("population import dir missing: " + cfg.population.import_dir);
    } else if (!fs::exists(fs::path(cfg.population.import_dir) / "user.csv") &&
               !fs::exists(fs::path(cfg.population.import_dir) / "user.jsonl")) {
      err("population user table missing: " +
          (fs::path(cfg.population.import_dir) / "user.{csv,jsonl}").string());
    }
  } else {
    if (cfg.population.agents < 1)
      err("population needs an import dir or a positive agent count");
    if (cfg.population.cores < 0 || cfg.population.cores > cfg.population.agents)
      err("population.cores must lie in [0, agents]");
    if (cfg.population.p_follow_core < 0 || cfg.population.p_follow_core > 1)
      err("population.p_follow_core must lie in [0, 1]");
  }

  if (cfg.backend.kind == "remote") {
    if (cfg.backend.remote.host.empty()) err("backend.host is empty");
    if (cfg.backend.remote.port < 1 || cfg.backend.remote.port > 65535)
      err("backend.port out of range");
    if (cfg.backend.remote.timeout_ms < 1) err("backend.timeout_ms must be >= 1");
    if (cfg.backend.remote.max_retries < 1) err("backend.max_retries must be >= 1");
    if (probe_backend && rep.errors.empty()) {
      httplib::Client cli(cfg.backend.remote.host, cfg.backend.remote.port);
      cli.set_connection_timeout(0, 2000 * 1000);
      auto res = cli.Get("/");
      if (!res)
        err("remote backend unreachable at " + cfg.backend.remote.host + ":" +
            std::to_string(cfg.backend.remote.port));
    }
  } else if (cfg.backend.kind == "scripted") {
    for (const PolicyRule& r : cfg.backend.policy.rules)
      if (r.prob < 0 || r.prob > 1) err("backend rule prob must lie in [0, 1]");
  } else {
    err("backend.kind must be scripted or remote");
  }

  for (std::size_t i = 0; i < cfg.injections.size(); ++i) {
    const InjectionSchedule& inj = cfg.injections[i];
    const std::string tag = "injections[" + std::to_string(i) + "]";
    if (inj.start_step < 0) err(tag + ".start_step must be >= 0");
    if (inj.every < 1) err(tag + ".every must be >= 1");
    if (inj.per_step < 0) err(tag + ".per_step must be >= 0");
    if (inj.user_id < 0) err(tag + ".user_id must be >= 0");
    if (inj.contents.empty() && inj.contents_file.empty())
      err(tag + " has no contents and no contents_file");
    if (!inj.contents_file.empty() &&
        !std::filesystem::exists(inj.contents_file))
      err(tag + " contents file missing: " + inj.contents_file);
  }

  if (cfg.survey.every < 0) err("survey.every must be >= 0");
  if (cfg.survey.every > 0 && cfg.survey.question.empty())
    err("survey.question is empty");
  if (cfg.metrics.horizon_minutes < -1) err("metrics.horizon_minutes must be >= -1");
  if (cfg.export_dir.empty()) err("export_dir is empty");

  return rep;
}

}  // namespace socsim
