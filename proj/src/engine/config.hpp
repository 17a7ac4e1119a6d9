#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "actions/kinds.hpp"
#include "agent/agent.hpp"
#include "agent/backend.hpp"
#include "json.hpp"
#include "recsys/recommender.hpp"
#include "timing/clock.hpp"

namespace socsim {

enum class Scenario { info_spread, polarization, herd_reddit, misinfo_x, custom };
enum class Platform { x, reddit };

const char* scenario_name(Scenario s);
std::optional<Scenario> scenario_from_name(std::string_view name);
const char* platform_name(Platform p);
std::optional<Platform> platform_from_name(std::string_view name);

// Hourly activation. A csv of per-user hourly counts overrides the flat
// rates; core_rate < 0 means cores use the ordinary rate.
struct ActivationConfig {
  double rate = 1.0;
  double core_rate = -1.0;
  std::string csv_path;
};

struct PopulationConfig {
  // Import wins when set: a directory written by the table exporter.
  std::string import_dir;
  int agents = 0;
  int cores = 0;
  double p_follow_core = 0.1;
};

// Drip-feed of posts by a controlled user. Fires at the end of every matching
// step; start_step 0 fires once before the first step so the first feeds are
// not empty. Contents are consumed in order until the list runs dry.
struct InjectionSchedule {
  std::int64_t user_id = 0;  // 0 = the auto-registered controlled user
  int start_step = 0;
  int every = 1;
  int per_step = 1;  // 0 = auto, 3 posts per 10 agents
  bool treated = false;  // pre-partition contents; up gets a like, down a dislike
  std::vector<std::string> contents;
  std::string contents_file;  // one item per line, loaded at run start
};

struct SurveySchedule {
  int every = 0;  // 0 = no surveys
  std::string question;
};

struct MetricsConfig {
  std::vector<std::int64_t> cascade_roots;  // empty = every reposted root
  int horizon_minutes = -1;                 // -1 = steps * minutes_per_step - 1
};

struct BackendChoice {
  std::string kind = "scripted";  // scripted | remote
  ScriptedPolicy policy;
  std::optional<std::uint64_t> scripted_seed;  // default: derived from run seed
  RemoteBackendConfig remote;
};

struct RunConfig {
  Scenario scenario = Scenario::custom;
  Platform platform = Platform::x;
  std::uint64_t seed = 1;
  int steps = 1;
  ActionSet subset = action_set_all();
  std::string subset_label = "full";
  bool subset_overridden = false;  // an explicit subset key under a preset
  RecConfig rec;        // cache_size 0 = auto, half the agent count
  ClockConfig clock;
  ActivationConfig activation;
  AgentRuntimeConfig agent;
  // Off: feeds come from the pre-step cache, steps parallelize. On: agents
  // run serially and the cache refreshes before every agent, so earlier
  // same-step posts become visible. Small runs only.
  bool same_step_visibility = false;
  int workers = 1;
  int channel_retry_bound = 3;
  BackendChoice backend;
  PopulationConfig population;
  std::vector<InjectionSchedule> injections;
  SurveySchedule survey;
  MetricsConfig metrics;
  std::string export_dir = "export";
  bool progress = true;
  std::vector<std::string> parse_warnings;  // unknown keys, carried to validate
};

// Paper-protocol defaults per scenario; custom = plain defaults.
RunConfig preset_run_config(Scenario s);

// Overlay of a JSON object onto the scenario preset it names. False + *error
// on malformed input. Relative paths inside the config stay as written.
bool parse_run_config(const nlohmann::json& j, RunConfig* out, std::string* error);

// Reads a JSON config file and resolves its relative paths (population dir,
// activation csv, injection contents) against the file's directory.
bool load_run_config(const std::string& path, RunConfig* out, std::string* error);

// Resolved echo used by the run manifest; sorted keys, bulky injection
// contents reduced to counts.
nlohmann::json run_config_json(const RunConfig& cfg);

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

// Static checks; auto-fixes a custom subset that lacks do_nothing (with a
// warning). probe_backend additionally requires a remote backend to answer
// HTTP at all.
ValidationReport validate_run_config(RunConfig& cfg, bool probe_backend = false);

}  // namespace socsim
