#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "agent/backend.hpp"
#include "store/store.hpp"
#include "util/rng.hpp"

namespace socsim {

// Categorical distribution over named labels.
struct Distribution {
  std::vector<std::string> labels;
  std::vector<double> weights;

  // Labels and weights same nonempty size, weights >= 0, sum within 1e-9 of 1.
  bool validate(std::string* error = nullptr) const;
  std::size_t sample(Rng& rng) const;

  static Distribution uniform(std::vector<std::string> labels);
  static Distribution point(std::string label);
};

struct DemographicSpec {
  Distribution age;
  Distribution gender;
  Distribution mbti;        // 16 categories
  Distribution profession;  // 13 categories
  Distribution topic;       // interest categories: 9 x-style, 7 reddit-style

  bool validate(std::string* error = nullptr) const;

  // Default tables. The reddit topic names are fixed by protocol; the other
  // label sets stand in for platform statistics and are config-replaceable.
  static DemographicSpec x_defaults();
  static DemographicSpec reddit_defaults();
};

struct DemographicRow {
  std::string age;
  std::string gender;
  std::string mbti;
  std::string profession;
};

// n iid rows, one independent draw per dimension. Throws
// std::invalid_argument when n is zero or the spec fails validation.
std::vector<DemographicRow> sample_population(const DemographicSpec& spec,
                                              std::size_t n, Rng& rng);

struct GeneratedProfile {
  std::string realname;
  std::string username;
  std::string bio;
  std::string persona;
  // Two interest draws with replacement; they may coincide.
  std::array<std::string, 2> topics;
  bool is_core = false;
};

// Template generator: fills every field deterministically from the row and a
// per-row seed stream, so row order and parallel generation cannot change the
// output. Usernames are unique by construction (row index suffix).
std::vector<GeneratedProfile> generate_profiles(
    const std::vector<DemographicRow>& rows, const Distribution& topics,
    std::uint64_t seed);

struct RemoteGenerationResult {
  std::vector<GeneratedProfile> profiles;
  // Rows whose backend response did not parse; those hold template output.
  std::vector<std::size_t> fallback_rows;
};

// Profile-prompt generation through a decision backend. Topic draws reuse the
// template streams, so a fallback row equals the template generator's row.
RemoteGenerationResult generate_profiles_remote(
    const std::vector<DemographicRow>& rows, const Distribution& topics,
    std::uint64_t seed, DecisionBackend& generator);

struct NetworkSpec {
  // Follow chance per (ordinary user, topic, matching core). The protocol
  // text states both 0.1 and 0.2; 0.1 is the documented experiment value.
  double p_follow_core = 0.1;

  bool validate(std::string* error = nullptr) const;
};

struct FollowEdge {
  std::size_t ordinary_index;
  std::size_t core_index;
};

// Core-ordinary attention tree: for each ordinary user and each of their two
// topics, every core sharing that topic is followed with p_follow_core.
// Deterministic under seed, no duplicate edges, ordinary users gain no
// followers here. Throws std::invalid_argument on an invalid spec.
std::vector<FollowEdge> build_network(
    const std::vector<GeneratedProfile>& ordinary,
    const std::vector<GeneratedProfile>& cores, const NetworkSpec& spec,
    std::uint64_t seed);

struct PopulationIds {
  std::int64_t first_core_user = 0;      // 0 when no cores
  std::int64_t first_ordinary_user = 0;  // 0 when no ordinary users
};

// Registers cores then ordinary users (agent ids in that order) and applies
// the follow edges; the standard table export then matches the import
// schema. Throws std::runtime_error when a registration is rejected.
PopulationIds populate_store(Store& store,
                             const std::vector<GeneratedProfile>& cores,
                             const std::vector<GeneratedProfile>& ordinary,
                             const std::vector<FollowEdge>& edges, Now now);

// Generation prompt templates for remote mode, with {slot} placeholders.
std::string_view profile_prompt_template();         // x-style, one step
std::string_view topic_prompt_template();           // reddit step 2
std::string_view reddit_profile_prompt_template();  // reddit step 3
std::string_view post_from_comment_prompt_template();

// Replaces each {key} with its value; unknown braces are left alone.
std::string fill_prompt(
    std::string_view prompt_template,
    const std::vector<std::pair<std::string, std::string>>& slots);

}  // namespace socsim
