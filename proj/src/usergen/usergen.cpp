#include "usergen/usergen.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

#include "util/hash.hpp"
#include "util/text.hpp"

namespace socsim {
namespace {

constexpr std::uint64_t kProfileStream = 0x70726f66696c65;
constexpr std::uint64_t kNetworkStream = 0x6e6574776f726b;

constexpr const char* kFirstNames[] = {
    "Alex",  "Bailey", "Carmen", "Dana",  "Eli",    "Frida", "Gabe",
    "Hana",  "Iris",   "Jordan", "Kiran", "Lena",   "Marco", "Noor",
    "Omar",  "Priya",  "Quinn",  "Rosa",  "Sam",    "Tara",  "Uli",
    "Vera",  "Wes",    "Ximena", "Yuki",  "Zane"};

constexpr const char* kLastNames[] = {
    "Abbott",  "Bishop", "Calder", "Doyle",  "Eaton",  "Farrell", "Grant",
    "Holt",    "Ibarra", "Jensen", "Keane",  "Lowell", "Mercer",  "Navarro",
    "Osman",   "Petrov", "Quill",  "Reyes",  "Sato",   "Tran",    "Ueda",
    "Vargas",  "Whitby", "Xu",     "Yates",  "Zeller"};

const std::vector<std::string>& mbti_labels() {
  static const std::vector<std::string> labels{
      "INTJ", "INTP", "ENTJ", "ENTP", "INFJ", "INFP", "ENFJ", "ENFP",
      "ISTJ", "ISFJ", "ESTJ", "ESFJ", "ISTP", "ISFP", "ESTP", "ESFP"};
  return labels;
}

const std::vector<std::string>& profession_labels() {
  static const std::vector<std::string> labels{
      "Agriculture",
      "Arts & Entertainment",
      "Business & Management",
      "Construction & Trades",
      "Education",
      "Engineering",
      "Finance",
      "Government & Public Service",
      "Healthcare",
      "Hospitality & Service",
      "Information Technology",
      "Retail & Sales",
      "Student or Unemployed"};
  return labels;
}

GeneratedProfile template_profile(const DemographicRow& row,
                                  const Distribution& topics,
                                  std::uint64_t seed, std::size_t index) {
  Rng rng(mix_seed(mix_seed(seed, kProfileStream), index));
  GeneratedProfile p;
  p.topics[0] = topics.labels[topics.sample(rng)];
  p.topics[1] = topics.labels[topics.sample(rng)];
  const char* first =
      kFirstNames[rng.next_u64() % (sizeof kFirstNames / sizeof *kFirstNames)];
  const char* last =
      kLastNames[rng.next_u64() % (sizeof kLastNames / sizeof *kLastNames)];
  p.realname = std::string(first) + " " + last;
  p.username = to_lower_ascii(std::string(1, first[0]) + last) + "_" +
               std::to_string(index);
  p.bio = row.profession + " | " + row.mbti + " | " + p.topics[0] + " and " +
          p.topics[1] + ".";
  p.persona = p.realname + " is a " + row.age + " " + row.gender + " working in " +
              row.profession + ", with an " + row.mbti +
              " personality. They follow " + p.topics[0] + " and " + p.topics[1] +
              " closely, share opinions directly, and engage most with posts "
              "that touch their interests.";
  return p;
}

// Usernames must register cleanly; collisions get an index suffix.
void dedupe_username(GeneratedProfile* p, std::size_t index,
                     std::unordered_set<std::string>* used) {
  if (!used->insert(p->username).second) {
    p->username += "_" + std::to_string(index);
    used->insert(p->username);
  }
}

constexpr std::string_view kProfilePrompt =
    R"__(Please generate a social media user profile based on the provided personal information, including a realname, username, user bio, and a new user persona. The focus should be on creating a fictional background story and detailed interests based on their hobbies and profession.
Input:
    age: {age}
    gender: {gender}
    mbti: {mbti}
    profession: {profession}
    interested topics: {topics}
Output:
{
    "realname": str, realname,
    "username": str, username,
    "bio": str, bio,
    "persona": str, user persona,
}
Ensure the output can be directly parsed to **JSON**, do not output anything else.)__";

constexpr std::string_view kTopicPrompt =
    R"__(Based on the provided personality traits, age, gender and profession, please select 2-3 topics of interest from the given list.
    Input:
        Personality Traits: {mbti}
        Age: {age}
        Gender: {gender}
        Country: {country}
        Profession: {profession}
    Available Topics:
        1. Economics: The study and management of production, distribution, and consumption of goods and services. Economics focuses on how individuals, businesses, governments, and nations make choices about allocating resources to satisfy their wants and needs, and tries to determine how these groups should organize and coordinate efforts to achieve maximum output.
        2. IT (Information Technology): The use of computers, networking, and other physical devices, infrastructure, and processes to create, process, store, secure, and exchange all forms of electronic data. IT is commonly used within the context of business operations as opposed to personal or entertainment technologies.
        3. Culture & Society: The way of life for an entire society, including codes of manners, dress, language, religion, rituals, norms of behavior, and systems of belief. This topic explores how cultural expressions and societal structures influence human behavior, relationships, and social norms.
        4. General News: A broad category that includes current events, happenings, and trends across a wide range of areas such as politics, business, science, technology, and entertainment. General news provides a comprehensive overview of the latest developments affecting the world at large.
        5. Politics: The activities associated with the governance of a country or other area, especially the debate or conflict among individuals or parties having or hoping to achieve power. Politics is often a battle over control of resources, policy decisions, and the direction of societal norms.
        6. Business: The practice of making one's living through commerce, trade, or services. This topic encompasses the entrepreneurial, managerial, and administrative processes involved in starting, managing, and growing a business entity.
        7. Fun: Activities or ideas that are light-hearted or amusing. This topic covers a wide range of entertainment choices and leisure activities that bring joy, laughter, and enjoyment to individuals and groups.
    Output:
    [list of topic numbers]
    Ensure your output could be parsed to **list**, don't output anything else.)__";

constexpr std::string_view kRedditProfilePrompt =
    R"__(Please generate a social media user profile based on the provided personal information, including a real name, username, user bio, and a new user persona. The focus should be on creating a fictional background story and detailed interests based on their hobbies and profession.
    Input:
        age: {age}
        gender: {gender}
        mbti: {mbti}
        profession: {profession}
        interested topics: {topics}
    Output:
    {
        "realname": "str",
        "username": "str",
        "bio": "str",
        "persona": "str"
    }
    Ensure the output can be directly parsed to **JSON**, do not output anything else.)__";

constexpr std::string_view kPostFromCommentPrompt =
    R"__(Please generate a contextual and smooth post for this comment
and notice that the comments are correct: '{comment}'. The
response should be approximately 300 characters long and
provide relevant information or analysis. Be careful to
output the content of the post directly, and be aware that
you don't see comments when you post. And you don't need to
prefix something like: 'Here is your generated post:\n\n\')__";

}  // namespace

bool Distribution::validate(std::string* error) const {
  auto fail = [&](const char* msg) {
    if (error) *error = msg;
    return false;
  };
  if (labels.empty()) return fail("distribution has no categories");
  if (labels.size() != weights.size())
    return fail("distribution labels and weights differ in size");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) return fail("distribution weight is negative");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-9) return fail("distribution does not sum to 1");
  return true;
}

std::size_t Distribution::sample(Rng& rng) const {
  const double u = rng.next_u01();
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

Distribution Distribution::uniform(std::vector<std::string> labels) {
  Distribution d;
  d.weights.assign(labels.size(), 1.0 / static_cast<double>(labels.size()));
  d.labels = std::move(labels);
  return d;
}

Distribution Distribution::point(std::string label) {
  Distribution d;
  d.labels.push_back(std::move(label));
  d.weights.push_back(1.0);
  return d;
}

bool DemographicSpec::validate(std::string* error) const {
  struct Named {
    const char* name;
    const Distribution* dist;
  };
  const Named dims[] = {{"age", &age},
                        {"gender", &gender},
                        {"mbti", &mbti},
                        {"profession", &profession},
                        {"topic", &topic}};
  for (const Named& d : dims) {
    std::string why;
    if (!d.dist->validate(&why)) {
      if (error) *error = std::string(d.name) + ": " + why;
      return false;
    }
  }
  return true;
}

DemographicSpec DemographicSpec::x_defaults() {
  DemographicSpec spec;
  spec.age.labels = {"13-17", "18-24", "25-34", "35-49", "50-64", "65+"};
  spec.age.weights = {0.07, 0.25, 0.30, 0.22, 0.11, 0.05};
  spec.gender.labels = {"male", "female", "other"};
  spec.gender.weights = {0.56, 0.42, 0.02};
  spec.mbti = Distribution::uniform(mbti_labels());
  spec.profession = Distribution::uniform(profession_labels());
  spec.topic = Distribution::uniform({"Entertainment", "Sports", "Politics",
                                      "Technology", "Business", "Health",
                                      "Education", "Science", "Lifestyle"});
  return spec;
}

DemographicSpec DemographicSpec::reddit_defaults() {
  DemographicSpec spec;
  spec.age.labels = {"18-24", "25-34", "35-49", "50-64", "65+"};
  spec.age.weights = {0.26, 0.36, 0.24, 0.10, 0.04};
  spec.gender.labels = {"male", "female", "other"};
  spec.gender.weights = {0.62, 0.36, 0.02};
  spec.mbti = Distribution::uniform(mbti_labels());
  spec.profession = Distribution::uniform(profession_labels());
  spec.topic = Distribution::uniform({"Business", "Culture & Society",
                                      "Economics", "Fun", "General News", "IT",
                                      "Politics"});
  return spec;
}

std::vector<DemographicRow> sample_population(const DemographicSpec& spec,
                                              std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("population size must be at least 1");
  std::string why;
  if (!spec.validate(&why))
    throw std::invalid_argument("demographic spec: " + why);
  std::vector<DemographicRow> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    DemographicRow row;
    row.age = spec.age.labels[spec.age.sample(rng)];
    row.gender = spec.gender.labels[spec.gender.sample(rng)];
    row.mbti = spec.mbti.labels[spec.mbti.sample(rng)];
    row.profession = spec.profession.labels[spec.profession.sample(rng)];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<GeneratedProfile> generate_profiles(
    const std::vector<DemographicRow>& rows, const Distribution& topics,
    std::uint64_t seed) {
  std::string why;
  if (!topics.validate(&why))
    throw std::invalid_argument("topic distribution: " + why);
  std::vector<GeneratedProfile> out;
  out.reserve(rows.size());
  std::unordered_set<std::string> used;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.push_back(template_profile(rows[i], topics, seed, i));
    dedupe_username(&out.back(), i, &used);
  }
  return out;
}

RemoteGenerationResult generate_profiles_remote(
    const std::vector<DemographicRow>& rows, const Distribution& topics,
    std::uint64_t seed, DecisionBackend& generator) {
  std::string why;
  if (!topics.validate(&why))
    throw std::invalid_argument("topic distribution: " + why);
  RemoteGenerationResult result;
  result.profiles.reserve(rows.size());
  std::unordered_set<std::string> used;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    GeneratedProfile profile = template_profile(rows[i], topics, seed, i);
    const std::string prompt = fill_prompt(
        kProfilePrompt, {{"age", rows[i].age},
                         {"gender", rows[i].gender},
                         {"mbti", rows[i].mbti},
                         {"profession", rows[i].profession},
                         {"topics", profile.topics[0] + ", " + profile.topics[1]}});
    bool ok = false;
    try {
      const nlohmann::json doc =
          nlohmann::json::parse(generator.decide(prompt), nullptr, false);
      if (doc.is_object() && doc.contains("realname") && doc["realname"].is_string() &&
          doc.contains("username") && doc["username"].is_string() &&
          doc.contains("bio") && doc["bio"].is_string() &&
          doc.contains("persona") && doc["persona"].is_string()) {
        profile.realname = doc["realname"].get<std::string>();
        profile.username = doc["username"].get<std::string>();
        profile.bio = doc["bio"].get<std::string>();
        profile.persona = doc["persona"].get<std::string>();
        ok = true;
      }
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok) result.fallback_rows.push_back(i);
    dedupe_username(&profile, i, &used);
    result.profiles.push_back(std::move(profile));
  }
  return result;
}

bool NetworkSpec::validate(std::string* error) const {
  if (p_follow_core >= 0.0 && p_follow_core <= 1.0) return true;
  if (error) *error = "p_follow_core outside [0, 1]";
  return false;
}

std::vector<FollowEdge> build_network(
    const std::vector<GeneratedProfile>& ordinary,
    const std::vector<GeneratedProfile>& cores, const NetworkSpec& spec,
    std::uint64_t seed) {
  std::string why;
  if (!spec.validate(&why)) throw std::invalid_argument("network spec: " + why);

  // Topic name -> core indices holding it (each core listed once per topic).
  std::unordered_map<std::string, std::vector<std::size_t>> by_topic;
  for (std::size_t c = 0; c < cores.size(); ++c) {
    by_topic[cores[c].topics[0]].push_back(c);
    if (cores[c].topics[1] != cores[c].topics[0])
      by_topic[cores[c].topics[1]].push_back(c);
  }

  std::vector<FollowEdge> edges;
  std::vector<bool> followed(cores.size());
  for (std::size_t i = 0; i < ordinary.size(); ++i) {
    Rng rng(mix_seed(mix_seed(seed, kNetworkStream), i));
    std::fill(followed.begin(), followed.end(), false);
    for (const std::string& topic : ordinary[i].topics) {
      auto it = by_topic.find(topic);
      if (it == by_topic.end()) continue;
      for (std::size_t c : it->second) {
        if (followed[c]) continue;
        if (rng.next_u01() < spec.p_follow_core) {
          followed[c] = true;
          edges.push_back({i, c});
        }
      }
    }
  }
  return edges;
}

PopulationIds populate_store(Store& store,
                             const std::vector<GeneratedProfile>& cores,
                             const std::vector<GeneratedProfile>& ordinary,
                             const std::vector<FollowEdge>& edges, Now now) {
  PopulationIds ids;
  std::int64_t agent_id = 0;
  auto add = [&](const GeneratedProfile& p) {
    const OpResult r =
        store.register_user(++agent_id, p.username, p.realname, p.bio, now);
    if (!r.ok())
      throw std::runtime_error("registration rejected for username " +
                               p.username + ": " + store_error_tag(r.err));
    return r.id;
  };
  for (std::size_t c = 0; c < cores.size(); ++c) {
    const std::int64_t id = add(cores[c]);
    if (c == 0) ids.first_core_user = id;
  }
  for (std::size_t i = 0; i < ordinary.size(); ++i) {
    const std::int64_t id = add(ordinary[i]);
    if (i == 0) ids.first_ordinary_user = id;
  }
  for (const FollowEdge& e : edges) {
    const std::int64_t follower =
        ids.first_ordinary_user + static_cast<std::int64_t>(e.ordinary_index);
    const std::int64_t followee =
        ids.first_core_user + static_cast<std::int64_t>(e.core_index);
    const OpResult r = store.upsert_edge(EdgeKind::follow, follower, followee, now);
    if (!r.ok())
      throw std::runtime_error(std::string("follow edge rejected: ") +
                               store_error_tag(r.err));
  }
  return ids;
}

std::string_view profile_prompt_template() { return kProfilePrompt; }
std::string_view topic_prompt_template() { return kTopicPrompt; }
std::string_view reddit_profile_prompt_template() { return kRedditProfilePrompt; }
std::string_view post_from_comment_prompt_template() {
  return kPostFromCommentPrompt;
}

std::string fill_prompt(
    std::string_view prompt_template,
    const std::vector<std::pair<std::string, std::string>>& slots) {
  std::string out(prompt_template);
  for (const auto& [key, value] : slots) {
    const std::string token = "{" + key + "}";
    for (std::size_t pos = out.find(token); pos != std::string::npos;
         pos = out.find(token, pos + value.size())) {
      out.replace(pos, token.size(), value);
    }
  }
  return out;
}

}  // namespace socsim
