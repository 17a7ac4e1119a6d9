#include "timing/activity.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "util/csv.hpp"

namespace socsim {

ActivityProfile ActivityProfile::constant(double v) {
  ActivityProfile prof;
  prof.p.fill(v);
  return prof;
}

bool activation_draw(const ActivityProfile& prof, int hour, Rng& rng) {
  return rng.bernoulli(prof.p[static_cast<std::size_t>(hour) % 24]);
}

std::vector<ActivityProfile> profiles_from_counts(
    const std::vector<std::array<std::uint64_t, 24>>& counts) {
  std::array<std::uint64_t, 24> col_max{};
  for (const auto& row : counts)
    for (int h = 0; h < 24; ++h) col_max[h] = std::max(col_max[h], row[h]);

  std::vector<ActivityProfile> out;
  out.reserve(counts.size());
  for (const auto& row : counts) {
    ActivityProfile prof;
    for (int h = 0; h < 24; ++h) {
      prof.p[h] = col_max[h] == 0 ? 0.0
                                  : static_cast<double>(row[h]) /
                                        static_cast<double>(col_max[h]);
    }
    out.push_back(prof);
  }
  return out;
}

std::vector<ActivityProfile> profiles_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open activity file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto rows = parse_csv(buf.str());

  std::vector<std::array<std::uint64_t, 24>> counts;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.empty() || (row.size() == 1 && row[0].empty())) continue;
    if (i == 0 && !row.empty() &&
        !row[0].empty() && !std::isdigit(static_cast<unsigned char>(row[0][0])))
      continue;  // header
    if (row.size() < 25)
      throw std::runtime_error("activity row needs user_id plus 24 hours");
    std::array<std::uint64_t, 24> c{};
    for (int h = 0; h < 24; ++h) c[h] = std::stoull(row[h + 1]);
    counts.push_back(c);
  }
  return profiles_from_counts(counts);
}

}  // namespace socsim
