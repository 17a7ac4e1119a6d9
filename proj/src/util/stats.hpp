#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace socsim {

inline double mean_of(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double sample_stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

struct MeanCi {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
};

// Normal-approximation confidence interval around the sample mean.
inline MeanCi normal_ci(std::span<const double> xs, double z = 1.959963984540054) {
  MeanCi r;
  r.n = xs.size();
  r.mean = mean_of(xs);
  if (xs.size() < 2) {
    r.lo = r.hi = r.mean;
    return r;
  }
  double half = z * sample_stddev(xs) / std::sqrt(static_cast<double>(xs.size()));
  r.lo = r.mean - half;
  r.hi = r.mean + half;
  return r;
}

}  // namespace socsim
