#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "specgraph/error.hpp"

namespace specgraph {

/// sup over x in xs of the distance from x to the nearest point of ys.
inline double directed_hausdorff(std::span<const double> xs, std::span<const double> ys) {
  if (xs.empty() || ys.empty()) throw Error(Errc::empty_spectrum, "Hausdorff distance needs nonempty sets");
  std::vector<double> sorted(ys.begin(), ys.end());
  std::sort(sorted.begin(), sorted.end());
  double worst = 0.0;
  for (double x : xs) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    double d = INFINITY;
    if (it != sorted.end()) d = *it - x;
    if (it != sorted.begin()) d = std::min(d, x - *std::prev(it));
    worst = std::max(worst, d);
  }
  return worst;
}

inline double hausdorff_distance(std::span<const double> xs, std::span<const double> ys) {
  return std::max(directed_hausdorff(xs, ys), directed_hausdorff(ys, xs));
}

inline std::vector<double> reflect_at_one(std::span<const double> xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(2.0 - x);
  return out;
}

struct Asymmetry {
  double value = 0.0;
  /// Full two-sided distance d_H(σ, R(σ)).
  double symmetric = 0.0;
  /// One-sided route: sup over reflected points of the distance to σ.
  double one_sided = 0.0;
};

/// d_H(σ, R(σ)) with R(x) = 2 - x, by both routes. The routes agree
/// because R is an isometry and an involution.
inline Asymmetry hausdorff_asymmetry(std::span<const double> spectrum) {
  if (spectrum.empty()) throw Error(Errc::empty_spectrum, "asymmetry of an empty spectrum");
  const std::vector<double> reflected = reflect_at_one(spectrum);
  Asymmetry a;
  a.symmetric = hausdorff_distance(spectrum, reflected);
  a.one_sided = directed_hausdorff(reflected, spectrum);
  a.value = a.symmetric;
  return a;
}

}  // namespace specgraph
