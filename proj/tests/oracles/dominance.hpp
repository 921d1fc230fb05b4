#pragma once

// Pairwise non-dominance check and plain re-summation helpers.

#include <vector>

namespace oracle {

struct Point2 {
  double f1;
  double f2;
};

inline bool dominates(const Point2& a, const Point2& b) {
  return a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2);
}

/// Indices of the points no other point dominates. Duplicates all survive.
inline std::vector<std::size_t> non_dominated(const std::vector<Point2>& pts) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size() && !dominated; ++j)
      dominated = j != i && dominates(pts[j], pts[i]);
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

/// Energy purchase re-summed slot by slot in long double.
inline double purchase(const std::vector<double>& price, const std::vector<double>& grid_kw,
                       double dt) {
  long double total = 0.0L;
  for (std::size_t t = 0; t < price.size(); ++t) {
    const long double draw = grid_kw[t] > 0 ? grid_kw[t] : 0.0;
    total += static_cast<long double>(price[t]) * draw * dt;
  }
  return static_cast<double>(total);
}

}  // namespace oracle
