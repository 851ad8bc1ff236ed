#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fairsched/instance.hpp"

namespace fairsched {

// Fairness/cost trade-off of one priority split. on_frontier is true iff no
// other split is at least as good on both coordinates and better on one.
struct FrontierPoint {
  int k = 0;
  double epsilon_k = 0.0;
  double fairness_ratio = 0.0;
  double social_cost = 0.0;
  double efficacy_ratio = 0.0;
  bool on_frontier = false;
};

// One point per k in 0..n-1, dominance flags filled in.
std::vector<FrontierPoint> frontier_points(const Instance& inst);

// Non-domination flags for (fairness, cost) pairs under weak dominance with
// at least one strict coordinate. Exact ties on both coordinates are kept.
std::vector<bool> dominance_filter(
    const std::vector<std::pair<double, double>>& points);

// k values that never split jobs of equal size across the singleton prefix
// and the final group: 0 plus every position where the size strictly grows.
std::vector<int> class_boundary_ks(const Instance& inst);

// CSV with header k,epsilon,fairness_ratio,social_cost,efficacy_ratio,
// on_frontier; one row per k ascending, 12 significant digits.
void export_frontier_csv(const std::vector<FrontierPoint>& points,
                         std::ostream& out);
std::string frontier_csv(const std::vector<FrontierPoint>& points);

}  // namespace fairsched
