#include "fairsched/frontier.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "fairsched/errors.hpp"
#include "fairsched/metrics.hpp"

namespace fairsched {

std::vector<FrontierPoint> frontier_points(const Instance& inst) {
  const Instance canon = canonicalize(inst);
  if (!(canon.total() > 0.0)) {
    throw DegenerateInstanceError("frontier needs positive total duration");
  }
  const int n = static_cast<int>(canon.size());
  std::vector<FrontierPoint> points;
  points.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const EvaluationReport report = evaluate(canon, MechanismSpec::pareto(k));
    FrontierPoint p;
    p.k = k;
    p.epsilon_k = report.epsilon_k;
    p.fairness_ratio = report.fairness_ratio;
    p.social_cost = report.social_cost;
    p.efficacy_ratio = report.efficacy_ratio;
    points.push_back(p);
  }
  std::vector<std::pair<double, double>> coords;
  coords.reserve(points.size());
  for (const auto& p : points) coords.emplace_back(p.fairness_ratio, p.social_cost);
  const auto flags = dominance_filter(coords);
  for (std::size_t i = 0; i < points.size(); ++i) points[i].on_frontier = flags[i];
  return points;
}

std::vector<bool> dominance_filter(
    const std::vector<std::pair<double, double>>& points) {
  const std::size_t n = points.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].first != points[b].first) return points[a].first < points[b].first;
    return points[a].second < points[b].second;
  });

  std::vector<bool> keep(n, true);
  // Sweep by ascending fairness. A point is dominated by anything with
  // strictly smaller fairness and cost <=, or equal fairness and cost <.
  double best_cost_strictly_below = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && points[order[j]].first == points[order[i]].first) ++j;
    const double tier_min_cost = points[order[i]].second;  // sorted within tier
    for (std::size_t t = i; t < j; ++t) {
      const double cost = points[order[t]].second;
      if (best_cost_strictly_below <= cost || tier_min_cost < cost) {
        keep[order[t]] = false;
      }
    }
    best_cost_strictly_below = std::min(best_cost_strictly_below, tier_min_cost);
    i = j;
  }
  return keep;
}

std::vector<int> class_boundary_ks(const Instance& inst) {
  const Instance canon = canonicalize(inst);
  const int n = static_cast<int>(canon.size());
  std::vector<int> ks{0};
  for (int k = 1; k < n; ++k) {
    if (canon.job(static_cast<std::size_t>(k - 1)).size <
        canon.job(static_cast<std::size_t>(k)).size) {
      ks.push_back(k);
    }
  }
  return ks;
}

namespace {

std::string sig12(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

}  // namespace

void export_frontier_csv(const std::vector<FrontierPoint>& points,
                         std::ostream& out) {
  if (points.empty()) throw ParameterError("no frontier points to export");
  out << "k,epsilon,fairness_ratio,social_cost,efficacy_ratio,on_frontier\n";
  for (const auto& p : points) {
    out << p.k << ',' << sig12(p.epsilon_k) << ',' << sig12(p.fairness_ratio)
        << ',' << sig12(p.social_cost) << ',' << sig12(p.efficacy_ratio) << ','
        << (p.on_frontier ? "true" : "false") << '\n';
  }
  if (!out) throw IoError("failed writing frontier CSV");
}

std::string frontier_csv(const std::vector<FrontierPoint>& points) {
  std::ostringstream out;
  export_frontier_csv(points, out);
  return out.str();
}

}  // namespace fairsched
