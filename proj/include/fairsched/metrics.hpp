#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairsched/instance.hpp"
#include "fairsched/schedule.hpp"

#include "json.hpp"

namespace fairsched {

// Which mechanism to run: the deterministic optimum, the uniformly random
// order, a fixed priority split, or the best split for a fairness target.
struct MechanismSpec {
  enum class Kind { smith, random, pareto, target };

  Kind kind = Kind::smith;
  int k = 0;           // pareto only
  double eps = 0.0;    // target only

  static MechanismSpec smith() { return {Kind::smith, 0, 0.0}; }
  static MechanismSpec random() { return {Kind::random, 0, 0.0}; }
  static MechanismSpec pareto(int k) { return {Kind::pareto, k, 0.0}; }
  static MechanismSpec target(double eps) { return {Kind::target, 0, eps}; }

  // "smith" | "random" | "pareto:K" | "target:EPS"
  static MechanismSpec parse(std::string_view text);
  std::string to_string() const;
};

// Resolves the spec against a concrete instance. For `target`, picks the
// largest k whose prefix-mass ratio stays within eps.
PrioritySchedule resolve_schedule(const Instance& inst, const MechanismSpec& spec);
int resolve_k(const Instance& inst, const MechanismSpec& spec);

// Per-job ratio of expected completion to the fair completion.
std::vector<double> per_job_fairness(std::span<const double> completions,
                                     std::span<const double> fair_completions);
std::vector<double> per_job_fairness(const Instance& inst,
                                     std::span<const double> completions);

// Worst per-job fairness; a mechanism is eps-fair on the instance iff this
// is at most 1 + eps.
double fairness_ratio(std::span<const double> fairness);

// social_cost / optimal_cost for this instance.
double efficacy_ratio(const Instance& inst, double social_cost);

// Worst-case efficacy ratio of the mechanism over the supplied family.
double price_of_fairness(const MechanismSpec& spec,
                         std::span<const Instance> instances);

// Guaranteed efficacy window at fairness level eps > 0. The lower bound is
// reported clamped to 1 (a ratio below 1 is vacuous); bound_lower_raw gives
// the unclamped value.
double bound_upper(double eps);
double bound_lower(double eps);
double bound_lower_raw(double eps);

// Worst-case-preserving simplification for the k-th priority split: rescale
// so the smallest final-group job has size 1, zero out every job below that
// unit, and merge all jobs above it into a single large job holding their
// combined mass. Never decreases the efficacy ratio of the k-th schedule.
struct ReducedInstance {
  Instance instance;
  double scale = 1.0;  // original size units per reduced unit
};
ReducedInstance reduce_instance(const Instance& inst, int k);

struct PerJobReport {
  int id = 0;
  double size = 0.0;
  double expected_completion = 0.0;
  double fair_completion = 0.0;
  double fairness = 0.0;
  double std_error = 0.0;  // Monte Carlo evaluations only
};

struct EvaluationReport {
  std::string mechanism;
  int k = 0;
  double epsilon_k = 0.0;
  std::vector<PerJobReport> per_job;
  double fairness_ratio = 0.0;
  double social_cost = 0.0;
  double optimal_cost = 0.0;
  double fairest_cost = 0.0;
  double efficacy_ratio = 0.0;
  // Bounds evaluated at the mechanism's fairness level; NaN when that level
  // is zero (serialized as null).
  double bound_upper = 0.0;
  double bound_lower = 0.0;
  double bound_lower_raw = 0.0;

  nlohmann::ordered_json to_json() const;
};

// Full single-machine evaluation: resolves the mechanism, computes per-job
// completions, fairness, costs, ratios and bound values.
EvaluationReport evaluate(const Instance& inst, const MechanismSpec& spec);

}  // namespace fairsched
