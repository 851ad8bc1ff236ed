#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fairsched/instance.hpp"
#include "fairsched/metrics.hpp"
#include "fairsched/multimachine.hpp"
#include "fairsched/schedule.hpp"

namespace fairsched {

struct OracleConfig {
  std::int64_t max_exact_outcomes = 10'000'000;
  int mc_samples = 10'000;
  std::uint64_t seed = 0;
};

// Average completion per job over every group-consistent permutation, each
// equally likely. Aligned with inst.jobs() order. Infeasible when the
// product of group factorials exceeds the cap.
std::vector<double> exact_completions_by_enumeration(
    const Instance& inst, const PrioritySchedule& sched,
    const OracleConfig& cfg = {});

struct McResult {
  std::vector<double> mean;
  std::vector<double> std_error;
  int samples = 0;
};

// Sample mean of completions over cfg.mc_samples seeded order draws.
McResult mc_completions(const Instance& inst, const PrioritySchedule& sched,
                        const OracleConfig& cfg);

// One enumerated priority mechanism with its exact evaluation.
struct MechanismPoint {
  PrioritySchedule schedule;
  double cost = 0.0;
  double fairness_ratio = 0.0;
};

// Visits every ordered partition of the jobs into priority groups. The
// count grows as the ordered Bell numbers, so n is capped at 9.
void enumerate_priority_mechanisms(
    const Instance& inst, const std::function<void(const MechanismPoint&)>& visit);

// Ordered Bell number (count of ordered set partitions of n elements).
std::int64_t ordered_partition_count(int n);

// Minimum social cost over every job-to-machine assignment, each machine
// ordered size-ascending. Enumerates m^n assignments.
double brute_force_optimal_multi(const Instance& inst, int m,
                                 const OracleConfig& cfg = {});

// How each machine's realized job multiset is evaluated inside one matching
// outcome: the group closed form, or the permutation-enumeration oracle.
enum class PerMachineEval { closed_form, enumeration };

struct MultiExactResult {
  // Aligned with bs.padded order; dummies included.
  std::vector<double> completions;
  // Expected total size sharing the job's machine, own block excluded.
  std::vector<double> foreign_load;
  std::int64_t outcomes = 0;
};

// Exact expectation over all (m!)^tau block matchings of the per-machine
// mechanism rule.
MultiExactResult exact_multi_evaluation(const BlockStructure& bs,
                                        const MechanismSpec& per_machine,
                                        const OracleConfig& cfg,
                                        PerMachineEval eval = PerMachineEval::closed_form);
MultiExactResult exact_multi_evaluation(const Instance& inst, int m,
                                        const MechanismSpec& per_machine,
                                        const OracleConfig& cfg,
                                        PerMachineEval eval = PerMachineEval::closed_form);

// Monte Carlo estimate of the same expectation. When sample_orders is true
// the within-machine order is drawn as well (fully independent of the group
// closed form); otherwise each sampled matching uses the closed form.
McResult mc_multi_evaluation(const BlockStructure& bs,
                             const MechanismSpec& per_machine,
                             const OracleConfig& cfg,
                             bool sample_orders = false);

}  // namespace fairsched
