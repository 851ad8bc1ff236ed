#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairsched/instance.hpp"
#include "fairsched/metrics.hpp"

namespace fairsched {

// Sorted, zero-padded decomposition of an instance into tau blocks of m
// jobs each. Block r holds the r-th run of m consecutive jobs of the padded
// canonical order, so block totals are non-decreasing. Dummy jobs carry
// ids <= 0 and size 0; they sort into the earliest blocks.
struct BlockStructure {
  int m = 1;
  int tau = 0;
  int dummy_count = 0;
  Instance padded;                       // canonical order, dummies first
  std::vector<std::vector<int>> blocks;  // job ids, one vector per block
  std::vector<double> block_totals;      // M_r

  static bool is_dummy(int id) { return id <= 0; }
};

BlockStructure pad_and_blocks(const Instance& inst, int m);

// sum over blocks of (tau - r + 1) * M_r; the minimum social cost over all
// assignments with per-machine size-ascending order.
double optimal_multi_cost(const BlockStructure& bs);

// Machine index per padded job, aligned with bs.padded job order.
struct MachineAssignment {
  std::vector<int> machine_of;
};

struct GreedyResult {
  BlockStructure blocks;
  MachineAssignment assignment;
  std::vector<double> completions;  // aligned with blocks.padded order
  double cost = 0.0;
};

// Deterministic optimum: jobs ascending, each placed on the least loaded
// machine (ties to the lowest machine index). Each block lands on m
// distinct machines; cost equals optimal_multi_cost.
GreedyResult greedy_assign(const Instance& inst, int m);

// Independent uniformly random block-to-machine bijections, one per block.
MachineAssignment sample_block_matching(const BlockStructure& bs,
                                        std::uint64_t seed);

// Expected completion under the fairest mechanism (random machine, random
// order): (D - size) / (2m) + size. Aligned with inst.jobs() order.
std::vector<double> multi_fairest_completions(const Instance& inst, int m);

// Priority schedule a per-machine mechanism rule induces on one machine's
// realized job multiset. For `target`, k is selected from that multiset, so
// it may differ across machines and across matching realizations. A machine
// holding only zero-size jobs falls back to the single random group.
PrioritySchedule per_machine_schedule(const Instance& machine_jobs,
                                      const MechanismSpec& spec);

// The fair multi-machine mechanism: a random block matching assigns jobs to
// machines, then each machine independently runs the largest priority split
// that keeps its own prefix-mass ratio within the fairness target.
struct MultiMechanism {
  int m = 1;
  double target_eps = 0.0;

  PrioritySchedule machine_schedule(const Instance& machine_jobs) const {
    return per_machine_schedule(machine_jobs, MechanismSpec::target(target_eps));
  }
  std::string describe() const;
};

MultiMechanism fair_multi_mechanism(const Instance& inst, int m,
                                    double target_eps);

enum class EvalMode { exact, mc };

struct MultiEvaluationReport {
  EvaluationReport base;
  int m = 1;
  int tau = 0;
  int dummy_count = 0;
  EvalMode mode = EvalMode::exact;
  int samples = 0;            // mc only
  std::int64_t outcomes = 0;  // exact only

  nlohmann::ordered_json to_json() const;
};

struct OracleConfig;  // oracle.hpp

// Evaluates the randomized block-matching mechanism with the per-machine
// fairness-target rule. Exact mode enumerates all (m!)^tau matchings and
// must fit cfg.max_exact_outcomes; mc mode averages over sampled matchings.
// Dummies participate in loads and block totals but are excluded from the
// per-job report, the fairness ratio and the social cost.
MultiEvaluationReport evaluate_multi(const Instance& inst, int m,
                                     double target_eps, EvalMode mode,
                                     const OracleConfig& cfg);

}  // namespace fairsched
