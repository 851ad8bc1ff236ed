#pragma once

#include <cstdint>
#include <vector>

#include "fairsched/instance.hpp"

namespace fairsched {

// Ordered partition of the jobs into priority groups. Group g runs entirely
// before group g+1; order within a group is uniformly random. Groups store
// job ids, so the schedule stays valid under any reordering of the instance.
struct PrioritySchedule {
  std::vector<std::vector<int>> groups;

  std::size_t group_count() const { return groups.size(); }
};

// Throws ValidationError unless groups are non-empty, pairwise disjoint and
// jointly cover exactly the instance's jobs.
void validate_schedule(const Instance& inst, const PrioritySchedule& sched);

// True iff all groups but the last are singletons and group membership
// follows the canonical size order.
bool is_pareto_form(const Instance& inst, const PrioritySchedule& sched);

// Per-group prefix data: start_offset is the total size of strictly earlier
// groups, group_total the size of the group itself. Offsets telescope to D.
struct GroupStats {
  double start_offset = 0.0;
  double group_total = 0.0;
};

std::vector<GroupStats> group_stats(const Instance& inst,
                                    const PrioritySchedule& sched);

// n singleton groups in canonical size order (deterministic optimum).
PrioritySchedule smith_schedule(const Instance& inst);

// One group holding every job (uniformly random order).
PrioritySchedule random_schedule(const Instance& inst);

// Jobs 1..k of the canonical order as singleton groups, jobs k+1..n as one
// final group. k = 0 is random_schedule, k = n-1 is smith_schedule.
PrioritySchedule pareto_schedule(const Instance& inst, int k);

// Prefix-mass ratio sum(d_1..d_k) / D over the canonical order.
double epsilon_k(const Instance& inst, int k);

// Largest k in 0..n-1 whose prefix-mass ratio stays within target_eps.
int select_k(const Instance& inst, double target_eps);

// Exact expected completion time per job, aligned with inst.jobs() order.
// For a job in group g: start_offset(g) + (group_total(g) + size) / 2.
std::vector<double> expected_completions(const Instance& inst,
                                         const PrioritySchedule& sched);

// Sum of expected completions.
double social_cost(const Instance& inst, const PrioritySchedule& sched);

// Total completion time of the deterministic size-ascending order.
double optimal_cost(const Instance& inst);

// Expected completions under the uniformly random order: (D + size) / 2.
std::vector<double> fairest_completions(const Instance& inst);

// D * (n + 1) / 2.
double fairest_cost(const Instance& inst);

// One concrete order: per group a uniformly random permutation, groups
// concatenated. Deterministic given the seed.
std::vector<int> sample_order(const PrioritySchedule& sched,
                              std::uint64_t seed);

}  // namespace fairsched
