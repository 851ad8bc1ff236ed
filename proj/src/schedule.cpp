#include "fairsched/schedule.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "fairsched/errors.hpp"
#include "fairsched/rng.hpp"

namespace fairsched {

namespace {

// Canonical (size-ascending, id-ascending) traversal of the instance.
std::vector<std::size_t> canonical_order(const Instance& inst) {
  std::vector<std::size_t> order(inst.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Job& ja = inst.job(a);
    const Job& jb = inst.job(b);
    if (ja.size != jb.size) return ja.size < jb.size;
    return ja.id < jb.id;
  });
  return order;
}

}  // namespace

void validate_schedule(const Instance& inst, const PrioritySchedule& sched) {
  std::unordered_set<int> seen;
  std::size_t covered = 0;
  for (const auto& group : sched.groups) {
    if (group.empty()) throw ValidationError("schedule has an empty group");
    for (int id : group) {
      inst.position_of(id);  // throws on unknown id
      if (!seen.insert(id).second) {
        throw ValidationError("schedule repeats job id " + std::to_string(id));
      }
      ++covered;
    }
  }
  if (covered != inst.size()) {
    throw ValidationError("schedule covers " + std::to_string(covered) +
                          " of " + std::to_string(inst.size()) + " jobs");
  }
}

bool is_pareto_form(const Instance& inst, const PrioritySchedule& sched) {
  validate_schedule(inst, sched);
  const auto order = canonical_order(inst);
  std::size_t cursor = 0;
  for (std::size_t g = 0; g < sched.groups.size(); ++g) {
    const auto& group = sched.groups[g];
    if (g + 1 < sched.groups.size() && group.size() != 1) return false;
    // Group membership must be a consecutive run of the canonical order up
    // to size ties; equal-size jobs are interchangeable.
    std::vector<int> expected;
    for (std::size_t i = 0; i < group.size(); ++i) {
      expected.push_back(inst.job(order[cursor + i]).id);
    }
    std::vector<int> got(group.begin(), group.end());
    auto by_size_then_id = [&](int a, int b) {
      const Job& ja = inst.job(inst.position_of(a));
      const Job& jb = inst.job(inst.position_of(b));
      if (ja.size != jb.size) return ja.size < jb.size;
      return ja.id < jb.id;
    };
    std::sort(got.begin(), got.end(), by_size_then_id);
    std::vector<double> expected_sizes, got_sizes;
    for (int id : expected) expected_sizes.push_back(inst.job(inst.position_of(id)).size);
    for (int id : got) got_sizes.push_back(inst.job(inst.position_of(id)).size);
    if (expected_sizes != got_sizes) return false;
    cursor += group.size();
  }
  return true;
}

std::vector<GroupStats> group_stats(const Instance& inst,
                                    const PrioritySchedule& sched) {
  validate_schedule(inst, sched);
  std::vector<GroupStats> stats;
  stats.reserve(sched.groups.size());
  double offset = 0.0;
  for (const auto& group : sched.groups) {
    double total = 0.0;
    for (int id : group) total += inst.job(inst.position_of(id)).size;
    stats.push_back(GroupStats{offset, total});
    offset += total;
  }
  return stats;
}

PrioritySchedule smith_schedule(const Instance& inst) {
  PrioritySchedule sched;
  sched.groups.reserve(inst.size());
  for (std::size_t pos : canonical_order(inst)) {
    sched.groups.push_back({inst.job(pos).id});
  }
  return sched;
}

PrioritySchedule random_schedule(const Instance& inst) {
  PrioritySchedule sched;
  std::vector<int> all;
  all.reserve(inst.size());
  for (std::size_t pos : canonical_order(inst)) all.push_back(inst.job(pos).id);
  sched.groups.push_back(std::move(all));
  return sched;
}

PrioritySchedule pareto_schedule(const Instance& inst, int k) {
  const int n = static_cast<int>(inst.size());
  if (k < 0 || k >= n) {
    throw ParameterError("pareto k must lie in 0.." + std::to_string(n - 1) +
                         ", got " + std::to_string(k));
  }
  const auto order = canonical_order(inst);
  PrioritySchedule sched;
  sched.groups.reserve(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i < k; ++i) {
    sched.groups.push_back({inst.job(order[static_cast<std::size_t>(i)]).id});
  }
  std::vector<int> tail;
  tail.reserve(static_cast<std::size_t>(n - k));
  for (int i = k; i < n; ++i) {
    tail.push_back(inst.job(order[static_cast<std::size_t>(i)]).id);
  }
  sched.groups.push_back(std::move(tail));
  return sched;
}

double epsilon_k(const Instance& inst, int k) {
  const int n = static_cast<int>(inst.size());
  if (k < 0 || k >= n) {
    throw ParameterError("epsilon_k: k must lie in 0.." + std::to_string(n - 1));
  }
  if (inst.total() <= 0.0) {
    throw DegenerateInstanceError("epsilon_k undefined for zero total duration");
  }
  const auto order = canonical_order(inst);
  double prefix = 0.0;
  for (int i = 0; i < k; ++i) prefix += inst.job(order[static_cast<std::size_t>(i)]).size;
  return prefix / inst.total();
}

int select_k(const Instance& inst, double target_eps) {
  if (inst.total() <= 0.0) {
    throw DegenerateInstanceError("select_k undefined for zero total duration");
  }
  const auto order = canonical_order(inst);
  const int n = static_cast<int>(inst.size());
  double prefix = 0.0;
  int best = 0;
  // Prefix ratios are non-decreasing, so scan until the target is exceeded.
  for (int k = 1; k < n; ++k) {
    prefix += inst.job(order[static_cast<std::size_t>(k - 1)]).size;
    if (prefix / inst.total() <= target_eps) {
      best = k;
    } else {
      break;
    }
  }
  return best;
}

std::vector<double> expected_completions(const Instance& inst,
                                         const PrioritySchedule& sched) {
  const auto stats = group_stats(inst, sched);
  std::vector<double> out(inst.size(), 0.0);
  for (std::size_t g = 0; g < sched.groups.size(); ++g) {
    for (int id : sched.groups[g]) {
      const std::size_t pos = inst.position_of(id);
      const double size = inst.job(pos).size;
      out[pos] = stats[g].start_offset + 0.5 * (stats[g].group_total + size);
    }
  }
  return out;
}

double social_cost(const Instance& inst, const PrioritySchedule& sched) {
  double total = 0.0;
  for (double c : expected_completions(inst, sched)) total += c;
  return total;
}

double optimal_cost(const Instance& inst) {
  double clock = 0.0;
  double cost = 0.0;
  for (std::size_t pos : canonical_order(inst)) {
    clock += inst.job(pos).size;
    cost += clock;
  }
  return cost;
}

std::vector<double> fairest_completions(const Instance& inst) {
  std::vector<double> out;
  out.reserve(inst.size());
  for (const Job& j : inst.jobs()) out.push_back(0.5 * (inst.total() + j.size));
  return out;
}

double fairest_cost(const Instance& inst) {
  return 0.5 * inst.total() * static_cast<double>(inst.size() + 1);
}

std::vector<int> sample_order(const PrioritySchedule& sched, std::uint64_t seed) {
  rng::Engine engine(seed);
  std::vector<int> order;
  for (const auto& group : sched.groups) {
    std::vector<int> shuffled(group);
    engine.shuffle(shuffled);
    order.insert(order.end(), shuffled.begin(), shuffled.end());
  }
  return order;
}

}  // namespace fairsched
