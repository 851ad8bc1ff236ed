#include "fairsched/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairsched/errors.hpp"
#include "fairsched/rng.hpp"

namespace fairsched {

namespace {

// Product of factorials, capped; returns -1 on cap overflow.
std::int64_t joint_outcome_count(const PrioritySchedule& sched,
                                 std::int64_t cap) {
  long double count = 1.0L;
  for (const auto& group : sched.groups) {
    for (std::size_t i = 2; i <= group.size(); ++i) {
      count *= static_cast<long double>(i);
      if (count > static_cast<long double>(cap)) return -1;
    }
  }
  return static_cast<std::int64_t>(count);
}

}  // namespace

std::vector<double> exact_completions_by_enumeration(
    const Instance& inst, const PrioritySchedule& sched,
    const OracleConfig& cfg) {
  validate_schedule(inst, sched);
  const std::int64_t outcomes = joint_outcome_count(sched, cfg.max_exact_outcomes);
  if (outcomes < 0) {
    throw InfeasibleError(
        "permutation enumeration exceeds the outcome cap of " +
        std::to_string(cfg.max_exact_outcomes));
  }

  // Odometer over per-group permutations; every leaf walks one concrete
  // order start to finish. Deliberately ignorant of the group closed form.
  std::vector<std::vector<int>> work;
  work.reserve(sched.groups.size());
  for (const auto& group : sched.groups) {
    std::vector<int> ids(group);
    std::sort(ids.begin(), ids.end());
    work.push_back(std::move(ids));
  }

  std::vector<long double> sums(inst.size(), 0.0L);
  std::int64_t seen = 0;
  auto walk = [&] {
    double clock = 0.0;
    for (const auto& group : work) {
      for (int id : group) {
        const std::size_t pos = inst.position_of(id);
        clock += inst.job(pos).size;
        sums[pos] += clock;
      }
    }
    ++seen;
  };
  auto recurse = [&](auto&& self, std::size_t g) -> void {
    if (g == work.size()) {
      walk();
      return;
    }
    auto& ids = work[g];
    std::sort(ids.begin(), ids.end());
    do {
      self(self, g + 1);
    } while (std::next_permutation(ids.begin(), ids.end()));
  };
  recurse(recurse, 0);

  std::vector<double> out(inst.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<double>(sums[i] / static_cast<long double>(seen));
  }
  return out;
}

McResult mc_completions(const Instance& inst, const PrioritySchedule& sched,
                        const OracleConfig& cfg) {
  validate_schedule(inst, sched);
  if (cfg.mc_samples < 1) throw ParameterError("mc_samples must be >= 1");

  const std::size_t n = inst.size();
  std::vector<double> sum(n, 0.0), sum_sq(n, 0.0);
  std::vector<double> completion(n, 0.0);
  for (int s = 0; s < cfg.mc_samples; ++s) {
    const auto order = sample_order(sched, rng::derive_seed(cfg.seed, s));
    double clock = 0.0;
    for (int id : order) {
      const std::size_t pos = inst.position_of(id);
      clock += inst.job(pos).size;
      completion[pos] = clock;
    }
    for (std::size_t i = 0; i < n; ++i) {
      sum[i] += completion[i];
      sum_sq[i] += completion[i] * completion[i];
    }
  }

  McResult result;
  result.samples = cfg.mc_samples;
  result.mean.resize(n);
  result.std_error.assign(n, 0.0);
  const double count = static_cast<double>(cfg.mc_samples);
  for (std::size_t i = 0; i < n; ++i) {
    result.mean[i] = sum[i] / count;
    if (cfg.mc_samples > 1) {
      const double variance =
          std::max(0.0, (sum_sq[i] - count * result.mean[i] * result.mean[i]) /
                            (count - 1.0));
      result.std_error[i] = std::sqrt(variance / count);
    }
  }
  return result;
}

std::int64_t ordered_partition_count(int n) {
  if (n < 0) throw ParameterError("ordered_partition_count needs n >= 0");
  // a(n) = sum over first-block sizes j of C(n,j) * a(n-j)
  std::vector<std::int64_t> a(static_cast<std::size_t>(n) + 1, 0);
  a[0] = 1;
  for (int i = 1; i <= n; ++i) {
    std::int64_t binom = 1;  // C(i, j) built incrementally
    for (int j = 1; j <= i; ++j) {
      binom = binom * (i - j + 1) / j;
      a[static_cast<std::size_t>(i)] +=
          binom * a[static_cast<std::size_t>(i - j)];
    }
  }
  return a[static_cast<std::size_t>(n)];
}

void enumerate_priority_mechanisms(
    const Instance& inst,
    const std::function<void(const MechanismPoint&)>& visit) {
  const int n = static_cast<int>(inst.size());
  if (n > 9) {
    throw InfeasibleError("priority mechanism enumeration is capped at n <= 9 "
                          "(ordered Bell growth)");
  }
  const Instance canon = canonicalize(inst);
  const auto fair = fairest_completions(canon);
  if (!(canon.total() > 0.0)) {
    throw DegenerateInstanceError("enumeration needs positive total duration");
  }

  std::vector<std::vector<int>> groups;
  const unsigned full = (1u << n) - 1u;
  auto ids_of = [&](unsigned mask) {
    std::vector<int> ids;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) ids.push_back(canon.job(static_cast<std::size_t>(i)).id);
    }
    return ids;
  };
  auto emit = [&] {
    MechanismPoint point;
    point.schedule.groups = groups;
    const auto completions = expected_completions(canon, point.schedule);
    double cost = 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < completions.size(); ++i) {
      cost += completions[i];
      worst = std::max(worst, completions[i] / fair[i]);
    }
    point.cost = cost;
    point.fairness_ratio = worst;
    visit(point);
  };
  auto recurse = [&](auto&& self, unsigned remaining) -> void {
    if (remaining == 0) {
      emit();
      return;
    }
    for (unsigned sub = remaining; sub != 0; sub = (sub - 1) & remaining) {
      groups.push_back(ids_of(sub));
      self(self, remaining & ~sub);
      groups.pop_back();
    }
  };
  recurse(recurse, full);
}

double brute_force_optimal_multi(const Instance& inst, int m,
                                 const OracleConfig& cfg) {
  if (m < 1) throw ParameterError("machine count must be >= 1");
  const Instance canon = canonicalize(inst);
  const std::size_t n = canon.size();
  if (n * std::log(static_cast<double>(m)) >
      std::log(static_cast<double>(cfg.max_exact_outcomes)) + 1e-9) {
    throw InfeasibleError("assignment enumeration exceeds the outcome cap of " +
                          std::to_string(cfg.max_exact_outcomes));
  }

  std::vector<int> assign(n, 0);
  std::vector<double> load(static_cast<std::size_t>(m), 0.0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::fill(load.begin(), load.end(), 0.0);
    double cost = 0.0;
    // Jobs visited in ascending size, so each machine is internally ordered
    // by size.
    for (std::size_t i = 0; i < n; ++i) {
      auto& l = load[static_cast<std::size_t>(assign[i])];
      l += canon.job(i).size;
      cost += l;
    }
    best = std::min(best, cost);

    std::size_t digit = 0;
    while (digit < n && assign[digit] == m - 1) assign[digit++] = 0;
    if (digit == n) break;
    ++assign[digit];
  }
  return best;
}

namespace {

std::int64_t matching_outcome_count(int m, int tau, std::int64_t cap) {
  long double fact = 1.0L;
  for (int i = 2; i <= m; ++i) fact *= static_cast<long double>(i);
  long double count = 1.0L;
  for (int r = 0; r < tau; ++r) {
    count *= fact;
    if (count > static_cast<long double>(cap)) return -1;
  }
  return static_cast<std::int64_t>(count);
}

// Per-machine job lists induced by one matching realization; lists inherit
// the block order, so each machine's jobs arrive size-ascending.
std::vector<std::vector<int>> machines_for(
    const BlockStructure& bs, const std::vector<std::vector<int>>& block_machine) {
  std::vector<std::vector<int>> machines(static_cast<std::size_t>(bs.m));
  for (std::size_t r = 0; r < bs.blocks.size(); ++r) {
    for (std::size_t slot = 0; slot < bs.blocks[r].size(); ++slot) {
      machines[static_cast<std::size_t>(block_machine[r][slot])].push_back(
          bs.blocks[r][slot]);
    }
  }
  return machines;
}

Instance machine_instance(const BlockStructure& bs, const std::vector<int>& ids) {
  std::vector<Job> jobs;
  jobs.reserve(ids.size());
  for (int id : ids) {
    jobs.push_back(bs.padded.job(bs.padded.position_of(id)));
  }
  return Instance(std::move(jobs));
}

}  // namespace

MultiExactResult exact_multi_evaluation(const BlockStructure& bs,
                                        const MechanismSpec& per_machine,
                                        const OracleConfig& cfg,
                                        PerMachineEval eval) {
  const std::int64_t outcomes =
      matching_outcome_count(bs.m, bs.tau, cfg.max_exact_outcomes);
  if (outcomes < 0) {
    throw InfeasibleError("matching enumeration exceeds the outcome cap of " +
                          std::to_string(cfg.max_exact_outcomes) +
                          " ((m!)^tau outcomes)");
  }

  const std::size_t n = bs.padded.size();
  std::vector<long double> completion_sum(n, 0.0L);
  std::vector<long double> foreign_sum(n, 0.0L);
  std::unordered_map<int, std::size_t> block_of;
  for (std::size_t r = 0; r < bs.blocks.size(); ++r) {
    for (int id : bs.blocks[r]) block_of.emplace(id, r);
  }

  std::vector<std::vector<int>> block_machine(
      bs.blocks.size(), std::vector<int>(static_cast<std::size_t>(bs.m)));
  for (auto& perm : block_machine) std::iota(perm.begin(), perm.end(), 0);

  std::int64_t seen = 0;
  auto leaf = [&] {
    ++seen;
    const auto machines = machines_for(bs, block_machine);
    for (const auto& ids : machines) {
      const Instance minst = machine_instance(bs, ids);
      const PrioritySchedule sched = per_machine_schedule(minst, per_machine);
      const std::vector<double> comps =
          eval == PerMachineEval::closed_form
              ? expected_completions(minst, sched)
              : exact_completions_by_enumeration(minst, sched, cfg);
      double machine_total = 0.0;
      for (const Job& j : minst.jobs()) machine_total += j.size;
      for (std::size_t i = 0; i < ids.size(); ++i) {
        const std::size_t pos = bs.padded.position_of(ids[i]);
        completion_sum[pos] += comps[i];
        // Everything sharing the machine minus this job's own block.
        double block_share = 0.0;
        const std::size_t r = block_of.at(ids[i]);
        for (int other : ids) {
          if (block_of.at(other) == r) {
            block_share += bs.padded.job(bs.padded.position_of(other)).size;
          }
        }
        foreign_sum[pos] += machine_total - block_share;
      }
    }
  };
  auto recurse = [&](auto&& self, std::size_t r) -> void {
    if (r == block_machine.size()) {
      leaf();
      return;
    }
    auto& perm = block_machine[r];
    std::iota(perm.begin(), perm.end(), 0);
    do {
      self(self, r + 1);
    } while (std::next_permutation(perm.begin(), perm.end()));
  };
  recurse(recurse, 0);

  MultiExactResult result;
  result.outcomes = seen;
  result.completions.resize(n);
  result.foreign_load.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.completions[i] =
        static_cast<double>(completion_sum[i] / static_cast<long double>(seen));
    result.foreign_load[i] =
        static_cast<double>(foreign_sum[i] / static_cast<long double>(seen));
  }
  return result;
}

MultiExactResult exact_multi_evaluation(const Instance& inst, int m,
                                        const MechanismSpec& per_machine,
                                        const OracleConfig& cfg,
                                        PerMachineEval eval) {
  return exact_multi_evaluation(pad_and_blocks(inst, m), per_machine, cfg, eval);
}

McResult mc_multi_evaluation(const BlockStructure& bs,
                             const MechanismSpec& per_machine,
                             const OracleConfig& cfg, bool sample_orders) {
  if (cfg.mc_samples < 1) throw ParameterError("mc_samples must be >= 1");
  const std::size_t n = bs.padded.size();
  std::vector<double> sum(n, 0.0), sum_sq(n, 0.0);
  std::vector<double> value(n, 0.0);

  for (int s = 0; s < cfg.mc_samples; ++s) {
    const std::uint64_t draw_seed = rng::derive_seed(cfg.seed, s);
    const MachineAssignment matching = sample_block_matching(bs, draw_seed);
    std::vector<std::vector<int>> machines(static_cast<std::size_t>(bs.m));
    for (std::size_t pos = 0; pos < n; ++pos) {
      machines[static_cast<std::size_t>(matching.machine_of[pos])].push_back(
          bs.padded.job(pos).id);
    }
    for (std::size_t mi = 0; mi < machines.size(); ++mi) {
      if (machines[mi].empty()) continue;
      const Instance minst = machine_instance(bs, machines[mi]);
      const PrioritySchedule sched = per_machine_schedule(minst, per_machine);
      if (sample_orders) {
        const auto order =
            sample_order(sched, rng::derive_seed(draw_seed, mi + 1));
        double clock = 0.0;
        for (int id : order) {
          clock += bs.padded.job(bs.padded.position_of(id)).size;
          value[bs.padded.position_of(id)] = clock;
        }
      } else {
        const auto comps = expected_completions(minst, sched);
        for (std::size_t i = 0; i < machines[mi].size(); ++i) {
          value[bs.padded.position_of(machines[mi][i])] = comps[i];
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      sum[i] += value[i];
      sum_sq[i] += value[i] * value[i];
    }
  }

  McResult result;
  result.samples = cfg.mc_samples;
  result.mean.resize(n);
  result.std_error.assign(n, 0.0);
  const double count = static_cast<double>(cfg.mc_samples);
  for (std::size_t i = 0; i < n; ++i) {
    result.mean[i] = sum[i] / count;
    if (cfg.mc_samples > 1) {
      const double variance =
          std::max(0.0, (sum_sq[i] - count * result.mean[i] * result.mean[i]) /
                            (count - 1.0));
      result.std_error[i] = std::sqrt(variance / count);
    }
  }
  return result;
}

}  // namespace fairsched
