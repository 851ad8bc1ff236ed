#include "fairsched/multimachine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fairsched/errors.hpp"
#include "fairsched/oracle.hpp"
#include "fairsched/rng.hpp"

namespace fairsched {

BlockStructure pad_and_blocks(const Instance& inst, int m) {
  if (m < 1) throw ParameterError("machine count must be >= 1");
  for (const Job& j : inst.jobs()) {
    if (j.id <= 0) {
      throw ParameterError("multi-machine instances need positive job ids "
                           "(ids <= 0 are reserved for dummies)");
    }
  }

  BlockStructure bs;
  bs.m = m;
  const int n = static_cast<int>(inst.size());
  bs.dummy_count = (m - n % m) % m;
  bs.tau = (n + bs.dummy_count) / m;

  std::vector<Job> jobs = inst.jobs();
  for (int d = 0; d < bs.dummy_count; ++d) {
    jobs.push_back(Job{-d, 0.0});  // ids 0, -1, -2, ...; sort first among zeros
  }
  bs.padded = canonicalize(Instance(std::move(jobs)));

  bs.blocks.reserve(static_cast<std::size_t>(bs.tau));
  bs.block_totals.reserve(static_cast<std::size_t>(bs.tau));
  for (int r = 0; r < bs.tau; ++r) {
    std::vector<int> block;
    double total = 0.0;
    for (int s = 0; s < m; ++s) {
      const Job& j = bs.padded.job(static_cast<std::size_t>(r * m + s));
      block.push_back(j.id);
      total += j.size;
    }
    bs.blocks.push_back(std::move(block));
    bs.block_totals.push_back(total);
  }
  return bs;
}

double optimal_multi_cost(const BlockStructure& bs) {
  double cost = 0.0;
  for (int r = 0; r < bs.tau; ++r) {
    cost += static_cast<double>(bs.tau - r) *
            bs.block_totals[static_cast<std::size_t>(r)];
  }
  return cost;
}

GreedyResult greedy_assign(const Instance& inst, int m) {
  GreedyResult result;
  result.blocks = pad_and_blocks(inst, m);
  const Instance& padded = result.blocks.padded;

  std::vector<double> load(static_cast<std::size_t>(m), 0.0);
  result.assignment.machine_of.resize(padded.size());
  result.completions.resize(padded.size());
  for (std::size_t pos = 0; pos < padded.size(); ++pos) {
    // Least loaded machine, lowest index on ties.
    std::size_t target = 0;
    for (std::size_t mi = 1; mi < load.size(); ++mi) {
      if (load[mi] < load[target]) target = mi;
    }
    load[target] += padded.job(pos).size;
    result.assignment.machine_of[pos] = static_cast<int>(target);
    result.completions[pos] = load[target];
    result.cost += load[target];
  }
  return result;
}

MachineAssignment sample_block_matching(const BlockStructure& bs,
                                        std::uint64_t seed) {
  rng::Engine engine(seed);
  MachineAssignment out;
  out.machine_of.resize(bs.padded.size());
  std::vector<int> perm(static_cast<std::size_t>(bs.m));
  for (std::size_t r = 0; r < bs.blocks.size(); ++r) {
    std::iota(perm.begin(), perm.end(), 0);
    engine.shuffle(perm);
    for (std::size_t slot = 0; slot < bs.blocks[r].size(); ++slot) {
      out.machine_of[bs.padded.position_of(bs.blocks[r][slot])] = perm[slot];
    }
  }
  return out;
}

std::vector<double> multi_fairest_completions(const Instance& inst, int m) {
  if (m < 1) throw ParameterError("machine count must be >= 1");
  if (!(inst.total() > 0.0)) {
    throw DegenerateInstanceError(
        "fairest completions undefined for zero total duration");
  }
  if (m == 1) return fairest_completions(inst);
  std::vector<double> out;
  out.reserve(inst.size());
  for (const Job& j : inst.jobs()) {
    out.push_back((inst.total() - j.size) / (2.0 * m) + j.size);
  }
  return out;
}

PrioritySchedule per_machine_schedule(const Instance& machine_jobs,
                                      const MechanismSpec& spec) {
  if (spec.kind == MechanismSpec::Kind::target) {
    if (!(machine_jobs.total() > 0.0)) return random_schedule(machine_jobs);
    return pareto_schedule(machine_jobs, select_k(machine_jobs, spec.eps));
  }
  return resolve_schedule(machine_jobs, spec);
}

std::string MultiMechanism::describe() const {
  return "block-matching m=" + std::to_string(m) + " + per-machine target:" +
         std::to_string(target_eps);
}

MultiMechanism fair_multi_mechanism(const Instance& inst, int m,
                                    double target_eps) {
  if (m < 1) throw ParameterError("machine count must be >= 1");
  if (target_eps < 0.0) throw ParameterError("fairness target must be >= 0");
  if (!(inst.total() > 0.0)) {
    throw DegenerateInstanceError("mechanism needs positive total duration");
  }
  return MultiMechanism{m, target_eps};
}

nlohmann::ordered_json MultiEvaluationReport::to_json() const {
  nlohmann::ordered_json doc = base.to_json();
  if (m > 1) doc["k"] = nullptr;  // per-machine k varies per realization
  doc["m"] = m;
  doc["tau"] = tau;
  doc["dummy_count"] = dummy_count;
  doc["mode"] = mode == EvalMode::exact ? "exact" : "mc";
  if (mode == EvalMode::exact) {
    doc["outcomes"] = outcomes;
  } else {
    doc["samples"] = samples;
    auto& rows = doc["per_job"];
    for (std::size_t i = 0; i < base.per_job.size(); ++i) {
      rows[i]["std_error"] = base.per_job[i].std_error;
    }
  }
  return doc;
}

MultiEvaluationReport evaluate_multi(const Instance& inst, int m,
                                     double target_eps, EvalMode mode,
                                     const OracleConfig& cfg) {
  const MultiMechanism mechanism = fair_multi_mechanism(inst, m, target_eps);
  const BlockStructure bs = pad_and_blocks(inst, m);
  const MechanismSpec per_machine = MechanismSpec::target(target_eps);

  std::vector<double> completions;
  std::vector<double> std_errors;
  MultiEvaluationReport report;
  report.m = mechanism.m;
  report.tau = bs.tau;
  report.dummy_count = bs.dummy_count;
  report.mode = mode;

  if (mode == EvalMode::exact) {
    const MultiExactResult res = exact_multi_evaluation(bs, per_machine, cfg);
    completions = res.completions;
    report.outcomes = res.outcomes;
  } else {
    const McResult res = mc_multi_evaluation(bs, per_machine, cfg);
    completions = res.mean;
    std_errors = res.std_error;
    report.samples = res.samples;
  }

  const auto fair = multi_fairest_completions(bs.padded, m);

  EvaluationReport& base = report.base;
  base.mechanism = per_machine.to_string();
  if (m == 1) {
    base.k = select_k(bs.padded, target_eps);
    base.epsilon_k = epsilon_k(bs.padded, base.k);
  } else {
    base.k = -1;  // serialized as null
    base.epsilon_k = target_eps;
  }

  double cost = 0.0;
  double worst_fairness = 0.0;
  for (std::size_t pos = 0; pos < bs.padded.size(); ++pos) {
    const Job& j = bs.padded.job(pos);
    if (BlockStructure::is_dummy(j.id)) continue;  // no agent behind it
    const double fairness = completions[pos] / fair[pos];
    cost += completions[pos];
    worst_fairness = std::max(worst_fairness, fairness);
    base.per_job.push_back(PerJobReport{
        j.id, j.size, completions[pos], fair[pos], fairness,
        std_errors.empty() ? 0.0 : std_errors[pos]});
  }
  base.fairness_ratio = worst_fairness;
  base.social_cost = cost;
  base.optimal_cost = optimal_multi_cost(bs);
  double fairest_total = 0.0;
  for (std::size_t pos = 0; pos < bs.padded.size(); ++pos) {
    if (!BlockStructure::is_dummy(bs.padded.job(pos).id)) {
      fairest_total += fair[pos];
    }
  }
  base.fairest_cost = fairest_total;
  if (!(base.optimal_cost > 0.0)) {
    throw DegenerateInstanceError("efficacy undefined: optimal cost is zero");
  }
  base.efficacy_ratio = cost / base.optimal_cost;

  if (target_eps > 0.0) {
    base.bound_upper = bound_upper(target_eps);
    base.bound_lower = bound_lower(target_eps);
    base.bound_lower_raw = bound_lower_raw(target_eps);
  } else {
    base.bound_upper = std::numeric_limits<double>::quiet_NaN();
    base.bound_lower = std::numeric_limits<double>::quiet_NaN();
    base.bound_lower_raw = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

}  // namespace fairsched
