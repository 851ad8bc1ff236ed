#include "fairsched/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "fairsched/errors.hpp"

namespace fairsched {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double parse_double(std::string_view text, const char* what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParameterError(std::string("invalid ") + what + ": '" +
                         std::string(text) + "'");
  }
  return value;
}

int parse_int(std::string_view text, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParameterError(std::string("invalid ") + what + ": '" +
                         std::string(text) + "'");
  }
  return value;
}

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace

MechanismSpec MechanismSpec::parse(std::string_view text) {
  if (text == "smith") return smith();
  if (text == "random") return random();
  if (text.starts_with("pareto:")) {
    return pareto(parse_int(text.substr(7), "pareto k"));
  }
  if (text.starts_with("target:")) {
    const double eps = parse_double(text.substr(7), "target eps");
    if (eps < 0.0) throw ParameterError("target eps must be >= 0");
    return target(eps);
  }
  throw ParameterError("invalid mechanism spec '" + std::string(text) +
                       "' (expected smith | random | pareto:K | target:EPS)");
}

std::string MechanismSpec::to_string() const {
  switch (kind) {
    case Kind::smith:
      return "smith";
    case Kind::random:
      return "random";
    case Kind::pareto:
      return "pareto:" + std::to_string(k);
    case Kind::target:
      return "target:" + format_double(eps);
  }
  return "?";
}

int resolve_k(const Instance& inst, const MechanismSpec& spec) {
  const int n = static_cast<int>(inst.size());
  switch (spec.kind) {
    case MechanismSpec::Kind::smith:
      return n - 1;
    case MechanismSpec::Kind::random:
      return 0;
    case MechanismSpec::Kind::pareto:
      if (spec.k < 0 || spec.k >= n) {
        throw ParameterError("pareto k out of range 0.." + std::to_string(n - 1));
      }
      return spec.k;
    case MechanismSpec::Kind::target:
      return select_k(inst, spec.eps);
  }
  throw ParameterError("unknown mechanism kind");
}

PrioritySchedule resolve_schedule(const Instance& inst, const MechanismSpec& spec) {
  return pareto_schedule(inst, resolve_k(inst, spec));
}

std::vector<double> per_job_fairness(std::span<const double> completions,
                                     std::span<const double> fair_completions) {
  if (completions.size() != fair_completions.size()) {
    throw ParameterError("fairness: completion vectors differ in length");
  }
  std::vector<double> out(completions.size());
  for (std::size_t i = 0; i < completions.size(); ++i) {
    if (!(fair_completions[i] > 0.0)) {
      throw DegenerateInstanceError(
          "fairness undefined: fair completion is zero at position " +
          std::to_string(i));
    }
    out[i] = completions[i] / fair_completions[i];
  }
  return out;
}

std::vector<double> per_job_fairness(const Instance& inst,
                                     std::span<const double> completions) {
  if (inst.total() <= 0.0) {
    throw DegenerateInstanceError("fairness undefined for zero total duration");
  }
  return per_job_fairness(completions, fairest_completions(inst));
}

double fairness_ratio(std::span<const double> fairness) {
  if (fairness.empty()) throw ParameterError("fairness_ratio of empty vector");
  return *std::max_element(fairness.begin(), fairness.end());
}

double efficacy_ratio(const Instance& inst, double social_cost) {
  const double optimal = optimal_cost(inst);
  if (!(optimal > 0.0)) {
    throw DegenerateInstanceError("efficacy undefined: optimal cost is zero");
  }
  return social_cost / optimal;
}

double price_of_fairness(const MechanismSpec& spec,
                         std::span<const Instance> instances) {
  if (instances.empty()) {
    throw ParameterError("price_of_fairness needs at least one instance");
  }
  double worst = 0.0;
  for (const Instance& inst : instances) {
    worst = std::max(worst, evaluate(inst, spec).efficacy_ratio);
  }
  return worst;
}

double bound_upper(double eps) {
  if (!(eps > 0.0)) throw ParameterError("bound requires eps > 0");
  return 1.0 / (4.0 * eps) + 1.0 + eps / 4.0;
}

double bound_lower_raw(double eps) {
  if (!(eps > 0.0)) throw ParameterError("bound requires eps > 0");
  return 1.0 / (4.0 * eps) + 0.5;
}

double bound_lower(double eps) { return std::max(bound_lower_raw(eps), 1.0); }

ReducedInstance reduce_instance(const Instance& inst, int k) {
  const Instance canon = canonicalize(inst);
  const int n = static_cast<int>(canon.size());
  if (k < 0 || k >= n) {
    throw ParameterError("reduce_instance: k must lie in 0.." + std::to_string(n - 1));
  }
  if (!(canon.total() > 0.0)) {
    throw DegenerateInstanceError("reduce_instance needs positive total duration");
  }
  const double unit = canon.job(static_cast<std::size_t>(k)).size;
  if (!(unit > 0.0)) {
    throw ParameterError("reduce_instance: smallest final-group job has size 0");
  }

  std::vector<Job> jobs;
  jobs.reserve(canon.size());
  double large_mass = 0.0;
  std::size_t large_count = 0;
  for (const Job& j : canon.jobs()) {
    const double scaled = j.size / unit;
    if (scaled < 1.0) {
      jobs.push_back(Job{j.id, 0.0});
    } else if (scaled > 1.0) {
      large_mass += scaled;
      ++large_count;
      jobs.push_back(Job{j.id, 1.0});  // placeholder, fixed up below
    } else {
      jobs.push_back(Job{j.id, 1.0});
    }
  }
  if (large_count > 0) {
    // All large jobs but the final one become unit jobs; the final one
    // absorbs the removed mass so the large-section total is preserved.
    for (std::size_t i = canon.size(); i-- > 0;) {
      if (canon.job(i).size / unit > 1.0) {
        jobs[i].size = large_mass - static_cast<double>(large_count - 1);
        break;
      }
    }
  }
  return ReducedInstance{canonicalize(Instance(std::move(jobs))), unit};
}

nlohmann::ordered_json EvaluationReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["mechanism"] = mechanism;
  doc["k"] = k;
  doc["epsilon_k"] = epsilon_k;
  auto rows = nlohmann::ordered_json::array();
  for (const PerJobReport& row : per_job) {
    nlohmann::ordered_json item;
    item["id"] = row.id;
    item["size"] = row.size;
    item["expected_completion"] = row.expected_completion;
    item["fair_completion"] = row.fair_completion;
    item["fairness"] = row.fairness;
    rows.push_back(std::move(item));
  }
  doc["per_job"] = std::move(rows);
  doc["fairness_ratio"] = fairness_ratio;
  doc["social_cost"] = social_cost;
  doc["optimal_cost"] = optimal_cost;
  doc["fairest_cost"] = fairest_cost;
  doc["efficacy_ratio"] = efficacy_ratio;
  auto put_or_null = [&doc](const char* key, double value) {
    if (std::isnan(value)) {
      doc[key] = nullptr;
    } else {
      doc[key] = value;
    }
  };
  put_or_null("bound_upper", bound_upper);
  put_or_null("bound_lower", bound_lower);
  put_or_null("bound_lower_raw", bound_lower_raw);
  return doc;
}

EvaluationReport evaluate(const Instance& inst, const MechanismSpec& spec) {
  const Instance canon = canonicalize(inst);
  if (!(canon.total() > 0.0)) {
    throw DegenerateInstanceError("evaluate needs positive total duration");
  }
  const int k = resolve_k(canon, spec);
  const PrioritySchedule sched = pareto_schedule(canon, k);

  EvaluationReport report;
  report.mechanism = spec.to_string();
  report.k = k;
  report.epsilon_k = epsilon_k(canon, k);

  const auto completions = expected_completions(canon, sched);
  const auto fair = fairest_completions(canon);
  const auto fairness = per_job_fairness(completions, fair);

  report.per_job.reserve(canon.size());
  double cost = 0.0;
  for (std::size_t i = 0; i < canon.size(); ++i) {
    cost += completions[i];
    report.per_job.push_back(PerJobReport{canon.job(i).id, canon.job(i).size,
                                          completions[i], fair[i], fairness[i],
                                          0.0});
  }
  report.fairness_ratio = fairness_ratio(fairness);
  report.social_cost = cost;
  report.optimal_cost = optimal_cost(canon);
  report.fairest_cost = fairest_cost(canon);
  report.efficacy_ratio = cost / report.optimal_cost;

  // Bounds apply at the mechanism's fairness level: the requested target, or
  // the achieved prefix ratio otherwise. Zero level has no finite bound.
  const double level = spec.kind == MechanismSpec::Kind::target
                           ? spec.eps
                           : report.epsilon_k;
  if (level > 0.0) {
    report.bound_upper = bound_upper(level);
    report.bound_lower = bound_lower(level);
    report.bound_lower_raw = bound_lower_raw(level);
  } else {
    report.bound_upper = kNaN;
    report.bound_lower = kNaN;
    report.bound_lower_raw = kNaN;
  }
  return report;
}

}  // namespace fairsched
