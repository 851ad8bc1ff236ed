#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fairsched {

// One schedulable job. Ids are stable across reordering; ids <= 0 are
// reserved for zero-size dummy jobs introduced by multi-machine padding.
struct Job {
  int id = 0;
  double size = 0.0;
};

// Immutable multiset of jobs. The total duration D is fixed at construction
// as the left-to-right sum over the canonical (size-ascending, id-ascending)
// order, so every consumer sees the same value bit for bit.
class Instance {
public:
  Instance() = default;

  // Jobs from raw sizes; ids assigned 1..n in input order.
  explicit Instance(const std::vector<double>& sizes);

  // Jobs with caller-chosen ids. Validates sizes and id uniqueness.
  explicit Instance(std::vector<Job> jobs);

  const std::vector<Job>& jobs() const { return jobs_; }
  std::size_t size() const { return jobs_.size(); }
  const Job& job(std::size_t pos) const { return jobs_[pos]; }

  double total() const { return total_; }  // D

  // Position of a job id in the current order; throws ParameterError if absent.
  std::size_t position_of(int id) const;

  bool is_canonical() const;

private:
  void validate_and_index();

  std::vector<Job> jobs_;
  std::unordered_map<int, std::size_t> position_;
  double total_ = 0.0;
};

// Size-ascending order, ties broken by ascending id. Idempotent.
Instance canonicalize(const Instance& inst);

enum class InstanceFormat { json, text, autodetect };

// Parses `{"sizes":[...]}` (json) or whitespace-separated numbers with
// '#'-to-end-of-line comments (text). autodetect tries json first and falls
// back to text when the source is not JSON at all.
Instance load_instance(std::string_view source,
                       InstanceFormat format = InstanceFormat::autodetect);
Instance load_instance(std::istream& source,
                       InstanceFormat format = InstanceFormat::autodetect);
Instance load_instance_file(const std::string& path,
                            InstanceFormat format = InstanceFormat::autodetect);

// Re-emit sizes in current job order. Round-trips exactly: values are
// printed with shortest exact representation.
std::string serialize_json(const Instance& inst);
std::string serialize_text(const Instance& inst);

// n-1 unit jobs followed by one job of size `large` (> 1).
Instance gen_example_i(int n, double large);

// round(2*eps*d_target) unit jobs plus one job of size d_target - that count.
// The achieved split may differ slightly from eps after rounding; callers
// should evaluate the built instance rather than the requested parameters.
Instance gen_lower_bound(double eps, double d_target);

// For each l in 0..p, 2^(p-l) jobs of size 2^l; every size class sums to 2^p.
Instance gen_powers(int p);

// n sizes drawn independently uniform on (0, max_size]; deterministic per seed.
Instance gen_uniform(int n, double max_size, std::uint64_t seed);

}  // namespace fairsched
