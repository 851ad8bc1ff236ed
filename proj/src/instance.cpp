#include "fairsched/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

#include "fairsched/errors.hpp"
#include "fairsched/rng.hpp"

#include "json.hpp"

namespace fairsched {

namespace {

std::vector<std::size_t> canonical_positions(const std::vector<Job>& jobs) {
  std::vector<std::size_t> order(jobs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (jobs[a].size != jobs[b].size) return jobs[a].size < jobs[b].size;
    return jobs[a].id < jobs[b].id;
  });
  return order;
}

}  // namespace

Instance::Instance(const std::vector<double>& sizes) {
  jobs_.reserve(sizes.size());
  int next_id = 1;
  for (double s : sizes) jobs_.push_back(Job{next_id++, s});
  validate_and_index();
}

Instance::Instance(std::vector<Job> jobs) : jobs_(std::move(jobs)) {
  validate_and_index();
}

void Instance::validate_and_index() {
  if (jobs_.empty()) throw ValidationError("instance has no jobs");
  position_.reserve(jobs_.size());
  for (std::size_t i = 0; i < jobs_.size(); ++i) {
    const Job& j = jobs_[i];
    if (!std::isfinite(j.size)) {
      throw ValidationError("job " + std::to_string(i + 1) +
                            ": size is not finite");
    }
    if (j.size < 0.0) {
      throw ValidationError("job " + std::to_string(i + 1) +
                            ": negative size " + std::to_string(j.size));
    }
    if (!position_.emplace(j.id, i).second) {
      throw ValidationError("job " + std::to_string(i + 1) +
                            ": duplicate id " + std::to_string(j.id));
    }
  }
  // D is the left-to-right sum over the canonical order regardless of the
  // current job order, so reorderings cannot perturb it.
  total_ = 0.0;
  for (std::size_t pos : canonical_positions(jobs_)) total_ += jobs_[pos].size;
}

std::size_t Instance::position_of(int id) const {
  auto it = position_.find(id);
  if (it == position_.end()) {
    throw ParameterError("unknown job id " + std::to_string(id));
  }
  return it->second;
}

bool Instance::is_canonical() const {
  for (std::size_t i = 1; i < jobs_.size(); ++i) {
    const Job& a = jobs_[i - 1];
    const Job& b = jobs_[i];
    if (a.size > b.size || (a.size == b.size && a.id > b.id)) return false;
  }
  return true;
}

Instance canonicalize(const Instance& inst) {
  std::vector<Job> sorted;
  sorted.reserve(inst.size());
  for (std::size_t pos : canonical_positions(inst.jobs())) {
    sorted.push_back(inst.job(pos));
  }
  return Instance(std::move(sorted));
}

namespace {

Instance parse_json_instance(std::string_view source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(source);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("sizes")) {
    throw ParseError("json: expected an object with a \"sizes\" array");
  }
  const auto& sizes = doc["sizes"];
  if (!sizes.is_array()) throw ParseError("json: \"sizes\" is not an array");
  std::vector<double> values;
  values.reserve(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (!sizes[i].is_number()) {
      throw ParseError("json: sizes[" + std::to_string(i) +
                       "] is not a number");
    }
    values.push_back(sizes[i].get<double>());
  }
  return Instance(values);
}

Instance parse_text_instance(std::string_view source) {
  std::vector<double> values;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= source.size()) {
    std::size_t end = source.find('\n', begin);
    if (end == std::string_view::npos) end = source.size();
    std::string_view line = source.substr(begin, end - begin);
    ++line_no;
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    std::istringstream tokens{std::string(line)};
    std::string token;
    while (tokens >> token) {
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError("text: line " + std::to_string(line_no) +
                         ": cannot parse number '" + token + "'");
      }
      values.push_back(value);
    }
    begin = end + 1;
    if (end == source.size()) break;
  }
  if (values.empty()) throw ParseError("text: no numbers found");
  return Instance(values);
}

}  // namespace

Instance load_instance(std::string_view source, InstanceFormat format) {
  switch (format) {
    case InstanceFormat::json:
      return parse_json_instance(source);
    case InstanceFormat::text:
      return parse_text_instance(source);
    case InstanceFormat::autodetect:
      try {
        return parse_json_instance(source);
      } catch (const ParseError&) {
        return parse_text_instance(source);
      }
  }
  throw ParameterError("unknown instance format");
}

Instance load_instance(std::istream& source, InstanceFormat format) {
  std::ostringstream buffer;
  buffer << source.rdbuf();
  return load_instance(buffer.str(), format);
}

Instance load_instance_file(const std::string& path, InstanceFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open instance file: " + path);
  return load_instance(in, format);
}

namespace {

std::string shortest_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace

std::string serialize_json(const Instance& inst) {
  std::string out = "{\"sizes\":[";
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (i) out += ',';
    out += shortest_double(inst.job(i).size);
  }
  out += "]}";
  return out;
}

std::string serialize_text(const Instance& inst) {
  std::string out;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    out += shortest_double(inst.job(i).size);
    out += '\n';
  }
  return out;
}

Instance gen_example_i(int n, double large) {
  if (n < 2) throw ParameterError("example-i requires n >= 2");
  if (!(large > 1.0) || !std::isfinite(large)) {
    throw ParameterError("example-i requires large > 1");
  }
  std::vector<double> sizes(static_cast<std::size_t>(n) - 1, 1.0);
  sizes.push_back(large);
  return Instance(sizes);
}

Instance gen_lower_bound(double eps, double d_target) {
  if (!(eps > 0.0) || !(eps < 0.5)) {
    throw ParameterError("lower-bound requires eps in (0, 1/2)");
  }
  if (!std::isfinite(d_target) || d_target <= 0.0) {
    throw ParameterError("lower-bound requires a positive total duration");
  }
  const auto unit_count = static_cast<std::int64_t>(std::llround(2.0 * eps * d_target));
  if (unit_count < 1) {
    throw ParameterError("lower-bound: 2*eps*D rounds below one unit job");
  }
  const double large = d_target - static_cast<double>(unit_count);
  if (!(large > 1.0)) {
    throw ParameterError("lower-bound infeasible: remaining large job would be " +
                         std::to_string(large) + " (needs > 1)");
  }
  std::vector<double> sizes(static_cast<std::size_t>(unit_count), 1.0);
  sizes.push_back(large);
  return Instance(sizes);
}

Instance gen_powers(int p) {
  if (p < 0 || p > 20) throw ParameterError("powers requires 0 <= p <= 20");
  std::vector<double> sizes;
  sizes.reserve((std::size_t{1} << (p + 1)) - 1);
  for (int level = 0; level <= p; ++level) {
    const double size = static_cast<double>(std::int64_t{1} << level);
    const std::int64_t count = std::int64_t{1} << (p - level);
    for (std::int64_t i = 0; i < count; ++i) sizes.push_back(size);
  }
  return Instance(sizes);
}

Instance gen_uniform(int n, double max_size, std::uint64_t seed) {
  if (n < 1) throw ParameterError("uniform requires n >= 1");
  if (!(max_size > 0.0) || !std::isfinite(max_size)) {
    throw ParameterError("uniform requires max_size > 0");
  }
  rng::Engine engine(seed);
  std::vector<double> sizes;
  sizes.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) sizes.push_back(max_size * engine.unit_open_closed());
  return Instance(sizes);
}

}  // namespace fairsched
