// fairsched: generate, evaluate, verify and export fair scheduling runs.
//
// Exit codes: 0 success, 1 usage error, 2 invalid input or parameters,
// 3 infeasible exact computation, 4 verification mismatch.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "fairsched/errors.hpp"
#include "fairsched/frontier.hpp"
#include "fairsched/instance.hpp"
#include "fairsched/metrics.hpp"
#include "fairsched/multimachine.hpp"
#include "fairsched/oracle.hpp"
#include "fairsched/schedule.hpp"
#include "fairsched/version.hpp"

namespace {

using nlohmann::ordered_json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fairsched::IoError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// UTC timestamp; FAIRSCHED_TIMESTAMP pins it for reproducible output bytes.
std::string timestamp_utc() {
  if (const char* pinned = std::getenv("FAIRSCHED_TIMESTAMP")) return pinned;
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Data lands on the final path only after a complete successful write.
void atomic_write(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw fairsched::IoError("cannot write file: " + tmp.string());
    out << contents;
    if (!out.flush()) throw fairsched::IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw fairsched::IoError("cannot move output into place: " + ec.message());
  }
}

void write_or_print(const std::string& out_path, const std::string& contents) {
  if (out_path.empty() || out_path == "-") {
    std::cout << contents;
  } else {
    atomic_write(out_path, contents);
  }
}

ordered_json make_manifest(const std::string& subcommand, ordered_json parameters,
                           std::uint64_t seed, const std::string& input_bytes) {
  ordered_json manifest;
  manifest["subcommand"] = subcommand;
  manifest["parameters"] = std::move(parameters);
  manifest["seed"] = seed;
  manifest["tool_version"] = fairsched::kVersion;
  if (input_bytes.empty()) {
    manifest["input_digest"] = nullptr;
  } else {
    manifest["input_digest"] = "sha256:" + sha256_hex(input_bytes);
  }
  manifest["timestamp"] = timestamp_utc();
  return manifest;
}

struct CloseSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
};

bool close_enough(double a, double b, const CloseSpec& tol) {
  const double diff = std::fabs(a - b);
  return diff <= tol.abs_tol ||
         diff <= tol.rel_tol * std::max(std::fabs(a), std::fabs(b));
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  std::string kind;
  int n = 4;
  double large = 100.0;
  double eps = 0.1;
  double d_total = 1000.0;
  int p = 9;
  double max_size = 10.0;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen(const GenArgs& args) {
  fairsched::Instance inst;
  if (args.kind == "example-i") {
    inst = fairsched::gen_example_i(args.n, args.large);
  } else if (args.kind == "lower-bound") {
    inst = fairsched::gen_lower_bound(args.eps, args.d_total);
  } else if (args.kind == "powers") {
    inst = fairsched::gen_powers(args.p);
  } else if (args.kind == "uniform") {
    inst = fairsched::gen_uniform(args.n, args.max_size, args.seed);
  } else {
    throw CLI::ValidationError("--kind",
                               "expected example-i|lower-bound|powers|uniform");
  }
  atomic_write(args.out, fairsched::serialize_json(inst) + "\n");
  std::cout << "n=" << inst.size() << " D=" << inst.total() << " -> " << args.out
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string instance_path;
  std::string mechanism;
  int machines = 1;
  std::string mode = "exact";
  int samples = 10000;
  std::uint64_t seed = 0;
  std::string out;
};

int run_eval(const EvalArgs& args) {
  const std::string bytes = read_file(args.instance_path);
  const fairsched::Instance inst = fairsched::load_instance(bytes);
  const fairsched::MechanismSpec spec = fairsched::MechanismSpec::parse(args.mechanism);

  ordered_json parameters;
  parameters["instance"] = args.instance_path;
  parameters["mechanism"] = args.mechanism;
  parameters["machines"] = args.machines;
  parameters["mode"] = args.mode;
  if (args.mode == "mc") parameters["samples"] = args.samples;

  ordered_json doc;
  if (args.machines <= 1) {
    doc = fairsched::evaluate(inst, spec).to_json();
  } else {
    if (spec.kind != fairsched::MechanismSpec::Kind::target) {
      throw CLI::ValidationError(
          "--mechanism", "multi-machine evaluation requires target:EPS");
    }
    fairsched::OracleConfig cfg;
    cfg.mc_samples = args.samples;
    cfg.seed = args.seed;
    const auto mode = args.mode == "mc" ? fairsched::EvalMode::mc
                                        : fairsched::EvalMode::exact;
    doc = fairsched::evaluate_multi(inst, args.machines, spec.eps, mode, cfg)
              .to_json();
  }
  doc["manifest"] = make_manifest("eval", parameters, args.seed, bytes);

  const std::string rendered = doc.dump(2) + "\n";
  write_or_print(args.out, rendered);
  if (!args.out.empty() && args.out != "-") {
    std::cout << "mechanism=" << doc["mechanism"].get<std::string>()
              << " social_cost=" << doc["social_cost"].get<double>()
              << " fairness_ratio=" << doc["fairness_ratio"].get<double>()
              << " efficacy_ratio=" << doc["efficacy_ratio"].get<double>()
              << " -> " << args.out << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// frontier

struct FrontierArgs {
  std::string instance_path;
  std::string out;
};

int run_frontier(const FrontierArgs& args) {
  const fairsched::Instance inst =
      fairsched::load_instance(read_file(args.instance_path));
  const auto points = fairsched::frontier_points(inst);
  write_or_print(args.out, fairsched::frontier_csv(points));
  if (!args.out.empty() && args.out != "-") {
    std::cout << "k=" << points.size() << " rows -> " << args.out << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string instance_path;
  std::string mechanism;
  int machines = 1;
  std::string oracle = "exact";
  std::uint64_t seed = 0;
  std::string out;
};

struct OracleChoice {
  bool exact = true;
  int samples = 0;
};

OracleChoice parse_oracle(const std::string& text) {
  if (text == "exact") return {true, 0};
  if (text.rfind("mc:", 0) == 0) {
    const int samples = std::stoi(text.substr(3));
    if (samples < 1) {
      throw CLI::ValidationError("--oracle", "mc sample count must be >= 1");
    }
    return {false, samples};
  }
  throw CLI::ValidationError("--oracle", "expected exact or mc:N");
}

int run_verify(const VerifyArgs& args) {
  const std::string bytes = read_file(args.instance_path);
  const fairsched::Instance inst = fairsched::load_instance(bytes);
  const fairsched::MechanismSpec spec = fairsched::MechanismSpec::parse(args.mechanism);
  const OracleChoice oracle = parse_oracle(args.oracle);

  fairsched::OracleConfig cfg;
  cfg.seed = args.seed;
  cfg.mc_samples = oracle.samples;

  struct Row {
    int id;
    double size;
    double closed;
    double value;
    double std_error;
  };
  std::vector<Row> rows;

  if (args.machines <= 1) {
    const fairsched::Instance canon = fairsched::canonicalize(inst);
    const auto sched = fairsched::resolve_schedule(canon, spec);
    const auto closed = fairsched::expected_completions(canon, sched);
    std::vector<double> values;
    std::vector<double> errors(canon.size(), 0.0);
    if (oracle.exact) {
      values = fairsched::exact_completions_by_enumeration(canon, sched, cfg);
    } else {
      const auto mc = fairsched::mc_completions(canon, sched, cfg);
      values = mc.mean;
      errors = mc.std_error;
    }
    for (std::size_t i = 0; i < canon.size(); ++i) {
      rows.push_back(Row{canon.job(i).id, canon.job(i).size, closed[i],
                         values[i], errors[i]});
    }
  } else {
    const auto bs = fairsched::pad_and_blocks(inst, args.machines);
    const auto closed =
        fairsched::exact_multi_evaluation(bs, spec, cfg,
                                          fairsched::PerMachineEval::closed_form);
    std::vector<double> values;
    std::vector<double> errors(bs.padded.size(), 0.0);
    if (oracle.exact) {
      // Independent route: permutation enumeration inside every matching.
      values = fairsched::exact_multi_evaluation(
                   bs, spec, cfg, fairsched::PerMachineEval::enumeration)
                   .completions;
    } else {
      const auto mc = fairsched::mc_multi_evaluation(bs, spec, cfg,
                                                     /*sample_orders=*/true);
      values = mc.mean;
      errors = mc.std_error;
    }
    for (std::size_t i = 0; i < bs.padded.size(); ++i) {
      const auto& job = bs.padded.job(i);
      if (fairsched::BlockStructure::is_dummy(job.id)) continue;
      rows.push_back(Row{job.id, job.size, closed.completions[i], values[i],
                         errors[i]});
    }
  }

  ordered_json parameters;
  parameters["instance"] = args.instance_path;
  parameters["mechanism"] = args.mechanism;
  parameters["machines"] = args.machines;
  parameters["oracle"] = args.oracle;

  ordered_json doc;
  doc["manifest"] = make_manifest("verify", parameters, args.seed, bytes);
  doc["mechanism"] = args.mechanism;
  doc["machines"] = args.machines;
  doc["oracle_mode"] = oracle.exact ? "exact" : "mc";
  if (!oracle.exact) doc["samples"] = oracle.samples;
  doc["criterion"] =
      oracle.exact ? "relative 1e-9 (absolute 1e-12 near zero)"
                   : "4 standard errors";

  bool all_pass = true;
  double max_abs = 0.0;
  double max_rel = 0.0;
  auto jobs = ordered_json::array();
  for (const Row& row : rows) {
    const double abs_dev = std::fabs(row.closed - row.value);
    const double scale = std::max(std::fabs(row.closed), std::fabs(row.value));
    const double rel_dev = scale > 0.0 ? abs_dev / scale : abs_dev;
    bool pass;
    if (oracle.exact) {
      pass = close_enough(row.closed, row.value, CloseSpec{});
    } else {
      pass = abs_dev <= 4.0 * row.std_error + 1e-12;
    }
    all_pass = all_pass && pass;
    max_abs = std::max(max_abs, abs_dev);
    max_rel = std::max(max_rel, rel_dev);

    ordered_json item;
    item["id"] = row.id;
    item["size"] = row.size;
    item["closed_form"] = row.closed;
    item["oracle"] = row.value;
    item["abs_dev"] = abs_dev;
    item["rel_dev"] = rel_dev;
    if (!oracle.exact) item["std_error"] = row.std_error;
    item["pass"] = pass;
    jobs.push_back(std::move(item));
  }
  doc["jobs"] = std::move(jobs);
  doc["max_abs_dev"] = max_abs;
  doc["max_rel_dev"] = max_rel;
  doc["all_pass"] = all_pass;

  write_or_print(args.out, doc.dump(2) + "\n");
  return all_pass ? 0 : 4;
}

// ---------------------------------------------------------------------------
// bounds

int run_bounds(const std::string& eps_list) {
  std::vector<double> values;
  std::stringstream stream(eps_list);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    double eps = 0.0;
    try {
      eps = std::stod(token);
    } catch (const std::exception&) {
      std::cerr << "bounds: cannot parse eps '" << token << "'\n";
      return 1;
    }
    if (!(eps > 0.0)) {
      std::cerr << "bounds: eps must be > 0, got " << token << "\n";
      return 1;
    }
    values.push_back(eps);
  }
  if (values.empty()) {
    std::cerr << "bounds: empty eps list\n";
    return 1;
  }
  std::printf("%-12s %-14s %-14s %-14s\n", "eps", "lower", "upper", "gap");
  for (double eps : values) {
    std::printf("%-12.10g %-14.10g %-14.10g %-14.10g\n", eps,
                fairsched::bound_lower(eps), fairsched::bound_upper(eps),
                0.5 + eps / 4.0);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair and efficacious machine scheduling toolkit"};
  app.set_version_flag("--version", fairsched::kVersion);
  app.require_subcommand(1);

  GenArgs gen;
  auto* cmd_gen = app.add_subcommand("gen", "Generate a named instance family");
  cmd_gen->add_option("--kind", gen.kind, "example-i|lower-bound|powers|uniform")
      ->required();
  cmd_gen->add_option("--n", gen.n, "job count (example-i, uniform)");
  cmd_gen->add_option("--large", gen.large, "large job size (example-i)");
  cmd_gen->add_option("--eps", gen.eps, "fairness level (lower-bound)");
  cmd_gen->add_option("--d", gen.d_total, "total duration (lower-bound)");
  cmd_gen->add_option("--p", gen.p, "largest power (powers)");
  cmd_gen->add_option("--max-size", gen.max_size, "size cap (uniform)");
  cmd_gen->add_option("--seed", gen.seed, "generator seed (uniform)");
  cmd_gen->add_option("--out", gen.out, "output instance path")->required();

  EvalArgs eval;
  auto* cmd_eval = app.add_subcommand("eval", "Evaluate a mechanism on an instance");
  cmd_eval->add_option("--instance", eval.instance_path, "instance file")->required();
  cmd_eval->add_option("--mechanism", eval.mechanism,
                       "smith|random|pareto:K|target:EPS")->required();
  cmd_eval->add_option("--machines", eval.machines, "machine count (default 1)");
  cmd_eval->add_option("--mode", eval.mode, "exact|mc (multi-machine)")
      ->check(CLI::IsMember({"exact", "mc"}));
  cmd_eval->add_option("--samples", eval.samples, "mc sample count");
  cmd_eval->add_option("--seed", eval.seed, "mc seed");
  cmd_eval->add_option("--out", eval.out, "report path (default stdout)");

  FrontierArgs frontier;
  auto* cmd_frontier =
      app.add_subcommand("frontier", "Export the fairness/cost trade-off CSV");
  cmd_frontier->add_option("--instance", frontier.instance_path, "instance file")
      ->required();
  cmd_frontier->add_option("--out", frontier.out, "CSV path (default stdout)");

  VerifyArgs verify;
  auto* cmd_verify =
      app.add_subcommand("verify", "Check closed forms against an oracle");
  cmd_verify->add_option("--instance", verify.instance_path, "instance file")
      ->required();
  cmd_verify->add_option("--mechanism", verify.mechanism,
                         "smith|random|pareto:K|target:EPS")->required();
  cmd_verify->add_option("--machines", verify.machines, "machine count");
  cmd_verify->add_option("--oracle", verify.oracle, "exact or mc:N");
  cmd_verify->add_option("--seed", verify.seed, "oracle seed");
  cmd_verify->add_option("--out", verify.out, "report path (default stdout)");

  std::string eps_list;
  auto* cmd_bounds =
      app.add_subcommand("bounds", "Tabulate guaranteed efficacy bounds");
  cmd_bounds->add_option("--eps-list", eps_list, "comma-separated eps values")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*cmd_gen) return run_gen(gen);
    if (*cmd_eval) return run_eval(eval);
    if (*cmd_frontier) return run_frontier(frontier);
    if (*cmd_verify) return run_verify(verify);
    if (*cmd_bounds) return run_bounds(eps_list);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const fairsched::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what()
              << " (consider --mode mc / --oracle mc:N)\n";
    return 3;
  } catch (const fairsched::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const fairsched::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
