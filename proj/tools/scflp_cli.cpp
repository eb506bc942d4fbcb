#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "scflp/bnc.hpp"
#include "scflp/combinatorics.hpp"
#include "scflp/oracle.hpp"
#include "scflp/verify.hpp"

namespace fs = std::filesystem;
using namespace scflp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitLimit = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::vector<std::string> inputs;
  std::string out;
  std::string form = "GSF";
  std::vector<std::string> forms;
  double time_limit = 7200.0;
  double gap = 0.0;
  std::uint64_t seed = 0;
  std::string style = "biesinger";
  int m = 0;
  int n = 0;
  int p = 1;
  int r = 1;
  int count = 1;
  int workers = 1;
  std::string checks = "hull,prop61,aggregation";
  int trials = 200;
  std::string log;
  std::string profile;
  bool omit_timing = false;
};

Instance read_input(const std::string& path) {
  if (path.empty()) throw UsageError("--in is required");
  if (!fs::exists(path)) throw UsageError("no such file: " + path);
  return load_instance_file(path);
}

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw UsageError("cannot write " + path);
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

GeneratorParams generator_params(const Options& o, std::uint64_t seed) {
  if (o.m <= 0 || o.n <= 0) throw UsageError("--m and --n must be positive");
  GeneratorParams gp;
  gp.style = parse_generator_style(o.style);
  gp.m = o.m;
  gp.n = o.n;
  gp.p = o.p;
  gp.r = o.r;
  gp.seed = seed;
  return gp;
}

std::string generated_name(const GeneratorParams& gp) {
  return fmt::format("{}_m{}_n{}_p{}_r{}_s{}", to_string(gp.style), gp.m, gp.n, gp.p, gp.r, gp.seed);
}

BncConfig bnc_config(const Options& o, Formulation form) {
  if (!(o.time_limit > 0.0)) throw UsageError("--time-limit must be positive");
  if (o.gap < 0.0) throw UsageError("--gap must be non-negative");
  BncConfig cfg;
  cfg.formulation = form;
  cfg.time_limit = o.time_limit;
  cfg.gap = o.gap;
  cfg.seed = o.seed;
  return cfg;
}

int cmd_generate(const Options& o) {
  if (o.count < 1) throw UsageError("--count must be at least 1");
  if (o.count == 1) {
    const auto gp = generator_params(o, o.seed);
    Sink sink(o.out);
    save_instance(generate_instance(gp), sink.stream());
    return kExitOk;
  }
  if (o.out.empty()) throw UsageError("--out directory is required with --count > 1");
  fs::create_directories(o.out);
  for (int k = 0; k < o.count; ++k) {
    const auto gp = generator_params(o, o.seed + static_cast<std::uint64_t>(k));
    const auto path = fs::path(o.out) / (generated_name(gp) + ".scflp");
    save_instance_file(generate_instance(gp), path.string());
    std::cout << path.string() << '\n';
  }
  return kExitOk;
}

int cmd_solve(const Options& o) {
  if (o.inputs.size() != 1) throw UsageError("solve takes exactly one --in");
  const auto& path = o.inputs.front();
  const Instance inst = read_input(path);
  const Formulation form = parse_formulation(o.form);
  BncConfig cfg = bnc_config(o, form);
  std::ofstream log;
  if (!o.log.empty()) {
    log.open(o.log);
    if (!log) throw UsageError("cannot write " + o.log);
    cfg.log = &log;
  }
  const auto rep = solve(inst, cfg);
  std::cout << fmt::format("O={:.6f} status={} x={} UB={:.6f} nodes={} cuts={} time_s={:.3f}\n", rep.objective,
                           to_string(rep.status), rep.incumbent.to_string(), rep.upper_bound, rep.nodes, rep.cuts,
                           rep.total_time);
  if (!o.out.empty()) {
    Sink sink(o.out);
    sink.stream() << csv_header() << '\n' << csv_row(stem(path), form, rep, !o.omit_timing) << '\n';
  }
  return rep.status == SolveStatus::kOptimal ? kExitOk : kExitLimit;
}

int cmd_oracle(const Options& o) {
  if (o.inputs.size() != 1) throw UsageError("oracle takes exactly one --in");
  const Instance inst = read_input(o.inputs.front());
  const auto rep = brute_force_solve(inst);
  Sink sink(o.out);
  auto& out = sink.stream();
  out << fmt::format("value={:.6f} optimal_sets={} pairs={}\n", rep.value, rep.optimal.size(), rep.pairs);
  for (const auto& x : rep.optimal) out << x.to_string() << '\n';
  return kExitOk;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) items.push_back(item);
  return items;
}

BinaryChoice random_choice(std::mt19937_64& rng, int n, int k) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) idx[static_cast<std::size_t>(j)] = j;
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(static_cast<std::size_t>(k));
  return BinaryChoice::from_sites(n, idx);
}

int cmd_verify(const Options& o) {
  if (o.inputs.size() != 1) throw UsageError("verify takes exactly one --in");
  const Instance inst = read_input(o.inputs.front());
  const auto checks = split_list(o.checks);
  if (checks.empty()) throw UsageError("--checks is empty");
  for (const auto& c : checks)
    if (c != "hull" && c != "prop61" && c != "aggregation") throw UsageError("unknown check '" + c + "'");

  Sink sink(o.out);
  auto& out = sink.stream();
  out << "instance " << instance_digest(inst) << '\n';
  std::mt19937_64 rng(o.seed);
  bool all_pass = true;
  auto report = [&](const std::string& name, double discrepancy, double tol, const std::string& extra) {
    const bool pass = discrepancy < tol;
    all_pass = all_pass && pass;
    out << fmt::format("{}: {} max_discrepancy={:.3e}{}\n", name, pass ? "pass" : "FAIL", discrepancy, extra);
  };

  for (const auto& c : checks) {
    if (c == "hull") {
      const auto y = random_choice(rng, inst.n, inst.r);
      const auto h = verify_hull(inst, y, {o.trials, o.seed, false});
      report("hull", h.max_discrepancy, 1e-7, fmt::format(" directions={} y={}", h.directions, y.to_string()));
    } else if (c == "prop61") {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      double worst = 0.0;
      const int samples = 20;
      for (int s = 0; s < samples; ++s) {
        std::vector<double> x(static_cast<std::size_t>(inst.n));
        for (auto& v : x) v = unit(rng);
        worst = std::max(worst, verify_prop61(inst, x, random_choice(rng, inst.n, inst.r)).discrepancy);
      }
      report("prop61", worst, 1e-10, fmt::format(" samples={}", samples));
    } else {
      const auto a = verify_aggregation(inst, {10, o.seed, 40'000});
      const double worst = std::max({a.discrepancy, a.max_greedy_discrepancy, a.max_dual_discrepancy});
      report("aggregation", worst, 1e-7, fmt::format(" shared={:.9f} disaggregated={:.9f}", a.shared_value,
                                                      a.disaggregated_value));
    }
  }
  return all_pass ? kExitOk : kExitLimit;
}

struct BenchJob {
  std::string name;
  std::string path;  // empty for generated instances
  GeneratorParams params;
  Formulation form = Formulation::kGSF;
};

struct BenchResult {
  std::string row;
  bool solved = false;
  double time = 0.0;
};

std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (const auto& in : inputs) {
    if (!fs::exists(in)) throw UsageError("no such file: " + in);
    if (fs::is_directory(in)) {
      std::vector<std::string> found;
      for (const auto& e : fs::directory_iterator(in))
        if (e.is_regular_file() && e.path().extension() == ".scflp") found.push_back(e.path().string());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(in);
    }
  }
  return files;
}

void write_profiles(const std::string& prefix, const std::vector<Formulation>& forms, const std::vector<BenchJob>& jobs,
                    const std::vector<BenchResult>& results) {
  for (auto form : forms) {
    std::vector<double> times;
    std::size_t total = 0;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      if (jobs[k].form != form) continue;
      ++total;
      if (results[k].solved) times.push_back(results[k].time);
    }
    std::sort(times.begin(), times.end());
    const auto path = prefix + "_" + to_string(form) + ".dat";
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << "# time_s fraction_solved\n";
    out << fmt::format("{:.6f} {:.6f}\n", 0.0, 0.0);
    for (std::size_t k = 0; k < times.size(); ++k)
      out << fmt::format("{:.6f} {:.6f}\n", times[k], static_cast<double>(k + 1) / static_cast<double>(total));
  }
}

int cmd_bench(const Options& o) {
  if (o.workers < 1) throw UsageError("--workers must be at least 1");
  std::vector<Formulation> forms;
  for (const auto& f : o.forms.empty() ? std::vector<std::string>{"SF", "GSF", "EF"} : o.forms)
    for (const auto& item : split_list(f)) forms.push_back(parse_formulation(item));

  std::vector<BenchJob> jobs;
  if (!o.inputs.empty()) {
    for (const auto& file : expand_inputs(o.inputs))
      for (auto form : forms) jobs.push_back({stem(file), file, {}, form});
  } else {
    if (o.count < 1) throw UsageError("--count must be at least 1");
    for (int k = 0; k < o.count; ++k) {
      const auto gp = generator_params(o, o.seed + static_cast<std::uint64_t>(k));
      for (auto form : forms) jobs.push_back({generated_name(gp), "", gp, form});
    }
  }
  if (jobs.empty()) throw UsageError("no instances to run");

  const BncConfig base = bnc_config(o, Formulation::kGSF);
  std::vector<BenchResult> results(jobs.size());
  std::vector<char> ready(jobs.size(), 0);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> limit_hit{false};

  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      const auto& job = jobs[k];
      BenchResult res;
      try {
        const Instance inst = job.path.empty() ? generate_instance(job.params) : load_instance_file(job.path);
        BncConfig cfg = base;
        cfg.formulation = job.form;
        const auto rep = solve(inst, cfg);
        res.row = csv_row(job.name, job.form, rep, !o.omit_timing);
        res.solved = rep.status == SolveStatus::kOptimal;
        res.time = rep.total_time;
      } catch (const std::exception& e) {
        res.row = fmt::format("{},{},,,,,,,error", job.name, to_string(job.form));
        std::cerr << job.name << ": " << e.what() << '\n';
      }
      if (!res.solved) limit_hit = true;
      {
        std::lock_guard lock(mu);
        results[k] = std::move(res);
        ready[k] = 1;
      }
      cv.notify_one();
    }
  };

  const int nthreads = std::min<int>(o.workers, static_cast<int>(jobs.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);

  // Rows go out in job order regardless of completion order.
  {
    Sink sink(o.out);
    auto& out = sink.stream();
    out << csv_header() << '\n' << std::flush;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      std::unique_lock lock(mu);
      cv.wait(lock, [&] { return ready[k] != 0; });
      out << results[k].row << '\n' << std::flush;
    }
  }
  for (auto& t : pool) t.join();

  if (!o.profile.empty()) write_profiles(o.profile, forms, jobs, results);
  return limit_hit ? kExitLimit : kExitOk;
}

void add_instance_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--style", o.style, "Generator style")->check(CLI::IsMember({"biesinger", "qi"}));
  cmd->add_option("--m", o.m, "Number of customers");
  cmd->add_option("--n", o.n, "Number of candidate sites");
  cmd->add_option("--p", o.p, "Leader facilities");
  cmd->add_option("--r", o.r, "Follower facilities");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--count", o.count, "Number of instances (consecutive seeds)");
}

void add_solver_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--time-limit", o.time_limit, "Time limit per solve in seconds")->capture_default_str();
  cmd->add_option("--gap", o.gap, "Relative optimality gap")->capture_default_str();
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Exact solver for the sequential competitive facility location problem"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "Write a random instance");
  add_instance_flags(gen, o);
  gen->add_option("--out", o.out, "Output file (directory when --count > 1)");

  auto* sol = app.add_subcommand("solve", "Solve one instance by branch-and-cut");
  sol->add_option("--in", o.inputs, "Instance file")->required();
  sol->add_option("--form", o.form, "Formulation")->check(CLI::IsMember({"SF", "GSF", "EF"}))->capture_default_str();
  sol->add_option("--seed", o.seed, "Random seed");
  sol->add_option("--out", o.out, "CSV output file");
  sol->add_option("--log", o.log, "JSON-lines event log");
  sol->add_flag("--omit-timing", o.omit_timing, "Leave timing columns empty");
  add_solver_flags(sol, o);

  auto* ora = app.add_subcommand("oracle", "Solve by exhaustive enumeration");
  ora->add_option("--in", o.inputs, "Instance file")->required();
  ora->add_option("--out", o.out, "Output file");

  auto* ver = app.add_subcommand("verify", "Check relaxation identities on one instance");
  ver->add_option("--in", o.inputs, "Instance file")->required();
  ver->add_option("--checks", o.checks, "Comma-separated subset of hull,prop61,aggregation")->capture_default_str();
  ver->add_option("--seed", o.seed, "Random seed");
  ver->add_option("--trials", o.trials, "Directions for the hull check")->capture_default_str();
  ver->add_option("--out", o.out, "Output file");

  auto* ben = app.add_subcommand("bench", "Run a campaign and write CSV rows");
  ben->add_option("--in", o.inputs, "Instance files or directories");
  ben->add_option("--form", o.forms, "Formulations (comma-separated or repeated)");
  ben->add_option("--workers", o.workers, "Parallel solves")->capture_default_str();
  ben->add_option("--out", o.out, "CSV output file");
  ben->add_option("--profile", o.profile, "Prefix for performance-profile data files");
  ben->add_flag("--omit-timing", o.omit_timing, "Leave timing columns empty");
  add_instance_flags(ben, o);
  add_solver_flags(ben, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(o);
    if (*sol) return cmd_solve(o);
    if (*ora) return cmd_oracle(o);
    if (*ver) return cmd_verify(o);
    return cmd_bench(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitLimit;
  }
}

int main(int argc, char** argv) { return run(argc, argv); }
