#include "scflp/bnc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "json.hpp"
#include "scflp/lp.hpp"
#include "scflp/market.hpp"
#include "scflp/separation.hpp"

namespace scflp {

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kTimeLimit: return "time_limit";
    case SolveStatus::kNodeLimit: return "node_limit";
    case SolveStatus::kRootOnly: return "root_only";
    case SolveStatus::kNumerical: return "numerical";
  }
  return "?";
}

double root_gap_pct(double root_bound, double optimum) {
  if (optimum == 0.0) return root_bound == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return (root_bound - optimum) / optimum * 100.0;
}

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

struct Node {
  double bound = 0.0;
  std::vector<std::int8_t> fix;  // -1 free, 0 or 1 fixed
  lp::Basis basis;
  int depth = 0;
  std::int64_t id = 0;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id > b.id;
  }
};

enum class NodeResult { kPruned, kIntegral, kBranch, kTimeout, kRootDone };

class Driver {
 public:
  Driver(const Instance& inst, const BncConfig& cfg)
      : inst_(inst), cfg_(cfg), order_(inst), pool_(inst), solver_(build_model()) {
    sep_cfg_.violation_tol = cfg.violation_tol;
    sep_cfg_.integrality_tol = cfg.integrality_tol;
  }

  SolveReport run();

 private:
  lp::LpModel build_model() const;
  int z_col(int i, int j) const { return 1 + inst_.n + i * inst_.n + j; }
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }
  bool out_of_time() const { return elapsed() >= cfg_.time_limit; }
  double prune_tol(double bound) const { return 1e-9 * std::max(1.0, std::abs(bound)) + cfg_.gap * std::abs(bound); }

  NodeResult process(Node& node, bool root);
  SeparationOutcome separate(const RelaxPoint& pt, bool integral, bool skip_pool);
  bool add_cuts(const std::vector<Cut>& cuts);
  void consider_leader(std::vector<int> sites, const char* source);
  void branch(const Node& node, const std::vector<double>& x, double bound);
  void event(json payload);

  const Instance& inst_;
  BncConfig cfg_;
  SiteOrdering order_;
  FollowerPool pool_;
  lp::LpSolver solver_;
  SeparationConfig sep_cfg_;

  Clock::time_point start_ = Clock::now();
  std::priority_queue<Node, std::vector<Node>, NodeOrder> queue_;
  std::set<std::vector<int>> cut_keys_;
  std::set<std::vector<int>> evaluated_;
  std::int64_t next_id_ = 0;
  double lower_ = -std::numeric_limits<double>::infinity();
  bool numerical_trouble_ = false;
  SolveReport report_;
};

lp::LpModel Driver::build_model() const {
  const int n = inst_.n;
  const int m = inst_.m;
  const bool ef = cfg_.formulation == Formulation::kEF;
  const int cols = 1 + n + (ef ? m * n : 0);
  lp::LpModel model(cols);
  model.set_col_name(0, "eta");
  model.set_objective(0, 1.0);
  // g never exceeds the total demand, which bounds the cut-free relaxation.
  model.set_col_bounds(0, -lp::kInf, inst_.total_weight());
  std::vector<std::pair<int, double>> card;
  for (int j = 0; j < n; ++j) {
    model.set_col_name(1 + j, fmt::format("x{}", j + 1));
    model.set_col_bounds(1 + j, 0.0, 1.0);
    card.push_back({1 + j, 1.0});
  }
  model.add_row(card, inst_.p, inst_.p);
  if (ef) {
    for (int i = 0; i < m; ++i) {
      std::vector<std::pair<int, double>> assign;
      for (int j = 0; j < n; ++j) {
        const int col = z_col(i, j);
        model.set_col_name(col, fmt::format("z{}_{}", i + 1, j + 1));
        model.set_col_bounds(col, 0.0, 1.0);
        model.add_row({{col, 1.0}, {1 + j, -1.0}}, -lp::kInf, 0.0);
        assign.push_back({col, 1.0});
      }
      model.add_row(assign, -lp::kInf, 1.0);
    }
  }
  return model;
}

void Driver::event(json payload) {
  if (!cfg_.log) return;
  payload["t"] = std::round(elapsed() * 1e6) / 1e6;
  *cfg_.log << payload.dump() << '\n';
}

bool Driver::add_cuts(const std::vector<Cut>& cuts) {
  bool added = false;
  for (const Cut& cut : cuts) {
    if (!cut_keys_.insert(cut.key()).second) continue;
    std::vector<std::pair<int, double>> coefs{{0, 1.0}};
    double rhs = 0.0;
    if (cut.kind == Formulation::kEF) {
      for (int i = 0; i < inst_.m; ++i)
        for (int j = 0; j < inst_.n; ++j)
          if (cut.zcoef(i, j) != 0.0) coefs.push_back({z_col(i, j), -cut.zcoef(i, j)});
    } else {
      rhs = cut.constant;
      for (int j = 0; j < inst_.n; ++j)
        if (cut.xcoef[static_cast<std::size_t>(j)] != 0.0) coefs.push_back({1 + j, -cut.xcoef[static_cast<std::size_t>(j)]});
    }
    solver_.add_row(coefs, -lp::kInf, rhs);
    ++report_.cuts;
    added = true;
  }
  return added;
}

SeparationOutcome Driver::separate(const RelaxPoint& pt, bool integral, bool skip_pool) {
  const auto t0 = Clock::now();
  SeparationConfig cfg = sep_cfg_;
  if (integral) cfg.violation_tol = cfg_.integral_violation_tol;
  SeparationOutcome out;
  FollowerPool empty(inst_);
  FollowerPool& pool = skip_pool ? empty : pool_;
  switch (cfg_.formulation) {
    case Formulation::kSF: out = separate_sf(pt, inst_, pool, cfg); break;
    case Formulation::kGSF: out = separate_gsf(pt, inst_, pool, order_, cfg); break;
    case Formulation::kEF: out = separate_ef(pt, inst_, cfg); break;
  }
  if (skip_pool && out.exact && cfg_.formulation != Formulation::kEF) pool_.add(out.response);
  if (out.exact) ++report_.exact_separations;
  report_.separation_time += std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

void Driver::consider_leader(std::vector<int> sites, const char* source) {
  std::sort(sites.begin(), sites.end());
  if (static_cast<int>(sites.size()) != inst_.p) return;
  if (!evaluated_.insert(sites).second) return;
  const auto t0 = Clock::now();
  const auto x = BinaryChoice::from_sites(inst_.n, sites);
  const auto best = follower_best_response(inst_, x);
  report_.separation_time += std::chrono::duration<double>(Clock::now() - t0).count();
  if (cfg_.formulation != Formulation::kEF) pool_.add(best.y);
  if (best.value > lower_) {
    lower_ = best.value;
    report_.incumbent = x;
    event({{"event", "incumbent"}, {"source", source}, {"value", best.value}, {"x", sites}});
  }
}

void Driver::branch(const Node& node, const std::vector<double>& x, double bound) {
  // Rounding heuristic: the p largest coordinates.
  std::vector<int> idx(static_cast<std::size_t>(inst_.n));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return x[static_cast<std::size_t>(a)] > x[static_cast<std::size_t>(b)]; });
  idx.resize(static_cast<std::size_t>(inst_.p));
  consider_leader(idx, "rounding");

  int pick = -1;
  double best = 2.0;
  for (int j = 0; j < inst_.n; ++j) {
    if (node.fix[static_cast<std::size_t>(j)] >= 0) continue;
    const double dist = std::abs(x[static_cast<std::size_t>(j)] - 0.5);
    if (std::abs(x[static_cast<std::size_t>(j)] - std::round(x[static_cast<std::size_t>(j)])) <= cfg_.integrality_tol) continue;
    if (dist < best) {
      best = dist;
      pick = j;
    }
  }
  if (pick < 0) throw std::logic_error("branching requested at an integral point");
  const lp::Basis basis = solver_.basis();
  for (std::int8_t value : {std::int8_t{1}, std::int8_t{0}}) {
    Node child;
    child.bound = bound;
    child.fix = node.fix;
    child.fix[static_cast<std::size_t>(pick)] = value;
    child.basis = basis;
    child.depth = node.depth + 1;
    child.id = ++next_id_;
    queue_.push(std::move(child));
  }
  event({{"event", "branch"}, {"node", node.id}, {"var", pick + 1}, {"value", x[static_cast<std::size_t>(pick)]}, {"bound", bound}});
}

NodeResult Driver::process(Node& node, bool root) {
  for (int j = 0; j < inst_.n; ++j) {
    const auto f = node.fix[static_cast<std::size_t>(j)];
    solver_.set_col_bounds(1 + j, f == 1 ? 1.0 : 0.0, f == 0 ? 0.0 : 1.0);
  }
  if (!node.basis.empty()) solver_.set_basis(node.basis);

  const int cap = root ? cfg_.max_root_rounds : cfg_.max_rounds_per_node;
  int rounds = 0;
  while (true) {
    if (out_of_time()) return NodeResult::kTimeout;
    const auto res = solver_.solve();
    report_.lp_iterations += res.iterations;
    if (res.status == lp::LpStatus::kInfeasible) return NodeResult::kPruned;
    if (res.status != lp::LpStatus::kOptimal) {
      numerical_trouble_ = true;
      event({{"event", "lp_failure"}, {"node", node.id}, {"status", lp::to_string(res.status)}, {"detail", res.diagnostics}});
      return NodeResult::kPruned;
    }
    const double bound = std::min(node.bound, res.objective);
    node.bound = bound;
    if (root) {
      report_.root_bound = res.objective;
      report_.root_rounds = rounds;
    }

    RelaxPoint pt;
    pt.eta = res.x[0];
    pt.x.assign(res.x.begin() + 1, res.x.begin() + 1 + inst_.n);
    for (double& v : pt.x) v = std::clamp(v, 0.0, 1.0);
    if (cfg_.formulation == Formulation::kEF) {
      Matrix z(inst_.m, inst_.n);
      for (int i = 0; i < inst_.m; ++i)
        for (int j = 0; j < inst_.n; ++j) z(i, j) = std::clamp(res.x[static_cast<std::size_t>(z_col(i, j))], 0.0, 1.0);
      pt.z = std::move(z);
    }
    const bool integral = is_integral(pt.x, cfg_.integrality_tol);
    if (!root && bound <= lower_ + prune_tol(bound)) return NodeResult::kPruned;

    auto out = separate(pt, integral, false);
    bool added = add_cuts(out.cuts);
    if (!added && integral && !out.certified) {
      // Pool cuts were all present already; settle the point exactly.
      out = separate(pt, integral, true);
      added = add_cuts(out.cuts);
    }
    if (added) {
      ++rounds;
      if (integral || rounds < cap) continue;
      if (root) report_.root_rounds = rounds;
      if (root && cfg_.root_only) return NodeResult::kRootDone;
      branch(node, pt.x, bound);
      return NodeResult::kBranch;
    }

    if (root) {
      report_.root_converged = true;
      report_.root_rounds = rounds;
    }
    if (integral) {
      if (!out.certified) {
        numerical_trouble_ = true;
        event({{"event", "uncertified_integral"}, {"node", node.id}});
        return NodeResult::kPruned;
      }
      std::vector<int> sites;
      for (int j = 0; j < inst_.n; ++j)
        if (pt.x[static_cast<std::size_t>(j)] > 0.5) sites.push_back(j);
      consider_leader(sites, "lp");
      return root && cfg_.root_only ? NodeResult::kRootDone : NodeResult::kIntegral;
    }
    if (root && cfg_.root_only) return NodeResult::kRootDone;
    if (bound <= lower_ + prune_tol(bound)) return NodeResult::kPruned;
    branch(node, pt.x, bound);
    return NodeResult::kBranch;
  }
}

SolveReport Driver::run() {
  start_ = Clock::now();
  event({{"event", "start"}, {"formulation", to_string(cfg_.formulation)}, {"m", inst_.m}, {"n", inst_.n}, {"p", inst_.p}, {"r", inst_.r}});

  if (inst_.p == inst_.n) {
    std::vector<int> all(static_cast<std::size_t>(inst_.n));
    std::iota(all.begin(), all.end(), 0);
    consider_leader(all, "trivial");
    report_.root_bound = lower_;
    report_.root_converged = true;
    queue_ = {};
  } else {
    Node root;
    root.bound = inst_.total_weight();
    root.fix.assign(static_cast<std::size_t>(inst_.n), -1);
    root.id = next_id_;
    queue_.push(std::move(root));
  }

  SolveStatus status = SolveStatus::kOptimal;
  std::int64_t processed = 0;
  double open_bound = -std::numeric_limits<double>::infinity();
  while (!queue_.empty()) {
    if (out_of_time()) {
      status = SolveStatus::kTimeLimit;
      break;
    }
    if (processed > cfg_.node_limit) {
      status = SolveStatus::kNodeLimit;
      break;
    }
    Node node = queue_.top();
    queue_.pop();
    if (processed > 0 && node.bound <= lower_ + prune_tol(node.bound)) {
      queue_ = {};
      break;
    }
    const bool root = processed == 0;
    ++processed;
    const auto result = process(node, root);
    event({{"event", "node"}, {"node", node.id}, {"depth", node.depth}, {"bound", node.bound}, {"lb", lower_},
           {"open", queue_.size()}, {"cuts", report_.cuts}});
    if (result == NodeResult::kTimeout) {
      open_bound = std::max(open_bound, node.bound);
      status = SolveStatus::kTimeLimit;
      break;
    }
    if (result == NodeResult::kRootDone) {
      status = SolveStatus::kRootOnly;
      open_bound = std::max(open_bound, node.bound);
      queue_ = {};
      break;
    }
  }
  if (!queue_.empty()) open_bound = std::max(open_bound, queue_.top().bound);
  if (status == SolveStatus::kOptimal && numerical_trouble_) status = SolveStatus::kNumerical;

  report_.status = status;
  report_.objective = lower_;
  report_.upper_bound = std::max(lower_, open_bound);
  if (status == SolveStatus::kOptimal) report_.upper_bound = lower_;
  report_.gap_pct = report_.upper_bound > 0 ? (report_.upper_bound - lower_) / report_.upper_bound * 100.0 : 0.0;
  report_.nodes = std::max<std::int64_t>(0, processed - 1);
  report_.pool_size = static_cast<std::int64_t>(pool_.size());
  if (std::isfinite(lower_) && !std::isnan(report_.root_bound)) report_.root_gap_pct = root_gap_pct(report_.root_bound, lower_);
  report_.total_time = elapsed();
  event({{"event", "done"}, {"status", to_string(status)}, {"objective", lower_}, {"upper_bound", report_.upper_bound},
         {"nodes", report_.nodes}, {"cuts", report_.cuts}, {"root_bound", report_.root_bound}});
  return report_;
}

}  // namespace

SolveReport solve(const Instance& inst, const BncConfig& cfg) {
  inst.validate();
  if (!(cfg.time_limit > 0)) throw std::invalid_argument("time limit must be positive");
  if (cfg.gap < 0) throw std::invalid_argument("gap tolerance must be nonnegative");
  Driver driver(inst, cfg);
  return driver.run();
}

RootReport root_relaxation(const Instance& inst, const BncConfig& cfg, std::optional<double> optimum) {
  BncConfig root_cfg = cfg;
  root_cfg.root_only = true;
  const auto rep = solve(inst, root_cfg);
  RootReport out;
  out.bound = rep.root_bound;
  out.rounds = rep.root_rounds;
  out.cuts = rep.cuts;
  out.converged = rep.root_converged;
  if (!optimum) {
    BncConfig full = cfg;
    full.root_only = false;
    full.log = nullptr;
    const auto solved = solve(inst, full);
    if (solved.status != SolveStatus::kOptimal) throw std::runtime_error("optimum not reached within limits");
    optimum = solved.objective;
  }
  out.optimum = *optimum;
  out.root_gap_pct = root_gap_pct(out.bound, out.optimum);
  return out;
}

std::string csv_header() { return "instance,formulation,objective,time_s,nodes,cuts,sep_time_s,root_gap_pct,status"; }

std::string csv_row(const std::string& instance_name, Formulation form, const SolveReport& report, bool include_timing) {
  const std::string time = include_timing ? fmt::format("{:.3f}", report.total_time) : "";
  const std::string sep = include_timing ? fmt::format("{:.3f}", report.separation_time) : "";
  // round-off below the printed precision would otherwise show as -0.0000
  const double rg_value = std::abs(report.root_gap_pct) < 5e-5 ? 0.0 : report.root_gap_pct;
  const std::string rg = std::isnan(report.root_gap_pct) ? "" : fmt::format("{:.4f}", rg_value);
  return fmt::format("{},{},{:.9f},{},{},{},{},{},{}", instance_name, to_string(form), report.objective, time,
                     report.nodes, report.cuts, sep, rg, to_string(report.status));
}

}  // namespace scflp
