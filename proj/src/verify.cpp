#include "scflp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "scflp/combinatorics.hpp"
#include "scflp/cuts.hpp"
#include "scflp/lp.hpp"
#include "scflp/market.hpp"
#include "scflp/oracle.hpp"

namespace scflp {

std::string instance_digest(const Instance& inst) {
  std::ostringstream out;
  save_instance(inst, out);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : out.str()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

namespace {

double optimal_value(const lp::LpResult& res, const char* what) {
  if (res.status != lp::LpStatus::kOptimal) throw std::runtime_error(fmt::format("{} LP ended {}", what, lp::to_string(res.status)));
  return res.objective;
}

void apply_fixings(lp::LpModel& model, int offset, const std::vector<std::pair<int, int>>& fixings) {
  for (const auto& [j, v] : fixings) model.set_col_bounds(offset + j, v, v);
}

double cut_polytope_support(const Instance& inst, const BinaryChoice& y, const CyMatrix& cy, double alpha,
                            const std::vector<double>& beta, bool cardinality, const std::vector<std::pair<int, int>>& fixings) {
  lp::LpModel model(1 + inst.n);
  model.set_objective(0, alpha);
  model.set_col_bounds(0, -lp::kInf, inst.total_weight());
  std::vector<std::pair<int, double>> card;
  for (int j = 0; j < inst.n; ++j) {
    model.set_objective(1 + j, beta[static_cast<std::size_t>(j)]);
    model.set_col_bounds(1 + j, 0.0, 1.0);
    card.push_back({1 + j, 1.0});
  }
  if (cardinality) model.add_row(card, inst.p, inst.p);
  apply_fixings(model, 1, fixings);
  lp::LpSolver solver(std::move(model));
  while (true) {
    const auto res = solver.solve();
    const double value = optimal_value(res, "cut polytope");
    std::vector<double> x(res.x.begin() + 1, res.x.end());
    for (double& v : x) v = std::clamp(v, 0.0, 1.0);
    const Cut cut = min_rhs_improved_cut(inst, cy, y, x);
    if (res.x[0] <= cut.rhs(x) + 1e-11) return value;
    std::vector<std::pair<int, double>> coefs{{0, 1.0}};
    for (int j = 0; j < inst.n; ++j) coefs.push_back({1 + j, -cut.xcoef[static_cast<std::size_t>(j)]});
    solver.add_row(coefs, -lp::kInf, cut.constant);
  }
}

double assignment_support(const Instance& inst, const CyMatrix& cy, double alpha, const std::vector<double>& beta,
                          bool cardinality, const std::vector<std::pair<int, int>>& fixings) {
  const int zoff = 1 + inst.n;
  lp::LpModel model(zoff + inst.m * inst.n);
  model.set_objective(0, alpha);
  model.set_col_bounds(0, -lp::kInf, lp::kInf);
  std::vector<std::pair<int, double>> card;
  for (int j = 0; j < inst.n; ++j) {
    model.set_objective(1 + j, beta[static_cast<std::size_t>(j)]);
    model.set_col_bounds(1 + j, 0.0, 1.0);
    card.push_back({1 + j, 1.0});
  }
  if (cardinality) model.add_row(card, inst.p, inst.p);
  std::vector<std::pair<int, double>> link{{0, 1.0}};
  for (int i = 0; i < inst.m; ++i) {
    std::vector<std::pair<int, double>> assign;
    for (int j = 0; j < inst.n; ++j) {
      const int col = zoff + i * inst.n + j;
      model.set_col_bounds(col, 0.0, lp::kInf);
      model.add_row({{col, 1.0}, {1 + j, -1.0}}, -lp::kInf, 0.0);
      assign.push_back({col, 1.0});
      link.push_back({col, -inst.w[static_cast<std::size_t>(i)] * cy(i, j)});
    }
    model.add_row(assign, -lp::kInf, 1.0);
  }
  model.add_row(link, -lp::kInf, 0.0);
  apply_fixings(model, 1, fixings);
  return optimal_value(lp::lp_solve(model), "assignment relaxation");
}

double enumeration_support(const Instance& inst, const CyMatrix& cy, double alpha, const std::vector<double>& beta,
                           bool cardinality, const std::vector<std::pair<int, int>>& fixings) {
  if (inst.n > 24) throw CapExceeded("hull enumeration needs n <= 24");
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inst.n); ++mask) {
    std::vector<int> sites;
    double lin = 0.0;
    for (int j = 0; j < inst.n; ++j) {
      if (mask >> j & 1U) {
        sites.push_back(j);
        lin += beta[static_cast<std::size_t>(j)];
      }
    }
    if (cardinality && static_cast<int>(sites.size()) != inst.p) continue;
    bool ok = true;
    for (const auto& [j, v] : fixings) ok = ok && static_cast<int>(mask >> j & 1U) == v;
    if (!ok) continue;
    best = std::max(best, alpha * set_share(inst, cy, sites) + lin);
  }
  return best;
}

}  // namespace

SupportValues hull_support(const Instance& inst, const BinaryChoice& y, double alpha, const std::vector<double>& beta,
                           bool cardinality_row, const std::vector<std::pair<int, int>>& fixings) {
  if (!(alpha > 0)) throw std::invalid_argument("support direction needs a positive eta weight");
  if (static_cast<int>(beta.size()) != inst.n) throw std::invalid_argument("direction length differs from n");
  const CyMatrix cy = compute_cy(inst, y);
  SupportValues s;
  s.cut_polytope = cut_polytope_support(inst, y, cy, alpha, beta, cardinality_row, fixings);
  s.assignment = assignment_support(inst, cy, alpha, beta, cardinality_row, fixings);
  s.enumeration = enumeration_support(inst, cy, alpha, beta, cardinality_row, fixings);
  return s;
}

HullCheckReport verify_hull(const Instance& inst, const BinaryChoice& y, const HullCheckOptions& options) {
  inst.validate();
  y.require_cardinality(inst.r, "follower choice");
  HullCheckReport report;
  report.digest = instance_digest(inst);
  report.y = y;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> dir(static_cast<std::size_t>(inst.n) + 1);
  for (int t = 0; t < options.trials; ++t) {
    // Uniform on the sphere, resampled until the eta weight exceeds 0.1.
    do {
      double norm = 0.0;
      for (double& d : dir) {
        d = normal(rng);
        norm += d * d;
      }
      norm = std::sqrt(norm);
      for (double& d : dir) d /= norm;
    } while (dir[0] <= 0.1);
    const std::vector<double> beta(dir.begin() + 1, dir.end());
    const auto s = hull_support(inst, y, dir[0], beta, options.cardinality_row);
    report.max_discrepancy = std::max({report.max_discrepancy, std::abs(s.cut_polytope - s.enumeration),
                                       std::abs(s.assignment - s.enumeration), std::abs(s.cut_polytope - s.assignment)});
    report.last_cut_polytope = s.cut_polytope;
    report.last_assignment = s.assignment;
    report.last_enumeration = s.enumeration;
    ++report.directions;
  }
  return report;
}

Prop61Report verify_prop61(const Instance& inst, const std::vector<double>& xstar, const BinaryChoice& y) {
  inst.validate();
  y.require_cardinality(inst.r, "follower choice");
  if (static_cast<int>(xstar.size()) != inst.n) throw std::invalid_argument("leader point length differs from n");
  double total = 1.0;
  for (int i = 0; i < inst.m; ++i) {
    total *= inst.n + 1;
    if (total > 1e6) throw CapExceeded("anchor enumeration exceeds 10^6 vectors");
  }
  const CyMatrix cy = compute_cy(inst, y);
  Prop61Report report;
  report.anchor_minimum = std::numeric_limits<double>::infinity();
  EllVector ell(static_cast<std::size_t>(inst.m), 0);
  while (true) {
    const Cut cut = improved_cut(inst, cy, y, ell);
    report.anchor_minimum = std::min(report.anchor_minimum, cut.rhs(xstar));
    int i = 0;
    while (i < inst.m && ell[static_cast<std::size_t>(i)] == inst.n) ell[static_cast<std::size_t>(i++)] = 0;
    if (i == inst.m) break;
    ++ell[static_cast<std::size_t>(i)];
  }
  const auto rm = gsf_separation_costs(inst, xstar);
  report.median_value = rmedian_value(rm, y.open_sites());
  report.discrepancy = std::abs(report.anchor_minimum - report.median_value);
  return report;
}

namespace {

// max sum_j c_j z_j  s.t.  z_j <= x_j, sum_j z_j <= 1, z >= 0.
double customer_primal(const std::vector<double>& c, const std::vector<double>& x) {
  const int n = static_cast<int>(c.size());
  lp::LpModel model(n);
  std::vector<std::pair<int, double>> sum;
  for (int j = 0; j < n; ++j) {
    model.set_objective(j, c[static_cast<std::size_t>(j)]);
    model.set_col_bounds(j, 0.0, x[static_cast<std::size_t>(j)]);
    sum.push_back({j, 1.0});
  }
  model.add_row(sum, -lp::kInf, 1.0);
  return optimal_value(lp::lp_solve(model), "customer primal");
}

// min u + sum_j x_j w_j  s.t.  u + w_j >= c_j, u, w >= 0.
double customer_dual(const std::vector<double>& c, const std::vector<double>& x) {
  const int n = static_cast<int>(c.size());
  lp::LpModel model(1 + n);
  model.set_objective(0, -1.0);
  for (int j = 0; j < n; ++j) {
    model.set_objective(1 + j, -x[static_cast<std::size_t>(j)]);
    model.add_row({{0, 1.0}, {1 + j, 1.0}}, c[static_cast<std::size_t>(j)], lp::kInf);
  }
  return -optimal_value(lp::lp_solve(model), "customer dual");
}

double disaggregated_value(const Instance& inst, const std::vector<BinaryChoice>& ys) {
  const int per = inst.m * inst.n;
  lp::LpModel model(1 + inst.n + static_cast<int>(ys.size()) * per);
  model.set_objective(0, 1.0);
  model.set_col_bounds(0, -lp::kInf, inst.total_weight());
  std::vector<std::pair<int, double>> card;
  for (int j = 0; j < inst.n; ++j) {
    model.set_col_bounds(1 + j, 0.0, 1.0);
    card.push_back({1 + j, 1.0});
  }
  model.add_row(card, inst.p, inst.p);
  for (std::size_t k = 0; k < ys.size(); ++k) {
    const CyMatrix cy = compute_cy(inst, ys[k]);
    const int off = 1 + inst.n + static_cast<int>(k) * per;
    std::vector<std::pair<int, double>> link{{0, 1.0}};
    for (int i = 0; i < inst.m; ++i) {
      std::vector<std::pair<int, double>> assign;
      for (int j = 0; j < inst.n; ++j) {
        const int col = off + i * inst.n + j;
        model.set_col_bounds(col, 0.0, 1.0);
        model.add_row({{col, 1.0}, {1 + j, -1.0}}, -lp::kInf, 0.0);
        assign.push_back({col, 1.0});
        link.push_back({col, -inst.w[static_cast<std::size_t>(i)] * cy(i, j)});
      }
      model.add_row(assign, -lp::kInf, 1.0);
    }
    model.add_row(link, -lp::kInf, 0.0);
  }
  return optimal_value(lp::lp_solve(model), "disaggregated");
}

}  // namespace

AggregationReport verify_aggregation(const Instance& inst, const AggregationOptions& options) {
  inst.validate();
  const auto ys = enumerate_choices(inst.n, inst.r, options.column_cap);
  const std::uint64_t columns = ys.size() * static_cast<std::uint64_t>(inst.m * inst.n);
  if (columns > options.column_cap) {
    throw CapExceeded(fmt::format("disaggregated model needs {} columns, cap {}", columns, options.column_cap));
  }
  AggregationReport report;
  report.shared_value = full_lp_value(inst, Formulation::kEF);
  report.disaggregated_value = disaggregated_value(inst, ys);
  report.discrepancy = std::abs(report.shared_value - report.disaggregated_value);

  const SiteOrdering order(inst);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < options.samples; ++s) {
    std::vector<double> x(static_cast<std::size_t>(inst.n));
    for (double& v : x) v = unit(rng);
    if (s == 0) std::fill(x.begin(), x.end(), 0.0);
    const BinaryChoice& y = ys[static_cast<std::size_t>(rng() % ys.size())];
    const CyMatrix cy = compute_cy(inst, y);
    const Matrix z = greedy_assignment(inst, order, x);
    const auto counts = prefix_counts(order, x);
    for (int i = 0; i < inst.m; ++i) {
      std::vector<double> c(static_cast<std::size_t>(inst.n));
      double greedy = 0.0;
      for (int j = 0; j < inst.n; ++j) {
        c[static_cast<std::size_t>(j)] = cy(i, j);
        greedy += cy(i, j) * z(i, j);
      }
      const double primal = customer_primal(c, x);
      const double dual = customer_dual(c, x);
      const double u = cy(i, order(i, counts[static_cast<std::size_t>(i)]));
      double formula = u;
      for (int j = 0; j < inst.n; ++j) formula += x[static_cast<std::size_t>(j)] * std::max(0.0, cy(i, j) - u);
      report.max_greedy_discrepancy = std::max(report.max_greedy_discrepancy, std::abs(greedy - primal));
      report.max_dual_discrepancy = std::max(report.max_dual_discrepancy, std::abs(formula - dual));
      ++report.greedy_checks;
    }
  }
  return report;
}

}  // namespace scflp
