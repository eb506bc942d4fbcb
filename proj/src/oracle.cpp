#include "scflp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "scflp/combinatorics.hpp"
#include "scflp/lp.hpp"

namespace scflp {

std::vector<BinaryChoice> enumerate_choices(int n, int k, std::uint64_t cap) {
  const auto count = binomial(n, k);
  if (count > cap) throw CapExceeded(fmt::format("C({}, {}) = {} choices exceed the cap {}", n, k, count, cap));
  std::vector<BinaryChoice> out;
  out.reserve(static_cast<std::size_t>(count));
  for_each_subset(n, k, [&](const std::vector<int>& s) {
    out.push_back(BinaryChoice::from_sites(n, s));
    return true;
  });
  return out;
}

OracleReport brute_force_solve(const Instance& inst, const OracleConfig& cfg) {
  inst.validate();
  const auto nx = binomial(inst.n, inst.p);
  const auto ny = binomial(inst.n, inst.r);
  if (nx != 0 && ny > cfg.pair_cap / nx) {
    throw CapExceeded(fmt::format("{} x {} leader/follower pairs exceed the cap {}", nx, ny, cfg.pair_cap));
  }
  const auto followers = enumerate_choices(inst.n, inst.r, cfg.pair_cap);
  std::vector<CyMatrix> cy;
  cy.reserve(followers.size());
  for (const auto& y : followers) cy.push_back(compute_cy(inst, y));

  OracleReport report;
  report.value = -std::numeric_limits<double>::infinity();
  for_each_subset(inst.n, inst.p, [&](const std::vector<int>& sites) {
    double worst = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t k = 0; k < followers.size(); ++k) {
      const double g = set_share(inst, cy[k], sites);
      if (g < worst) {
        worst = g;
        arg = k;
      }
    }
    report.pairs += followers.size();
    auto x = BinaryChoice::from_sites(inst.n, sites);
    if (cfg.keep_responses) report.responses.push_back({x, followers[arg], worst});
    if (worst > report.value + cfg.tie_tol) {
      report.value = worst;
      report.optimal.clear();
      report.optimal.push_back(std::move(x));
    } else if (worst >= report.value - cfg.tie_tol) {
      report.value = std::max(report.value, worst);
      report.optimal.push_back(std::move(x));
    }
    return true;
  });
  return report;
}

namespace {

constexpr double kCutTol = 1e-10;

lp::LpModel base_model(const Instance& inst, bool with_z, bool cardinality) {
  const int cols = 1 + inst.n + (with_z ? inst.m * inst.n : 0);
  lp::LpModel model(cols);
  model.set_objective(0, 1.0);
  model.set_col_bounds(0, -lp::kInf, inst.total_weight());
  std::vector<std::pair<int, double>> card;
  for (int j = 0; j < inst.n; ++j) {
    model.set_col_bounds(1 + j, 0.0, 1.0);
    card.push_back({1 + j, 1.0});
  }
  if (cardinality) model.add_row(card, inst.p, inst.p);
  if (with_z) {
    for (int i = 0; i < inst.m; ++i) {
      std::vector<std::pair<int, double>> assign;
      for (int j = 0; j < inst.n; ++j) {
        const int col = 1 + inst.n + i * inst.n + j;
        model.set_col_bounds(col, 0.0, 1.0);
        model.add_row({{col, 1.0}, {1 + j, -1.0}}, -lp::kInf, 0.0);
        assign.push_back({col, 1.0});
      }
      model.add_row(assign, -lp::kInf, 1.0);
    }
  }
  return model;
}

std::vector<std::pair<int, double>> x_cut_row(const Cut& cut) {
  std::vector<std::pair<int, double>> coefs{{0, 1.0}};
  for (std::size_t j = 0; j < cut.xcoef.size(); ++j) coefs.push_back({1 + static_cast<int>(j), -cut.xcoef[j]});
  return coefs;
}

double require_optimal(const lp::LpResult& res) {
  if (res.status != lp::LpStatus::kOptimal) {
    throw std::runtime_error("full relaxation LP ended with status " + lp::to_string(res.status));
  }
  return res.objective;
}

// Generates violated rows until none remain; `violated` appends cuts for the
// given point and returns how many it found.
template <class Separate>
double row_generation(lp::LpSolver& solver, const Instance& inst, Separate separate) {
  while (true) {
    const auto res = solver.solve();
    const double value = require_optimal(res);
    std::vector<double> x(res.x.begin() + 1, res.x.begin() + 1 + inst.n);
    for (double& v : x) v = std::clamp(v, 0.0, 1.0);
    std::vector<Cut> cuts;
    separate(res.x[0], x, cuts);
    if (cuts.empty()) return value;
    for (const Cut& cut : cuts) solver.add_row(x_cut_row(cut), -lp::kInf, cut.constant);
  }
}

double sf_value(const Instance& inst, const std::vector<BinaryChoice>& ys, const FullLpConfig& cfg) {
  if (inst.n > 20) throw CapExceeded("SF enumeration needs n <= 20");
  const std::uint64_t subsets = std::uint64_t{1} << inst.n;
  std::vector<CyMatrix> cy;
  for (const auto& y : ys) cy.push_back(compute_cy(inst, y));
  auto subset_sites = [&](std::uint64_t mask) {
    std::vector<int> s;
    for (int j = 0; j < inst.n; ++j)
      if (mask >> j & 1U) s.push_back(j);
    return s;
  };
  lp::LpSolver solver(base_model(inst, false, cfg.cardinality_row));
  if (subsets * ys.size() <= cfg.direct_row_cap) {
    for (std::size_t k = 0; k < ys.size(); ++k) {
      for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        const Cut cut = submodular_cut(inst, cy[k], ys[k], subset_sites(mask));
        solver.add_row(x_cut_row(cut), -lp::kInf, cut.constant);
      }
    }
    return require_optimal(solver.solve());
  }
  return row_generation(solver, inst, [&](double eta, const std::vector<double>& x, std::vector<Cut>& out) {
    for (std::size_t k = 0; k < ys.size(); ++k) {
      Cut best;
      double best_rhs = std::numeric_limits<double>::infinity();
      for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        Cut cut = submodular_cut(inst, cy[k], ys[k], subset_sites(mask));
        const double rhs = cut.rhs(x);
        if (rhs < best_rhs) {
          best_rhs = rhs;
          best = std::move(cut);
        }
      }
      if (eta > best_rhs + kCutTol) out.push_back(std::move(best));
    }
  });
}

double gsf_value(const Instance& inst, const std::vector<BinaryChoice>& ys, const FullLpConfig& cfg) {
  std::vector<CyMatrix> cy;
  for (const auto& y : ys) cy.push_back(compute_cy(inst, y));
  lp::LpSolver solver(base_model(inst, false, cfg.cardinality_row));
  return row_generation(solver, inst, [&](double eta, const std::vector<double>& x, std::vector<Cut>& out) {
    for (std::size_t k = 0; k < ys.size(); ++k) {
      Cut cut = min_rhs_improved_cut(inst, cy[k], ys[k], x);
      if (eta > cut.rhs(x) + kCutTol) out.push_back(std::move(cut));
    }
  });
}

double ef_value(const Instance& inst, const std::vector<BinaryChoice>& ys, const FullLpConfig& cfg) {
  lp::LpModel model = base_model(inst, true, cfg.cardinality_row);
  for (const auto& y : ys) {
    const Cut cut = ef_cut(inst, y);
    std::vector<std::pair<int, double>> coefs{{0, 1.0}};
    for (int i = 0; i < inst.m; ++i)
      for (int j = 0; j < inst.n; ++j) coefs.push_back({1 + inst.n + i * inst.n + j, -cut.zcoef(i, j)});
    model.add_row(coefs, -lp::kInf, 0.0);
  }
  return require_optimal(lp::lp_solve(model));
}

}  // namespace

// The right-hand side separates by customer, so minimising over anchor
// vectors is one scan over n + 1 anchors per customer.
Cut min_rhs_improved_cut(const Instance& inst, const CyMatrix& cy, const BinaryChoice& y, const std::vector<double>& x) {
  EllVector ell(static_cast<std::size_t>(inst.m));
  for (int i = 0; i < inst.m; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a <= inst.n; ++a) {
      const double base = cy(i, a);
      double term = base;
      for (int j = 0; j < inst.n; ++j) term += std::max(0.0, cy(i, j) - base) * x[static_cast<std::size_t>(j)];
      if (term < best - 1e-15) {
        best = term;
        ell[static_cast<std::size_t>(i)] = a;
      }
    }
  }
  return improved_cut(inst, cy, y, ell);
}

double full_lp_value(const Instance& inst, Formulation form, const FullLpConfig& cfg) {
  inst.validate();
  const auto ys = enumerate_choices(inst.n, inst.r, cfg.follower_cap);
  switch (form) {
    case Formulation::kSF: return sf_value(inst, ys, cfg);
    case Formulation::kGSF: return gsf_value(inst, ys, cfg);
    case Formulation::kEF: return ef_value(inst, ys, cfg);
  }
  throw std::invalid_argument("unknown formulation");
}

}  // namespace scflp
