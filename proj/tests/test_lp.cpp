#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "scflp/lp.hpp"
#include "tableau.hpp"

using namespace scflp::lp;

namespace {

struct Dense {
  int n = 0;
  std::vector<double> c, lo, hi;
  std::vector<std::vector<double>> a;
  std::vector<double> rlo, rhi;
};

LpModel to_model(const Dense& d) {
  LpModel model(d.n);
  for (int j = 0; j < d.n; ++j) {
    model.set_objective(j, d.c[j]);
    model.set_col_bounds(j, d.lo[j], d.hi[j]);
  }
  for (std::size_t i = 0; i < d.a.size(); ++i) {
    std::vector<std::pair<int, double>> coefs;
    for (int j = 0; j < d.n; ++j) coefs.push_back({j, d.a[i][j]});
    model.add_row(coefs, d.rlo[i], d.rhi[i]);
  }
  return model;
}

// Shifts x = lo + x' and writes every bound as a <= row.
testing_support::TableauResult reference(const Dense& d) {
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  double shift = 0.0;
  for (int j = 0; j < d.n; ++j) shift += d.c[j] * d.lo[j];
  for (int j = 0; j < d.n; ++j) {
    if (std::isfinite(d.hi[j])) {
      std::vector<double> row(d.n, 0.0);
      row[j] = 1.0;
      a.push_back(row);
      b.push_back(d.hi[j] - d.lo[j]);
    }
  }
  for (std::size_t i = 0; i < d.a.size(); ++i) {
    double base = 0.0;
    for (int j = 0; j < d.n; ++j) base += d.a[i][j] * d.lo[j];
    if (std::isfinite(d.rhi[i])) {
      a.push_back(d.a[i]);
      b.push_back(d.rhi[i] - base);
    }
    if (std::isfinite(d.rlo[i])) {
      std::vector<double> neg(d.n);
      for (int j = 0; j < d.n; ++j) neg[j] = -d.a[i][j];
      a.push_back(neg);
      b.push_back(base - d.rlo[i]);
    }
  }
  auto res = testing_support::tableau_max(a, b, d.c);
  res.objective += shift;
  return res;
}

Dense random_lp(std::mt19937_64& rng, bool allow_unbounded) {
  std::uniform_int_distribution<int> cols(1, 20);
  std::uniform_int_distribution<int> rows(1, 15);
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Dense d;
  d.n = cols(rng);
  const int m = rows(rng);
  for (int j = 0; j < d.n; ++j) {
    d.c.push_back(coef(rng));
    const double lo = unit(rng) < 0.7 ? 0.0 : -std::floor(unit(rng) * 4);
    d.lo.push_back(lo);
    d.hi.push_back(allow_unbounded && unit(rng) < 0.2 ? kInf : lo + 1 + std::floor(unit(rng) * 5));
  }
  for (int i = 0; i < m; ++i) {
    std::vector<double> row(d.n);
    for (auto& e : row) e = unit(rng) < 0.5 ? 0.0 : coef(rng);
    d.a.push_back(row);
    const double mid = coef(rng);
    const double kind = unit(rng);
    if (kind < 0.4) {
      d.rlo.push_back(-kInf);
      d.rhi.push_back(mid + 3);
    } else if (kind < 0.7) {
      d.rlo.push_back(mid - 3);
      d.rhi.push_back(kInf);
    } else if (kind < 0.85) {
      d.rlo.push_back(mid - 2);
      d.rhi.push_back(mid + 2);
    } else {
      d.rlo.push_back(mid);
      d.rhi.push_back(mid);
    }
  }
  return d;
}

std::pair<int, double> term(int j, double v) { return {j, v}; }

}  // namespace

TEST_CASE("single row bound on a free variable") {
  LpModel model(1);
  model.set_col_bounds(0, -kInf, kInf);
  model.set_objective(0, 1.0);
  model.add_row({term(0, 1.0)}, -kInf, 1.5);
  const auto res = lp_solve(model);
  REQUIRE(res.status == LpStatus::kOptimal);
  CHECK(res.objective == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("small example relaxations") {
  // Columns: eta, x1, x2, x3.
  auto base = [] {
    LpModel model(4);
    model.set_col_bounds(0, -kInf, 3.0);
    model.set_objective(0, 1.0);
    for (int j = 1; j <= 3; ++j) model.set_col_bounds(j, 0.0, 1.0);
    model.add_row({term(1, 1), term(2, 1), term(3, 1)}, 2.0, 2.0);
    return model;
  };
  // eta <= constant + a.x  as  eta - a.x <= constant.
  auto cut = [](LpModel& model, double constant, double a1, double a2, double a3) {
    model.add_row({term(0, 1), term(1, -a1), term(2, -a2), term(3, -a3)}, -kInf, constant);
  };
  auto submodular_rows = [&](LpModel& model) {
    cut(model, 1.5, 0, 0, 0);
    cut(model, 7.0 / 6, 0, 1.0 / 6, 1.0 / 6);
    cut(model, 7.0 / 6, 1.0 / 6, 0, 1.0 / 6);
    cut(model, 7.0 / 6, 1.0 / 6, 1.0 / 6, 0);
    cut(model, 4.0 / 3, 0, 0, 1.0 / 6);
    cut(model, 4.0 / 3, 0, 1.0 / 6, 0);
    cut(model, 4.0 / 3, 1.0 / 6, 0, 0);
    cut(model, 0, 7.0 / 6, 7.0 / 6, 7.0 / 6);
  };

  SUBCASE("aggregated cuts") {
    LpModel model = base();
    submodular_rows(model);
    const auto res = lp_solve(model);
    REQUIRE(res.status == LpStatus::kOptimal);
    CHECK(std::abs(res.objective - 25.0 / 18) < 1e-9);
    for (int j = 1; j <= 3; ++j) CHECK(std::abs(res.x[j] - 2.0 / 3) < 1e-9);
  }

  SUBCASE("disaggregated cuts") {
    LpModel model = base();
    submodular_rows(model);
    const double h = 0.5, t = 1.0 / 3, f = 5.0 / 6, s = 1.0 / 6, tt = 2.0 / 3;
    cut(model, f, h, h, t);
    cut(model, f, h, t, h);
    cut(model, f, t, h, h);
    cut(model, 1, h, t, t);
    cut(model, 1, t, h, t);
    cut(model, 1, t, t, h);
    cut(model, h, f, f, tt);
    cut(model, h, f, tt, f);
    cut(model, h, tt, f, f);
    cut(model, 1, s, s, s);
    cut(model, tt, h, h, h);
    cut(model, t, f, f, f);
    const auto res = lp_solve(model);
    REQUIRE(res.status == LpStatus::kOptimal);
    CHECK(std::abs(res.objective - 4.0 / 3) < 1e-9);
    int ones = 0;
    for (int j = 1; j <= 3; ++j) {
      CHECK((std::abs(res.x[j]) < 1e-9 || std::abs(res.x[j] - 1) < 1e-9));
      ones += res.x[j] > 0.5;
    }
    CHECK(ones == 2);
  }
}

TEST_CASE("agrees with a tableau simplex on random bounded LPs") {
  std::mt19937_64 rng(20240611);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Dense d = random_lp(rng, false);
    const auto res = lp_solve(to_model(d));
    const auto ref = reference(d);
    INFO("trial " << trial);
    if (ref.status == testing_support::TableauResult::kInfeasible) {
      CHECK(res.status == LpStatus::kInfeasible);
      ++infeasible;
      continue;
    }
    REQUIRE(res.status == LpStatus::kOptimal);
    CHECK(std::abs(res.objective - ref.objective) < 1e-8);
    CHECK(res.max_primal_residual <= 1e-7);
    CHECK(res.max_dual_infeasibility <= 1e-9);
    ++optimal;
  }
  CHECK(optimal > 100);
  CHECK(infeasible > 10);
}

TEST_CASE("detects unbounded problems") {
  std::mt19937_64 rng(99);
  int unbounded = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Dense d = random_lp(rng, true);
    const auto ref = reference(d);
    const auto res = lp_solve(to_model(d));
    INFO("trial " << trial);
    switch (ref.status) {
      case testing_support::TableauResult::kInfeasible: CHECK(res.status == LpStatus::kInfeasible); break;
      case testing_support::TableauResult::kUnbounded:
        CHECK(res.status == LpStatus::kUnbounded);
        ++unbounded;
        break;
      case testing_support::TableauResult::kOptimal:
        REQUIRE(res.status == LpStatus::kOptimal);
        CHECK(std::abs(res.objective - ref.objective) < 1e-8);
        break;
    }
  }
  CHECK(unbounded > 5);
}

TEST_CASE("adding rows warm-starts and never raises the optimum") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    Dense d = random_lp(rng, false);
    const std::size_t keep = d.a.size() / 2;
    Dense head = d;
    head.a.resize(keep);
    head.rlo.resize(keep);
    head.rhi.resize(keep);
    LpSolver solver(to_model(head));
    auto res = solver.solve();
    double last = res.status == LpStatus::kOptimal ? res.objective : -kInf;
    bool infeasible = res.status == LpStatus::kInfeasible;
    for (std::size_t i = keep; i < d.a.size(); ++i) {
      std::vector<std::pair<int, double>> coefs;
      for (int j = 0; j < d.n; ++j) coefs.push_back({j, d.a[i][j]});
      solver.add_row(coefs, d.rlo[i], d.rhi[i]);
      res = solver.solve();
      if (infeasible) {
        CHECK(res.status == LpStatus::kInfeasible);
        continue;
      }
      if (res.status == LpStatus::kInfeasible) {
        infeasible = true;
        continue;
      }
      REQUIRE(res.status == LpStatus::kOptimal);
      CHECK(res.objective <= last + 1e-9);
      last = res.objective;
    }
    const auto fresh = lp_solve(to_model(d));
    CHECK(fresh.status == res.status);
    if (fresh.status == LpStatus::kOptimal) CHECK(std::abs(fresh.objective - res.objective) < 1e-8);
  }
}

TEST_CASE("bound changes and restored bases match fresh solves") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    Dense d = random_lp(rng, false);
    LpSolver solver(to_model(d));
    const auto first = solver.solve();
    const Basis saved = solver.basis();
    const int col = static_cast<int>(rng() % static_cast<unsigned>(d.n));
    Dense fixed = d;
    fixed.hi[col] = fixed.lo[col];
    solver.set_col_bounds(col, d.lo[col], d.lo[col]);
    const auto res = solver.solve();
    const auto fresh = lp_solve(to_model(fixed));
    REQUIRE(fresh.status == res.status);
    if (res.status == LpStatus::kOptimal) CHECK(std::abs(fresh.objective - res.objective) < 1e-8);

    solver.set_col_bounds(col, d.lo[col], d.hi[col]);
    solver.set_basis(saved);
    const auto back = solver.solve();
    REQUIRE(back.status == first.status);
    if (back.status == LpStatus::kOptimal) {
      CHECK(std::abs(back.objective - first.objective) < 1e-8);
      CHECK(back.iterations == 0);
    }
  }
}

TEST_CASE("degenerate cycling example terminates") {
  // Beale's example, which cycles under the textbook largest-coefficient rule.
  LpModel model(4);
  const double c[] = {0.75, -150, 0.02, -6};
  for (int j = 0; j < 4; ++j) model.set_objective(j, c[j]);
  model.add_row({term(0, 0.25), term(1, -60), term(2, -0.04), term(3, 9)}, -kInf, 0);
  model.add_row({term(0, 0.5), term(1, -90), term(2, -0.02), term(3, 3)}, -kInf, 0);
  model.add_row({term(2, 1)}, -kInf, 1);
  const auto res = lp_solve(model);
  REQUIRE(res.status == LpStatus::kOptimal);
  CHECK(res.objective == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("reports infeasibility") {
  LpModel model(2);
  model.set_col_bounds(0, 0, 1);
  model.set_col_bounds(1, 0, 1);
  model.add_row({term(0, 1), term(1, 1)}, 3, kInf);
  CHECK(lp_solve(model).status == LpStatus::kInfeasible);
}

TEST_CASE("LP text dump") {
  LpModel model(2);
  model.set_col_name(0, "eta");
  model.set_col_bounds(0, -kInf, 3);
  model.set_col_bounds(1, 0, 1);
  model.set_objective(0, 1);
  model.add_row({term(0, 1), term(1, -1.0 / 3)}, -kInf, 0.5);
  model.add_row({term(1, 1)}, 1, 1);
  std::ostringstream out;
  write_lp(model, out);
  const std::string text = out.str();
  CHECK(text.find("Maximize") != std::string::npos);
  CHECK(text.find("eta - 0.333333333333 c1 <= 0.5") != std::string::npos);
  CHECK(text.find("r1: c1 = 1") != std::string::npos);
  CHECK(text.find("-inf <= eta <= 3") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}
