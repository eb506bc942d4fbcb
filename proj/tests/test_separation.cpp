#include <cmath>

#include "doctest.h"
#include "scflp/combinatorics.hpp"
#include "scflp/lp.hpp"
#include "scflp/oracle.hpp"
#include "scflp/separation.hpp"
#include "support.hpp"

using namespace scflp;
using testing_support::random_choice;
using testing_support::random_instance;
using testing_support::random_point;

namespace {

RelaxPoint point(double eta, std::vector<double> x) {
  RelaxPoint pt;
  pt.eta = eta;
  pt.x = std::move(x);
  return pt;
}

// min over all follower choices of the best response value.
double min_over_followers(const Instance& inst, const std::vector<double>& x) {
  std::vector<std::uint8_t> bits(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) bits[j] = x[j] > 0.5;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& y : enumerate_choices(inst.n, inst.r, 1'000'000)) best = std::min(best, leader_share(inst, BinaryChoice(bits), y));
  return best;
}

}  // namespace

TEST_CASE("submodular separation at an integral point") {
  const Instance inst = appendix_example();
  FollowerPool pool(inst);
  const auto out = separate_sf(point(1.6, {1, 1, 0}), inst, pool);
  CHECK(out.exact);
  REQUIRE(out.cuts.size() == 1);
  CHECK(out.cuts[0].constant == doctest::Approx(4.0 / 3));
  CHECK(out.response == BinaryChoice::all_open(3));
  CHECK(pool.size() == 1);

  // The pool now answers the same question without the exact step.
  const auto again = separate_sf(point(1.6, {1, 1, 0}), inst, pool);
  CHECK_FALSE(again.exact);
  CHECK(again.pool_hits == 1);
  CHECK(pool.size() == 1);

  const auto ok = separate_sf(point(4.0 / 3, {1, 1, 0}), inst, pool);
  CHECK(ok.exact);
  CHECK(ok.certified);
  CHECK(ok.cuts.empty());
  CHECK(ok.exact_value == doctest::Approx(4.0 / 3));
}

TEST_CASE("a zero eta is never separated") {
  std::mt19937_64 rng(3);
  const Instance inst = random_instance(rng, 5, 5, 2, 2);
  FollowerPool pool(inst);
  CHECK(separate_sf(point(0, {1, 0, 1, 0, 0}), inst, pool).cuts.empty());
  CHECK(separate_sf(point(0, {0.5, 0.2, 0.3, 0.5, 0.5}), inst, pool).cuts.empty());
  CHECK(separate_gsf(point(0, {0.5, 0.2, 0.3, 0.5, 0.5}), inst, pool).cuts.empty());
}

TEST_CASE("fractional submodular separation uses the pool only") {
  const Instance inst = appendix_example();
  FollowerPool pool(inst);
  const auto empty = separate_sf(point(25.0 / 18, {2.0 / 3, 2.0 / 3, 2.0 / 3}), inst, pool);
  CHECK_FALSE(empty.exact);
  CHECK(empty.cuts.empty());
  pool.add(BinaryChoice::all_open(3));
  // Rounding gives S = {1, 2, 3}, whose cut eta <= 3/2 is not violated.
  CHECK(separate_sf(point(25.0 / 18, {2.0 / 3, 2.0 / 3, 2.0 / 3}), inst, pool).cuts.empty());
  const auto hit = separate_sf(point(1.6, {0.5, 0.2, 0.3}), inst, pool);
  REQUIRE(hit.cuts.size() == 1);
  CHECK(hit.cuts[0].leader_set == std::vector<int>{0});
  CHECK(rounded_support({0.5, 0.49, 1.0}) == std::vector<int>{0, 2});
}

TEST_CASE("improved separation on the three-site example") {
  const Instance inst = appendix_example();
  FollowerPool pool(inst);
  const auto out = separate_gsf(point(25.0 / 18, {2.0 / 3, 2.0 / 3, 2.0 / 3}), inst, pool);
  CHECK(out.exact);
  CHECK(out.exact_value == doctest::Approx(4.0 / 3));
  REQUIRE(out.cuts.size() == 1);
  CHECK(out.cuts[0].rhs(std::vector<double>{2.0 / 3, 2.0 / 3, 2.0 / 3}) < 25.0 / 18);

  FollowerPool fresh(inst);
  const auto ok = separate_gsf(point(4.0 / 3, {1, 1, 0}), inst, fresh);
  CHECK(ok.cuts.empty());
  CHECK(ok.certified);
  CHECK(ok.exact_value == doctest::Approx(4.0 / 3));

  FollowerPool none(inst);
  const auto zero = separate_gsf(point(0.1, {0, 0, 0}), inst, none);
  REQUIRE(zero.cuts.size() == 1);
  CHECK(zero.cuts[0].constant == 0.0);
  CHECK(zero.exact_value == 0.0);
}

TEST_CASE("assignment separation") {
  const Instance inst = appendix_example();
  RelaxPoint pt = point(0.5, {1, 1, 0});
  pt.z = Matrix(3, 3);
  CHECK(separate_ef(pt, inst).cuts.size() == 1);

  pt.eta = 4.0 / 3;
  pt.z = greedy_assignment(inst, SiteOrdering(inst), pt.x);
  const auto ok = separate_ef(pt, inst);
  CHECK(ok.cuts.empty());
  CHECK(ok.certified);
  CHECK(ok.exact_value == doctest::Approx(4.0 / 3));

  CHECK_THROWS(separate_ef(point(1, {1, 1, 0}), inst));
}

TEST_CASE("separation is exact at integral points") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    const int n = testing_support::uniform_int(rng, 2, 7);
    const Instance inst = random_instance(rng, testing_support::uniform_int(rng, 1, 6), n,
                                          testing_support::uniform_int(rng, 1, n), testing_support::uniform_int(rng, 1, n));
    const auto x = random_choice(rng, n, inst.p);
    std::vector<double> xv(x.bits().begin(), x.bits().end());
    const double truth = min_over_followers(inst, xv);
    const SiteOrdering order(inst);
    for (double delta : {-1e-3, 1e-3}) {
      FollowerPool p1(inst), p2(inst);
      const auto sf = separate_sf(point(truth + delta, xv), inst, p1);
      const auto gsf = separate_gsf(point(truth + delta, xv), inst, p2);
      RelaxPoint ept = point(truth + delta, xv);
      ept.z = greedy_assignment(inst, order, xv);
      const auto ef = separate_ef(ept, inst);
      CHECK(sf.exact_value == doctest::Approx(truth).epsilon(1e-12));
      CHECK(gsf.exact_value == doctest::Approx(truth).epsilon(1e-12));
      CHECK(ef.exact_value == doctest::Approx(truth).epsilon(1e-12));
      CHECK(sf.cuts.empty() == (delta < 0));
      CHECK(gsf.cuts.empty() == (delta < 0));
      CHECK(ef.cuts.empty() == (delta < 0));
    }
  }
}

TEST_CASE("converged assignment LP point matches enumeration") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10; ++t) {
    const Instance inst = random_instance(rng, 5, 5, 2, 2);
    // Cutting-plane loop on the assignment relaxation with the exact oracle.
    lp::LpModel model(1 + 5 + 25);
    model.set_objective(0, 1);
    model.set_col_bounds(0, -lp::kInf, inst.total_weight());
    std::vector<std::pair<int, double>> card;
    for (int j = 0; j < 5; ++j) {
      model.set_col_bounds(1 + j, 0, 1);
      card.push_back({1 + j, 1});
    }
    model.add_row(card, 2, 2);
    for (int i = 0; i < 5; ++i) {
      std::vector<std::pair<int, double>> assign;
      for (int j = 0; j < 5; ++j) {
        model.set_col_bounds(6 + i * 5 + j, 0, 1);
        model.add_row({{6 + i * 5 + j, 1}, {1 + j, -1}}, -lp::kInf, 0);
        assign.push_back({6 + i * 5 + j, 1});
      }
      model.add_row(assign, -lp::kInf, 1);
    }
    lp::LpSolver solver(model);
    RelaxPoint pt;
    for (int round = 0; round < 200; ++round) {
      const auto res = solver.solve();
      REQUIRE(res.status == lp::LpStatus::kOptimal);
      pt = point(res.x[0], std::vector<double>(res.x.begin() + 1, res.x.begin() + 6));
      Matrix z(5, 5);
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) z(i, j) = std::clamp(res.x[6 + i * 5 + j], 0.0, 1.0);
      pt.z = z;
      const auto out = separate_ef(pt, inst, {1e-10});
      if (out.cuts.empty()) break;
      std::vector<std::pair<int, double>> row{{0, 1}};
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) row.push_back({6 + i * 5 + j, -out.cuts[0].zcoef(i, j)});
      solver.add_row(row, -lp::kInf, 0);
    }
    REQUIRE(separate_ef(pt, inst, {1e-10}).cuts.empty());
    double enumerated = std::numeric_limits<double>::infinity();
    for (const auto& y : enumerate_choices(5, 2, 100)) enumerated = std::min(enumerated, ef_cut(inst, y).rhs(pt.x, &*pt.z));
    CHECK(std::abs(pt.eta - enumerated) < 1e-9);
  }
}

TEST_CASE("returned cuts never remove an integral feasible point") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 15; ++t) {
    const int n = testing_support::uniform_int(rng, 3, 8);
    const Instance inst = random_instance(rng, testing_support::uniform_int(rng, 2, 6), n,
                                          testing_support::uniform_int(rng, 1, 3), testing_support::uniform_int(rng, 1, 3));
    FollowerPool pool(inst);
    std::vector<Cut> cuts;
    for (int k = 0; k < 20; ++k) {
      const auto x = k % 2 ? random_point(rng, n) : [&] {
        const auto c = random_choice(rng, n, inst.p);
        return std::vector<double>(c.bits().begin(), c.bits().end());
      }();
      const double eta = inst.total_weight() * 0.9;
      for (auto& c : separate_sf(point(eta, x), inst, pool).cuts) cuts.push_back(c);
      for (auto& c : separate_gsf(point(eta, x), inst, pool).cuts) cuts.push_back(c);
    }
    CHECK(!cuts.empty());
    const auto ys = enumerate_choices(n, inst.r, 1000);
    for_each_subset(n, inst.p, [&](const std::vector<int>& s) {
      const auto x = BinaryChoice::from_sites(n, s);
      std::vector<double> xv(x.bits().begin(), x.bits().end());
      double best = std::numeric_limits<double>::infinity();
      for (const auto& y : ys) best = std::min(best, leader_share(inst, x, y));
      for (const Cut& cut : cuts) CHECK(best <= cut.rhs(xv) + 1e-12);
      return true;
    });
  }
}

TEST_CASE("pool membership") {
  const Instance inst = appendix_example();
  FollowerPool pool(inst);
  CHECK(pool.add(BinaryChoice::all_open(3)));
  CHECK_FALSE(pool.add(BinaryChoice::all_open(3)));
  CHECK(pool.contains(BinaryChoice::all_open(3)));
  CHECK(pool.size() == 1);
}
