#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "scflp/combinatorics.hpp"
#include "scflp/market.hpp"
#include "support.hpp"

using namespace scflp;
using testing_support::random_choice;
using testing_support::random_instance;

TEST_CASE("c^y on the three-site example") {
  const Instance inst = appendix_example();
  const CyMatrix cy = compute_cy(inst, BinaryChoice::all_open(3));
  const double expected[3][3] = {{1.0 / 3, 1.0 / 2, 1.0 / 3}, {1.0 / 2, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 1.0 / 3, 1.0 / 2}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(cy(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-15));
    CHECK(cy(i, 3) == 0.0);
  }
}

TEST_CASE("c^y symmetric case") {
  const Instance inst = make_instance({1.0}, Matrix(1, 2, 4.0), 1, 1);
  const CyMatrix cy = compute_cy(inst, BinaryChoice::from_sites(2, {0}));
  CHECK(cy(0, 0) == 0.5);
  CHECK(cy(0, 1) == 0.5);
}

TEST_CASE("c^y rejects an empty follower choice") {
  CHECK_THROWS(compute_cy(appendix_example(), BinaryChoice(std::vector<std::uint8_t>{0, 0, 0})));
}

TEST_CASE("row order of c^y follows the row order of v") {
  std::mt19937_64 rng(5);
  const Instance inst = random_instance(rng, 6, 6, 2, 2);
  for (int t = 0; t < 50; ++t) {
    const CyMatrix cy = compute_cy(inst, random_choice(rng, 6, 1 + t % 6));
    for (int i = 0; i < inst.m; ++i) {
      for (int a = 0; a < inst.n; ++a)
        for (int b = 0; b < inst.n; ++b) {
          if (inst.v(i, a) > inst.v(i, b)) CHECK(cy(i, a) > cy(i, b));
          if (inst.v(i, a) == inst.v(i, b)) CHECK(cy(i, a) == cy(i, b));
        }
    }
  }
}

TEST_CASE("leader share values") {
  const Instance inst = appendix_example();
  const auto all = BinaryChoice::all_open(3);
  CHECK(leader_share(inst, BinaryChoice::from_sites(3, {0, 1}), all) == doctest::Approx(4.0 / 3).epsilon(1e-15));
  CHECK(leader_share(inst, BinaryChoice(std::vector<std::uint8_t>{0, 0, 0}), all) == 0.0);

  const Instance single = make_instance({1.0}, Matrix(1, 2, 3.0), 1, 1);
  CHECK(leader_share(single, BinaryChoice::from_sites(2, {0}), BinaryChoice::from_sites(2, {1})) == 0.5);
}

TEST_CASE("leader and follower shares add up to total demand") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 100; ++t) {
    const Instance inst = random_instance(rng, 5, 5, 2, 2);
    const auto x = random_choice(rng, 5, 2);
    const auto y = random_choice(rng, 5, 2);
    // Direct evaluation of both ratios.
    double leader = 0.0, follower = 0.0;
    for (int i = 0; i < inst.m; ++i) {
      double bx = 0.0, by = 0.0;
      for (int j : x.open_sites()) bx = std::max(bx, inst.v(i, j));
      for (int j : y.open_sites()) by = std::max(by, inst.v(i, j));
      leader += inst.w[i] * bx / (bx + by);
      follower += inst.w[i] * by / (bx + by);
    }
    CHECK(leader_share(inst, x, y) == doctest::Approx(leader).epsilon(1e-13));
    CHECK(follower_share(inst, x, y) == doctest::Approx(follower).epsilon(1e-13));
    CHECK(std::abs(leader_share(inst, x, y) + follower_share(inst, x, y) - inst.total_weight()) < 1e-12);
  }
}

TEST_CASE("follower best response") {
  const Instance inst = appendix_example();
  const auto x = BinaryChoice::from_sites(3, {0, 1});
  for (auto mode : {ResponseMode::kEnumerate, ResponseMode::kRMedian}) {
    const auto br = follower_best_response(inst, x, {mode});
    CHECK(br.y == BinaryChoice::all_open(3));
    CHECK(br.value == doctest::Approx(4.0 / 3).epsilon(1e-15));
  }

  std::mt19937_64 rng(23);
  const Instance full = random_instance(rng, 4, 5, 2, 5);
  CHECK(follower_best_response(full, random_choice(rng, 5, 2)).y == BinaryChoice::all_open(5));
}

TEST_CASE("r-median and enumeration best responses agree") {
  std::mt19937_64 rng(29);
  const Instance inst = random_instance(rng, 7, 7, 2, 2);
  for (int t = 0; t < 100; ++t) {
    const auto x = random_choice(rng, 7, 2);
    const auto a = follower_best_response(inst, x, {ResponseMode::kEnumerate});
    const auto b = follower_best_response(inst, x, {ResponseMode::kRMedian});
    CHECK(std::abs(a.value - b.value) < 1e-12);
    CHECK(std::abs(leader_share(inst, x, b.y) - b.value) < 1e-15);
  }
}

TEST_CASE("enumeration respects its cap") {
  std::mt19937_64 rng(31);
  const Instance inst = random_instance(rng, 3, 20, 2, 10);
  ResponseOptions options{ResponseMode::kEnumerate, 1000};
  CHECK_THROWS_AS(follower_best_response(inst, random_choice(rng, 20, 2), options), CapExceeded);
}

TEST_CASE("G_y is monotone and submodular") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = testing_support::uniform_int(rng, 2, 9);
    const Instance inst = random_instance(rng, testing_support::uniform_int(rng, 1, 8), n, 1, 1);
    const CyMatrix cy = compute_cy(inst, random_choice(rng, n, testing_support::uniform_int(rng, 1, n)));
    for (int k = 0; k < 100; ++k) {
      std::vector<int> s, tset;
      const int j = testing_support::uniform_int(rng, 0, n - 1);
      for (int q = 0; q < n; ++q) {
        if (q == j) continue;
        const double u = unit(rng);
        if (u < 0.3) s.push_back(q);
        if (u < 0.6) tset.push_back(q);
      }
      auto with = [&](std::vector<int> set) {
        set.push_back(j);
        return set;
      };
      const double rho_s = set_share(inst, cy, with(s)) - set_share(inst, cy, s);
      const double rho_t = set_share(inst, cy, with(tset)) - set_share(inst, cy, tset);
      CHECK(rho_t >= -1e-12);
      CHECK(rho_s >= rho_t - 1e-12);
      ++checked;
    }
  }
  CHECK(checked == 10000);
}

TEST_CASE("opening an extra leader site never lowers the share") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 200; ++t) {
    const Instance inst = random_instance(rng, 5, 6, 2, 2);
    auto sites = testing_support::random_subset(rng, 6, 3);
    const auto y = random_choice(rng, 6, 2);
    const double before = leader_share(inst, BinaryChoice::from_sites(6, {sites[0], sites[1]}), y);
    const double after = leader_share(inst, BinaryChoice::from_sites(6, sites), y);
    CHECK(after >= before - 1e-15);
  }
}

TEST_CASE("best response argmin is invariant under weight scaling") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 30; ++t) {
    const Instance inst = random_instance(rng, 5, 6, 2, 2);
    Instance scaled = inst;
    for (double& w : scaled.w) w *= 3.5;
    const auto x = random_choice(rng, 6, 2);
    const auto a = follower_best_response(inst, x, {ResponseMode::kEnumerate});
    const auto b = follower_best_response(scaled, x, {ResponseMode::kEnumerate});
    CHECK(a.y == b.y);
    CHECK(b.value == doctest::Approx(3.5 * a.value).epsilon(1e-12));
  }
}

TEST_CASE("enumeration ties resolve to the lexicographically smallest set") {
  // Identical sites make every follower choice equally good.
  const Instance inst = make_instance({1.0, 2.0}, Matrix(2, 4, 1.0), 1, 2);
  const auto br = follower_best_response(inst, BinaryChoice::from_sites(4, {3}), {ResponseMode::kEnumerate});
  CHECK(br.y.open_sites() == std::vector<int>{0, 1});
}
