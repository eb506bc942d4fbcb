#include <cmath>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "scflp/bnc.hpp"
#include "scflp/oracle.hpp"
#include "support.hpp"

using namespace scflp;
using testing_support::random_instance;

namespace {

bool in_tie_class(const BinaryChoice& x) {
  const auto s = x.to_string();
  return s == "110" || s == "101" || s == "011";
}

}  // namespace

TEST_CASE("three-site example under every formulation") {
  const Instance inst = appendix_example();
  for (auto form : {Formulation::kSF, Formulation::kGSF, Formulation::kEF}) {
    CAPTURE(to_string(form));
    BncConfig cfg;
    cfg.formulation = form;
    const auto rep = solve(inst, cfg);
    CHECK(rep.status == SolveStatus::kOptimal);
    CHECK(std::abs(rep.objective - 4.0 / 3) < 1e-9);
    CHECK(in_tie_class(rep.incumbent));
    CHECK(rep.upper_bound <= rep.objective + 1e-8);
  }
}

TEST_CASE("opening every site needs no search") {
  std::mt19937_64 rng(31);
  const Instance inst = random_instance(rng, 4, 4, 4, 2);
  const auto rep = solve(inst);
  CHECK(rep.nodes == 0);
  CHECK(rep.incumbent.cardinality() == 4);
  CHECK(rep.objective == doctest::Approx(brute_force_solve(inst).value).epsilon(1e-12));
}

TEST_CASE("agreement with enumeration on random instances") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 20; ++t) {
    const int n = testing_support::uniform_int(rng, 3, 7);
    const Instance inst = random_instance(rng, testing_support::uniform_int(rng, 2, 8), n,
                                          testing_support::uniform_int(rng, 1, n - 1), testing_support::uniform_int(rng, 1, 3));
    const double opt = brute_force_solve(inst).value;
    for (auto form : {Formulation::kSF, Formulation::kGSF, Formulation::kEF}) {
      CAPTURE(t);
      CAPTURE(to_string(form));
      BncConfig cfg;
      cfg.formulation = form;
      const auto rep = solve(inst, cfg);
      CHECK(rep.status == SolveStatus::kOptimal);
      CHECK(std::abs(rep.objective - opt) < 1e-7 * std::max(1.0, opt));
      CHECK(rep.incumbent.cardinality() == inst.p);
      CHECK(std::abs(follower_best_response(inst, rep.incumbent).value - rep.objective) < 1e-9);
    }
  }
}

TEST_CASE("root bound of the improved formulations is tight on the example") {
  const Instance inst = appendix_example();
  for (auto form : {Formulation::kGSF, Formulation::kEF}) {
    BncConfig cfg;
    cfg.formulation = form;
    const auto root = root_relaxation(inst, cfg);
    CHECK(root.converged);
    CHECK(std::abs(root.bound - 4.0 / 3) < 1e-7);
    CHECK(std::abs(root.root_gap_pct) < 1e-5);
  }
  BncConfig sf;
  sf.formulation = Formulation::kSF;
  const auto root = root_relaxation(inst, sf, 4.0 / 3);
  // pool-only separation at fractional points cannot beat the full relaxation
  CHECK(root.bound >= full_lp_value(inst, Formulation::kSF) - 1e-7);
  CHECK(root_gap_pct(25.0 / 18, 4.0 / 3) == doctest::Approx(4.1666666667));
}

TEST_CASE("limits still return valid bounds") {
  std::mt19937_64 rng(41);
  const Instance inst = random_instance(rng, 12, 10, 3, 2);
  const double opt = brute_force_solve(inst).value;
  BncConfig cfg;
  cfg.node_limit = 1;
  const auto rep = solve(inst, cfg);
  CHECK(rep.objective <= opt + 1e-9);
  CHECK(rep.upper_bound >= opt - 1e-7);
  if (rep.status == SolveStatus::kNodeLimit) CHECK(rep.nodes <= 1);

  BncConfig tiny;
  tiny.time_limit = 1e-4;
  const auto quick = solve(inst, tiny);
  CHECK(quick.objective <= opt + 1e-9);
  CHECK(quick.upper_bound >= opt - 1e-7);
}

TEST_CASE("csv output is deterministic without timing") {
  std::mt19937_64 rng(43);
  const Instance inst = random_instance(rng, 8, 8, 2, 2);
  BncConfig cfg;
  cfg.seed = 3;
  const auto a = csv_row("inst", Formulation::kGSF, solve(inst, cfg), false);
  const auto b = csv_row("inst", Formulation::kGSF, solve(inst, cfg), false);
  CHECK(a == b);
  CHECK(csv_header() == "instance,formulation,objective,time_s,nodes,cuts,sep_time_s,root_gap_pct,status");
  CHECK(a.rfind("inst,GSF,", 0) == 0);
  CHECK(a.find(",optimal") != std::string::npos);
}

TEST_CASE("event log is json lines") {
  std::ostringstream log;
  BncConfig cfg;
  cfg.log = &log;
  solve(appendix_example(), cfg);
  std::istringstream in(log.str());
  std::string line;
  int lines = 0;
  bool saw_finish = false;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    REQUIRE(j.contains("event"));
    if (j["event"] == "done") saw_finish = true;
    ++lines;
  }
  CHECK(lines > 1);
  CHECK(saw_finish);
}
