#pragma once

#include <cstdint>
#include <vector>

#include "scflp/cuts.hpp"
#include "scflp/instance.hpp"
#include "scflp/market.hpp"

namespace scflp {

struct OracleConfig {
  std::uint64_t pair_cap = 10'000'000;  // |X| * |Y| evaluations
  bool keep_responses = false;
  double tie_tol = 1e-12;
};

struct LeaderResponse {
  BinaryChoice x;
  BinaryChoice y;
  double value = 0.0;
};

struct OracleReport {
  double value = 0.0;
  std::vector<BinaryChoice> optimal;      // every leader choice attaining value
  std::vector<LeaderResponse> responses;  // filled when keep_responses is set
  std::uint64_t pairs = 0;
};

// max over leader choices of min over follower choices of g(x, y).
OracleReport brute_force_solve(const Instance& inst, const OracleConfig& cfg = {});

// All follower choices in lexicographic order.
std::vector<BinaryChoice> enumerate_choices(int n, int k, std::uint64_t cap);

struct FullLpConfig {
  std::uint64_t follower_cap = 20'000;
  // SF rows are listed outright up to this many, otherwise generated.
  std::uint64_t direct_row_cap = 2'000;
  bool cardinality_row = true;
};

// The improved cut for y with the smallest right-hand side at x, found by
// scanning every anchor for each customer.
Cut min_rhs_improved_cut(const Instance& inst, const CyMatrix& cy, const BinaryChoice& y, const std::vector<double>& x);

// Optimum of the LP relaxation with every cut of the formulation present.
double full_lp_value(const Instance& inst, Formulation form, const FullLpConfig& cfg = {});

}  // namespace scflp
