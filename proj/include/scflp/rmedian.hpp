#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "scflp/matrix.hpp"

namespace scflp {

// min over site sets S with |S| = r of sum_i w_i min_{k in S} cost(i, k).
struct RMedianInstance {
  Matrix cost;
  std::vector<double> w;
  int r = 1;

  void validate() const;
};

enum class RMedianStatus { kOptimal, kLimit };

struct RMedianSolution {
  std::vector<int> sites;  // sorted ascending
  double value = 0.0;
  double lower_bound = 0.0;
  RMedianStatus status = RMedianStatus::kOptimal;
  std::int64_t nodes = 0;
};

// Objective of a given site set.
double rmedian_value(const RMedianInstance& rm, const std::vector<int>& sites);

RMedianSolution rmedian_enumerate(const RMedianInstance& rm, std::uint64_t cap = 2'000'000);

struct RMedianBoundTrace {
  // Sites forced in / out at a node and the lower bound computed there.
  std::vector<int> fixed_in;
  std::vector<int> fixed_out;
  double bound;
};

struct RMedianConfig {
  std::int64_t node_limit = std::numeric_limits<std::int64_t>::max();
  int root_subgradient_iterations = 120;
  int node_subgradient_iterations = 30;
  // Test hook: when set, every evaluated node bound is appended here.
  std::vector<RMedianBoundTrace>* trace = nullptr;
};

// Best-bound branch-and-bound on site in/out decisions. Node bounds come from
// the Lagrangian relaxation of the customer assignment constraints.
RMedianSolution rmedian_solve(const RMedianInstance& rm, const RMedianConfig& cfg = {});

}  // namespace scflp
