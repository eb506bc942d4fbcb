#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scflp/instance.hpp"

namespace scflp {

// FNV-1a over the saved text form of the instance.
std::string instance_digest(const Instance& inst);

struct HullCheckReport {
  std::string digest;
  BinaryChoice y;
  int directions = 0;
  double max_discrepancy = 0.0;
  // Support values for the last direction: cut polytope, assignment
  // relaxation and enumeration.
  double last_cut_polytope = 0.0;
  double last_assignment = 0.0;
  double last_enumeration = 0.0;
};

struct HullCheckOptions {
  int trials = 200;
  std::uint64_t seed = 0;
  // Adds the leader cardinality row to all three bodies.
  bool cardinality_row = false;
};

// Compares max alpha*eta + beta.x over the improved-cut polytope, the
// assignment relaxation for y, and the points (g(x, y), x) for x in {0,1}^n.
HullCheckReport verify_hull(const Instance& inst, const BinaryChoice& y, const HullCheckOptions& options = {});

// Support values for one direction (alpha, beta), in the order above.
struct SupportValues {
  double cut_polytope = 0.0;
  double assignment = 0.0;
  double enumeration = 0.0;
};
SupportValues hull_support(const Instance& inst, const BinaryChoice& y, double alpha, const std::vector<double>& beta,
                           bool cardinality_row = false, const std::vector<std::pair<int, int>>& fixings = {});

struct Prop61Report {
  double anchor_minimum = 0.0;  // min over all anchor vectors of the cut RHS at xstar
  double median_value = 0.0;    // sum_i w_i min_{k in y} b_ik
  double discrepancy = 0.0;
};

// Brute force over all (n+1)^m anchor vectors; needs (n+1)^m <= 10^6.
Prop61Report verify_prop61(const Instance& inst, const std::vector<double>& xstar, const BinaryChoice& y);

struct AggregationReport {
  double shared_value = 0.0;
  double disaggregated_value = 0.0;
  double discrepancy = 0.0;
  int greedy_checks = 0;
  double max_greedy_discrepancy = 0.0;
  double max_dual_discrepancy = 0.0;
};

struct AggregationOptions {
  int samples = 10;  // random fractional x for the per-customer checks
  std::uint64_t seed = 0;
  std::uint64_t column_cap = 40'000;
};

AggregationReport verify_aggregation(const Instance& inst, const AggregationOptions& options = {});

}  // namespace scflp
