#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

#include "scflp/cuts.hpp"
#include "scflp/instance.hpp"

namespace scflp {

struct BncConfig {
  Formulation formulation = Formulation::kGSF;
  double time_limit = 7200.0;  // seconds
  double gap = 0.0;            // relative gap tolerance
  std::uint64_t seed = 0;
  int max_rounds_per_node = 50;
  int max_root_rounds = 5000;
  std::int64_t node_limit = std::numeric_limits<std::int64_t>::max();
  double violation_tol = 1e-6;
  double integrality_tol = 1e-6;
  // Violation threshold at integral points, where the incumbent value is read.
  double integral_violation_tol = 1e-9;
  // Stop after the root cut loop.
  bool root_only = false;
  // JSON-lines event log; null disables logging.
  std::ostream* log = nullptr;
};

enum class SolveStatus { kOptimal, kTimeLimit, kNodeLimit, kRootOnly, kNumerical };

std::string to_string(SolveStatus status);

struct SolveReport {
  SolveStatus status = SolveStatus::kOptimal;
  BinaryChoice incumbent;
  double objective = -std::numeric_limits<double>::infinity();  // best lower bound
  double upper_bound = std::numeric_limits<double>::infinity();
  double gap_pct = std::numeric_limits<double>::quiet_NaN();
  std::int64_t nodes = 0;  // nodes explored beyond the root
  std::int64_t cuts = 0;
  std::int64_t lp_iterations = 0;
  std::int64_t exact_separations = 0;
  std::int64_t pool_size = 0;
  int root_rounds = 0;
  bool root_converged = false;
  double root_bound = std::numeric_limits<double>::quiet_NaN();
  // (root_bound - O*) / O* in percent; O* is the final objective.
  double root_gap_pct = std::numeric_limits<double>::quiet_NaN();
  double separation_time = 0.0;
  double total_time = 0.0;
};

SolveReport solve(const Instance& inst, const BncConfig& cfg = {});

struct RootReport {
  double bound = 0.0;
  double optimum = 0.0;
  double root_gap_pct = 0.0;
  int rounds = 0;
  std::int64_t cuts = 0;
  bool converged = false;
};

// Root cut loop only. When `optimum` is absent it is computed by a full solve
// with the same configuration.
RootReport root_relaxation(const Instance& inst, const BncConfig& cfg, std::optional<double> optimum = {});

// Root gap (bound - optimum) / optimum, in percent.
double root_gap_pct(double root_bound, double optimum);

std::string csv_header();
// Timing columns are written empty when include_timing is false so that rows
// are reproducible byte for byte.
std::string csv_row(const std::string& instance_name, Formulation form, const SolveReport& report,
                    bool include_timing = true);

}  // namespace scflp
