#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace scflp::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Row {
  std::vector<int> index;
  std::vector<double> value;
  double lower = -kInf;
  double upper = kInf;
};

// Maximise c.x subject to row_lower <= A x <= row_upper and column bounds.
// The column count is fixed at construction; rows may be appended.
class LpModel {
 public:
  explicit LpModel(int num_cols = 0);

  int num_cols() const { return static_cast<int>(objective_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  void set_objective(int col, double coef);
  void set_col_bounds(int col, double lower, double upper);
  void set_col_name(int col, std::string name);

  double objective(int col) const { return objective_[static_cast<std::size_t>(col)]; }
  double col_lower(int col) const { return lower_[static_cast<std::size_t>(col)]; }
  double col_upper(int col) const { return upper_[static_cast<std::size_t>(col)]; }
  const std::string& col_name(int col) const { return names_[static_cast<std::size_t>(col)]; }

  // Duplicate column indices are summed. Zero coefficients are dropped.
  int add_row(const std::vector<std::pair<int, double>>& coefs, double lower, double upper);
  const Row& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::string> names_;
  std::vector<Row> rows_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string to_string(LpStatus status);

enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFreeZero };

// Status of every column followed by every row's logical variable.
struct Basis {
  std::vector<VarStatus> cols;
  std::vector<VarStatus> rows;
  bool empty() const { return cols.empty() && rows.empty(); }
};

struct LpOptions {
  int iteration_limit = 200000;
  int refactor_interval = 100;
  int stall_threshold = 60;
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  double zero_tol = 1e-11;
};

struct LpResult {
  LpStatus status = LpStatus::kIterationLimit;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> row_activity;
  std::vector<double> duals;
  Basis basis;
  std::int64_t iterations = 0;
  double max_primal_residual = 0.0;
  double max_dual_infeasibility = 0.0;
  std::string diagnostics;
};

// Bounded-variable primal revised simplex with an explicit dense basis
// inverse. Keeps its factorisation between calls so that appending rows and
// changing column bounds restart from the previous basis.
class LpSolver {
 public:
  explicit LpSolver(LpModel model, LpOptions options = {});
  ~LpSolver();
  LpSolver(LpSolver&&) noexcept;
  LpSolver& operator=(LpSolver&&) noexcept;

  const LpModel& model() const;
  const LpOptions& options() const;

  // The new row's logical variable enters the basis.
  int add_row(const std::vector<std::pair<int, double>>& coefs, double lower, double upper);
  void set_col_bounds(int col, double lower, double upper);
  void set_objective(int col, double coef);

  // Rows appended after `basis` was captured start basic.
  void set_basis(const Basis& basis);
  Basis basis() const;

  LpResult solve();

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

LpResult lp_solve(const LpModel& model, const Basis* warm = nullptr, const LpOptions& options = {});

// CPLEX-style LP text with 12 significant digits.
void write_lp(const LpModel& model, std::ostream& out);

}  // namespace scflp::lp
