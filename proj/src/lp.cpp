#include "scflp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/format.h>

namespace scflp::lp {

// ---------------------------------------------------------------------------
// LpModel

LpModel::LpModel(int num_cols)
    : objective_(static_cast<std::size_t>(num_cols), 0.0),
      lower_(static_cast<std::size_t>(num_cols), 0.0),
      upper_(static_cast<std::size_t>(num_cols), kInf),
      names_(static_cast<std::size_t>(num_cols)) {}

void LpModel::set_objective(int col, double coef) { objective_.at(static_cast<std::size_t>(col)) = coef; }

void LpModel::set_col_bounds(int col, double lower, double upper) {
  if (lower > upper) throw std::invalid_argument(fmt::format("column {} has lower bound above upper bound", col));
  lower_.at(static_cast<std::size_t>(col)) = lower;
  upper_.at(static_cast<std::size_t>(col)) = upper;
}

void LpModel::set_col_name(int col, std::string name) { names_.at(static_cast<std::size_t>(col)) = std::move(name); }

int LpModel::add_row(const std::vector<std::pair<int, double>>& coefs, double lower, double upper) {
  if (lower > upper) throw std::invalid_argument("row lower bound above upper bound");
  std::map<int, double> merged;
  for (const auto& [col, value] : coefs) {
    if (col < 0 || col >= num_cols()) throw std::invalid_argument(fmt::format("row references column {} out of range", col));
    if (!std::isfinite(value)) throw std::invalid_argument("row coefficient is not finite");
    merged[col] += value;
  }
  Row row;
  row.lower = lower;
  row.upper = upper;
  for (const auto& [col, value] : merged) {
    if (value == 0.0) continue;
    row.index.push_back(col);
    row.value.push_back(value);
  }
  rows_.push_back(std::move(row));
  return num_rows() - 1;
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration_limit";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Simplex engine
//
// Rows are written as A x - s = 0 with the logical s_i boxed by the row
// bounds, so the constraint matrix is [A | -I] and every variable is boxed.

class LpSolver::Impl {
 public:
  Impl(LpModel model, LpOptions options) : model_(std::move(model)), opt_(options) {
    n_ = model_.num_cols();
    cols_.resize(static_cast<std::size_t>(n_));
    lo_.resize(static_cast<std::size_t>(n_));
    hi_.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) {
      lo_[static_cast<std::size_t>(j)] = model_.col_lower(j);
      hi_[static_cast<std::size_t>(j)] = model_.col_upper(j);
    }
    status_.assign(static_cast<std::size_t>(n_), VarStatus::kAtLower);
    val_.assign(static_cast<std::size_t>(n_), 0.0);
    pos_.assign(static_cast<std::size_t>(n_), -1);
    for (int j = 0; j < n_; ++j) reset_nonbasic(j);
    binv_.resize(0, 0);
    for (int i = 0; i < model_.num_rows(); ++i) append_row_storage(i);
    slack_basis();
  }

  const LpModel& model() const { return model_; }
  const LpOptions& options() const { return opt_; }

  int add_row(const std::vector<std::pair<int, double>>& coefs, double lower, double upper) {
    const int i = model_.add_row(coefs, lower, upper);
    append_row_storage(i);
    const int var = n_ + i;
    // Extend the inverse: new row of B^{-1} is (r^T B^{-1}, -1), where r
    // holds the new row's coefficients on the basic structurals.
    const int m_old = m_ - 1;
    head_.push_back(var);
    pos_[static_cast<std::size_t>(var)] = m_old;
    status_[static_cast<std::size_t>(var)] = VarStatus::kBasic;
    if (factored_) {
      Eigen::RowVectorXd extra = Eigen::RowVectorXd::Zero(m_old);
      const Row& row = model_.row(i);
      for (std::size_t t = 0; t < row.index.size(); ++t) {
        const int p = pos_[static_cast<std::size_t>(row.index[t])];
        if (p >= 0) extra += row.value[t] * binv_.row(p);
      }
      Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(m_, m_);
      grown.topLeftCorner(m_old, m_old) = binv_;
      grown.block(m_old, 0, 1, m_old) = extra;
      grown(m_old, m_old) = -1.0;
      binv_.swap(grown);
    }
    double activity = 0.0;
    const Row& row = model_.row(i);
    for (std::size_t t = 0; t < row.index.size(); ++t) activity += row.value[t] * val_[static_cast<std::size_t>(row.index[t])];
    val_[static_cast<std::size_t>(var)] = activity;
    return i;
  }

  void set_col_bounds(int col, double lower, double upper) {
    model_.set_col_bounds(col, lower, upper);
    lo_[static_cast<std::size_t>(col)] = lower;
    hi_[static_cast<std::size_t>(col)] = upper;
    if (status_[static_cast<std::size_t>(col)] != VarStatus::kBasic) {
      reset_nonbasic_keep_side(col);
      values_dirty_ = true;
    }
  }

  void set_objective(int col, double coef) { model_.set_objective(col, coef); }

  void set_basis(const Basis& basis) {
    if (static_cast<int>(basis.cols.size()) != n_ || static_cast<int>(basis.rows.size()) > m_) {
      throw std::invalid_argument("basis does not match the model dimensions");
    }
    std::vector<VarStatus> st(static_cast<std::size_t>(n_ + m_), VarStatus::kBasic);
    std::copy(basis.cols.begin(), basis.cols.end(), st.begin());
    std::copy(basis.rows.begin(), basis.rows.end(), st.begin() + n_);
    int basic = 0;
    for (auto s : st) basic += s == VarStatus::kBasic;
    if (basic != m_) {
      slack_basis();
      return;
    }
    head_.clear();
    for (int j = 0; j < n_ + m_; ++j) {
      status_[static_cast<std::size_t>(j)] = st[static_cast<std::size_t>(j)];
      pos_[static_cast<std::size_t>(j)] = -1;
      if (st[static_cast<std::size_t>(j)] == VarStatus::kBasic) {
        pos_[static_cast<std::size_t>(j)] = static_cast<int>(head_.size());
        head_.push_back(j);
      } else {
        reset_nonbasic_keep_side(j);
      }
    }
    factored_ = false;
  }

  Basis basis() const {
    Basis b;
    b.cols.assign(status_.begin(), status_.begin() + n_);
    b.rows.assign(status_.begin() + n_, status_.end());
    return b;
  }

  LpResult solve();

 private:
  // ---- storage helpers -----------------------------------------------------

  void append_row_storage(int i) {
    const Row& row = model_.row(i);
    for (std::size_t t = 0; t < row.index.size(); ++t) {
      cols_[static_cast<std::size_t>(row.index[t])].push_back({i, row.value[t]});
    }
    lo_.push_back(row.lower);
    hi_.push_back(row.upper);
    status_.push_back(VarStatus::kBasic);
    val_.push_back(0.0);
    pos_.push_back(-1);
    ++m_;
  }

  bool is_fixed(int j) const { return lo_[static_cast<std::size_t>(j)] == hi_[static_cast<std::size_t>(j)]; }

  void reset_nonbasic(int j) {
    const double lo = lo_[static_cast<std::size_t>(j)];
    const double hi = hi_[static_cast<std::size_t>(j)];
    if (std::isfinite(lo)) {
      status_[static_cast<std::size_t>(j)] = VarStatus::kAtLower;
      val_[static_cast<std::size_t>(j)] = lo;
    } else if (std::isfinite(hi)) {
      status_[static_cast<std::size_t>(j)] = VarStatus::kAtUpper;
      val_[static_cast<std::size_t>(j)] = hi;
    } else {
      status_[static_cast<std::size_t>(j)] = VarStatus::kFreeZero;
      val_[static_cast<std::size_t>(j)] = 0.0;
    }
  }

  void reset_nonbasic_keep_side(int j) {
    const auto st = status_[static_cast<std::size_t>(j)];
    const double lo = lo_[static_cast<std::size_t>(j)];
    const double hi = hi_[static_cast<std::size_t>(j)];
    if (st == VarStatus::kAtUpper && std::isfinite(hi)) {
      val_[static_cast<std::size_t>(j)] = hi;
    } else if (st == VarStatus::kAtLower && std::isfinite(lo)) {
      val_[static_cast<std::size_t>(j)] = lo;
    } else {
      reset_nonbasic(j);
    }
  }

  void slack_basis() {
    head_.assign(static_cast<std::size_t>(m_), 0);
    for (int j = 0; j < n_; ++j) {
      pos_[static_cast<std::size_t>(j)] = -1;
      if (status_[static_cast<std::size_t>(j)] == VarStatus::kBasic) status_[static_cast<std::size_t>(j)] = VarStatus::kAtLower;
      reset_nonbasic_keep_side(j);
    }
    for (int i = 0; i < m_; ++i) {
      head_[static_cast<std::size_t>(i)] = n_ + i;
      pos_[static_cast<std::size_t>(n_ + i)] = i;
      status_[static_cast<std::size_t>(n_ + i)] = VarStatus::kBasic;
    }
    binv_ = -Eigen::MatrixXd::Identity(m_, m_);
    factored_ = true;
    since_refactor_ = 0;
    values_dirty_ = true;
  }

  // ---- linear algebra ------------------------------------------------------

  // Rebuilds B^{-1} from scratch. With R the rows whose logicals are
  // nonbasic and S the basic structurals, only A(R, S) needs inverting.
  bool refactor() {
    std::vector<int> structural;  // basic structural columns in head order
    std::vector<int> struct_pos;
    std::vector<int> row_of_logical;
    std::vector<int> logical_pos;
    for (int p = 0; p < m_; ++p) {
      const int var = head_[static_cast<std::size_t>(p)];
      if (var < n_) {
        structural.push_back(var);
        struct_pos.push_back(p);
      } else {
        row_of_logical.push_back(var - n_);
        logical_pos.push_back(p);
      }
    }
    const int k = static_cast<int>(structural.size());
    std::vector<int> rmap(static_cast<std::size_t>(m_), -1);
    {
      std::vector<char> logical_basic(static_cast<std::size_t>(m_), 0);
      for (int i : row_of_logical) logical_basic[static_cast<std::size_t>(i)] = 1;
      int t = 0;
      for (int i = 0; i < m_; ++i)
        if (!logical_basic[static_cast<std::size_t>(i)]) rmap[static_cast<std::size_t>(i)] = t++;
    }
    Eigen::MatrixXd minv;
    if (k > 0) {
      Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(k, k);
      for (int b = 0; b < k; ++b) {
        for (const auto& [i, v] : cols_[static_cast<std::size_t>(structural[static_cast<std::size_t>(b)])]) {
          const int ri = rmap[static_cast<std::size_t>(i)];
          if (ri >= 0) mat(ri, b) = v;
        }
      }
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(mat);
      if (!(lu.rcond() > 1e-13)) return false;
      minv = lu.inverse();
    }
    std::vector<int> r_rows(static_cast<std::size_t>(k));
    for (int i = 0; i < m_; ++i)
      if (rmap[static_cast<std::size_t>(i)] >= 0) r_rows[static_cast<std::size_t>(rmap[static_cast<std::size_t>(i)])] = i;

    binv_.setZero(m_, m_);
    for (int b = 0; b < k; ++b) {
      const int p = struct_pos[static_cast<std::size_t>(b)];
      for (int a = 0; a < k; ++a) binv_(p, r_rows[static_cast<std::size_t>(a)]) = minv(b, a);
    }
    std::vector<int> struct_index(static_cast<std::size_t>(n_), -1);
    for (int b = 0; b < k; ++b) struct_index[static_cast<std::size_t>(structural[static_cast<std::size_t>(b)])] = b;
    Eigen::RowVectorXd acc(k);
    for (std::size_t t = 0; t < row_of_logical.size(); ++t) {
      const int i = row_of_logical[t];
      const int p = logical_pos[t];
      if (k > 0) {
        acc.setZero();
        const Row& row = model_.row(i);
        for (std::size_t e = 0; e < row.index.size(); ++e) {
          const int b = struct_index[static_cast<std::size_t>(row.index[e])];
          if (b >= 0) acc += row.value[e] * minv.row(b);
        }
        for (int a = 0; a < k; ++a) binv_(p, r_rows[static_cast<std::size_t>(a)]) = acc(a);
      }
      binv_(p, i) = -1.0;
    }
    factored_ = true;
    since_refactor_ = 0;
    values_dirty_ = true;
    return true;
  }

  void ensure_factored() {
    if (!factored_ || binv_.rows() != m_) {
      if (!refactor()) {
        diagnostics_ += "singular basis replaced by slack basis; ";
        slack_basis();
      }
    }
    if (values_dirty_) compute_basic_values();
  }

  void compute_basic_values() {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
    for (int j = 0; j < n_; ++j) {
      if (status_[static_cast<std::size_t>(j)] == VarStatus::kBasic) continue;
      const double x = val_[static_cast<std::size_t>(j)];
      if (x == 0.0) continue;
      for (const auto& [i, v] : cols_[static_cast<std::size_t>(j)]) rhs(i) += v * x;
    }
    for (int i = 0; i < m_; ++i) {
      const int var = n_ + i;
      if (status_[static_cast<std::size_t>(var)] == VarStatus::kBasic) continue;
      rhs(i) -= val_[static_cast<std::size_t>(var)];
    }
    Eigen::VectorXd xb = -(binv_ * rhs);
    for (int p = 0; p < m_; ++p) val_[static_cast<std::size_t>(head_[static_cast<std::size_t>(p)])] = xb(p);
    values_dirty_ = false;
  }

  Eigen::VectorXd ftran(int var) const {
    if (var < n_) {
      Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m_);
      for (const auto& [i, v] : cols_[static_cast<std::size_t>(var)]) alpha.noalias() += v * binv_.col(i);
      return alpha;
    }
    return -binv_.col(var - n_);
  }

  double column_dot(int var, const Eigen::VectorXd& y) const {
    if (var < n_) {
      double acc = 0.0;
      for (const auto& [i, v] : cols_[static_cast<std::size_t>(var)]) acc += v * y(i);
      return acc;
    }
    return -y(var - n_);
  }

  void pivot(int entering, int leave_pos, const Eigen::VectorXd& alpha) {
    const double piv = alpha(leave_pos);
    binv_.row(leave_pos) /= piv;
    Eigen::VectorXd a = alpha;
    a(leave_pos) = 0.0;
    binv_.noalias() -= a * binv_.row(leave_pos);
    const int leaving = head_[static_cast<std::size_t>(leave_pos)];
    pos_[static_cast<std::size_t>(leaving)] = -1;
    head_[static_cast<std::size_t>(leave_pos)] = entering;
    pos_[static_cast<std::size_t>(entering)] = leave_pos;
    status_[static_cast<std::size_t>(entering)] = VarStatus::kBasic;
    ++since_refactor_;
  }

  // ---- feasibility ---------------------------------------------------------

  double infeasibility(int var) const {
    const double x = val_[static_cast<std::size_t>(var)];
    const double tol = opt_.feasibility_tol;
    if (x < lo_[static_cast<std::size_t>(var)] - tol) return lo_[static_cast<std::size_t>(var)] - x;
    if (x > hi_[static_cast<std::size_t>(var)] + tol) return x - hi_[static_cast<std::size_t>(var)];
    return 0.0;
  }

  double total_infeasibility() const {
    double total = 0.0;
    for (int p = 0; p < m_; ++p) total += infeasibility(head_[static_cast<std::size_t>(p)]);
    return total;
  }

  LpModel model_;
  LpOptions opt_;
  int n_ = 0;
  int m_ = 0;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<VarStatus> status_;
  std::vector<double> val_;
  std::vector<int> head_;
  std::vector<int> pos_;
  Eigen::MatrixXd binv_;
  bool factored_ = false;
  bool values_dirty_ = true;
  int since_refactor_ = 0;
  std::string diagnostics_;

  friend class LpSolver;
};

LpResult LpSolver::Impl::solve() {
  LpResult result;
  diagnostics_.clear();
  ensure_factored();

  const double ftol = opt_.feasibility_tol;
  const double dtol = opt_.optimality_tol;
  std::int64_t iterations = 0;
  int degenerate_run = 0;
  bool bland = false;
  int verify_passes = 0;
  Eigen::VectorXd cb(m_);
  Eigen::VectorXd y(m_);
  LpStatus status = LpStatus::kIterationLimit;

  while (iterations < opt_.iteration_limit) {
    if (since_refactor_ >= opt_.refactor_interval) {
      if (!refactor()) {
        diagnostics_ += "singular basis replaced by slack basis; ";
        slack_basis();
      }
      compute_basic_values();
    }

    const bool phase1 = total_infeasibility() > 0.0;
    cb.resize(m_);
    for (int p = 0; p < m_; ++p) {
      const int var = head_[static_cast<std::size_t>(p)];
      if (phase1) {
        const double x = val_[static_cast<std::size_t>(var)];
        cb(p) = x < lo_[static_cast<std::size_t>(var)] - ftol ? 1.0 : (x > hi_[static_cast<std::size_t>(var)] + ftol ? -1.0 : 0.0);
      } else {
        cb(p) = var < n_ ? model_.objective(var) : 0.0;
      }
    }
    y.noalias() = binv_.transpose() * cb;

    // Pricing.
    int entering = -1;
    double entering_d = 0.0;
    double best_score = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      const auto st = status_[static_cast<std::size_t>(j)];
      if (st == VarStatus::kBasic || is_fixed(j)) continue;
      const double c = (!phase1 && j < n_) ? model_.objective(j) : 0.0;
      const double d = c - column_dot(j, y);
      bool eligible = false;
      if (st == VarStatus::kAtLower) eligible = d > dtol;
      else if (st == VarStatus::kAtUpper) eligible = d < -dtol;
      else eligible = std::abs(d) > dtol;
      if (!eligible) continue;
      if (bland) {
        entering = j;
        entering_d = d;
        break;
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        entering = j;
        entering_d = d;
      }
    }

    if (entering < 0) {
      // Confirm on a fresh factorisation before declaring a final status.
      if (verify_passes < 2 && since_refactor_ > 0) {
        ++verify_passes;
        if (!refactor()) {
          diagnostics_ += "singular basis replaced by slack basis; ";
          slack_basis();
        }
        compute_basic_values();
        continue;
      }
      status = phase1 ? LpStatus::kInfeasible : LpStatus::kOptimal;
      break;
    }

    const double dir = entering_d > 0.0 ? 1.0 : -1.0;
    const Eigen::VectorXd alpha = ftran(entering);
    const double range = hi_[static_cast<std::size_t>(entering)] - lo_[static_cast<std::size_t>(entering)];

    // Harris two-pass ratio test (plain min-ratio with index ties under Bland).
    auto limit = [&](int p, bool relaxed, bool& to_upper) -> double {
      const int var = head_[static_cast<std::size_t>(p)];
      const double delta = -dir * alpha(p);
      if (std::abs(delta) < opt_.pivot_tol) return kInf;
      const double x = val_[static_cast<std::size_t>(var)];
      const double lo = lo_[static_cast<std::size_t>(var)];
      const double hi = hi_[static_cast<std::size_t>(var)];
      const double slack = relaxed ? ftol : 0.0;
      if (phase1 && x < lo - ftol) {
        if (delta > 0.0) {
          to_upper = false;
          return std::max(0.0, (lo - x + slack) / delta);
        }
        return kInf;
      }
      if (phase1 && x > hi + ftol) {
        if (delta < 0.0) {
          to_upper = true;
          return std::max(0.0, (x - hi + slack) / -delta);
        }
        return kInf;
      }
      if (delta < 0.0 && std::isfinite(lo)) {
        to_upper = false;
        return std::max(0.0, (x - lo + slack) / -delta);
      }
      if (delta > 0.0 && std::isfinite(hi)) {
        to_upper = true;
        return std::max(0.0, (hi - x + slack) / delta);
      }
      return kInf;
    };

    int leave = -1;
    bool leave_to_upper = false;
    double theta = kInf;
    if (bland) {
      int leave_var = -1;
      for (int p = 0; p < m_; ++p) {
        bool up = false;
        const double t = limit(p, false, up);
        if (!std::isfinite(t)) continue;
        const int var = head_[static_cast<std::size_t>(p)];
        if (t < theta - opt_.zero_tol || (t <= theta + opt_.zero_tol && var < leave_var)) {
          theta = t;
          leave = p;
          leave_var = var;
          leave_to_upper = up;
        }
      }
    } else {
      double theta_max = kInf;
      for (int p = 0; p < m_; ++p) {
        bool up = false;
        theta_max = std::min(theta_max, limit(p, true, up));
      }
      if (std::isfinite(theta_max)) {
        double best_pivot = 0.0;
        for (int p = 0; p < m_; ++p) {
          bool up = false;
          const double t = limit(p, false, up);
          if (t > theta_max) continue;
          const double mag = std::abs(alpha(p));
          if (mag > best_pivot) {
            best_pivot = mag;
            leave = p;
            theta = t;
            leave_to_upper = up;
          }
        }
      }
    }

    ++iterations;
    if (std::isfinite(range) && range <= theta) {
      // Bound flip: the entering variable crosses its whole range.
      theta = range;
      leave = -1;
    } else if (leave < 0) {
      if (phase1) {
        diagnostics_ += "unbounded phase-1 direction; ";
        if (!refactor()) slack_basis();
        compute_basic_values();
        continue;
      }
      status = LpStatus::kUnbounded;
      break;
    }

    if (theta <= opt_.zero_tol) {
      if (++degenerate_run >= opt_.stall_threshold) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }

    val_[static_cast<std::size_t>(entering)] += dir * theta;
    for (int p = 0; p < m_; ++p) val_[static_cast<std::size_t>(head_[static_cast<std::size_t>(p)])] -= dir * alpha(p) * theta;

    if (leave < 0) {
      auto& st = status_[static_cast<std::size_t>(entering)];
      st = dir > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower;
      val_[static_cast<std::size_t>(entering)] = dir > 0 ? hi_[static_cast<std::size_t>(entering)] : lo_[static_cast<std::size_t>(entering)];
      continue;
    }
    const int leaving = head_[static_cast<std::size_t>(leave)];
    pivot(entering, leave, alpha);
    status_[static_cast<std::size_t>(leaving)] = leave_to_upper ? VarStatus::kAtUpper : VarStatus::kAtLower;
    val_[static_cast<std::size_t>(leaving)] = leave_to_upper ? hi_[static_cast<std::size_t>(leaving)] : lo_[static_cast<std::size_t>(leaving)];
    verify_passes = 0;
  }

  result.status = status;
  result.iterations = iterations;
  result.x.assign(val_.begin(), val_.begin() + n_);
  result.row_activity.resize(static_cast<std::size_t>(m_));
  double objective = 0.0;
  for (int j = 0; j < n_; ++j) objective += model_.objective(j) * val_[static_cast<std::size_t>(j)];
  result.objective = objective;

  double residual = 0.0;
  for (int i = 0; i < m_; ++i) {
    const Row& row = model_.row(i);
    double act = 0.0;
    for (std::size_t t = 0; t < row.index.size(); ++t) act += row.value[t] * val_[static_cast<std::size_t>(row.index[t])];
    result.row_activity[static_cast<std::size_t>(i)] = act;
    residual = std::max(residual, std::abs(act - val_[static_cast<std::size_t>(n_ + i)]));
    residual = std::max({residual, row.lower - act, act - row.upper});
  }
  for (int j = 0; j < n_; ++j) {
    residual = std::max({residual, lo_[static_cast<std::size_t>(j)] - val_[static_cast<std::size_t>(j)],
                         val_[static_cast<std::size_t>(j)] - hi_[static_cast<std::size_t>(j)]});
  }
  result.max_primal_residual = residual;

  result.duals.assign(static_cast<std::size_t>(m_), 0.0);
  if (status == LpStatus::kOptimal) {
    for (int p = 0; p < m_; ++p) {
      const int var = head_[static_cast<std::size_t>(p)];
      cb(p) = var < n_ ? model_.objective(var) : 0.0;
    }
    y.noalias() = binv_.transpose() * cb;
    for (int i = 0; i < m_; ++i) result.duals[static_cast<std::size_t>(i)] = y(i);
    double dual_inf = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      const auto st = status_[static_cast<std::size_t>(j)];
      if (st == VarStatus::kBasic || is_fixed(j)) continue;
      const double d = (j < n_ ? model_.objective(j) : 0.0) - column_dot(j, y);
      if (st == VarStatus::kAtLower) dual_inf = std::max(dual_inf, d);
      else if (st == VarStatus::kAtUpper) dual_inf = std::max(dual_inf, -d);
      else dual_inf = std::max(dual_inf, std::abs(d));
    }
    result.max_dual_infeasibility = dual_inf;
    if (residual > 10 * ftol) {
      result.status = LpStatus::kIterationLimit;
      diagnostics_ += fmt::format("primal residual {:.3g} after optimal exit; ", residual);
    }
  }
  if (status == LpStatus::kIterationLimit && iterations >= opt_.iteration_limit) {
    diagnostics_ += fmt::format("iteration limit {} reached; ", opt_.iteration_limit);
  }
  result.basis = basis();
  result.diagnostics = diagnostics_;
  return result;
}

// ---------------------------------------------------------------------------

LpSolver::LpSolver(LpModel model, LpOptions options) : impl_(std::make_unique<Impl>(std::move(model), options)) {}
LpSolver::~LpSolver() = default;
LpSolver::LpSolver(LpSolver&&) noexcept = default;
LpSolver& LpSolver::operator=(LpSolver&&) noexcept = default;

const LpModel& LpSolver::model() const { return impl_->model(); }
const LpOptions& LpSolver::options() const { return impl_->options(); }
int LpSolver::add_row(const std::vector<std::pair<int, double>>& coefs, double lower, double upper) {
  return impl_->add_row(coefs, lower, upper);
}
void LpSolver::set_col_bounds(int col, double lower, double upper) { impl_->set_col_bounds(col, lower, upper); }
void LpSolver::set_objective(int col, double coef) { impl_->set_objective(col, coef); }
void LpSolver::set_basis(const Basis& basis) { impl_->set_basis(basis); }
Basis LpSolver::basis() const { return impl_->basis(); }
LpResult LpSolver::solve() { return impl_->solve(); }

LpResult lp_solve(const LpModel& model, const Basis* warm, const LpOptions& options) {
  LpSolver solver(model, options);
  if (warm && !warm->empty()) solver.set_basis(*warm);
  return solver.solve();
}

// ---------------------------------------------------------------------------

namespace {

std::string col_label(const LpModel& model, int j) {
  const auto& name = model.col_name(j);
  return name.empty() ? fmt::format("c{}", j) : name;
}

std::string number(double v) { return fmt::format("{:.12g}", v); }

void write_terms(std::ostream& out, const LpModel& model, const std::vector<int>& index, const std::vector<double>& value) {
  bool first = true;
  for (std::size_t t = 0; t < index.size(); ++t) {
    const double c = value[t];
    if (c == 0.0) continue;
    out << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    if (std::abs(c) != 1.0) out << number(std::abs(c)) << ' ';
    out << col_label(model, index[t]);
    first = false;
  }
  if (first) out << "0 " << col_label(model, 0);
}

}  // namespace

void write_lp(const LpModel& model, std::ostream& out) {
  out << "\\ generated by scflp\n";
  out << "Maximize\n obj: ";
  std::vector<int> idx;
  std::vector<double> val;
  for (int j = 0; j < model.num_cols(); ++j) {
    if (model.objective(j) != 0.0) {
      idx.push_back(j);
      val.push_back(model.objective(j));
    }
  }
  write_terms(out, model, idx, val);
  out << "\nSubject To\n";
  for (int i = 0; i < model.num_rows(); ++i) {
    const Row& row = model.row(i);
    const bool has_lo = std::isfinite(row.lower);
    const bool has_hi = std::isfinite(row.upper);
    if (has_lo && has_hi && row.lower == row.upper) {
      out << " r" << i << ": ";
      write_terms(out, model, row.index, row.value);
      out << " = " << number(row.upper) << '\n';
      continue;
    }
    if (has_hi) {
      out << " r" << i << (has_lo ? "_hi" : "") << ": ";
      write_terms(out, model, row.index, row.value);
      out << " <= " << number(row.upper) << '\n';
    }
    if (has_lo) {
      out << " r" << i << (has_hi ? "_lo" : "") << ": ";
      write_terms(out, model, row.index, row.value);
      out << " >= " << number(row.lower) << '\n';
    }
  }
  out << "Bounds\n";
  for (int j = 0; j < model.num_cols(); ++j) {
    const double lo = model.col_lower(j);
    const double hi = model.col_upper(j);
    const std::string name = col_label(model, j);
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
      out << ' ' << name << " free\n";
    } else if (!std::isfinite(lo)) {
      out << " -inf <= " << name << " <= " << number(hi) << '\n';
    } else if (!std::isfinite(hi)) {
      out << ' ' << name << " >= " << number(lo) << '\n';
    } else {
      out << ' ' << number(lo) << " <= " << name << " <= " << number(hi) << '\n';
    }
  }
  out << "End\n";
}

}  // namespace scflp::lp
