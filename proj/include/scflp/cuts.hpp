#pragma once

#include <span>
#include <string>
#include <vector>

#include "scflp/instance.hpp"
#include "scflp/market.hpp"
#include "scflp/matrix.hpp"
#include "scflp/rmedian.hpp"

namespace scflp {

enum class Formulation { kSF, kGSF, kEF };

Formulation parse_formulation(const std::string& name);
std::string to_string(Formulation form);

// One inequality  eta <= constant + xcoef . x        (SF, GSF)
//             or  eta <= sum_ij zcoef(i, j) z_ij      (EF).
// Provenance records the follower choice and the leader set S (SF) or the
// anchor vector (GSF) that produced it.
struct Cut {
  Formulation kind = Formulation::kSF;
  double constant = 0.0;
  std::vector<double> xcoef;
  Matrix zcoef;

  std::vector<int> follower_sites;
  std::vector<int> leader_set;  // SF only
  std::vector<int> ell;         // GSF only

  double rhs(std::span<const double> x, const Matrix* z = nullptr) const;

  // Canonical identity used for duplicate suppression.
  std::vector<int> key() const;
};

// Anchor vector: one entry per customer in 0..n, where n is the virtual site.
using EllVector = std::vector<int>;

// Per-customer site orders by descending attractiveness (ties by index).
class SiteOrdering {
 public:
  SiteOrdering() = default;
  explicit SiteOrdering(const Instance& inst);

  // sigma(i, t) for t in 0..n-1; sigma(i, n) == n (virtual).
  int operator()(int i, int t) const { return t == n_ ? n_ : order_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(t)]; }
  int m() const { return m_; }
  int n() const { return n_; }

 private:
  int m_ = 0;
  int n_ = 0;
  std::vector<int> order_;
};

Cut submodular_cut(const Instance& inst, const BinaryChoice& y, const std::vector<int>& leader_set);
Cut submodular_cut(const Instance& inst, const CyMatrix& cy, const BinaryChoice& y, const std::vector<int>& leader_set);

Cut improved_cut(const Instance& inst, const BinaryChoice& y, const EllVector& ell);
Cut improved_cut(const Instance& inst, const CyMatrix& cy, const BinaryChoice& y, const EllVector& ell);

// k_i counts the leading sites (in sigma_i order) whose cumulative leader
// mass stays below one; it is 1 when the top site is fully open.
std::vector<int> prefix_counts(const SiteOrdering& order, std::span<const double> xstar);

EllVector tight_ell(const Instance& inst, std::span<const double> xstar);
EllVector tight_ell(const SiteOrdering& order, std::span<const double> xstar);

// Costs b(i, k) whose r-median optimum equals the best improved-cut
// right-hand side at xstar.
RMedianInstance gsf_separation_costs(const Instance& inst, std::span<const double> xstar);
RMedianInstance gsf_separation_costs(const Instance& inst, const SiteOrdering& order, std::span<const double> xstar);

Cut ef_cut(const Instance& inst, const BinaryChoice& y);

// Costs d(i, k) = sum_j z(i, j) v_ij / (v_ij + v_ik).
RMedianInstance ef_separation_costs(const Instance& inst, const Matrix& zstar);

// Optimal assignment z for a fixed (possibly fractional) x: customers fill
// their sites in descending attractiveness until one unit is assigned.
Matrix greedy_assignment(const Instance& inst, const SiteOrdering& order, std::span<const double> x);

}  // namespace scflp
