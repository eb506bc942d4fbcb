#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "scflp/cuts.hpp"
#include "scflp/instance.hpp"
#include "scflp/market.hpp"
#include "scflp/matrix.hpp"
#include "scflp/rmedian.hpp"

namespace scflp {

// Follower choices returned by earlier exact separations, kept in insertion
// order with their c^y matrices.
class FollowerPool {
 public:
  explicit FollowerPool(const Instance& inst) : inst_(&inst) {}

  // Returns false when y is already present.
  bool add(const BinaryChoice& y);
  bool contains(const BinaryChoice& y) const { return seen_.count(y.open_sites()) > 0; }

  std::size_t size() const { return members_.size(); }
  const BinaryChoice& member(std::size_t k) const { return members_[k]; }
  const CyMatrix& cy(std::size_t k) const { return cy_[k]; }

 private:
  const Instance* inst_;
  std::vector<BinaryChoice> members_;
  std::vector<CyMatrix> cy_;
  std::set<std::vector<int>> seen_;
};

struct RelaxPoint {
  double eta = 0.0;
  std::vector<double> x;
  std::optional<Matrix> z;
};

struct SeparationConfig {
  double violation_tol = 1e-6;
  double integrality_tol = 1e-6;
  RMedianConfig rmedian;
};

struct SeparationOutcome {
  std::vector<Cut> cuts;
  int pool_hits = 0;
  bool exact = false;  // the r-median subproblem was solved
  // Exact separation found nothing violated: the point satisfies every cut
  // of the family.
  bool certified = false;
  double exact_value = std::numeric_limits<double>::quiet_NaN();
  BinaryChoice response;  // r-median argmin when exact
};

bool is_integral(const std::vector<double>& x, double tol);

// Nearest-integer rounding; 0.5 goes up.
std::vector<int> rounded_support(const std::vector<double>& x);

SeparationOutcome separate_sf(const RelaxPoint& pt, const Instance& inst, FollowerPool& pool,
                              const SeparationConfig& cfg = {});

SeparationOutcome separate_gsf(const RelaxPoint& pt, const Instance& inst, FollowerPool& pool,
                               const SiteOrdering& order, const SeparationConfig& cfg = {});
SeparationOutcome separate_gsf(const RelaxPoint& pt, const Instance& inst, FollowerPool& pool,
                               const SeparationConfig& cfg = {});

SeparationOutcome separate_ef(const RelaxPoint& pt, const Instance& inst, const SeparationConfig& cfg = {});

}  // namespace scflp
