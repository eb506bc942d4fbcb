#include "scflp/market.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "scflp/combinatorics.hpp"
#include "scflp/rmedian.hpp"

namespace scflp {

namespace {

void check_sizes(const Instance& inst, const BinaryChoice& choice, const char* what) {
  if (choice.size() != inst.n) throw std::invalid_argument(std::string(what) + " length differs from n");
}

// Per-customer best attractiveness over the open sites of `choice`; 0 if none.
std::vector<double> best_attraction(const Instance& inst, const BinaryChoice& choice) {
  std::vector<double> best(static_cast<std::size_t>(inst.m), 0.0);
  const auto sites = choice.open_sites();
  for (int i = 0; i < inst.m; ++i) {
    double b = 0.0;
    for (int k : sites) b = std::max(b, inst.v(i, k));
    best[static_cast<std::size_t>(i)] = b;
  }
  return best;
}

}  // namespace

CyMatrix compute_cy(const Instance& inst, const BinaryChoice& y) {
  check_sizes(inst, y, "follower choice");
  if (y.cardinality() == 0) throw std::invalid_argument("follower choice opens no site");
  const auto follower = best_attraction(inst, y);
  Matrix c(inst.m, inst.n);
  for (int i = 0; i < inst.m; ++i) {
    const double f = follower[static_cast<std::size_t>(i)];
    for (int j = 0; j < inst.n; ++j) c(i, j) = inst.v(i, j) / (inst.v(i, j) + f);
  }
  return CyMatrix(std::move(c));
}

double set_share(const Instance& inst, const CyMatrix& cy, const std::vector<int>& sites) {
  if (sites.empty()) return 0.0;
  double total = 0.0;
  for (int i = 0; i < inst.m; ++i) {
    double best = 0.0;
    for (int j : sites) best = std::max(best, cy(i, j));
    total += inst.w[static_cast<std::size_t>(i)] * best;
  }
  return total;
}

double leader_share(const Instance& inst, const BinaryChoice& x, const BinaryChoice& y) {
  check_sizes(inst, x, "leader choice");
  if (x.cardinality() == 0) return 0.0;
  return set_share(inst, compute_cy(inst, y), x.open_sites());
}

double follower_share(const Instance& inst, const BinaryChoice& x, const BinaryChoice& y) {
  check_sizes(inst, x, "leader choice");
  check_sizes(inst, y, "follower choice");
  const auto leader = best_attraction(inst, x);
  const auto follower = best_attraction(inst, y);
  double total = 0.0;
  for (int i = 0; i < inst.m; ++i) {
    const double f = follower[static_cast<std::size_t>(i)];
    total += inst.w[static_cast<std::size_t>(i)] * f / (leader[static_cast<std::size_t>(i)] + f);
  }
  return total;
}

BestResponse follower_best_response(const Instance& inst, const BinaryChoice& x, const ResponseOptions& options) {
  check_sizes(inst, x, "leader choice");

  if (options.mode == ResponseMode::kEnumerate) {
    const std::uint64_t count = binomial(inst.n, inst.r);
    if (count > options.enumeration_cap) {
      throw CapExceeded("follower enumeration exceeds cap: C(" + std::to_string(inst.n) + ", " +
                        std::to_string(inst.r) + ") = " + std::to_string(count));
    }
    BestResponse best;
    best.value = std::numeric_limits<double>::infinity();
    for_each_subset(inst.n, inst.r, [&](const std::vector<int>& sites) {
      auto y = BinaryChoice::from_sites(inst.n, sites);
      const double value = leader_share(inst, x, y);
      if (value < best.value) {
        best.value = value;
        best.y = std::move(y);
      }
      return true;
    });
    return best;
  }

  // a(i, k) = c_i / (c_i + v_ik) with c_i the leader's best attraction.
  const auto leader = best_attraction(inst, x);
  RMedianInstance rm;
  rm.cost = Matrix(inst.m, inst.n);
  rm.w = inst.w;
  rm.r = inst.r;
  for (int i = 0; i < inst.m; ++i) {
    const double ci = leader[static_cast<std::size_t>(i)];
    for (int k = 0; k < inst.n; ++k) rm.cost(i, k) = ci / (ci + inst.v(i, k));
  }
  const auto sol = rmedian_solve(rm);
  BestResponse best;
  best.y = BinaryChoice::from_sites(inst.n, sol.sites);
  best.value = x.cardinality() == 0 ? 0.0 : leader_share(inst, x, best.y);
  return best;
}

}  // namespace scflp
