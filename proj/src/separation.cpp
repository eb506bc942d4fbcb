#include "scflp/separation.hpp"

#include <cmath>
#include <stdexcept>

namespace scflp {

bool FollowerPool::add(const BinaryChoice& y) {
  if (!seen_.insert(y.open_sites()).second) return false;
  members_.push_back(y);
  cy_.push_back(compute_cy(*inst_, y));
  return true;
}

bool is_integral(const std::vector<double>& x, double tol) {
  for (double v : x)
    if (std::abs(v - std::round(v)) > tol) return false;
  return true;
}

std::vector<int> rounded_support(const std::vector<double>& x) {
  std::vector<int> sites;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] >= 0.5) sites.push_back(static_cast<int>(j));
  return sites;
}

namespace {

void check_point(const RelaxPoint& pt, const Instance& inst) {
  if (static_cast<int>(pt.x.size()) != inst.n) throw std::invalid_argument("relaxation point length differs from n");
}

bool violated(const RelaxPoint& pt, const Cut& cut, double tol) {
  const Matrix* z = pt.z ? &*pt.z : nullptr;
  return pt.eta > cut.rhs(pt.x, z) + tol;
}

}  // namespace

SeparationOutcome separate_sf(const RelaxPoint& pt, const Instance& inst, FollowerPool& pool,
                              const SeparationConfig& cfg) {
  check_point(pt, inst);
  SeparationOutcome out;
  const bool integral = is_integral(pt.x, cfg.integrality_tol);
  const auto support = rounded_support(pt.x);

  for (std::size_t k = pool.size(); k-- > 0;) {
    Cut cut = submodular_cut(inst, pool.cy(k), pool.member(k), support);
    if (violated(pt, cut, cfg.violation_tol)) {
      out.cuts.push_back(std::move(cut));
      ++out.pool_hits;
    }
  }
  if (!out.cuts.empty() || !integral) return out;

  // a(i, k) = c_i / (c_i + v_ik), c_i the best open leader attraction.
  RMedianInstance rm;
  rm.cost = Matrix(inst.m, inst.n);
  rm.w = inst.w;
  rm.r = inst.r;
  for (int i = 0; i < inst.m; ++i) {
    double ci = 0.0;
    for (int j : support) ci = std::max(ci, inst.v(i, j));
    for (int k = 0; k < inst.n; ++k) rm.cost(i, k) = ci / (ci + inst.v(i, k));
  }
  const auto sol = rmedian_solve(rm, cfg.rmedian);
  out.exact = true;
  out.response = BinaryChoice::from_sites(inst.n, sol.sites);
  pool.add(out.response);
  Cut cut = submodular_cut(inst, out.response, support);
  out.exact_value = cut.constant;
  if (violated(pt, cut, cfg.violation_tol)) {
    out.cuts.push_back(std::move(cut));
  } else {
    out.certified = sol.status == RMedianStatus::kOptimal;
  }
  return out;
}

SeparationOutcome separate_gsf(const RelaxPoint& pt, const Instance& inst, FollowerPool& pool,
                               const SeparationConfig& cfg) {
  return separate_gsf(pt, inst, pool, SiteOrdering(inst), cfg);
}

SeparationOutcome separate_gsf(const RelaxPoint& pt, const Instance& inst, FollowerPool& pool,
                               const SiteOrdering& order, const SeparationConfig& cfg) {
  check_point(pt, inst);
  SeparationOutcome out;
  const EllVector ell = tight_ell(order, pt.x);

  for (std::size_t k = pool.size(); k-- > 0;) {
    Cut cut = improved_cut(inst, pool.cy(k), pool.member(k), ell);
    if (violated(pt, cut, cfg.violation_tol)) {
      out.cuts.push_back(std::move(cut));
      ++out.pool_hits;
    }
  }
  if (!out.cuts.empty()) return out;

  const auto sol = rmedian_solve(gsf_separation_costs(inst, order, pt.x), cfg.rmedian);
  out.exact = true;
  out.response = BinaryChoice::from_sites(inst.n, sol.sites);
  pool.add(out.response);
  Cut cut = improved_cut(inst, out.response, ell);
  out.exact_value = cut.rhs(pt.x);
  if (violated(pt, cut, cfg.violation_tol)) {
    out.cuts.push_back(std::move(cut));
  } else {
    out.certified = sol.status == RMedianStatus::kOptimal;
  }
  return out;
}

SeparationOutcome separate_ef(const RelaxPoint& pt, const Instance& inst, const SeparationConfig& cfg) {
  check_point(pt, inst);
  if (!pt.z) throw std::invalid_argument("EF separation needs an assignment matrix");
  SeparationOutcome out;
  const auto sol = rmedian_solve(ef_separation_costs(inst, *pt.z), cfg.rmedian);
  out.exact = true;
  out.response = BinaryChoice::from_sites(inst.n, sol.sites);
  Cut cut = ef_cut(inst, out.response);
  out.exact_value = cut.rhs(pt.x, &*pt.z);
  if (violated(pt, cut, cfg.violation_tol)) {
    out.cuts.push_back(std::move(cut));
  } else {
    out.certified = sol.status == RMedianStatus::kOptimal;
  }
  return out;
}

}  // namespace scflp
