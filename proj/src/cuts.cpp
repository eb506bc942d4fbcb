#include "scflp/cuts.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace scflp {

Formulation parse_formulation(const std::string& name) {
  if (name == "SF" || name == "sf") return Formulation::kSF;
  if (name == "GSF" || name == "gsf") return Formulation::kGSF;
  if (name == "EF" || name == "ef") return Formulation::kEF;
  throw std::invalid_argument("unknown formulation '" + name + "' (expected SF, GSF or EF)");
}

std::string to_string(Formulation form) {
  switch (form) {
    case Formulation::kSF: return "SF";
    case Formulation::kGSF: return "GSF";
    case Formulation::kEF: return "EF";
  }
  return "?";
}

double Cut::rhs(std::span<const double> x, const Matrix* z) const {
  if (kind == Formulation::kEF) {
    if (!z) throw std::invalid_argument("EF cut needs an assignment matrix");
    double total = 0.0;
    for (int i = 0; i < zcoef.rows(); ++i)
      for (int j = 0; j < zcoef.cols(); ++j) total += zcoef(i, j) * (*z)(i, j);
    return total;
  }
  double total = constant;
  for (std::size_t j = 0; j < xcoef.size(); ++j) total += xcoef[j] * x[j];
  return total;
}

std::vector<int> Cut::key() const {
  std::vector<int> key;
  key.reserve(2 + follower_sites.size() + leader_set.size() + ell.size());
  key.push_back(static_cast<int>(kind));
  key.insert(key.end(), follower_sites.begin(), follower_sites.end());
  key.push_back(-1);
  key.insert(key.end(), leader_set.begin(), leader_set.end());
  key.insert(key.end(), ell.begin(), ell.end());
  return key;
}

SiteOrdering::SiteOrdering(const Instance& inst) : m_(inst.m), n_(inst.n) {
  order_.resize(static_cast<std::size_t>(inst.m) * static_cast<std::size_t>(inst.n));
  std::vector<int> idx(static_cast<std::size_t>(inst.n));
  for (int i = 0; i < inst.m; ++i) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return inst.v(i, a) > inst.v(i, b); });
    std::copy(idx.begin(), idx.end(), order_.begin() + static_cast<std::ptrdiff_t>(i) * inst.n);
  }
}

Cut submodular_cut(const Instance& inst, const BinaryChoice& y, const std::vector<int>& leader_set) {
  return submodular_cut(inst, compute_cy(inst, y), y, leader_set);
}

Cut submodular_cut(const Instance& inst, const CyMatrix& cy, const BinaryChoice& y, const std::vector<int>& leader_set) {
  Cut cut;
  cut.kind = Formulation::kSF;
  cut.follower_sites = y.open_sites();
  cut.leader_set = leader_set;
  std::sort(cut.leader_set.begin(), cut.leader_set.end());
  cut.xcoef.assign(static_cast<std::size_t>(inst.n), 0.0);

  std::vector<char> in_set(static_cast<std::size_t>(inst.n), 0);
  for (int j : cut.leader_set) in_set[static_cast<std::size_t>(j)] = 1;

  for (int i = 0; i < inst.m; ++i) {
    double best = 0.0;
    for (int j : cut.leader_set) best = std::max(best, cy(i, j));
    const double wi = inst.w[static_cast<std::size_t>(i)];
    cut.constant += wi * best;
    for (int j = 0; j < inst.n; ++j) {
      if (in_set[static_cast<std::size_t>(j)]) continue;
      cut.xcoef[static_cast<std::size_t>(j)] += wi * std::max(0.0, cy(i, j) - best);
    }
  }
  return cut;
}

Cut improved_cut(const Instance& inst, const BinaryChoice& y, const EllVector& ell) {
  return improved_cut(inst, compute_cy(inst, y), y, ell);
}

Cut improved_cut(const Instance& inst, const CyMatrix& cy, const BinaryChoice& y, const EllVector& ell) {
  if (static_cast<int>(ell.size()) != inst.m) throw std::invalid_argument("anchor vector length differs from m");
  Cut cut;
  cut.kind = Formulation::kGSF;
  cut.follower_sites = y.open_sites();
  cut.ell = ell;
  cut.xcoef.assign(static_cast<std::size_t>(inst.n), 0.0);
  for (int i = 0; i < inst.m; ++i) {
    const int anchor = ell[static_cast<std::size_t>(i)];
    if (anchor < 0 || anchor > inst.n) throw std::invalid_argument("anchor index out of range");
    const double wi = inst.w[static_cast<std::size_t>(i)];
    const double base = cy(i, anchor);
    cut.constant += wi * base;
    for (int j = 0; j < inst.n; ++j) cut.xcoef[static_cast<std::size_t>(j)] += wi * std::max(0.0, cy(i, j) - base);
  }
  return cut;
}

namespace {

constexpr double kMassTol = 1e-9;

double clamp01(double value) { return std::clamp(value, 0.0, 1.0); }

}  // namespace

std::vector<int> prefix_counts(const SiteOrdering& order, std::span<const double> xstar) {
  const int n = order.n();
  if (static_cast<int>(xstar.size()) != n) throw std::invalid_argument("leader point length differs from n");
  std::vector<int> counts(static_cast<std::size_t>(order.m()));
  for (int i = 0; i < order.m(); ++i) {
    if (clamp01(xstar[static_cast<std::size_t>(order(i, 0))]) >= 1.0 - kMassTol) {
      counts[static_cast<std::size_t>(i)] = 1;
      continue;
    }
    double mass = 0.0;
    int k = 0;
    for (int t = 0; t < n; ++t) {
      mass += clamp01(xstar[static_cast<std::size_t>(order(i, t))]);
      if (mass < 1.0 - kMassTol) k = t + 1;
      else break;
    }
    counts[static_cast<std::size_t>(i)] = k;
  }
  return counts;
}

EllVector tight_ell(const Instance& inst, std::span<const double> xstar) {
  return tight_ell(SiteOrdering(inst), xstar);
}

EllVector tight_ell(const SiteOrdering& order, std::span<const double> xstar) {
  const auto counts = prefix_counts(order, xstar);
  EllVector ell(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) ell[i] = order(static_cast<int>(i), counts[i]);
  return ell;
}

RMedianInstance gsf_separation_costs(const Instance& inst, std::span<const double> xstar) {
  return gsf_separation_costs(inst, SiteOrdering(inst), xstar);
}

RMedianInstance gsf_separation_costs(const Instance& inst, const SiteOrdering& order, std::span<const double> xstar) {
  const auto counts = prefix_counts(order, xstar);
  RMedianInstance rm;
  rm.cost = Matrix(inst.m, inst.n);
  rm.w = inst.w;
  rm.r = inst.r;
  for (int i = 0; i < inst.m; ++i) {
    const int k_i = counts[static_cast<std::size_t>(i)];
    const int anchor = order(i, k_i);
    double mass = 0.0;
    for (int t = 0; t < k_i; ++t) mass += clamp01(xstar[static_cast<std::size_t>(order(i, t))]);
    const double rest = std::max(0.0, 1.0 - mass);
    const double v_anchor = anchor == inst.n ? 0.0 : inst.v(i, anchor);
    for (int k = 0; k < inst.n; ++k) {
      const double vik = inst.v(i, k);
      double b = rest * v_anchor / (v_anchor + vik);
      for (int t = 0; t < k_i; ++t) {
        const int j = order(i, t);
        const double vij = inst.v(i, j);
        b += clamp01(xstar[static_cast<std::size_t>(j)]) * vij / (vij + vik);
      }
      rm.cost(i, k) = b;
    }
  }
  return rm;
}

Cut ef_cut(const Instance& inst, const BinaryChoice& y) {
  const CyMatrix cy = compute_cy(inst, y);
  Cut cut;
  cut.kind = Formulation::kEF;
  cut.follower_sites = y.open_sites();
  cut.zcoef = Matrix(inst.m, inst.n);
  for (int i = 0; i < inst.m; ++i)
    for (int j = 0; j < inst.n; ++j) cut.zcoef(i, j) = inst.w[static_cast<std::size_t>(i)] * cy(i, j);
  return cut;
}

RMedianInstance ef_separation_costs(const Instance& inst, const Matrix& zstar) {
  if (zstar.rows() != inst.m || zstar.cols() != inst.n) throw std::invalid_argument("assignment matrix is not m x n");
  RMedianInstance rm;
  rm.cost = Matrix(inst.m, inst.n);
  rm.w = inst.w;
  rm.r = inst.r;
  for (int i = 0; i < inst.m; ++i) {
    for (int k = 0; k < inst.n; ++k) {
      double d = 0.0;
      for (int j = 0; j < inst.n; ++j) {
        const double z = clamp01(zstar(i, j));
        if (z == 0.0) continue;
        d += z * inst.v(i, j) / (inst.v(i, j) + inst.v(i, k));
      }
      rm.cost(i, k) = d;
    }
  }
  return rm;
}

Matrix greedy_assignment(const Instance& inst, const SiteOrdering& order, std::span<const double> x) {
  const auto counts = prefix_counts(order, x);
  Matrix z(inst.m, inst.n);
  for (int i = 0; i < inst.m; ++i) {
    const int k_i = counts[static_cast<std::size_t>(i)];
    double mass = 0.0;
    for (int t = 0; t < k_i; ++t) {
      const int j = order(i, t);
      const double xj = clamp01(x[static_cast<std::size_t>(j)]);
      z(i, j) = xj;
      mass += xj;
    }
    if (k_i < inst.n) {
      const int j = order(i, k_i);
      z(i, j) = std::clamp(1.0 - mass, 0.0, clamp01(x[static_cast<std::size_t>(j)]));
    }
  }
  return z;
}

}  // namespace scflp
