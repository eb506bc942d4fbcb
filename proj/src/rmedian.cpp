#include "scflp/rmedian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

#include <fmt/format.h>

#include "scflp/combinatorics.hpp"

namespace scflp {

void RMedianInstance::validate() const {
  if (cost.rows() < 1 || cost.cols() < 1) throw std::invalid_argument("r-median needs a non-empty cost matrix");
  if (static_cast<int>(w.size()) != cost.rows()) throw std::invalid_argument("r-median weight length differs from rows");
  if (r < 1 || r > cost.cols()) throw std::invalid_argument(fmt::format("r-median cardinality {} out of range", r));
  for (int i = 0; i < cost.rows(); ++i) {
    for (int k = 0; k < cost.cols(); ++k) {
      if (!(cost(i, k) >= 0.0) || !std::isfinite(cost(i, k))) {
        throw std::invalid_argument("r-median costs must be finite and nonnegative");
      }
    }
  }
}

double rmedian_value(const RMedianInstance& rm, const std::vector<int>& sites) {
  double total = 0.0;
  for (int i = 0; i < rm.cost.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int k : sites) best = std::min(best, rm.cost(i, k));
    total += rm.w[static_cast<std::size_t>(i)] * best;
  }
  return total;
}

RMedianSolution rmedian_enumerate(const RMedianInstance& rm, std::uint64_t cap) {
  rm.validate();
  const int n = rm.cost.cols();
  const std::uint64_t count = binomial(n, rm.r);
  if (count > cap) {
    throw CapExceeded(fmt::format("C({}, {}) = {} exceeds the enumeration cap {}", n, rm.r, count, cap));
  }
  RMedianSolution best;
  best.value = std::numeric_limits<double>::infinity();
  for_each_subset(n, rm.r, [&](const std::vector<int>& sites) {
    const double value = rmedian_value(rm, sites);
    // Strict improvement keeps the lexicographically first minimiser.
    if (value < best.value) {
      best.value = value;
      best.sites = sites;
    }
    ++best.nodes;
    return true;
  });
  best.lower_bound = best.value;
  best.status = RMedianStatus::kOptimal;
  return best;
}

namespace {

constexpr double kRelTol = 1e-12;

double tolerance(double scale) { return kRelTol * std::max(1.0, std::abs(scale)); }

enum SiteState : signed char { kFree = 0, kIn = 1, kOut = -1 };

struct Node {
  std::vector<signed char> state;
  std::vector<double> multipliers;
  double bound = 0.0;
  std::int64_t order = 0;  // creation order, for deterministic tie-breaking
};

struct NodeCompare {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.order > b.order;
  }
};

struct LagrangianResult {
  double bound = -std::numeric_limits<double>::infinity();
  std::vector<double> multipliers;
  std::vector<int> chosen_free;  // free sites picked by the best subproblem
  std::vector<double> benefit;   // -rho_k at the best multipliers
};

class Solver {
 public:
  Solver(const RMedianInstance& rm, const RMedianConfig& cfg)
      : rm_(rm), cfg_(cfg), m_(rm.cost.rows()), n_(rm.cost.cols()), wc_(m_, n_) {
    for (int i = 0; i < m_; ++i)
      for (int k = 0; k < n_; ++k) wc_(i, k) = rm.w[static_cast<std::size_t>(i)] * rm.cost(i, k);
  }

  RMedianSolution run() {
    RMedianSolution result;
    if (rm_.r == n_) {
      std::vector<int> all(static_cast<std::size_t>(n_));
      std::iota(all.begin(), all.end(), 0);
      result.sites = all;
      result.value = rmedian_value(rm_, all);
      result.lower_bound = result.value;
      result.nodes = 1;
      return result;
    }

    seed_incumbent();

    std::priority_queue<Node, std::vector<Node>, NodeCompare> open;
    Node root;
    root.state.assign(static_cast<std::size_t>(n_), kFree);
    root.bound = -std::numeric_limits<double>::infinity();
    root.order = next_order_++;
    open.push(std::move(root));

    bool limit_hit = false;
    double open_bound_at_limit = incumbent_value_;
    while (!open.empty()) {
      if (nodes_ >= cfg_.node_limit) {
        limit_hit = true;
        open_bound_at_limit = open.top().bound;
        break;
      }
      Node node = open.top();
      open.pop();
      if (node.bound >= incumbent_value_ - tolerance(incumbent_value_)) continue;
      ++nodes_;
      process(std::move(node), open);
    }

    result.sites = incumbent_;
    result.value = incumbent_value_;
    result.nodes = nodes_;
    if (limit_hit) {
      result.status = RMedianStatus::kLimit;
      result.lower_bound = std::min(open_bound_at_limit, incumbent_value_);
    } else {
      result.status = RMedianStatus::kOptimal;
      result.lower_bound = incumbent_value_;
    }
    return result;
  }

 private:
  double evaluate(const std::vector<int>& sites) const {
    double total = 0.0;
    for (int i = 0; i < m_; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int k : sites) best = std::min(best, wc_(i, k));
      total += best;
    }
    return total;
  }

  void offer(std::vector<int> sites, double value) {
    std::sort(sites.begin(), sites.end());
    const double tol = tolerance(incumbent_value_);
    if (incumbent_.empty() || value < incumbent_value_ - tol ||
        (value <= incumbent_value_ + tol && sites < incumbent_)) {
      incumbent_value_ = value;
      incumbent_ = std::move(sites);
    }
  }

  // Greedy add followed by best-improvement swaps.
  void seed_incumbent() {
    std::vector<int> chosen;
    std::vector<double> current(static_cast<std::size_t>(m_), std::numeric_limits<double>::infinity());
    std::vector<char> used(static_cast<std::size_t>(n_), 0);
    for (int step = 0; step < rm_.r; ++step) {
      int best_k = -1;
      double best_total = std::numeric_limits<double>::infinity();
      for (int k = 0; k < n_; ++k) {
        if (used[static_cast<std::size_t>(k)]) continue;
        double total = 0.0;
        for (int i = 0; i < m_; ++i) total += std::min(current[static_cast<std::size_t>(i)], wc_(i, k));
        if (total < best_total) {
          best_total = total;
          best_k = k;
        }
      }
      used[static_cast<std::size_t>(best_k)] = 1;
      chosen.push_back(best_k);
      for (int i = 0; i < m_; ++i) current[static_cast<std::size_t>(i)] = std::min(current[static_cast<std::size_t>(i)], wc_(i, best_k));
    }
    local_search(chosen);
  }

  void local_search(std::vector<int> sites) {
    double value = evaluate(sites);
    std::vector<char> used(static_cast<std::size_t>(n_), 0);
    for (int k : sites) used[static_cast<std::size_t>(k)] = 1;
    bool improved = true;
    while (improved) {
      improved = false;
      double best_value = value - tolerance(value);
      int best_pos = -1;
      int best_in = -1;
      for (std::size_t pos = 0; pos < sites.size(); ++pos) {
        const int out = sites[pos];
        for (int in = 0; in < n_; ++in) {
          if (used[static_cast<std::size_t>(in)]) continue;
          sites[pos] = in;
          const double candidate = evaluate(sites);
          if (candidate < best_value) {
            best_value = candidate;
            best_pos = static_cast<int>(pos);
            best_in = in;
          }
        }
        sites[pos] = out;
      }
      if (best_pos >= 0) {
        used[static_cast<std::size_t>(sites[static_cast<std::size_t>(best_pos)])] = 0;
        used[static_cast<std::size_t>(best_in)] = 1;
        sites[static_cast<std::size_t>(best_pos)] = best_in;
        value = best_value;
        improved = true;
      }
    }
    offer(std::move(sites), value);
  }

  LagrangianResult lagrangian(const std::vector<signed char>& state, int need,
                              std::vector<double> multipliers, int iterations) const {
    std::vector<int> allowed;
    std::vector<int> free_sites;
    std::vector<int> fixed_in;
    for (int k = 0; k < n_; ++k) {
      if (state[static_cast<std::size_t>(k)] != kOut) allowed.push_back(k);
      if (state[static_cast<std::size_t>(k)] == kFree) free_sites.push_back(k);
      if (state[static_cast<std::size_t>(k)] == kIn) fixed_in.push_back(k);
    }

    // Multipliers at the cheapest allowed cost reproduce the trivial bound.
    if (multipliers.empty()) {
      multipliers.resize(static_cast<std::size_t>(m_));
      for (int i = 0; i < m_; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int k : allowed) best = std::min(best, wc_(i, k));
        multipliers[static_cast<std::size_t>(i)] = best;
      }
    }

    LagrangianResult best;
    std::vector<double> rho(static_cast<std::size_t>(n_), 0.0);
    std::vector<int> order = free_sites;
    std::vector<double> subgradient(static_cast<std::size_t>(m_));
    double step_scale = 2.0;
    int stale = 0;
    const double target = incumbent_value_;

    for (int iter = 0; iter <= iterations; ++iter) {
      double value = 0.0;
      for (int i = 0; i < m_; ++i) value += multipliers[static_cast<std::size_t>(i)];
      for (int k : allowed) {
        double acc = 0.0;
        for (int i = 0; i < m_; ++i) acc += std::min(0.0, wc_(i, k) - multipliers[static_cast<std::size_t>(i)]);
        rho[static_cast<std::size_t>(k)] = acc;
      }
      std::partial_sort(order.begin(), order.begin() + need, order.end(), [&](int a, int b) {
        if (rho[static_cast<std::size_t>(a)] != rho[static_cast<std::size_t>(b)]) return rho[static_cast<std::size_t>(a)] < rho[static_cast<std::size_t>(b)];
        return a < b;
      });
      for (int k : fixed_in) value += rho[static_cast<std::size_t>(k)];
      for (int t = 0; t < need; ++t) value += rho[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])];

      if (value > best.bound) {
        best.bound = value;
        best.multipliers = multipliers;
        best.chosen_free.assign(order.begin(), order.begin() + need);
        best.benefit.assign(static_cast<std::size_t>(n_), 0.0);
        for (int k : allowed) best.benefit[static_cast<std::size_t>(k)] = -rho[static_cast<std::size_t>(k)];
        stale = 0;
      } else if (++stale >= 5) {
        step_scale *= 0.5;
        stale = 0;
      }
      if (iter == iterations || value >= target - tolerance(target) || step_scale < 1e-6) break;

      double norm2 = 0.0;
      for (int i = 0; i < m_; ++i) {
        int covered = 0;
        auto count = [&](int k) {
          if (wc_(i, k) < multipliers[static_cast<std::size_t>(i)]) ++covered;
        };
        for (int k : fixed_in) count(k);
        for (int t = 0; t < need; ++t) count(order[static_cast<std::size_t>(t)]);
        const double g = 1.0 - covered;
        subgradient[static_cast<std::size_t>(i)] = g;
        norm2 += g * g;
      }
      if (norm2 == 0.0) break;
      const double gap = std::isfinite(target) ? std::max(target - value, tolerance(target)) : std::abs(value) + 1.0;
      const double step = step_scale * gap / norm2;
      for (int i = 0; i < m_; ++i) multipliers[static_cast<std::size_t>(i)] += step * subgradient[static_cast<std::size_t>(i)];
    }
    return best;
  }

  void process(Node node, std::priority_queue<Node, std::vector<Node>, NodeCompare>& open) {
    int nin = 0;
    int nfree = 0;
    std::vector<int> in_sites;
    for (int k = 0; k < n_; ++k) {
      if (node.state[static_cast<std::size_t>(k)] == kIn) {
        ++nin;
        in_sites.push_back(k);
      } else if (node.state[static_cast<std::size_t>(k)] == kFree) {
        ++nfree;
      }
    }
    const int need = rm_.r - nin;

    if (need == 0 || nfree == need) {
      std::vector<int> sites = in_sites;
      if (need > 0) {
        for (int k = 0; k < n_; ++k)
          if (node.state[static_cast<std::size_t>(k)] == kFree) sites.push_back(k);
      }
      const double value = evaluate(sites);
      record(node.state, value);
      offer(std::move(sites), value);
      return;
    }

    const int iterations = node.multipliers.empty() ? cfg_.root_subgradient_iterations : cfg_.node_subgradient_iterations;
    LagrangianResult lr = lagrangian(node.state, need, std::move(node.multipliers), iterations);
    const double bound = std::max(lr.bound, node.bound);
    record(node.state, lr.bound);

    std::vector<int> candidate = in_sites;
    candidate.insert(candidate.end(), lr.chosen_free.begin(), lr.chosen_free.end());
    const double candidate_value = evaluate(candidate);
    if (candidate_value < incumbent_value_ - tolerance(incumbent_value_)) {
      local_search(candidate);
    } else {
      offer(candidate, candidate_value);
    }

    if (bound >= incumbent_value_ - tolerance(incumbent_value_)) return;

    // Branch on the chosen free site with the largest Lagrangian benefit.
    int branch_site = lr.chosen_free.front();
    for (int k : lr.chosen_free) {
      const double bk = lr.benefit[static_cast<std::size_t>(k)];
      const double bb = lr.benefit[static_cast<std::size_t>(branch_site)];
      if (bk > bb || (bk == bb && k < branch_site)) branch_site = k;
    }

    for (signed char choice : {kIn, kOut}) {
      Node child;
      child.state = node.state;
      child.state[static_cast<std::size_t>(branch_site)] = choice;
      child.multipliers = lr.multipliers;
      child.bound = bound;
      child.order = next_order_++;
      open.push(std::move(child));
    }
  }

  void record(const std::vector<signed char>& state, double bound) const {
    if (!cfg_.trace) return;
    RMedianBoundTrace t;
    for (int k = 0; k < n_; ++k) {
      if (state[static_cast<std::size_t>(k)] == kIn) t.fixed_in.push_back(k);
      if (state[static_cast<std::size_t>(k)] == kOut) t.fixed_out.push_back(k);
    }
    t.bound = bound;
    cfg_.trace->push_back(std::move(t));
  }

  const RMedianInstance& rm_;
  const RMedianConfig& cfg_;
  int m_;
  int n_;
  Matrix wc_;
  std::vector<int> incumbent_;
  double incumbent_value_ = std::numeric_limits<double>::infinity();
  std::int64_t nodes_ = 0;
  std::int64_t next_order_ = 0;
};

}  // namespace

RMedianSolution rmedian_solve(const RMedianInstance& rm, const RMedianConfig& cfg) {
  rm.validate();
  return Solver(rm, cfg).run();
}

}  // namespace scflp
