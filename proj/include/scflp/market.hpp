#pragma once

#include <cstdint>
#include <vector>

#include "scflp/instance.hpp"
#include "scflp/matrix.hpp"

namespace scflp {

// Share captured by each leader site given a fixed follower choice:
// c(i, j) = v_ij / (v_ij + max over open follower sites k of v_ik).
// Column n is the virtual "no facility" column with value 0.
class CyMatrix {
 public:
  CyMatrix() = default;
  explicit CyMatrix(Matrix c) : c_(std::move(c)) {}

  int rows() const { return c_.rows(); }
  int cols() const { return c_.cols(); }
  // j == cols() addresses the virtual column.
  double operator()(int i, int j) const { return j == c_.cols() ? 0.0 : c_(i, j); }
  const Matrix& matrix() const { return c_; }

 private:
  Matrix c_;
};

CyMatrix compute_cy(const Instance& inst, const BinaryChoice& y);

// G_y(S) = sum_i w_i max_{j in S} c(i, j); zero for the empty set.
double set_share(const Instance& inst, const CyMatrix& cy, const std::vector<int>& sites);

// g(x, y). An empty leader set yields 0.
double leader_share(const Instance& inst, const BinaryChoice& x, const BinaryChoice& y);

// The follower's complementary share; leader_share + follower_share = sum w.
double follower_share(const Instance& inst, const BinaryChoice& x, const BinaryChoice& y);

enum class ResponseMode { kEnumerate, kRMedian };

struct BestResponse {
  BinaryChoice y;
  double value = 0.0;
};

struct ResponseOptions {
  ResponseMode mode = ResponseMode::kRMedian;
  std::uint64_t enumeration_cap = 2'000'000;
};

// argmin over follower choices of g(x, y). Enumeration ties resolve to the
// lexicographically smallest open-site set.
BestResponse follower_best_response(const Instance& inst, const BinaryChoice& x,
                                    const ResponseOptions& options = {});

}  // namespace scflp
