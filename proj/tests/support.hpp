#pragma once

#include <random>
#include <vector>

#include "scflp/instance.hpp"

namespace testing_support {

inline scflp::Instance random_instance(std::mt19937_64& rng, int m, int n, int p, int r) {
  scflp::GeneratorParams params;
  params.style = rng() % 2 == 0 ? scflp::GeneratorStyle::kBiesinger : scflp::GeneratorStyle::kQi;
  params.m = m;
  params.n = n;
  params.p = p;
  params.r = r;
  params.seed = rng();
  return scflp::generate_instance(params);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::vector<int> random_subset(std::mt19937_64& rng, int n, int k) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) idx[static_cast<std::size_t>(j)] = j;
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

inline scflp::BinaryChoice random_choice(std::mt19937_64& rng, int n, int k) {
  return scflp::BinaryChoice::from_sites(n, random_subset(rng, n, k));
}

inline std::vector<double> random_point(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (double& v : x) v = unit(rng);
  return x;
}

}  // namespace testing_support
