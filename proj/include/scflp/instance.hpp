#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "scflp/matrix.hpp"

namespace scflp {

// Competitive facility location data: m customers, n candidate sites shared
// by leader and follower, demand weights and attractiveness values.
struct Instance {
  int m = 0;
  int n = 0;
  int p = 0;  // leader opens exactly p sites
  int r = 0;  // follower opens exactly r sites
  std::vector<double> w;
  Matrix v;

  double total_weight() const;

  // Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

Instance make_instance(std::vector<double> w, Matrix v, int p, int r);

// A 0/1 site vector. Cardinality is the number of open sites.
class BinaryChoice {
 public:
  BinaryChoice() = default;
  explicit BinaryChoice(std::vector<std::uint8_t> bits);

  static BinaryChoice from_sites(int n, const std::vector<int>& sites);
  static BinaryChoice all_open(int n);

  int size() const { return static_cast<int>(bits_.size()); }
  int cardinality() const { return cardinality_; }
  bool is_open(int j) const { return bits_[static_cast<std::size_t>(j)] != 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::vector<int> open_sites() const;

  // Throws std::invalid_argument unless exactly `expected` sites are open.
  void require_cardinality(int expected, const char* what) const;

  std::string to_string() const;

  friend bool operator==(const BinaryChoice&, const BinaryChoice&) = default;
  friend auto operator<=>(const BinaryChoice& a, const BinaryChoice& b) {
    return a.open_sites() <=> b.open_sites();
  }

 private:
  std::vector<std::uint8_t> bits_;
  int cardinality_ = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

Instance load_instance(std::istream& in);
Instance load_instance_file(const std::string& path);
void save_instance(const Instance& inst, std::ostream& out);
void save_instance_file(const Instance& inst, const std::string& path);

enum class GeneratorStyle { kBiesinger, kQi };

struct GeneratorParams {
  GeneratorStyle style = GeneratorStyle::kBiesinger;
  int m = 0;
  int n = 0;
  int p = 1;
  int r = 1;
  std::uint64_t seed = 0;
};

GeneratorStyle parse_generator_style(const std::string& name);
std::string to_string(GeneratorStyle style);

// biesinger: shared customer/site points uniform on [0,100]^2, v = 1/(d+1).
// qi: independent integer points on [0,70]^2, v = exp(-0.1 d).
// Both draw w uniformly from {1..10}.
Instance generate_instance(const GeneratorParams& params);

// The three-customer, three-site example used throughout the tests.
Instance appendix_example();

}  // namespace scflp
