#include "scflp/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <fmt/format.h>

namespace scflp {

double Instance::total_weight() const {
  double total = 0.0;
  for (double wi : w) total += wi;
  return total;
}

void Instance::validate() const {
  if (m < 1 || n < 1) throw std::invalid_argument("instance needs m >= 1 and n >= 1");
  if (p < 1 || p > n) throw std::invalid_argument(fmt::format("p={} out of range [1,{}]", p, n));
  if (r < 1 || r > n) throw std::invalid_argument(fmt::format("r={} out of range [1,{}]", r, n));
  if (static_cast<int>(w.size()) != m) throw std::invalid_argument("weight vector length differs from m");
  if (v.rows() != m || v.cols() != n) throw std::invalid_argument("attractiveness matrix is not m x n");
  for (int i = 0; i < m; ++i) {
    if (!(w[static_cast<std::size_t>(i)] > 0.0) || !std::isfinite(w[static_cast<std::size_t>(i)])) {
      throw std::invalid_argument(fmt::format("non-positive weight for customer {}", i));
    }
    for (int j = 0; j < n; ++j) {
      if (!(v(i, j) > 0.0) || !std::isfinite(v(i, j))) {
        throw std::invalid_argument(fmt::format("non-positive attractiveness at ({}, {})", i, j));
      }
    }
  }
}

Instance make_instance(std::vector<double> w, Matrix v, int p, int r) {
  Instance inst;
  inst.m = v.rows();
  inst.n = v.cols();
  inst.p = p;
  inst.r = r;
  inst.w = std::move(w);
  inst.v = std::move(v);
  inst.validate();
  return inst;
}

// ---------------------------------------------------------------------------
// BinaryChoice

BinaryChoice::BinaryChoice(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) {
    if (b > 1) throw std::invalid_argument("site vector entries must be 0 or 1");
    cardinality_ += b;
  }
}

BinaryChoice BinaryChoice::from_sites(int n, const std::vector<int>& sites) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n), 0);
  for (int j : sites) {
    if (j < 0 || j >= n) throw std::invalid_argument(fmt::format("site index {} out of range", j));
    bits[static_cast<std::size_t>(j)] = 1;
  }
  return BinaryChoice(std::move(bits));
}

BinaryChoice BinaryChoice::all_open(int n) {
  return BinaryChoice(std::vector<std::uint8_t>(static_cast<std::size_t>(n), 1));
}

std::vector<int> BinaryChoice::open_sites() const {
  std::vector<int> sites;
  sites.reserve(static_cast<std::size_t>(cardinality_));
  for (int j = 0; j < size(); ++j) {
    if (bits_[static_cast<std::size_t>(j)]) sites.push_back(j);
  }
  return sites;
}

void BinaryChoice::require_cardinality(int expected, const char* what) const {
  if (cardinality_ != expected) {
    throw std::invalid_argument(
        fmt::format("{} opens {} sites, expected {}", what, cardinality_, expected));
  }
}

std::string BinaryChoice::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

// ---------------------------------------------------------------------------
// Text format
//
//   scflp 1
//   m n p r
//   w_1 ... w_m
//   v_11 ... v_1n
//   ...
//
// '#' starts a comment that runs to end of line.

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error(fmt::format("line {}: {}", line, message)), line_(line) {}

namespace {

struct Token {
  std::string text;
  int line;
};

std::vector<Token> tokenize(std::istream& in) {
  std::vector<Token> tokens;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      std::size_t start = pos;
      while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos > start) tokens.push_back({line.substr(start, pos - start), line_no});
    }
  }
  return tokens;
}

class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& next(const char* expecting) {
    if (pos_ >= tokens_.size()) {
      int line = tokens_.empty() ? 1 : tokens_.back().line;
      throw ParseError(line, fmt::format("unexpected end of input, expecting {}", expecting));
    }
    return tokens_[pos_++];
  }

  int read_int(const char* what) {
    const Token& t = next(what);
    int value = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
      throw ParseError(t.line, fmt::format("malformed integer '{}' for {}", t.text, what));
    }
    return value;
  }

  std::pair<double, int> read_double(const char* what) {
    const Token& t = next(what);
    double value = 0.0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
      throw ParseError(t.line, fmt::format("malformed number '{}' for {}", t.text, what));
    }
    return {value, t.line};
  }

  bool done() const { return pos_ >= tokens_.size(); }
  int line() const { return pos_ < tokens_.size() ? tokens_[pos_].line : (tokens_.empty() ? 1 : tokens_.back().line); }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Instance load_instance(std::istream& in) {
  TokenCursor cur(tokenize(in));
  const Token& magic = cur.next("header 'scflp 1'");
  if (magic.text != "scflp") throw ParseError(magic.line, "malformed header, expected 'scflp 1'");
  const int header_line = magic.line;
  const int version = cur.read_int("format version");
  if (version != 1) throw ParseError(header_line, fmt::format("unsupported format version {}", version));

  const int dims_line = cur.line();
  Instance inst;
  inst.m = cur.read_int("m");
  inst.n = cur.read_int("n");
  inst.p = cur.read_int("p");
  inst.r = cur.read_int("r");
  if (inst.m < 1 || inst.n < 1) throw ParseError(dims_line, "m and n must be positive");
  if (inst.p < 1 || inst.p > inst.n) throw ParseError(dims_line, fmt::format("p={} out of range [1,{}]", inst.p, inst.n));
  if (inst.r < 1 || inst.r > inst.n) throw ParseError(dims_line, fmt::format("r={} out of range [1,{}]", inst.r, inst.n));

  inst.w.resize(static_cast<std::size_t>(inst.m));
  for (int i = 0; i < inst.m; ++i) {
    auto [value, line] = cur.read_double("weight");
    if (!(value > 0.0)) throw ParseError(line, "non-positive weight");
    inst.w[static_cast<std::size_t>(i)] = value;
  }
  inst.v = Matrix(inst.m, inst.n);
  for (int i = 0; i < inst.m; ++i) {
    for (int j = 0; j < inst.n; ++j) {
      auto [value, line] = cur.read_double("attractiveness");
      if (!(value > 0.0)) throw ParseError(line, "non-positive attractiveness");
      inst.v(i, j) = value;
    }
  }
  if (!cur.done()) throw ParseError(cur.line(), "trailing data after attractiveness matrix");
  return inst;
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open instance file '{}'", path));
  return load_instance(in);
}

void save_instance(const Instance& inst, std::ostream& out) {
  out << "scflp 1\n";
  out << fmt::format("{} {} {} {}\n", inst.m, inst.n, inst.p, inst.r);
  for (int i = 0; i < inst.m; ++i) {
    out << (i ? " " : "") << fmt::format("{:.17g}", inst.w[static_cast<std::size_t>(i)]);
  }
  out << '\n';
  for (int i = 0; i < inst.m; ++i) {
    for (int j = 0; j < inst.n; ++j) out << (j ? " " : "") << fmt::format("{:.17g}", inst.v(i, j));
    out << '\n';
  }
}

void save_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write instance file '{}'", path));
  save_instance(inst, out);
}

// ---------------------------------------------------------------------------
// Generators

GeneratorStyle parse_generator_style(const std::string& name) {
  if (name == "biesinger") return GeneratorStyle::kBiesinger;
  if (name == "qi") return GeneratorStyle::kQi;
  throw std::invalid_argument(fmt::format("unknown generator style '{}'", name));
}

std::string to_string(GeneratorStyle style) {
  return style == GeneratorStyle::kBiesinger ? "biesinger" : "qi";
}

namespace {

struct Point {
  double x;
  double y;
};

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

Instance generate_instance(const GeneratorParams& params) {
  if (params.m < 1 || params.n < 1) throw std::invalid_argument("generator needs m >= 1 and n >= 1");
  std::mt19937_64 rng(params.seed);
  std::vector<Point> customers;
  std::vector<Point> sites;

  if (params.style == GeneratorStyle::kBiesinger) {
    // Customers and sites share one point set.
    std::uniform_real_distribution<double> coord(0.0, 100.0);
    const int count = std::max(params.m, params.n);
    std::vector<Point> points(static_cast<std::size_t>(count));
    for (auto& pt : points) {
      pt.x = coord(rng);
      pt.y = coord(rng);
    }
    customers.assign(points.begin(), points.begin() + params.m);
    sites.assign(points.begin(), points.begin() + params.n);
  } else {
    std::uniform_int_distribution<int> coord(0, 70);
    auto draw = [&](int count) {
      std::vector<Point> pts(static_cast<std::size_t>(count));
      for (auto& pt : pts) {
        pt.x = coord(rng);
        pt.y = coord(rng);
      }
      return pts;
    };
    customers = draw(params.m);
    sites = draw(params.n);
  }

  std::uniform_int_distribution<int> demand(1, 10);
  std::vector<double> w(static_cast<std::size_t>(params.m));
  for (auto& wi : w) wi = demand(rng);

  Matrix v(params.m, params.n);
  for (int i = 0; i < params.m; ++i) {
    for (int j = 0; j < params.n; ++j) {
      const double d = distance(customers[static_cast<std::size_t>(i)], sites[static_cast<std::size_t>(j)]);
      v(i, j) = params.style == GeneratorStyle::kBiesinger ? 1.0 / (d + 1.0) : std::exp(-0.1 * d);
    }
  }
  return make_instance(std::move(w), std::move(v), params.p, params.r);
}

Instance appendix_example() {
  Matrix v(3, 3);
  const double rows[3][3] = {{1, 2, 1}, {2, 1, 1}, {1, 1, 2}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v(i, j) = rows[i][j];
  return make_instance({1.0, 1.0, 1.0}, std::move(v), 2, 3);
}

}  // namespace scflp
