#ifndef DISCOP_GRID_HPP_
#define DISCOP_GRID_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace discop {

inline constexpr double kDefaultEps = 1e-9;

enum class Axiom { D1, D2, D3, S1, S2, S3, A1, A2 };

const char* axiom_name(Axiom a);

struct Violation {
  Axiom axiom;
  std::vector<int> where;  // witness: grid point, cell upper corner, or line
  int axis = -1;           // margin/line axis where applicable, else -1
  double observed = 0.0;
  std::string required;    // the relation that failed, e.g. "= 0.5" or ">= 0"
};

struct AxiomReport {
  bool passed = true;  // passed <=> violations.empty()
  std::vector<Violation> violations;

  void add(Violation v) {
    passed = false;
    violations.push_back(std::move(v));
  }
};

// A real-valued function on the lattice {0, 1/M, ..., 1}^L, stored densely
// in row-major order with the first coordinate slowest.  Coordinates are
// kept as integers i in {0,...,M}; the /M scaling is implicit.
//
// Immutable value semantics after construction; all free functions on
// grids are pure and safe to call concurrently.
class GridFunction {
 public:
  GridFunction(int M, int L);  // zero-filled
  GridFunction(int M, int L, std::vector<double> values);

  int resolution() const { return M_; }  // M
  int dimension() const { return L_; }   // L
  std::size_t size() const { return values_.size(); }  // (M+1)^L

  double operator()(std::span<const int> coords) const;
  void set(std::span<const int> coords, double v);

  const std::vector<double>& values() const { return values_; }

  bool operator==(const GridFunction& other) const = default;

 private:
  int M_;
  int L_;
  std::vector<double> values_;
};

// Checks the discrete-copula axioms:
//   D1  value 0 wherever some coordinate is 0 (groundedness),
//   D2  uniform margins along every axis line through the all-M corner,
//   D3  nonnegative inclusion-exclusion volume of every unit cell.
// Unit cells suffice for D3: arbitrary-box volumes telescope into unit
// cells.  All comparisons use the tolerance eps.  Violations are reported
// in a deterministic order.
AxiomReport check_discrete_copula(const GridFunction& f,
                                  double eps = kDefaultEps);

// True iff every value is within eps of some k/M (minimal range).
// Precondition: f passes check_discrete_copula.
bool is_irreducible(const GridFunction& f, double eps = kDefaultEps);

// The independence copula: value at i is prod_l i_l / M.
GridFunction product_copula(int M, int L);

// The comonotone copula: value at i is min_l i_l / M.  Irreducible for
// every M and L.
GridFunction min_copula(int M, int L);

// 2^L-term alternating corner sum of f over the box [lower, upper].
// Requires lower <= upper componentwise and coordinates in range.
double box_volume(const GridFunction& f, std::span<const int> lower,
                  std::span<const int> upper);

// Renders a report as readable text, one line per violation.
std::string to_text(const AxiomReport& report);

}  // namespace discop

#endif  // DISCOP_GRID_HPP_
