#ifndef DISCOP_SUBCOPULA_HPP_
#define DISCOP_SUBCOPULA_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "discop/grid.hpp"

namespace discop {

// A copula-like function defined only on a product of coordinate subsets
// K^(1) x ... x K^(L), each K^(l) a sorted subset of {0,...,M} containing
// both 0 and M.  Values are stored densely over the product domain,
// row-major with the first axis slowest.
class DiscreteSubcopula {
 public:
  DiscreteSubcopula(int M, std::vector<std::vector<int>> domains,
                    std::vector<double> values);

  int resolution() const { return M_; }
  int dimension() const { return static_cast<int>(domains_.size()); }
  const std::vector<std::vector<int>>& domains() const { return domains_; }
  const std::vector<double>& values() const { return values_; }

  // Value by position within each domain (0-based domain indices).
  double at_pos(std::span<const int> pos) const;

  // True when every domain is all of {0,...,M}.
  bool full_domain() const;

  bool operator==(const DiscreteSubcopula& other) const = default;

 private:
  int M_;
  std::vector<std::vector<int>> domains_;
  std::vector<double> values_;
};

// Checks S1 (grounded), S2 (margins on each domain) and S3
// (nonnegativity of every adjacent-domain-box volume; general domain
// boxes then follow by telescoping).
AxiomReport check_subcopula(const DiscreteSubcopula& ds,
                            double eps = kDefaultEps);

// True iff every value is within eps of some k/M.
bool is_irreducible(const DiscreteSubcopula& ds, double eps = kDefaultEps);

// Pointwise restriction of a grid function to the given domains.  The
// restriction of a discrete copula always passes check_subcopula.
DiscreteSubcopula restrict_to_domains(const GridFunction& d,
                                      std::vector<std::vector<int>> domains);

// Integer mass per block of an irreducible subcopula.  Block (s_1,...,s_L)
// spans, on axis l, the lines from domain[l][s_l]+1 to domain[l][s_l+1];
// its count is M times the block's inclusion-exclusion volume, which must
// round to a nonnegative integer (|M*vol - round| < 1e-6, slack above
// accumulated rounding but far below 1).  Counts over any axis slab sum
// to the slab width, and all counts sum to M.
// Shape: row-major over block multi-indices, axis l having
// domains[l].size()-1 blocks.  Throws ValidationError when a volume is
// not integral (the subcopula is not irreducible) or negative.
std::vector<std::int64_t> block_counts(const DiscreteSubcopula& ds);

// Extends an irreducible discrete subcopula to an irreducible discrete
// copula whose restriction to the domains reproduces the input exactly.
// Construction: per-axis slab queues of unused lines in increasing order;
// blocks visited in lexicographic order; a block of count c pops c lines
// from each axis's slab queue and places 1s diagonally.  The slab-sum
// identity of the block counts guarantees the queues never underflow.
GridFunction extend_irreducible(const DiscreteSubcopula& ds,
                                double eps = kDefaultEps);

}  // namespace discop

#endif  // DISCOP_SUBCOPULA_HPP_
