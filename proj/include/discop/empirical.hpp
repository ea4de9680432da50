#ifndef DISCOP_EMPIRICAL_HPP_
#define DISCOP_EMPIRICAL_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "discop/array.hpp"
#include "discop/grid.hpp"

namespace discop {

// An M-point sample in L dimensions, row m = (x_m^1,...,x_m^L).
struct SampleSet {
  int M = 0;
  int L = 0;
  std::vector<double> points;  // row-major MxL

  double operator()(int m, int l) const {
    return points[static_cast<std::size_t>(m) * L + static_cast<std::size_t>(l)];
  }
};

// How ties within a column are resolved when ranking.
//   kReject          error out, naming the column and tied value
//   kFirstOccurrence stable order: earlier row gets the smaller rank
//   kRandom          seeded random order; fully determined by the seed
struct TiePolicy {
  enum Kind { kReject, kFirstOccurrence, kRandom };
  Kind kind = kReject;
  std::uint64_t seed = 0;

  static TiePolicy reject() { return {kReject, 0}; }
  static TiePolicy first_occurrence() { return {kFirstOccurrence, 0}; }
  static TiePolicy random(std::uint64_t seed) { return {kRandom, seed}; }
};

// Per-column ranks (1 = smallest).  Every column of the result is a
// permutation of {1,...,M}.  Invariant under strictly increasing
// per-column transformations of the data.  Ties fail loudly by default;
// the ECC pipeline passes the seeded random policy instead.
RankMatrix ranks(const SampleSet& s, const TiePolicy& policy = TiePolicy::reject());

// Ranks of a single column; `column` selects the tie-resolution stream
// when the policy is random.
std::vector<int> column_ranks(std::span<const double> values,
                              const TiePolicy& policy, int column = 0);

// The empirical copula: value at i counts the sample points whose rank
// vector is dominated by i, divided by M.  Counts are exact integers, so
// the result is an irreducible discrete copula exactly, not just within
// tolerance.
GridFunction empirical_copula(const SampleSet& s,
                              const TiePolicy& policy = TiePolicy::reject());

// Builds a sample whose empirical copula has the permutation array of R:
// point m takes, on axis l, the R(m,l)-th smallest value of grids[l].
// Every grid must hold M strictly increasing values.
SampleSet sample_set_from_rank_matrix(const RankMatrix& r,
                                      std::span<const std::vector<double>> grids);

}  // namespace discop

#endif  // DISCOP_EMPIRICAL_HPP_
