#ifndef DISCOP_ARRAY_HPP_
#define DISCOP_ARRAY_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "discop/grid.hpp"

namespace discop {

// A nonnegative M^L array whose sum over every axis line (one coordinate
// fixed, all others summed out) equals 1.  Equals M times a probability
// mass function on {1/M,...,1}^L.  Entries are stored row-major over
// coordinates {1,...,M}^L, first coordinate slowest.
class StochasticArray {
 public:
  StochasticArray(int M, int L);  // zero-filled
  StochasticArray(int M, int L, std::vector<double> entries);

  int resolution() const { return M_; }
  int dimension() const { return L_; }
  std::size_t size() const { return entries_.size(); }  // M^L

  // Coordinates in {1,...,M}.
  double operator()(std::span<const int> coords) const;
  void set(std::span<const int> coords, double v);

  const std::vector<double>& entries() const { return entries_; }

  bool operator==(const StochasticArray& other) const = default;

 private:
  int M_;
  int L_;
  std::vector<double> entries_;
};

// An MxL integer matrix whose columns are permutations of {1,...,M}.
// Row m holds the coordinates of the m-th 1 of a permutation array (the
// sparse form of a Latin hypercube of order M in L dimensions); columns
// double as the per-margin rank permutations of an ensemble.
class RankMatrix {
 public:
  RankMatrix(int M, int L);  // column 1..L all set to 1..M (identity)
  RankMatrix(int M, int L, std::vector<int> ranks);  // row-major MxL

  int members() const { return M_; }
  int dimension() const { return L_; }

  int operator()(int m, int l) const { return ranks_[idx(m, l)]; }
  void set(int m, int l, int r) { ranks_[idx(m, l)] = r; }

  const std::vector<int>& ranks() const { return ranks_; }

  // Validates that every column is a permutation of {1,...,M}; throws
  // ValidationError naming the first bad column otherwise.
  void validate() const;

  bool operator==(const RankMatrix& other) const = default;

 private:
  std::size_t idx(int m, int l) const {
    return static_cast<std::size_t>(m) * L_ + static_cast<std::size_t>(l);
  }
  int M_;
  int L_;
  std::vector<int> ranks_;
};

// Checks (A1) nonnegativity of every entry and (A2) every axis-line sum
// equal to 1 within eps.  For A2 violations, `axis` is the axis of the
// fixed coordinate and `where` holds its line index.
AxiomReport check_stochastic(const StochasticArray& a,
                             double eps = kDefaultEps);

// Forward map of the array/copula correspondence: the grid of
// L-dimensional prefix sums of A, scaled by 1/M.  Validates A first; the
// result always passes check_discrete_copula.
GridFunction copula_from_array(const StochasticArray& a,
                               double eps = kDefaultEps);

// Inverse map: entry at cell i is M times the unit-cell volume of D.
// Validates the copula axioms first.  Differencing noise in
// [-clamp_eps, 0) is clamped to 0 so rounding cannot create negative
// masses.
StochasticArray array_from_copula(const GridFunction& d,
                                  double eps = kDefaultEps,
                                  double clamp_eps = kDefaultEps);

// True iff every entry is within eps of 0 or 1.  Precondition: a passes
// check_stochastic.
bool is_permutation_array(const StochasticArray& a, double eps = kDefaultEps);

// Sparse <-> dense moves between a permutation array and its rank
// matrix.  Rows of the rank matrix are ordered by the first-axis
// coordinate, which makes the form canonical.  Both directions validate
// their input.
RankMatrix rank_matrix_from_permutation_array(const StochasticArray& a,
                                              double eps = kDefaultEps);
StochasticArray permutation_array_from_rank_matrix(const RankMatrix& r);

// Entrywise convex combination sum_i weights[i] * arrays[i]; weights must
// be nonnegative and sum to 1 within 1e-12.
StochasticArray convex_combination(std::span<const StochasticArray> arrays,
                                   std::span<const double> weights);

// Random rank matrix with every column an independent seeded shuffle of
// {1,...,M}.
RankMatrix random_rank_matrix(int M, int L, std::uint64_t seed);

// Test-fixture generator: a convex combination of k independent random
// permutation arrays with random weights.  Satisfies A1/A2 by
// construction (a strict subset of all stochastic arrays for L >= 3,
// which is fine for fixtures).  Deterministic in the seed.
StochasticArray random_stochastic_array(int M, int L, int k,
                                        std::uint64_t seed);

}  // namespace discop

#endif  // DISCOP_ARRAY_HPP_
