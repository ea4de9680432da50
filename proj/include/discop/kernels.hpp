#ifndef DISCOP_KERNELS_HPP_
#define DISCOP_KERNELS_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace discop::kernels {

// Data-parallel inner loops shared by the grid-side operations.  The
// functions in this namespace are OpenMP-parallel; discop::kernels::serial
// holds the serial reference implementations used by the tests and the
// benchmark.  Both variants traverse lines and cells in the same order,
// so their outputs are identical bit for bit.

// (M+1)^L grid of unscaled prefix sums of an M^L cell array: boundary
// values are 0 and interior value at i equals the sum of cells j <= i.
// Cells are row-major over coordinates {1,...,M}^L.
std::vector<double> prefix_grid(std::span<const double> cells, int M, int L);

// Per-unit-cell alternating corner sums (inclusion-exclusion volumes) of
// an (M+1)^L grid; the inverse of prefix_grid up to rounding.
std::vector<double> cell_volumes(std::span<const double> grid, int M, int L);

// Empirical-copula counts: for every grid point i in {0,...,M}^L, the
// number of rows m of a row-major MxL rank matrix with rank(m,l) <= i_l
// for all l.
std::vector<std::int64_t> dominance_counts(std::span<const int> ranks, int M,
                                           int L);

namespace serial {

std::vector<double> prefix_grid(std::span<const double> cells, int M, int L);
std::vector<double> cell_volumes(std::span<const double> grid, int M, int L);
std::vector<std::int64_t> dominance_counts(std::span<const int> ranks, int M,
                                           int L);

}  // namespace serial

}  // namespace discop::kernels

#endif  // DISCOP_KERNELS_HPP_
