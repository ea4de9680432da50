#ifndef DISCOP_INDEXING_HPP_
#define DISCOP_INDEXING_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "discop/error.hpp"

namespace discop {

// Dense storage guard: grids and arrays are desk-scale objects.
inline constexpr std::size_t kMaxDenseEntries = 100'000'000;

// base^L with an overflow/size guard.  Throws ValidationError when the
// dense representation would exceed kMaxDenseEntries.
inline std::size_t checked_dense_size(std::size_t base, int L) {
  std::size_t n = 1;
  for (int l = 0; l < L; ++l) {
    if (base != 0 && n > kMaxDenseEntries / base)
      throw ValidationError("dense size guard: base^L exceeds " +
                            std::to_string(kMaxDenseEntries) + " entries");
    n *= base;
  }
  if (n > kMaxDenseEntries)
    throw ValidationError("dense size guard: base^L exceeds " +
                          std::to_string(kMaxDenseEntries) + " entries");
  return n;
}

// Row-major (lexicographic, first coordinate slowest) linear index of a
// point with coordinates in {0,...,base-1}.
inline std::size_t linear_index(std::span<const int> coords, std::size_t base) {
  std::size_t lin = 0;
  for (int c : coords) lin = lin * base + static_cast<std::size_t>(c);
  return lin;
}

inline void decode_index(std::size_t lin, std::size_t base, int L, int* out) {
  for (int l = L - 1; l >= 0; --l) {
    out[l] = static_cast<int>(lin % base);
    lin /= base;
  }
}

// Odometer over {lo,...,hi}^L in row-major order; returns false after
// the last point.
inline bool next_point(std::vector<int>& coords, int lo, int hi) {
  for (int l = static_cast<int>(coords.size()) - 1; l >= 0; --l) {
    if (coords[l] < hi) {
      ++coords[l];
      return true;
    }
    coords[l] = lo;
  }
  return false;
}

}  // namespace discop

#endif  // DISCOP_INDEXING_HPP_
