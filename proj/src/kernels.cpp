#include "discop/kernels.hpp"

#include <cstddef>

#include "discop/indexing.hpp"

namespace discop::kernels {

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t n = 1;
  for (int i = 0; i < exp; ++i) n *= base;
  return n;
}

// Corner offsets and signs for the 2^L inclusion-exclusion sum around a
// unit cell, relative to the cell's upper corner.  A corner picks, per
// axis, either the upper (i_l) or lower (i_l - 1) coordinate; its sign
// is (-1)^(number of lower picks).
struct CornerTable {
  std::vector<std::ptrdiff_t> offset;
  std::vector<double> sign;

  CornerTable(int M, int L) {
    const std::size_t n = std::size_t{1} << L;
    offset.resize(n);
    sign.resize(n);
    std::vector<std::size_t> stride(L);
    for (int l = L - 1; l >= 0; --l)
      stride[l] = ipow(static_cast<std::size_t>(M) + 1, L - 1 - l);
    for (std::size_t mask = 0; mask < n; ++mask) {
      std::ptrdiff_t off = 0;
      int lowers = 0;
      for (int l = 0; l < L; ++l) {
        if (!(mask & (std::size_t{1} << l))) {
          off -= static_cast<std::ptrdiff_t>(stride[l]);
          ++lowers;
        }
      }
      offset[mask] = off;
      sign[mask] = (lowers % 2 == 0) ? 1.0 : -1.0;
    }
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Serial reference implementations.
// ---------------------------------------------------------------------------

namespace serial {

std::vector<double> prefix_grid(std::span<const double> cells, int M, int L) {
  const std::size_t base = static_cast<std::size_t>(M) + 1;
  const std::size_t total = ipow(base, L);
  std::vector<double> grid(total, 0.0);

  // Embed the cells at coordinates {1,...,M}^L.
  const std::size_t ncells = ipow(static_cast<std::size_t>(M), L);
  std::vector<int> c(L);
  for (std::size_t lin = 0; lin < ncells; ++lin) {
    decode_index(lin, static_cast<std::size_t>(M), L, c.data());
    std::size_t g = 0;
    for (int l = 0; l < L; ++l) g = g * base + static_cast<std::size_t>(c[l] + 1);
    grid[g] = cells[lin];
  }

  // One running-sum pass per axis, last axis first.  Each line is scanned
  // sequentially so the summation order is fixed.
  for (int axis = L - 1; axis >= 0; --axis) {
    const std::size_t stride = ipow(base, L - 1 - axis);
    const std::size_t block = stride * base;
    const std::size_t nblocks = total / block;
    for (std::size_t b = 0; b < nblocks; ++b) {
      for (std::size_t i = 0; i < stride; ++i) {
        double* line = grid.data() + b * block + i;
        double acc = 0.0;
        for (std::size_t k = 0; k < base; ++k) {
          acc += line[k * stride];
          line[k * stride] = acc;
        }
      }
    }
  }
  return grid;
}

std::vector<double> cell_volumes(std::span<const double> grid, int M, int L) {
  const std::size_t base = static_cast<std::size_t>(M) + 1;
  const std::size_t ncells = ipow(static_cast<std::size_t>(M), L);
  const CornerTable corners(M, L);
  const std::size_t ncorners = std::size_t{1} << L;

  std::vector<double> vol(ncells);
  std::vector<int> c(L);
  for (std::size_t lin = 0; lin < ncells; ++lin) {
    decode_index(lin, static_cast<std::size_t>(M), L, c.data());
    std::size_t upper = 0;
    for (int l = 0; l < L; ++l)
      upper = upper * base + static_cast<std::size_t>(c[l] + 1);
    double v = 0.0;
    for (std::size_t mask = 0; mask < ncorners; ++mask)
      v += corners.sign[mask] *
           grid[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(upper) +
                                         corners.offset[mask])];
    vol[lin] = v;
  }
  return vol;
}

std::vector<std::int64_t> dominance_counts(std::span<const int> ranks, int M,
                                           int L) {
  const std::size_t base = static_cast<std::size_t>(M) + 1;
  const std::size_t total = ipow(base, L);
  std::vector<std::int64_t> counts(total);
  std::vector<int> idx(L);
  for (std::size_t lin = 0; lin < total; ++lin) {
    decode_index(lin, base, L, idx.data());
    std::int64_t n = 0;
    for (int m = 0; m < M; ++m) {
      bool dominated = true;
      const int* row = ranks.data() + static_cast<std::size_t>(m) * L;
      for (int l = 0; l < L; ++l) {
        if (row[l] > idx[l]) {
          dominated = false;
          break;
        }
      }
      n += dominated;
    }
    counts[lin] = n;
  }
  return counts;
}

}  // namespace serial

// ---------------------------------------------------------------------------
// OpenMP kernels.  Line scans and per-cell sums run in the same order as
// the serial reference, so results match bit for bit.
// ---------------------------------------------------------------------------

std::vector<double> prefix_grid(std::span<const double> cells, int M, int L) {
  const std::size_t base = static_cast<std::size_t>(M) + 1;
  const std::size_t total = ipow(base, L);
  std::vector<double> grid(total, 0.0);

  const std::int64_t ncells =
      static_cast<std::int64_t>(ipow(static_cast<std::size_t>(M), L));
#pragma omp parallel
  {
    std::vector<int> c(L);
#pragma omp for schedule(static)
    for (std::int64_t lin = 0; lin < ncells; ++lin) {
      decode_index(static_cast<std::size_t>(lin), static_cast<std::size_t>(M),
                   L, c.data());
      std::size_t g = 0;
      for (int l = 0; l < L; ++l)
        g = g * base + static_cast<std::size_t>(c[l] + 1);
      grid[g] = cells[static_cast<std::size_t>(lin)];
    }
  }

  for (int axis = L - 1; axis >= 0; --axis) {
    const std::size_t stride = ipow(base, L - 1 - axis);
    const std::size_t block = stride * base;
    const std::int64_t nlines = static_cast<std::int64_t>(total / base);
#pragma omp parallel for schedule(static)
    for (std::int64_t line = 0; line < nlines; ++line) {
      const std::size_t b = static_cast<std::size_t>(line) / stride;
      const std::size_t i = static_cast<std::size_t>(line) % stride;
      double* p = grid.data() + b * block + i;
      double acc = 0.0;
      for (std::size_t k = 0; k < base; ++k) {
        acc += p[k * stride];
        p[k * stride] = acc;
      }
    }
  }
  return grid;
}

std::vector<double> cell_volumes(std::span<const double> grid, int M, int L) {
  const std::size_t base = static_cast<std::size_t>(M) + 1;
  const std::int64_t ncells =
      static_cast<std::int64_t>(ipow(static_cast<std::size_t>(M), L));
  const CornerTable corners(M, L);
  const std::size_t ncorners = std::size_t{1} << L;

  std::vector<double> vol(static_cast<std::size_t>(ncells));
#pragma omp parallel
  {
    std::vector<int> c(L);
#pragma omp for schedule(static)
    for (std::int64_t lin = 0; lin < ncells; ++lin) {
      decode_index(static_cast<std::size_t>(lin), static_cast<std::size_t>(M),
                   L, c.data());
      std::size_t upper = 0;
      for (int l = 0; l < L; ++l)
        upper = upper * base + static_cast<std::size_t>(c[l] + 1);
      double v = 0.0;
      for (std::size_t mask = 0; mask < ncorners; ++mask)
        v += corners.sign[mask] *
             grid[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(upper) +
                                           corners.offset[mask])];
      vol[static_cast<std::size_t>(lin)] = v;
    }
  }
  return vol;
}

std::vector<std::int64_t> dominance_counts(std::span<const int> ranks, int M,
                                           int L) {
  const std::size_t base = static_cast<std::size_t>(M) + 1;
  const std::int64_t total = static_cast<std::int64_t>(ipow(base, L));
  std::vector<std::int64_t> counts(static_cast<std::size_t>(total));
#pragma omp parallel
  {
    std::vector<int> idx(L);
#pragma omp for schedule(static)
    for (std::int64_t lin = 0; lin < total; ++lin) {
      decode_index(static_cast<std::size_t>(lin), base, L, idx.data());
      std::int64_t n = 0;
      for (int m = 0; m < M; ++m) {
        bool dominated = true;
        const int* row = ranks.data() + static_cast<std::size_t>(m) * L;
        for (int l = 0; l < L; ++l) {
          if (row[l] > idx[l]) {
            dominated = false;
            break;
          }
        }
        n += dominated;
      }
      counts[static_cast<std::size_t>(lin)] = n;
    }
  }
  return counts;
}

}  // namespace discop::kernels
