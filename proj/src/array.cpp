#include "discop/array.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "discop/error.hpp"
#include "discop/indexing.hpp"
#include "discop/kernels.hpp"
#include "discop/rng.hpp"

namespace discop {

StochasticArray::StochasticArray(int M, int L) : M_(M), L_(L) {
  if (M < 1 || L < 1)
    throw ValidationError("stochastic array requires M >= 1 and L >= 1");
  entries_.assign(checked_dense_size(static_cast<std::size_t>(M), L), 0.0);
}

StochasticArray::StochasticArray(int M, int L, std::vector<double> entries)
    : M_(M), L_(L), entries_(std::move(entries)) {
  if (M < 1 || L < 1)
    throw ValidationError("stochastic array requires M >= 1 and L >= 1");
  const std::size_t expect = checked_dense_size(static_cast<std::size_t>(M), L);
  if (entries_.size() != expect)
    throw ValidationError("array entry count " + std::to_string(entries_.size()) +
                          " does not match M^L = " + std::to_string(expect));
}

namespace {

std::size_t cell_offset(const StochasticArray& a, std::span<const int> coords) {
  if (static_cast<int>(coords.size()) != a.dimension())
    throw ValidationError("array index has wrong dimension");
  std::size_t lin = 0;
  for (int c : coords) {
    if (c < 1 || c > a.resolution())
      throw ValidationError("array coordinate out of range [1, M]");
    lin = lin * static_cast<std::size_t>(a.resolution()) +
          static_cast<std::size_t>(c - 1);
  }
  return lin;
}

}  // namespace

double StochasticArray::operator()(std::span<const int> coords) const {
  return entries_[cell_offset(*this, coords)];
}

void StochasticArray::set(std::span<const int> coords, double v) {
  entries_[cell_offset(*this, coords)] = v;
}

RankMatrix::RankMatrix(int M, int L) : M_(M), L_(L) {
  if (M < 1 || L < 1)
    throw ValidationError("rank matrix requires M >= 1 and L >= 1");
  ranks_.resize(static_cast<std::size_t>(M) * L);
  for (int m = 0; m < M; ++m)
    for (int l = 0; l < L; ++l) ranks_[idx(m, l)] = m + 1;
}

RankMatrix::RankMatrix(int M, int L, std::vector<int> ranks)
    : M_(M), L_(L), ranks_(std::move(ranks)) {
  if (M < 1 || L < 1)
    throw ValidationError("rank matrix requires M >= 1 and L >= 1");
  if (ranks_.size() != static_cast<std::size_t>(M) * L)
    throw ValidationError("rank matrix entry count does not match M*L");
}

void RankMatrix::validate() const {
  std::vector<char> seen(static_cast<std::size_t>(M_) + 1);
  for (int l = 0; l < L_; ++l) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int m = 0; m < M_; ++m) {
      int r = (*this)(m, l);
      if (r < 1 || r > M_ || seen[r])
        throw ValidationError("rank matrix column " + std::to_string(l + 1) +
                              " is not a permutation of 1.." +
                              std::to_string(M_));
      seen[r] = 1;
    }
  }
}

AxiomReport check_stochastic(const StochasticArray& a, double eps) {
  const int M = a.resolution();
  const int L = a.dimension();
  AxiomReport report;

  // A1: nonnegative entries.
  {
    std::vector<int> cell(L);
    for (std::size_t lin = 0; lin < a.size(); ++lin) {
      double v = a.entries()[lin];
      if (!(v >= -eps)) {
        decode_index(lin, static_cast<std::size_t>(M), L, cell.data());
        for (int& c : cell) ++c;
        report.add({Axiom::A1, cell, -1, v, ">= 0"});
      }
    }
  }

  // A2: fixing coordinate i_l on any axis l and summing over the others
  // gives 1.
  std::vector<double> sums(static_cast<std::size_t>(M));
  std::vector<int> cell(L);
  for (int axis = 0; axis < L; ++axis) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t lin = 0; lin < a.size(); ++lin) {
      decode_index(lin, static_cast<std::size_t>(M), L, cell.data());
      sums[cell[axis]] += a.entries()[lin];
    }
    for (int i = 0; i < M; ++i) {
      if (!(std::abs(sums[i] - 1.0) <= eps))
        report.add({Axiom::A2, {i + 1}, axis, sums[i], "= 1"});
    }
  }
  return report;
}

GridFunction copula_from_array(const StochasticArray& a, double eps) {
  AxiomReport rep = check_stochastic(a, eps);
  if (!rep.passed)
    throw ValidationError("copula_from_array: input fails A1/A2:\n" +
                          to_text(rep));
  auto grid = kernels::prefix_grid(a.entries(), a.resolution(), a.dimension());
  const double M = a.resolution();
  for (double& v : grid) v /= M;
  return GridFunction(a.resolution(), a.dimension(), std::move(grid));
}

StochasticArray array_from_copula(const GridFunction& d, double eps,
                                  double clamp_eps) {
  AxiomReport rep = check_discrete_copula(d, eps);
  if (!rep.passed)
    throw ValidationError("array_from_copula: input fails D1/D2/D3:\n" +
                          to_text(rep));
  auto vols = kernels::cell_volumes(d.values(), d.resolution(), d.dimension());
  const double M = d.resolution();
  for (double& v : vols) {
    v *= M;
    if (v < 0.0 && v >= -clamp_eps) v = 0.0;
  }
  return StochasticArray(d.resolution(), d.dimension(), std::move(vols));
}

bool is_permutation_array(const StochasticArray& a, double eps) {
  return std::all_of(a.entries().begin(), a.entries().end(), [eps](double v) {
    return std::abs(v) <= eps || std::abs(v - 1.0) <= eps;
  });
}

RankMatrix rank_matrix_from_permutation_array(const StochasticArray& a,
                                              double eps) {
  AxiomReport rep = check_stochastic(a, eps);
  if (!rep.passed)
    throw ValidationError(
        "rank_matrix_from_permutation_array: input fails A1/A2");
  if (!is_permutation_array(a, eps))
    throw ValidationError(
        "rank_matrix_from_permutation_array: entries are not all 0 or 1");

  const int M = a.resolution();
  const int L = a.dimension();
  // Each axis-1 line holds exactly one 1, so ordering the ones by their
  // first coordinate assigns one per row.
  RankMatrix r(M, L);
  std::vector<int> cell(L);
  std::size_t ones = 0;
  for (std::size_t lin = 0; lin < a.size(); ++lin) {
    if (a.entries()[lin] > 0.5) {
      decode_index(lin, static_cast<std::size_t>(M), L, cell.data());
      for (int l = 0; l < L; ++l) r.set(cell[0], l, cell[l] + 1);
      ++ones;
    }
  }
  if (ones != static_cast<std::size_t>(M))
    throw ValidationError("permutation array must contain exactly M ones");
  r.validate();
  return r;
}

StochasticArray permutation_array_from_rank_matrix(const RankMatrix& r) {
  r.validate();
  const int M = r.members();
  const int L = r.dimension();
  StochasticArray a(M, L);
  std::vector<int> cell(L);
  for (int m = 0; m < M; ++m) {
    for (int l = 0; l < L; ++l) cell[l] = r(m, l);
    a.set(cell, 1.0);
  }
  return a;
}

StochasticArray convex_combination(std::span<const StochasticArray> arrays,
                                   std::span<const double> weights) {
  if (arrays.empty() || arrays.size() != weights.size())
    throw ValidationError("convex_combination: need matching arrays/weights");
  const int M = arrays[0].resolution();
  const int L = arrays[0].dimension();
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ValidationError("convex_combination: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ValidationError("convex_combination: weights must sum to 1");

  std::vector<double> out(arrays[0].size(), 0.0);
  for (std::size_t i = 0; i < arrays.size(); ++i) {
    if (arrays[i].resolution() != M || arrays[i].dimension() != L)
      throw ValidationError("convex_combination: mismatched shapes");
    for (std::size_t j = 0; j < out.size(); ++j)
      out[j] += weights[i] * arrays[i].entries()[j];
  }
  return StochasticArray(M, L, std::move(out));
}

RankMatrix random_rank_matrix(int M, int L, std::uint64_t seed) {
  RankMatrix r(M, L);
  std::vector<int> perm(static_cast<std::size_t>(M));
  for (int l = 0; l < L; ++l) {
    std::iota(perm.begin(), perm.end(), 1);
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(l));
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int m = 0; m < M; ++m) r.set(m, l, perm[m]);
  }
  return r;
}

StochasticArray random_stochastic_array(int M, int L, int k,
                                        std::uint64_t seed) {
  if (k < 1) throw ValidationError("random_stochastic_array: k >= 1 required");
  if (k == 1)
    return permutation_array_from_rank_matrix(random_rank_matrix(M, L, seed));

  std::vector<StochasticArray> parts;
  parts.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    parts.push_back(permutation_array_from_rank_matrix(
        random_rank_matrix(M, L, stream_seed(seed, static_cast<std::uint64_t>(i)))));

  Rng rng = make_rng(seed, 0xabcdef);
  std::uniform_real_distribution<double> unit(0.1, 1.0);
  std::vector<double> w(static_cast<std::size_t>(k));
  double total = 0.0;
  for (double& x : w) {
    x = unit(rng);
    total += x;
  }
  double acc = 0.0;
  for (int i = 0; i + 1 < k; ++i) {
    w[i] /= total;
    acc += w[i];
  }
  w[k - 1] = 1.0 - acc;  // exact unit sum
  return convex_combination(parts, w);
}

}  // namespace discop
