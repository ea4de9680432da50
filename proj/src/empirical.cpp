#include "discop/empirical.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>

#include "discop/error.hpp"
#include "discop/indexing.hpp"
#include "discop/kernels.hpp"
#include "discop/rng.hpp"

namespace discop {

std::vector<int> column_ranks(std::span<const double> values,
                              const TiePolicy& policy, int column) {
  const int M = static_cast<int>(values.size());
  std::vector<int> order(static_cast<std::size_t>(M));
  std::iota(order.begin(), order.end(), 0);

  switch (policy.kind) {
    case TiePolicy::kReject: {
      std::sort(order.begin(), order.end(),
                [&](int a, int b) { return values[a] < values[b]; });
      for (int i = 1; i < M; ++i) {
        if (values[order[i - 1]] == values[order[i]]) {
          std::ostringstream msg;
          msg << "tie in column " << (column + 1) << " at value "
              << values[order[i]];
          throw ValidationError(msg.str());
        }
      }
      break;
    }
    case TiePolicy::kFirstOccurrence:
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return values[a] < values[b]; });
      break;
    case TiePolicy::kRandom: {
      // Per-column stream so columns can be ranked concurrently and
      // still reproduce the serial result.
      Rng rng = make_rng(policy.seed, static_cast<std::uint64_t>(column));
      std::vector<std::uint64_t> tiebreak(static_cast<std::size_t>(M));
      for (auto& t : tiebreak) t = rng();
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (values[a] != values[b]) return values[a] < values[b];
        if (tiebreak[a] != tiebreak[b]) return tiebreak[a] < tiebreak[b];
        return a < b;
      });
      break;
    }
  }

  std::vector<int> rk(static_cast<std::size_t>(M));
  for (int pos = 0; pos < M; ++pos) rk[order[pos]] = pos + 1;
  return rk;
}

RankMatrix ranks(const SampleSet& s, const TiePolicy& policy) {
  if (s.M < 1 || s.L < 1)
    throw ValidationError("sample set requires M >= 1 and L >= 1");
  if (s.points.size() != static_cast<std::size_t>(s.M) * s.L)
    throw ValidationError("sample set point count does not match M*L");

  RankMatrix r(s.M, s.L);
  std::vector<double> col(static_cast<std::size_t>(s.M));
  for (int l = 0; l < s.L; ++l) {
    for (int m = 0; m < s.M; ++m) col[m] = s(m, l);
    auto rk = column_ranks(col, policy, l);
    for (int m = 0; m < s.M; ++m) r.set(m, l, rk[m]);
  }
  return r;
}

GridFunction empirical_copula(const SampleSet& s, const TiePolicy& policy) {
  checked_dense_size(static_cast<std::size_t>(s.M) + 1, s.L);  // guard first
  RankMatrix r = ranks(s, policy);
  auto counts = kernels::dominance_counts(r.ranks(), s.M, s.L);
  std::vector<double> values(counts.size());
  const double M = s.M;
  for (std::size_t i = 0; i < counts.size(); ++i)
    values[i] = static_cast<double>(counts[i]) / M;
  return GridFunction(s.M, s.L, std::move(values));
}

SampleSet sample_set_from_rank_matrix(
    const RankMatrix& r, std::span<const std::vector<double>> grids) {
  r.validate();
  const int M = r.members();
  const int L = r.dimension();
  if (static_cast<int>(grids.size()) != L)
    throw ValidationError("need one value grid per dimension");
  for (int l = 0; l < L; ++l) {
    if (static_cast<int>(grids[l].size()) != M)
      throw ValidationError("value grid " + std::to_string(l + 1) +
                            " must hold M values");
    for (int i = 1; i < M; ++i)
      if (!(grids[l][i - 1] < grids[l][i]))
        throw ValidationError("value grid " + std::to_string(l + 1) +
                              " must be strictly increasing");
  }

  SampleSet s;
  s.M = M;
  s.L = L;
  s.points.resize(static_cast<std::size_t>(M) * L);
  for (int m = 0; m < M; ++m)
    for (int l = 0; l < L; ++l)
      s.points[static_cast<std::size_t>(m) * L + l] = grids[l][r(m, l) - 1];
  return s;
}

}  // namespace discop
