#include <doctest.h>

#include <cmath>
#include <vector>

#include "discop/empirical.hpp"
#include "discop/error.hpp"
#include "discop/rng.hpp"
#include "oracles.hpp"

using namespace discop;

namespace {

SampleSet make_samples(int M, int L, std::vector<double> pts) {
  return SampleSet{M, L, std::move(pts)};
}

// Literal indicator-count formula, one grid point at a time.
double indicator_oracle(const RankMatrix& rk, const std::vector<int>& idx) {
  int count = 0;
  for (int m = 0; m < rk.members(); ++m) {
    bool in = true;
    for (int l = 0; l < rk.dimension(); ++l)
      in = in && rk(m, l) <= idx[l];
    count += in;
  }
  return static_cast<double>(count) / rk.members();
}

}  // namespace

TEST_CASE("column ranks: sort order") {
  std::vector<double> col{10.0, 12.0, 11.0};
  CHECK(column_ranks(col, TiePolicy::reject()) == std::vector<int>{1, 3, 2});
}

TEST_CASE("column ranks: first occurrence wins on ties") {
  std::vector<double> col{5.0, 5.0, 6.0};
  CHECK(column_ranks(col, TiePolicy::first_occurrence()) ==
        std::vector<int>{1, 2, 3});
}

TEST_CASE("column ranks: reject policy names the column and value") {
  std::vector<double> col{5.0, 5.0};
  try {
    column_ranks(col, TiePolicy::reject(), 3);
    FAIL("expected a tie error");
  } catch (const ValidationError& e) {
    std::string msg = e.what();
    CHECK(msg.find("column 4") != std::string::npos);
    CHECK(msg.find("5") != std::string::npos);
  }
}

TEST_CASE("column ranks: random policy is a seeded permutation") {
  std::vector<double> col{7.0, 7.0, 7.0};
  auto r1 = column_ranks(col, TiePolicy::random(1));
  auto r2 = column_ranks(col, TiePolicy::random(1));
  CHECK(r1 == r2);  // same seed reproduces
  std::vector<int> sorted = r1;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{1, 2, 3});
  auto r3 = column_ranks(col, TiePolicy::random(2));
  std::vector<int> sorted3 = r3;
  std::sort(sorted3.begin(), sorted3.end());
  CHECK(sorted3 == std::vector<int>{1, 2, 3});
}

TEST_CASE("ranks: per-column application") {
  SampleSet s = make_samples(3, 2, {10, 5, 12, 4, 11, 6});
  RankMatrix r = ranks(s, TiePolicy::reject());
  CHECK(r == RankMatrix(3, 2, {1, 2, 3, 1, 2, 3}));
}

TEST_CASE("empirical copula: frozen three-point example") {
  SampleSet s = make_samples(3, 2, {1.0, 2.5, 2.0, 1.5, 3.0, 3.5});
  GridFunction e = empirical_copula(s, TiePolicy::reject());
  CHECK(e(std::vector<int>{1, 1}) == 0.0);
  CHECK(e(std::vector<int>{2, 2}) == 2.0 / 3.0);
  CHECK(e(std::vector<int>{3, 3}) == 1.0);

  // Full agreement with the literal indicator formula.
  RankMatrix rk = ranks(s, TiePolicy::reject());
  std::vector<int> idx(2, 0);
  bool more = true;
  while (more) {
    CHECK(e(idx) == indicator_oracle(rk, idx));
    more = false;
    for (int l = 1; l >= 0; --l) {
      if (idx[l] < 3) {
        ++idx[l];
        more = true;
        break;
      }
      idx[l] = 0;
    }
  }
}

TEST_CASE("comonotone samples give the min copula") {
  SampleSet s = make_samples(4, 2, {1, 10, 2, 20, 3, 30, 4, 40});
  GridFunction e = empirical_copula(s, TiePolicy::reject());
  CHECK(e == min_copula(4, 2));
}

TEST_CASE("empirical copula is grounded") {
  SampleSet s = make_samples(3, 3,
                             {0.3, 1.2, -4.0, 0.1, 1.5, -2.0, 0.7, 1.1, -3.0});
  GridFunction e = empirical_copula(s, TiePolicy::reject());
  CHECK(e(std::vector<int>{0, 2, 3}) == 0.0);
  CHECK(e(std::vector<int>{3, 0, 0}) == 0.0);
}

TEST_CASE("empirical copula is exactly an irreducible discrete copula") {
  for (int seed = 0; seed < 20; ++seed) {
    Rng rng = make_rng(seed, 5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int M = 2 + seed % 6;
    const int L = 2 + seed % 2;
    std::vector<double> pts(static_cast<std::size_t>(M) * L);
    for (auto& p : pts) p = unit(rng);
    SampleSet s = make_samples(M, L, std::move(pts));
    GridFunction e = empirical_copula(s, TiePolicy::reject());
    CHECK(oracles::exact_irreducible_copula_check(e));
    CHECK(is_irreducible(e, 0.0));  // zero tolerance
  }
}

TEST_CASE("empirical copulas difference back to permutation arrays") {
  // The array recovered from a tie-free empirical copula is 0/1.
  for (int seed = 0; seed < 10; ++seed) {
    Rng rng = make_rng(seed, 61);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int M = 3 + seed % 5;
    std::vector<double> pts(static_cast<std::size_t>(M) * 2);
    for (auto& p : pts) p = unit(rng);
    GridFunction e = empirical_copula(make_samples(M, 2, std::move(pts)));
    CHECK(is_permutation_array(array_from_copula(e)));
  }
}

TEST_CASE("equivalence chain: counting equals the permutation-array route") {
  for (int seed = 0; seed < 50; ++seed) {
    Rng rng = make_rng(seed, 31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int M = 2 + seed % 6;
    const int L = 2 + seed % 3;
    std::vector<double> pts(static_cast<std::size_t>(M) * L);
    for (auto& p : pts) p = unit(rng);
    SampleSet s = make_samples(M, L, std::move(pts));

    GridFunction via_counts = empirical_copula(s, TiePolicy::reject());
    GridFunction via_array = copula_from_array(
        permutation_array_from_rank_matrix(ranks(s, TiePolicy::reject())));
    CHECK(via_counts == via_array);  // exact equality, both integer-backed
  }
}

TEST_CASE("ranks are invariant under strictly increasing transforms") {
  SampleSet s = make_samples(4, 2, {0.3, 5.0, -1.0, 2.0, 0.9, 9.0, 0.5, 7.0});
  SampleSet t = s;
  for (int m = 0; m < 4; ++m) {
    t.points[static_cast<std::size_t>(m) * 2] =
        std::exp(s(m, 0));                       // exp on column 1
    t.points[static_cast<std::size_t>(m) * 2 + 1] =
        3.0 * s(m, 1) + 100.0;                   // affine on column 2
  }
  CHECK(ranks(s, TiePolicy::reject()) == ranks(t, TiePolicy::reject()));
}

TEST_CASE("sample_set_from_rank_matrix: frozen examples") {
  {
    RankMatrix r(2, 2, {1, 1, 2, 2});
    std::vector<std::vector<double>> grids{{0, 1}, {0, 1}};
    SampleSet s = sample_set_from_rank_matrix(r, grids);
    CHECK(s(0, 0) == 0.0);
    CHECK(s(0, 1) == 0.0);
    CHECK(s(1, 0) == 1.0);
    CHECK(s(1, 1) == 1.0);
  }
  {
    RankMatrix r(2, 2, {1, 2, 2, 1});
    std::vector<std::vector<double>> grids{{10, 20}, {5, 6}};
    SampleSet s = sample_set_from_rank_matrix(r, grids);
    CHECK(s(0, 0) == 10.0);
    CHECK(s(0, 1) == 6.0);
    CHECK(s(1, 0) == 20.0);
    CHECK(s(1, 1) == 5.0);
  }
}

TEST_CASE("sample_set_from_rank_matrix rejects bad grids") {
  RankMatrix r(2, 2, {1, 1, 2, 2});
  std::vector<std::vector<double>> flat{{0, 0}, {0, 1}};
  CHECK_THROWS_AS(sample_set_from_rank_matrix(r, flat), ValidationError);
  std::vector<std::vector<double>> wrong{{0, 1, 2}, {0, 1}};
  CHECK_THROWS_AS(sample_set_from_rank_matrix(r, wrong), ValidationError);
}

TEST_CASE("round trip through samples reproduces the copula exactly") {
  for (int seed = 0; seed < 50; ++seed) {
    const int M = 2 + seed % 6;
    const int L = 2 + seed % 3;
    RankMatrix r = random_rank_matrix(M, L, seed);
    std::vector<std::vector<double>> grids(static_cast<std::size_t>(L));
    Rng rng = make_rng(seed, 77);
    std::uniform_real_distribution<double> step(0.1, 2.0);
    for (int l = 0; l < L; ++l) {
      double x = 0.0;
      for (int m = 0; m < M; ++m) {
        x += step(rng);
        grids[l].push_back(x);
      }
    }
    SampleSet s = sample_set_from_rank_matrix(r, grids);
    CHECK(empirical_copula(s, TiePolicy::reject()) ==
          copula_from_array(permutation_array_from_rank_matrix(r)));
  }
}
