#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "discop/ecc.hpp"
#include "discop/error.hpp"
#include "discop/rng.hpp"
#include "oracles.hpp"

using namespace discop;

namespace {

// The two-margin, three-member hand fixture used throughout: raw values
// ((10,12,11),(5,4,6)) give the template columns ((1,3,2),(2,1,3)).
EnsembleDataset hand_raw() {
  std::vector<MarginId> ids{{"t", "berlin", "24"}, {"t", "hamburg", "24"}};
  return EnsembleDataset(ids, 3, {10.0, 12.0, 11.0, 5.0, 4.0, 6.0});
}

EnsembleDataset random_ensemble(int M, int L, std::uint64_t seed) {
  std::vector<MarginId> ids;
  ids.reserve(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) ids.push_back({"v", std::to_string(l), "0"});
  Rng rng = make_rng(seed, 1000);
  std::uniform_real_distribution<double> unit(-10.0, 10.0);
  std::vector<double> values(static_cast<std::size_t>(M) * L);
  for (auto& v : values) v = unit(rng);
  return EnsembleDataset(ids, M, values);
}

}  // namespace

TEST_CASE("dependence template: frozen examples") {
  EnsembleDataset raw = hand_raw();
  RankMatrix tmpl = dependence_template(raw, 7);
  CHECK(tmpl == RankMatrix(3, 2, {1, 2, 3, 1, 2, 3}));
}

TEST_CASE("dependence template: all-ties column is a seeded permutation") {
  std::vector<MarginId> ids{{"p", "x", "0"}};
  EnsembleDataset raw(ids, 3, {7.0, 7.0, 7.0});
  RankMatrix t1 = dependence_template(raw, 1);
  RankMatrix t2 = dependence_template(raw, 1);
  CHECK(t1 == t2);
  std::vector<int> col{t1(0, 0), t1(1, 0), t1(2, 0)};
  std::sort(col.begin(), col.end());
  CHECK(col == std::vector<int>{1, 2, 3});
  RankMatrix t3 = dependence_template(raw, 2);
  std::vector<int> col3{t3(0, 0), t3(1, 0), t3(2, 0)};
  std::sort(col3.begin(), col3.end());
  CHECK(col3 == std::vector<int>{1, 2, 3});
}

TEST_CASE("marginal samples: gaussian quantiles") {
  PredictiveMargin g = PredictiveMargin::gaussian(0.0, 1.0);
  auto s = marginal_samples(g, 2, SamplingScheme::quantiles());
  REQUIRE(s.size() == 2);
  CHECK(std::abs(s[0] + 0.674490) < 1e-6);
  CHECK(std::abs(s[1] - 0.674490) < 1e-6);
  // M = 1 takes the median.
  auto med = marginal_samples(g, 1, SamplingScheme::quantiles());
  CHECK(med == std::vector<double>{0.0});
  // Location-scale.
  PredictiveMargin g2 = PredictiveMargin::gaussian(10.0, 2.0);
  auto s2 = marginal_samples(g2, 2, SamplingScheme::quantiles());
  CHECK(std::abs(s2[0] - (10.0 - 2.0 * 0.6744897501960817)) < 1e-9);
}

TEST_CASE("marginal samples: empirical quantiles hit the order statistics") {
  PredictiveMargin e = PredictiveMargin::empirical({3.0, 1.0, 2.0});
  auto s = marginal_samples(e, 3, SamplingScheme::quantiles());
  CHECK(s == std::vector<double>{1.0, 2.0, 3.0});
  // With M != N the convention is the ceil(p*N)-th sorted sample.
  auto s2 = marginal_samples(e, 2, SamplingScheme::quantiles());
  CHECK(s2 == std::vector<double>{1.0, 3.0});  // p = 1/4 -> 1st, p = 3/4 -> 3rd
}

TEST_CASE("marginal samples: random draws are sorted and seeded") {
  PredictiveMargin g = PredictiveMargin::gaussian(0.0, 1.0);
  auto a = marginal_samples(g, 20, SamplingScheme::random_draws(5), 3);
  auto b = marginal_samples(g, 20, SamplingScheme::random_draws(5), 3);
  CHECK(a == b);
  CHECK(std::is_sorted(a.begin(), a.end()));
  auto c = marginal_samples(g, 20, SamplingScheme::random_draws(5), 4);
  CHECK(a != c);  // different stream
}

TEST_CASE("degenerate gaussian margins are rejected") {
  CHECK_THROWS_AS(PredictiveMargin::gaussian(0.0, 0.0), ValidationError);
  CHECK_THROWS_AS(PredictiveMargin::gaussian(0.0, -1.0), ValidationError);
}

TEST_CASE("ecc reorder: frozen hand example") {
  RankMatrix tmpl(3, 2, {1, 2, 3, 1, 2, 3});
  std::vector<std::vector<double>> samples{{20.0, 21.0, 22.0},
                                           {0.1, 0.2, 0.3}};
  EnsembleDataset out =
      ecc_reorder(tmpl, samples, hand_raw().margin_ids());
  CHECK(out.value(0, 0) == 20.0);
  CHECK(out.value(0, 1) == 0.2);
  CHECK(out.value(1, 0) == 22.0);
  CHECK(out.value(1, 1) == 0.1);
  CHECK(out.value(2, 0) == 21.0);
  CHECK(out.value(2, 1) == 0.3);
}

TEST_CASE("ecc reorder: identity template emits sorted samples") {
  RankMatrix tmpl(4, 1);  // identity columns
  std::vector<std::vector<double>> samples{{1.0, 2.0, 3.0, 4.0}};
  EnsembleDataset out = ecc_reorder(tmpl, samples, {{"v", "x", "0"}});
  for (int m = 0; m < 4; ++m) CHECK(out.value(m, 0) == samples[0][m]);
}

TEST_CASE("ecc reorder validates shapes") {
  RankMatrix tmpl(3, 2, {1, 2, 3, 1, 2, 3});
  std::vector<std::vector<double>> wrong{{1.0, 2.0}, {0.1, 0.2, 0.3}};
  CHECK_THROWS_AS(ecc_reorder(tmpl, wrong, hand_raw().margin_ids()),
                  ValidationError);
  std::vector<std::vector<double>> unsorted{{2.0, 1.0, 3.0}, {0.1, 0.2, 0.3}};
  CHECK_THROWS_AS(ecc_reorder(tmpl, unsorted, hand_raw().margin_ids()),
                  ValidationError);
}

TEST_CASE("ECC is idempotent on its own template and values") {
  EnsembleDataset raw = random_ensemble(10, 5, 3);
  std::vector<PredictiveMargin> margins;
  for (int l = 0; l < raw.num_margins(); ++l) {
    auto col = raw.margin_values(l);
    margins.push_back(
        PredictiveMargin::empirical(std::vector<double>(col.begin(), col.end())));
  }
  EccResult res = run_ecc(raw, margins, SamplingScheme::quantiles(), 11);
  CHECK(res.ensemble == raw);  // bit-exact
  CHECK(res.report.preservation.preserved);
}

TEST_CASE("full pipeline preserves the copula and the margins") {
  for (int seed = 0; seed < 10; ++seed) {
    const int M = 5 + seed;
    const int L = 3 + seed % 4;
    EnsembleDataset raw = random_ensemble(M, L, seed);
    std::vector<PredictiveMargin> margins;
    for (int l = 0; l < L; ++l)
      margins.push_back(
          PredictiveMargin::gaussian(static_cast<double>(l), 1.0 + 0.1 * l));

    EccResult res = run_ecc(raw, margins, SamplingScheme::quantiles(), seed);
    CHECK(res.report.preservation.preserved);
    CHECK(res.report.preservation.tied_margins.empty());

    // Copula preservation: the ECC template equals the raw template.
    CHECK(dependence_template(res.ensemble, seed) ==
          dependence_template(raw, seed));

    // Margin preservation: the output of margin l is a permutation of
    // the samples drawn from margin l.
    for (int l = 0; l < L; ++l) {
      auto out_col = res.ensemble.margin_values(l);
      std::vector<double> sorted(out_col.begin(), out_col.end());
      std::sort(sorted.begin(), sorted.end());
      CHECK(sorted == marginal_samples(margins[l], M,
                                       SamplingScheme::quantiles()));
    }
  }
}

TEST_CASE("independently postprocessed ensembles lose the copula") {
  EnsembleDataset raw = hand_raw();  // non-identity template
  std::vector<std::vector<double>> samples{{20.0, 21.0, 22.0},
                                           {0.1, 0.2, 0.3}};
  // Samples assigned in member order, no reordering.
  std::vector<double> values{20.0, 21.0, 22.0, 0.1, 0.2, 0.3};
  EnsembleDataset independent(raw.margin_ids(), 3, values);
  PreservationReport rep = verify_copula_preservation(raw, independent, 7);
  CHECK_FALSE(rep.preserved);
}

TEST_CASE("raw vs raw is always preserved") {
  EnsembleDataset raw = random_ensemble(8, 4, 2);
  CHECK(verify_copula_preservation(raw, raw, 0).preserved);
}

TEST_CASE("verification flags tied sample values") {
  // Both sample values equal: the reordered column is constant.
  std::vector<MarginId> ids{{"v", "x", "0"}};
  EnsembleDataset raw(ids, 2, {3.0, 1.0});
  RankMatrix tmpl = dependence_template(raw, 1);
  std::vector<std::vector<double>> samples{{5.0, 5.0}};
  EnsembleDataset out = ecc_reorder(tmpl, samples, ids);
  PreservationReport rep = verify_copula_preservation(raw, out, 1);
  CHECK(rep.tied_margins == std::vector<int>{0});
  CHECK(rep.preserved);  // the template is admissible for the tied column
}

TEST_CASE("pipeline is deterministic bit for bit") {
  EnsembleDataset raw = random_ensemble(20, 30, 9);
  std::vector<PredictiveMargin> margins(
      30, PredictiveMargin::gaussian(1.0, 2.0));
  EccResult a = run_ecc(raw, margins, SamplingScheme::random_draws(4), 4);
  EccResult b = run_ecc(raw, margins, SamplingScheme::random_draws(4), 4);
  CHECK(a.ensemble == b.ensemble);
  CHECK(a.report.template_hash == b.report.template_hash);
  CHECK(a.report.preservation.preserved == b.report.preservation.preserved);
}

TEST_CASE("wide ensembles never build grids") {
  // L = 300 margins: any (M+1)^L allocation would blow the dense guard,
  // so completing at all shows the pipeline stays O(M*L).
  const int M = 20, L = 300;
  EnsembleDataset raw = random_ensemble(M, L, 17);
  std::vector<PredictiveMargin> margins(
      static_cast<std::size_t>(L), PredictiveMargin::gaussian(0.0, 1.0));
  EccResult res = run_ecc(raw, margins, SamplingScheme::quantiles(), 17);
  CHECK(res.report.preservation.preserved);
  CHECK(res.report.per_margin.size() == static_cast<std::size_t>(L));
}

TEST_CASE("margin list mismatch is rejected") {
  EnsembleDataset raw = random_ensemble(5, 3, 1);
  std::vector<PredictiveMargin> margins(2,
                                        PredictiveMargin::gaussian(0.0, 1.0));
  CHECK_THROWS_AS(run_ecc(raw, margins, SamplingScheme::quantiles(), 1),
                  ValidationError);
}

TEST_CASE("report summaries carry per-margin sample extremes") {
  EnsembleDataset raw = hand_raw();
  std::vector<PredictiveMargin> margins{
      PredictiveMargin::empirical({20.0, 21.0, 22.0}),
      PredictiveMargin::empirical({0.1, 0.2, 0.3})};
  EccResult res = run_ecc(raw, margins, SamplingScheme::quantiles(), 7);
  REQUIRE(res.report.per_margin.size() == 2);
  CHECK(res.report.per_margin[0].min == 20.0);
  CHECK(res.report.per_margin[0].max == 22.0);
  CHECK(res.report.per_margin[1].min == 0.1);
  CHECK(res.report.per_margin[1].max == 0.3);
  CHECK(res.report.template_hash.size() == 16);
}

TEST_CASE("ensemble dataset validation") {
  std::vector<MarginId> dup{{"a", "b", "c"}, {"a", "b", "c"}};
  CHECK_THROWS_AS(EnsembleDataset(dup, 2, std::vector<double>(4, 0.0)),
                  ValidationError);
  std::vector<MarginId> ids{{"a", "b", "c"}};
  CHECK_THROWS_AS(EnsembleDataset(ids, 2, std::vector<double>(3, 0.0)),
                  ValidationError);
  CHECK_THROWS_AS(
      EnsembleDataset(ids, 2, std::vector<double>{1.0, std::nan("")}),
      ValidationError);
}
