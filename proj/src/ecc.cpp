#include "discop/ecc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "discop/error.hpp"
#include "discop/normal.hpp"
#include "discop/rng.hpp"

namespace discop {

EnsembleDataset::EnsembleDataset(std::vector<MarginId> margins, int members,
                                 std::vector<double> values)
    : margins_(std::move(margins)), members_(members),
      values_(std::move(values)) {
  if (members_ < 1 || margins_.empty())
    throw ValidationError("ensemble requires M >= 1 members and L >= 1 margins");
  if (values_.size() !=
      static_cast<std::size_t>(members_) * margins_.size())
    throw ValidationError("ensemble value count does not match M*L");
  for (double v : values_)
    if (!std::isfinite(v))
      throw ValidationError("ensemble values must be finite");
  for (std::size_t i = 0; i < margins_.size(); ++i)
    for (std::size_t j = i + 1; j < margins_.size(); ++j)
      if (margins_[i] == margins_[j])
        throw ValidationError("duplicate margin id " + margins_[i].str());
}

PredictiveMargin PredictiveMargin::gaussian(double mean, double sd) {
  if (!(sd > 0.0) || !std::isfinite(sd) || !std::isfinite(mean))
    throw ValidationError("gaussian margin requires finite mean and sd > 0");
  PredictiveMargin m;
  m.gaussian_ = true;
  m.mean_ = mean;
  m.sd_ = sd;
  return m;
}

PredictiveMargin PredictiveMargin::empirical(std::vector<double> samples) {
  if (samples.empty())
    throw ValidationError("empirical margin requires at least one sample");
  for (double v : samples)
    if (!std::isfinite(v))
      throw ValidationError("empirical margin samples must be finite");
  std::sort(samples.begin(), samples.end());
  PredictiveMargin m;
  m.samples_ = std::move(samples);
  return m;
}

double PredictiveMargin::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw ValidationError("quantile requires p in (0, 1)");
  if (gaussian_) return mean_ + sd_ * normal_quantile(p);
  const auto n = static_cast<double>(samples_.size());
  auto k = static_cast<std::size_t>(std::ceil(p * n));
  if (k < 1) k = 1;
  if (k > samples_.size()) k = samples_.size();
  return samples_[k - 1];
}

double PredictiveMargin::cdf(double x) const {
  if (std::isnan(x)) throw ValidationError("cdf argument is NaN");
  if (gaussian_) return normal_cdf((x - mean_) / sd_);
  auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) /
         static_cast<double>(samples_.size());
}

RankMatrix dependence_template(const EnsembleDataset& raw,
                               std::uint64_t seed) {
  const int M = raw.members();
  const int L = raw.num_margins();
  RankMatrix tmpl(M, L);
#pragma omp parallel for schedule(static)
  for (int l = 0; l < L; ++l) {
    auto rk = column_ranks(raw.margin_values(l), TiePolicy::random(seed), l);
    for (int m = 0; m < M; ++m) tmpl.set(m, l, rk[m]);
  }
  return tmpl;
}

std::vector<double> marginal_samples(const PredictiveMargin& f, int M,
                                     const SamplingScheme& scheme,
                                     std::uint64_t stream) {
  if (M < 1) throw ValidationError("marginal_samples requires M >= 1");
  std::vector<double> out(static_cast<std::size_t>(M));
  if (scheme.kind == SamplingScheme::kQuantiles) {
    for (int m = 1; m <= M; ++m)
      out[m - 1] = f.quantile((m - 0.5) / M);
  } else {
    Rng rng = make_rng(scheme.seed, stream);
    for (auto& x : out) {
      // Uniform in (0,1): 53 random bits shifted into the open interval.
      const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
      x = f.quantile(u);
    }
    std::sort(out.begin(), out.end());
  }
  return out;
}

EnsembleDataset ecc_reorder(const RankMatrix& tmpl,
                            std::span<const std::vector<double>> samples,
                            std::vector<MarginId> margin_ids) {
  const int M = tmpl.members();
  const int L = tmpl.dimension();
  if (static_cast<int>(samples.size()) != L ||
      static_cast<int>(margin_ids.size()) != L)
    throw ValidationError("ecc_reorder: need one sample list and id per margin");
  for (int l = 0; l < L; ++l) {
    if (static_cast<int>(samples[l].size()) != M)
      throw ValidationError("ecc_reorder: sample list " + std::to_string(l + 1) +
                            " must hold M values");
    if (!std::is_sorted(samples[l].begin(), samples[l].end()))
      throw ValidationError("ecc_reorder: sample list " + std::to_string(l + 1) +
                            " must be sorted");
  }
  tmpl.validate();

  std::vector<double> values(static_cast<std::size_t>(M) * L);
#pragma omp parallel for schedule(static)
  for (int l = 0; l < L; ++l) {
    double* col = values.data() + static_cast<std::size_t>(l) * M;
    for (int m = 0; m < M; ++m) col[m] = samples[l][tmpl(m, l) - 1];
  }
  return EnsembleDataset(std::move(margin_ids), M, std::move(values));
}

PreservationReport verify_copula_preservation(const EnsembleDataset& raw,
                                              const EnsembleDataset& ecc,
                                              std::uint64_t seed) {
  if (raw.members() != ecc.members() ||
      raw.num_margins() != ecc.num_margins())
    throw ValidationError("verify_copula_preservation: shape mismatch");
  const int M = raw.members();
  const int L = raw.num_margins();
  const RankMatrix tmpl = dependence_template(raw, seed);

  PreservationReport report;
  report.preserved = true;
  for (int l = 0; l < L; ++l) {
    auto col = ecc.margin_values(l);
    std::vector<double> sorted(col.begin(), col.end());
    std::sort(sorted.begin(), sorted.end());
    const bool ties =
        std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
    bool ok;
    if (!ties) {
      auto rk = column_ranks(col, TiePolicy::first_occurrence(), l);
      ok = true;
      for (int m = 0; m < M; ++m)
        if (rk[m] != tmpl(m, l)) {
          ok = false;
          break;
        }
    } else {
      // With tied values, the template is an admissible ranking iff
      // applying it to the order statistics reproduces the column.
      report.tied_margins.push_back(l);
      ok = true;
      for (int m = 0; m < M; ++m)
        if (sorted[static_cast<std::size_t>(tmpl(m, l) - 1)] !=
            ecc.value(m, l)) {
          ok = false;
          break;
        }
    }
    if (!ok) {
      report.preserved = false;
      report.mismatched_margins.push_back(l);
    }
  }
  return report;
}

EccResult run_ecc(const EnsembleDataset& raw,
                  std::span<const PredictiveMargin> margins,
                  const SamplingScheme& scheme, std::uint64_t seed) {
  const int M = raw.members();
  const int L = raw.num_margins();
  if (static_cast<int>(margins.size()) != L)
    throw ValidationError("run_ecc: margin list does not match the raw margins");

  const RankMatrix tmpl = dependence_template(raw, seed);

  std::vector<std::vector<double>> samples(static_cast<std::size_t>(L));
#pragma omp parallel for schedule(static)
  for (int l = 0; l < L; ++l)
    samples[l] = marginal_samples(margins[l], M, scheme,
                                  static_cast<std::uint64_t>(l));

  EnsembleDataset out =
      ecc_reorder(tmpl, samples, raw.margin_ids());

  EccResult result{std::move(out), {}};
  result.report.preservation =
      verify_copula_preservation(raw, result.ensemble, seed);
  result.report.template_hash = template_hash(tmpl);
  result.report.per_margin.reserve(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l)
    result.report.per_margin.push_back(
        {raw.margin_ids()[l], samples[l].front(), samples[l].back()});
  return result;
}

std::string template_hash(const RankMatrix& tmpl) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffULL;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(tmpl.members()));
  mix(static_cast<std::uint64_t>(tmpl.dimension()));
  for (int r : tmpl.ranks()) mix(static_cast<std::uint64_t>(r));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace discop
