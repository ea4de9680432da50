#ifndef DISCOP_ECC_HPP_
#define DISCOP_ECC_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "discop/array.hpp"
#include "discop/empirical.hpp"

namespace discop {

// One margin of the multivariate forecast vector: a (variable, location,
// lead time) triple.  Unique within a dataset.
struct MarginId {
  std::string variable;
  std::string location;
  std::string lead_time;

  bool operator==(const MarginId& other) const = default;
  std::string str() const {
    return variable + "/" + location + "/" + lead_time;
  }
};

// An M-member ensemble over L margins.  Values are stored margin-major so
// per-margin work touches contiguous memory; the pipeline never allocates
// anything beyond O(M*L).
class EnsembleDataset {
 public:
  EnsembleDataset(std::vector<MarginId> margins, int members,
                  std::vector<double> values);  // margin-major LxM

  int members() const { return members_; }
  int num_margins() const { return static_cast<int>(margins_.size()); }
  const std::vector<MarginId>& margin_ids() const { return margins_; }

  double value(int member, int margin) const {
    return values_[static_cast<std::size_t>(margin) * members_ +
                   static_cast<std::size_t>(member)];
  }
  std::span<const double> margin_values(int margin) const {
    return {values_.data() + static_cast<std::size_t>(margin) * members_,
            static_cast<std::size_t>(members_)};
  }

  bool operator==(const EnsembleDataset& other) const = default;

 private:
  std::vector<MarginId> margins_;
  int members_;
  std::vector<double> values_;
};

// A calibrated univariate predictive distribution: either gaussian or the
// empirical distribution of a finite sample.  Exposes quantile and cdf.
class PredictiveMargin {
 public:
  static PredictiveMargin gaussian(double mean, double sd);
  static PredictiveMargin empirical(std::vector<double> samples);

  // p in (0, 1).  The empirical quantile is the ceil(p*N)-th sorted
  // sample (inverse of the right-continuous empirical CDF), so with
  // p = (m-1/2)/M and N = M it returns the m-th order statistic exactly.
  double quantile(double p) const;
  double cdf(double x) const;

  bool is_gaussian() const { return gaussian_; }
  double mean() const { return mean_; }
  double sd() const { return sd_; }
  const std::vector<double>& samples() const { return samples_; }

 private:
  PredictiveMargin() = default;
  bool gaussian_ = false;
  double mean_ = 0.0;
  double sd_ = 1.0;
  std::vector<double> samples_;  // sorted
};

// How the M univariate samples are produced from each predictive margin.
// kQuantiles takes the equally spaced (m-1/2)/M quantiles (the default);
// kRandomDraws inverts seeded uniforms.
struct SamplingScheme {
  enum Kind { kQuantiles, kRandomDraws };
  Kind kind = kQuantiles;
  std::uint64_t seed = 0;

  static SamplingScheme quantiles() { return {kQuantiles, 0}; }
  static SamplingScheme random_draws(std::uint64_t seed) {
    return {kRandomDraws, seed};
  }
};

// Column l holds the rank permutation of margin l of the raw ensemble,
// ties resolved at random per (seed, margin index).  Margins are ranked
// independently and may run concurrently.
RankMatrix dependence_template(const EnsembleDataset& raw,
                               std::uint64_t seed);

// M sorted samples drawn from the margin under the scheme; `stream`
// selects the per-margin RNG stream for random draws.
std::vector<double> marginal_samples(const PredictiveMargin& f, int M,
                                     const SamplingScheme& scheme,
                                     std::uint64_t stream = 0);

// The reordering step: member m of margin l takes the (template(m,l))-th
// order statistic of that margin's samples, which imprints the raw rank
// dependence onto the new margins.
EnsembleDataset ecc_reorder(const RankMatrix& tmpl,
                            std::span<const std::vector<double>> samples,
                            std::vector<MarginId> margin_ids);

struct PreservationReport {
  bool preserved = false;
  // Margins whose sample values contain duplicates; there the template
  // is only one admissible ranking, so template equality is replaced by
  // consistency with the template.
  std::vector<int> tied_margins;
  std::vector<int> mismatched_margins;
};

// True iff the reordered ensemble carries the same rank dependence (the
// same empirical copula) as the raw one, with raw ties resolved by seed.
PreservationReport verify_copula_preservation(const EnsembleDataset& raw,
                                              const EnsembleDataset& ecc,
                                              std::uint64_t seed);

struct MarginSummary {
  MarginId id;
  double min = 0.0;
  double max = 0.0;
};

struct EccReport {
  PreservationReport preservation;
  std::string template_hash;
  std::vector<MarginSummary> per_margin;
};

struct EccResult {
  EnsembleDataset ensemble;
  EccReport report;
};

// The full pipeline: template extraction, per-margin sampling, and
// reordering, with a preservation verdict.  `margins` must align with
// raw.margin_ids().  Per-margin random streams derive from (seed, margin
// index), so parallel and serial runs produce identical output.
EccResult run_ecc(const EnsembleDataset& raw,
                  std::span<const PredictiveMargin> margins,
                  const SamplingScheme& scheme, std::uint64_t seed);

// FNV-1a over the rank entries, as a 16-digit hex string.
std::string template_hash(const RankMatrix& tmpl);

}  // namespace discop

#endif  // DISCOP_ECC_HPP_
