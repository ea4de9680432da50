#include "discop/sklar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "discop/error.hpp"
#include "discop/indexing.hpp"

namespace discop {

StepCDF::StepCDF(int M, std::vector<double> support, std::vector<int> levels)
    : M_(M), support_(std::move(support)), levels_(std::move(levels)) {
  if (M_ < 1) throw ValidationError("step cdf requires M >= 1");
  if (support_.empty() || support_.size() != levels_.size())
    throw ValidationError("step cdf needs matching nonempty support/levels");
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (!std::isfinite(support_[i]))
      throw ValidationError("step cdf support must be finite");
    if (i > 0 && !(support_[i - 1] < support_[i]))
      throw ValidationError("step cdf support must be strictly increasing");
    if (levels_[i] < 0 || levels_[i] > M_)
      throw ValidationError("step cdf level out of range [0, M]");
    if (i > 0 && levels_[i - 1] > levels_[i])
      throw ValidationError("step cdf levels must be non-decreasing");
  }
  if (levels_.back() != M_)
    throw ValidationError("step cdf final level must equal M");
}

int StepCDF::level_at(double x) const {
  if (std::isnan(x)) throw ValidationError("cdf argument is NaN");
  // Last support point <= x (right-continuous).
  auto it = std::upper_bound(support_.begin(), support_.end(), x);
  if (it == support_.begin()) return 0;
  return levels_[static_cast<std::size_t>(it - support_.begin()) - 1];
}

std::vector<int> StepCDF::range_domain() const {
  std::vector<int> dom;
  dom.push_back(0);
  for (int lv : levels_)
    if (dom.back() != lv) dom.push_back(lv);
  return dom;
}

DiscreteJointDistribution::DiscreteJointDistribution(
    int M, std::vector<std::vector<double>> supports,
    std::vector<std::int64_t> counts)
    : M_(M), supports_(std::move(supports)), counts_(std::move(counts)) {
  if (M_ < 1 || supports_.empty())
    throw ValidationError("joint distribution requires M >= 1 and L >= 1");
  std::size_t total = 1;
  for (std::size_t l = 0; l < supports_.size(); ++l) {
    const auto& s = supports_[l];
    if (s.empty())
      throw ValidationError("joint support " + std::to_string(l + 1) +
                            " is empty");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!std::isfinite(s[i]))
        throw ValidationError("joint support must be finite");
      if (i > 0 && !(s[i - 1] < s[i]))
        throw ValidationError("joint support must be strictly increasing");
    }
    if (total > kMaxDenseEntries / s.size())
      throw ValidationError("dense size guard: joint support grid too large");
    total *= s.size();
  }
  if (counts_.size() != total)
    throw ValidationError("joint mass count does not match the support grid");
  std::int64_t sum = 0;
  for (std::int64_t c : counts_) {
    if (c < 0) throw ValidationError("joint masses must be nonnegative");
    sum += c;
  }
  if (sum != M_)
    throw ValidationError("joint masses must sum to 1 (counts to M)");

  // CDF counts on the closed grid (size n_l + 1 per axis, index 0 =
  // nothing included), built with one running-sum pass per axis.
  const int L = dimension();
  prefix_sizes_.resize(L);
  std::size_t ptotal = 1;
  for (int l = 0; l < L; ++l) {
    prefix_sizes_[l] = static_cast<int>(supports_[l].size()) + 1;
    ptotal *= static_cast<std::size_t>(prefix_sizes_[l]);
  }
  prefix_.assign(ptotal, 0);

  std::vector<int> idx(L, 0);
  std::size_t lin = 0;
  bool more = true;
  while (more) {
    std::size_t p = 0;
    for (int l = 0; l < L; ++l)
      p = p * static_cast<std::size_t>(prefix_sizes_[l]) +
          static_cast<std::size_t>(idx[l] + 1);
    prefix_[p] = counts_[lin++];
    more = false;
    for (int l = L - 1; l >= 0; --l) {
      if (idx[l] + 1 < static_cast<int>(supports_[l].size())) {
        ++idx[l];
        more = true;
        break;
      }
      idx[l] = 0;
    }
  }

  for (int axis = L - 1; axis >= 0; --axis) {
    std::size_t stride = 1;
    for (int l = L - 1; l > axis; --l)
      stride *= static_cast<std::size_t>(prefix_sizes_[l]);
    const std::size_t base = static_cast<std::size_t>(prefix_sizes_[axis]);
    const std::size_t block = stride * base;
    const std::size_t nblocks = ptotal / block;
    for (std::size_t b = 0; b < nblocks; ++b) {
      for (std::size_t i = 0; i < stride; ++i) {
        std::int64_t* line = prefix_.data() + b * block + i;
        std::int64_t acc = 0;
        for (std::size_t k = 0; k < base; ++k) {
          acc += line[k * stride];
          line[k * stride] = acc;
        }
      }
    }
  }
}

DiscreteJointDistribution DiscreteJointDistribution::from_masses(
    int M, std::vector<std::vector<double>> supports,
    std::span<const double> masses, double tol) {
  std::vector<std::int64_t> counts(masses.size());
  for (std::size_t i = 0; i < masses.size(); ++i) {
    const double scaled = masses[i] * M;
    const double rounded = std::round(scaled);
    if (!(std::abs(scaled - rounded) <= tol * M))
      throw ValidationError("mass " + std::to_string(masses[i]) +
                            " is not representable at resolution M = " +
                            std::to_string(M));
    if (rounded < 0.0)
      throw ValidationError("joint masses must be nonnegative");
    counts[i] = static_cast<std::int64_t>(rounded);
  }
  return DiscreteJointDistribution(M, std::move(supports), std::move(counts));
}

StepCDF DiscreteJointDistribution::margin(int axis) const {
  const int L = dimension();
  if (axis < 0 || axis >= L)
    throw ValidationError("margin axis out of range");
  const auto& sup = supports_[axis];
  std::vector<std::int64_t> marg(sup.size(), 0);

  std::vector<int> idx(L, 0);
  std::size_t lin = 0;
  bool more = true;
  while (more) {
    marg[idx[axis]] += counts_[lin++];
    more = false;
    for (int l = L - 1; l >= 0; --l) {
      if (idx[l] + 1 < static_cast<int>(supports_[l].size())) {
        ++idx[l];
        more = true;
        break;
      }
      idx[l] = 0;
    }
  }

  std::vector<int> levels(sup.size());
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < sup.size(); ++i) {
    acc += marg[i];
    levels[i] = static_cast<int>(acc);
  }
  return StepCDF(M_, sup, std::move(levels));
}

std::int64_t DiscreteJointDistribution::cdf_count(
    std::span<const double> x) const {
  const int L = dimension();
  if (static_cast<int>(x.size()) != L)
    throw ValidationError("cdf point has wrong dimension");
  std::size_t p = 0;
  for (int l = 0; l < L; ++l) {
    if (std::isnan(x[l])) throw ValidationError("cdf argument is NaN");
    const auto& sup = supports_[l];
    auto it = std::upper_bound(sup.begin(), sup.end(), x[l]);
    p = p * static_cast<std::size_t>(prefix_sizes_[l]) +
        static_cast<std::size_t>(it - sup.begin());
  }
  return prefix_[p];
}

ComposedJointCdf::ComposedJointCdf(GridFunction copula,
                                   std::vector<StepCDF> margins, double eps)
    : copula_(std::move(copula)), margins_(std::move(margins)) {
  if (static_cast<int>(margins_.size()) != copula_.dimension())
    throw ValidationError("compose needs one margin per copula axis");
  for (const auto& m : margins_)
    if (m.resolution() != copula_.resolution())
      throw ValidationError(
          "margin resolution does not match the copula resolution");
  AxiomReport rep = check_discrete_copula(copula_, eps);
  if (!rep.passed)
    throw ValidationError("compose: copula fails D1/D2/D3:\n" + to_text(rep));
  if (!is_irreducible(copula_, eps))
    throw ValidationError("compose requires an irreducible discrete copula");
}

double ComposedJointCdf::operator()(std::span<const double> x) const {
  const int L = copula_.dimension();
  if (static_cast<int>(x.size()) != L)
    throw ValidationError("cdf point has wrong dimension");
  std::vector<int> levels(L);
  for (int l = 0; l < L; ++l) levels[l] = margins_[l].level_at(x[l]);
  return copula_(levels);
}

DiscreteJointDistribution ComposedJointCdf::materialize() const {
  const int L = copula_.dimension();
  const int M = copula_.resolution();

  std::vector<std::vector<double>> supports;
  supports.reserve(margins_.size());
  for (const auto& m : margins_) supports.push_back(m.support());

  std::vector<int> sizes(L);
  std::size_t total = 1;
  for (int l = 0; l < L; ++l) {
    sizes[l] = static_cast<int>(supports[l].size());
    total *= static_cast<std::size_t>(sizes[l]);
  }

  // Mass of a support cell is the copula volume of its level box.
  std::vector<std::int64_t> counts;
  counts.reserve(total);
  std::vector<int> idx(L, 0);
  std::vector<int> lo(L), hi(L);
  bool more = true;
  while (more) {
    for (int l = 0; l < L; ++l) {
      hi[l] = margins_[l].levels()[idx[l]];
      lo[l] = idx[l] > 0 ? margins_[l].levels()[idx[l] - 1] : 0;
    }
    const double vol = box_volume(copula_, lo, hi) * M;
    const double rounded = std::round(vol);
    if (std::abs(vol - rounded) >= 1e-6 || rounded < 0.0)
      throw ValidationError(
          "materialize: copula volume is not a nonnegative integer over M");
    counts.push_back(static_cast<std::int64_t>(rounded));
    more = false;
    for (int l = L - 1; l >= 0; --l) {
      if (idx[l] + 1 < sizes[l]) {
        ++idx[l];
        more = true;
        break;
      }
      idx[l] = 0;
    }
  }
  return DiscreteJointDistribution(M, std::move(supports), std::move(counts));
}

ExtractResult extract_copula(const DiscreteJointDistribution& j) {
  const int L = j.dimension();
  const int M = j.resolution();

  // Per-axis attained ranges and, for each attained level, a
  // representative support index (any index with that cumulative level
  // gives the same joint CDF; we take the last).
  std::vector<std::vector<int>> domains(L);
  std::vector<std::vector<int>> rep_index(L);  // -1 encodes "below support"
  std::vector<StepCDF> margins;
  margins.reserve(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    margins.push_back(j.margin(l));
    const auto& levels = margins.back().levels();
    domains[l].push_back(0);
    rep_index[l].push_back(-1);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (domains[l].back() != levels[i]) {
        domains[l].push_back(levels[i]);
        rep_index[l].push_back(static_cast<int>(i));
      } else {
        rep_index[l].back() = static_cast<int>(i);
      }
    }
  }

  // Subcopula pinned by H on the product of the ranges, computed as
  // exact CDF counts.
  std::vector<int> sizes(L);
  std::size_t total = 1;
  for (int l = 0; l < L; ++l) {
    sizes[l] = static_cast<int>(domains[l].size());
    total *= static_cast<std::size_t>(sizes[l]);
  }
  std::vector<double> values;
  values.reserve(total);
  std::vector<int> pos(L, 0);
  std::vector<double> point(L);
  bool more = true;
  while (more) {
    for (int l = 0; l < L; ++l) {
      const int rep = rep_index[l][pos[l]];
      point[l] = rep < 0 ? -std::numeric_limits<double>::infinity()
                         : j.supports()[l][static_cast<std::size_t>(rep)];
    }
    values.push_back(static_cast<double>(j.cdf_count(point)) / M);
    more = false;
    for (int l = L - 1; l >= 0; --l) {
      if (pos[l] + 1 < sizes[l]) {
        ++pos[l];
        more = true;
        break;
      }
      pos[l] = 0;
    }
  }

  DiscreteSubcopula sub(M, std::move(domains), std::move(values));
  bool unique = sub.full_domain();
  GridFunction copula = extend_irreducible(sub);
  return ExtractResult{std::move(copula), unique, std::move(sub)};
}

}  // namespace discop
