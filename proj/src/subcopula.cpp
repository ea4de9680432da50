#include "discop/subcopula.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "discop/array.hpp"
#include "discop/error.hpp"
#include "discop/indexing.hpp"

namespace discop {

namespace {

// Odometer over domain positions, per-axis sizes; row-major.
bool next_pos(std::vector<int>& pos, std::span<const int> sizes) {
  for (int l = static_cast<int>(pos.size()) - 1; l >= 0; --l) {
    if (pos[l] + 1 < sizes[l]) {
      ++pos[l];
      return true;
    }
    pos[l] = 0;
  }
  return false;
}

std::vector<int> domain_sizes(const std::vector<std::vector<int>>& domains) {
  std::vector<int> sizes;
  sizes.reserve(domains.size());
  for (const auto& d : domains) sizes.push_back(static_cast<int>(d.size()));
  return sizes;
}

}  // namespace

DiscreteSubcopula::DiscreteSubcopula(int M,
                                     std::vector<std::vector<int>> domains,
                                     std::vector<double> values)
    : M_(M), domains_(std::move(domains)), values_(std::move(values)) {
  if (M_ < 1 || domains_.empty())
    throw ValidationError("subcopula requires M >= 1 and L >= 1");
  std::size_t expect = 1;
  for (std::size_t l = 0; l < domains_.size(); ++l) {
    const auto& d = domains_[l];
    if (d.empty() || d.front() != 0 || d.back() != M_)
      throw ValidationError("domain " + std::to_string(l + 1) +
                            " must contain the endpoints 0 and M");
    for (std::size_t i = 0; i + 1 < d.size(); ++i)
      if (!(d[i] < d[i + 1]))
        throw ValidationError("domain " + std::to_string(l + 1) +
                              " must be strictly increasing");
    if (expect > kMaxDenseEntries / d.size())
      throw ValidationError("dense size guard: subcopula domain too large");
    expect *= d.size();
  }
  if (values_.size() != expect)
    throw ValidationError("subcopula value count " +
                          std::to_string(values_.size()) +
                          " does not match the product domain size " +
                          std::to_string(expect));
}

double DiscreteSubcopula::at_pos(std::span<const int> pos) const {
  std::size_t lin = 0;
  for (std::size_t l = 0; l < domains_.size(); ++l) {
    if (pos[l] < 0 || pos[l] >= static_cast<int>(domains_[l].size()))
      throw ValidationError("subcopula position out of range");
    lin = lin * domains_[l].size() + static_cast<std::size_t>(pos[l]);
  }
  return values_[lin];
}

bool DiscreteSubcopula::full_domain() const {
  return std::all_of(domains_.begin(), domains_.end(), [this](const auto& d) {
    return static_cast<int>(d.size()) == M_ + 1;
  });
}

AxiomReport check_subcopula(const DiscreteSubcopula& ds, double eps) {
  const int M = ds.resolution();
  const int L = ds.dimension();
  const auto sizes = domain_sizes(ds.domains());
  AxiomReport report;

  // Witnesses are reported in grid coordinates (domain values), not
  // domain positions.
  auto coords_of = [&](std::span<const int> pos) {
    std::vector<int> c(L);
    for (int l = 0; l < L; ++l) c[l] = ds.domains()[l][pos[l]];
    return c;
  };

  // S1: grounded on every point with a zero coordinate (position 0 on
  // some axis, since domains are sorted starting at 0).
  {
    std::vector<int> pos(L, 0);
    do {
      if (std::any_of(pos.begin(), pos.end(), [](int p) { return p == 0; })) {
        double v = ds.at_pos(pos);
        if (!(std::abs(v) <= eps))
          report.add({Axiom::S1, coords_of(pos), -1, v, "= 0"});
      }
    } while (next_pos(pos, sizes));
  }

  // S2: margins along each axis, the other coordinates held at M.
  for (int axis = 0; axis < L; ++axis) {
    std::vector<int> pos(L);
    for (int l = 0; l < L; ++l) pos[l] = sizes[l] - 1;
    for (int k = 0; k < sizes[axis]; ++k) {
      pos[axis] = k;
      double want = static_cast<double>(ds.domains()[axis][k]) / M;
      double got = ds.at_pos(pos);
      if (!(std::abs(got - want) <= eps)) {
        std::ostringstream rel;
        rel << "= " << want;
        report.add({Axiom::S2, coords_of(pos), axis, got, rel.str()});
      }
    }
  }

  // S3: every box spanned by adjacent domain points has nonnegative
  // volume.  General domain boxes telescope into these.
  {
    std::vector<int> block(L, 0);
    std::vector<int> blocks(L);
    for (int l = 0; l < L; ++l) blocks[l] = sizes[l] - 1;
    if (*std::min_element(blocks.begin(), blocks.end()) > 0) {
      std::vector<int> corner(L);
      do {
        double vol = 0.0;
        for (std::size_t mask = 0; mask < (std::size_t{1} << L); ++mask) {
          int lowers = 0;
          for (int l = 0; l < L; ++l) {
            if (mask & (std::size_t{1} << l)) {
              corner[l] = block[l] + 1;
            } else {
              corner[l] = block[l];
              ++lowers;
            }
          }
          vol += (lowers % 2 == 0 ? 1.0 : -1.0) * ds.at_pos(corner);
        }
        if (!(vol >= -eps)) {
          std::vector<int> upper(L);
          for (int l = 0; l < L; ++l) upper[l] = ds.domains()[l][block[l] + 1];
          report.add({Axiom::S3, upper, -1, vol, ">= 0"});
        }
      } while (next_pos(block, blocks));
    }
  }

  return report;
}

bool is_irreducible(const DiscreteSubcopula& ds, double eps) {
  const int M = ds.resolution();
  for (double v : ds.values()) {
    double k = std::round(v * M);
    if (!(std::abs(v * M - k) <= eps * M)) return false;
  }
  return true;
}

DiscreteSubcopula restrict_to_domains(const GridFunction& d,
                                      std::vector<std::vector<int>> domains) {
  if (static_cast<int>(domains.size()) != d.dimension())
    throw ValidationError("restriction needs one domain per axis");
  const int L = d.dimension();
  std::vector<int> sizes;
  std::size_t total = 1;
  for (const auto& dom : domains) {
    if (dom.empty() || dom.front() != 0 || dom.back() != d.resolution())
      throw ValidationError("restriction domain must contain 0 and M");
    sizes.push_back(static_cast<int>(dom.size()));
    total *= dom.size();
  }

  std::vector<double> values;
  values.reserve(total);
  std::vector<int> pos(L, 0);
  std::vector<int> coords(L);
  do {
    for (int l = 0; l < L; ++l) coords[l] = domains[l][pos[l]];
    values.push_back(d(coords));
  } while (next_pos(pos, sizes));
  return DiscreteSubcopula(d.resolution(), std::move(domains),
                           std::move(values));
}

std::vector<std::int64_t> block_counts(const DiscreteSubcopula& ds) {
  const int M = ds.resolution();
  const int L = ds.dimension();
  const auto sizes = domain_sizes(ds.domains());

  std::vector<int> blocks(L);
  std::size_t nblocks = 1;
  for (int l = 0; l < L; ++l) {
    blocks[l] = sizes[l] - 1;
    nblocks *= static_cast<std::size_t>(blocks[l]);
  }

  std::vector<std::int64_t> counts;
  counts.reserve(nblocks);
  std::vector<int> block(L, 0);
  std::vector<int> corner(L);
  do {
    double vol = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << L); ++mask) {
      int lowers = 0;
      for (int l = 0; l < L; ++l) {
        if (mask & (std::size_t{1} << l)) {
          corner[l] = block[l] + 1;
        } else {
          corner[l] = block[l];
          ++lowers;
        }
      }
      vol += (lowers % 2 == 0 ? 1.0 : -1.0) * ds.at_pos(corner);
    }
    const double scaled = vol * M;
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) >= 1e-6)
      throw ValidationError(
          "extension infeasible: block volume M*" + std::to_string(vol) +
          " is not an integer (subcopula not irreducible)");
    if (rounded < 0.0)
      throw ValidationError("extension infeasible: negative block volume");
    counts.push_back(static_cast<std::int64_t>(rounded));
  } while (next_pos(block, blocks));

  // Slab identity: counts over any axis slab must sum to the slab width.
  std::vector<std::int64_t> slab(static_cast<std::size_t>(
      *std::max_element(blocks.begin(), blocks.end())));
  for (int axis = 0; axis < L; ++axis) {
    std::fill(slab.begin(), slab.end(), 0);
    std::vector<int> b(L, 0);
    std::size_t lin = 0;
    do {
      slab[b[axis]] += counts[lin++];
    } while (next_pos(b, blocks));
    for (int s = 0; s < blocks[axis]; ++s) {
      const std::int64_t width =
          ds.domains()[axis][s + 1] - ds.domains()[axis][s];
      if (slab[s] != width)
        throw ValidationError(
            "extension infeasible: slab mass does not match slab width on "
            "axis " + std::to_string(axis + 1));
    }
  }
  return counts;
}

GridFunction extend_irreducible(const DiscreteSubcopula& ds, double eps) {
  AxiomReport rep = check_subcopula(ds, eps);
  if (!rep.passed)
    throw ValidationError("extend_irreducible: input fails S1/S2/S3:\n" +
                          to_text(rep));
  if (!is_irreducible(ds, eps))
    throw ValidationError(
        "extend_irreducible: subcopula values are not multiples of 1/M");

  const int M = ds.resolution();
  const int L = ds.dimension();
  const auto counts = block_counts(ds);

  std::vector<int> blocks(L);
  for (int l = 0; l < L; ++l)
    blocks[l] = static_cast<int>(ds.domains()[l].size()) - 1;

  // Per-axis slab cursors: the next unused line of each slab.  Lines of
  // slab s on axis l are domain[l][s]+1 ... domain[l][s+1].
  std::vector<std::vector<int>> next_line(L);
  for (int l = 0; l < L; ++l) {
    next_line[l].resize(static_cast<std::size_t>(blocks[l]));
    for (int s = 0; s < blocks[l]; ++s)
      next_line[l][s] = ds.domains()[l][s] + 1;
  }

  // Visit blocks lexicographically; a block of count c pairs the next c
  // lines of every axis's slab diagonally.
  RankMatrix ranks(M, L);
  std::vector<int> block(L, 0);
  std::size_t lin = 0;
  do {
    const std::int64_t c = counts[lin++];
    for (std::int64_t k = 0; k < c; ++k) {
      const int line1 = next_line[0][block[0]];
      for (int l = 0; l < L; ++l) {
        const int line = next_line[l][block[l]];
        if (line > ds.domains()[l][block[l] + 1])
          throw ValidationError(
              "extension infeasible: slab queue underflow on axis " +
              std::to_string(l + 1));
        ranks.set(line1 - 1, l, line);
        ++next_line[l][block[l]];
      }
    }
  } while (next_pos(block, blocks));

  return copula_from_array(permutation_array_from_rank_matrix(ranks));
}

}  // namespace discop
