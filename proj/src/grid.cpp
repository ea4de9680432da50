#include "discop/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "discop/error.hpp"
#include "discop/indexing.hpp"
#include "discop/kernels.hpp"

namespace discop {

const char* axiom_name(Axiom a) {
  switch (a) {
    case Axiom::D1: return "D1";
    case Axiom::D2: return "D2";
    case Axiom::D3: return "D3";
    case Axiom::S1: return "S1";
    case Axiom::S2: return "S2";
    case Axiom::S3: return "S3";
    case Axiom::A1: return "A1";
    case Axiom::A2: return "A2";
  }
  return "?";
}

GridFunction::GridFunction(int M, int L) : M_(M), L_(L) {
  if (M < 1 || L < 1)
    throw ValidationError("grid requires M >= 1 and L >= 1");
  values_.assign(checked_dense_size(static_cast<std::size_t>(M) + 1, L), 0.0);
}

GridFunction::GridFunction(int M, int L, std::vector<double> values)
    : M_(M), L_(L), values_(std::move(values)) {
  if (M < 1 || L < 1)
    throw ValidationError("grid requires M >= 1 and L >= 1");
  const std::size_t expect =
      checked_dense_size(static_cast<std::size_t>(M) + 1, L);
  if (values_.size() != expect)
    throw ValidationError("grid value count " + std::to_string(values_.size()) +
                          " does not match (M+1)^L = " + std::to_string(expect));
}

namespace {

std::size_t grid_offset(const GridFunction& f, std::span<const int> coords) {
  if (static_cast<int>(coords.size()) != f.dimension())
    throw ValidationError("grid index has wrong dimension");
  for (int c : coords)
    if (c < 0 || c > f.resolution())
      throw ValidationError("grid coordinate out of range [0, M]");
  return linear_index(coords, static_cast<std::size_t>(f.resolution()) + 1);
}

}  // namespace

double GridFunction::operator()(std::span<const int> coords) const {
  return values_[grid_offset(*this, coords)];
}

void GridFunction::set(std::span<const int> coords, double v) {
  values_[grid_offset(*this, coords)] = v;
}

GridFunction product_copula(int M, int L) {
  if (M < 1 || L < 1) throw ValidationError("grid requires M >= 1 and L >= 1");
  std::vector<double> scaled(static_cast<std::size_t>(M) + 1);
  for (int i = 0; i <= M; ++i) scaled[i] = static_cast<double>(i) / M;

  std::vector<int> idx(L, 0);
  std::vector<double> out(checked_dense_size(static_cast<std::size_t>(M) + 1, L));
  std::size_t lin = 0;
  do {
    double v = 1.0;
    for (int l = 0; l < L; ++l) v *= scaled[idx[l]];
    out[lin++] = v;
  } while (next_point(idx, 0, M));
  return GridFunction(M, L, std::move(out));
}

GridFunction min_copula(int M, int L) {
  if (M < 1 || L < 1) throw ValidationError("grid requires M >= 1 and L >= 1");
  std::vector<int> idx(L, 0);
  std::vector<double> out(checked_dense_size(static_cast<std::size_t>(M) + 1, L));
  std::size_t lin = 0;
  do {
    int mn = *std::min_element(idx.begin(), idx.end());
    out[lin++] = static_cast<double>(mn) / M;
  } while (next_point(idx, 0, M));
  return GridFunction(M, L, std::move(out));
}

double box_volume(const GridFunction& f, std::span<const int> lower,
                  std::span<const int> upper) {
  const int L = f.dimension();
  if (static_cast<int>(lower.size()) != L ||
      static_cast<int>(upper.size()) != L)
    throw ValidationError("box corners have wrong dimension");
  for (int l = 0; l < L; ++l) {
    if (lower[l] < 0 || upper[l] > f.resolution())
      throw ValidationError("box corner out of range [0, M]");
    if (lower[l] > upper[l])
      throw ValidationError("box requires lower <= upper componentwise");
  }

  std::vector<int> corner(L);
  double vol = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << L); ++mask) {
    int lowers = 0;
    for (int l = 0; l < L; ++l) {
      if (mask & (std::size_t{1} << l)) {
        corner[l] = upper[l];
      } else {
        corner[l] = lower[l];
        ++lowers;
      }
    }
    vol += (lowers % 2 == 0 ? 1.0 : -1.0) * f(corner);
  }
  return vol;
}

AxiomReport check_discrete_copula(const GridFunction& f, double eps) {
  const int M = f.resolution();
  const int L = f.dimension();
  AxiomReport report;

  // D1: boundary points (some coordinate 0) carry value 0.
  {
    std::vector<int> idx(L, 0);
    std::size_t lin = 0;
    do {
      bool boundary = std::any_of(idx.begin(), idx.end(),
                                  [](int c) { return c == 0; });
      if (boundary) {
        double v = f.values()[lin];
        if (!(std::abs(v) <= eps))
          report.add({Axiom::D1, idx, -1, v, "= 0"});
      }
      ++lin;
    } while (next_point(idx, 0, M));
  }

  // D2: along each axis line through (M,...,M), the value is i/M.
  for (int axis = 0; axis < L; ++axis) {
    std::vector<int> idx(L, M);
    for (int i = 0; i <= M; ++i) {
      idx[axis] = i;
      double want = static_cast<double>(i) / M;
      double got = f(idx);
      if (!(std::abs(got - want) <= eps)) {
        Violation v{Axiom::D2, idx, axis, got, ""};
        std::ostringstream rel;
        rel << "= " << want;
        v.required = rel.str();
        report.add(std::move(v));
      }
    }
  }

  // D3: every unit cell has nonnegative volume.  The cell volumes come
  // from the parallel kernel; the violation scan afterwards is ordered
  // by cell index, so the report is deterministic.
  {
    auto vols = kernels::cell_volumes(f.values(), M, L);
    std::vector<int> cell(L);
    for (std::size_t lin = 0; lin < vols.size(); ++lin) {
      if (!(vols[lin] >= -eps)) {
        decode_index(lin, static_cast<std::size_t>(M), L, cell.data());
        for (int& c : cell) ++c;  // upper corner of the cell
        report.add({Axiom::D3, cell, -1, vols[lin], ">= 0"});
      }
    }
  }

  return report;
}

bool is_irreducible(const GridFunction& f, double eps) {
  const int M = f.resolution();
  for (double v : f.values()) {
    double k = std::round(v * M);
    if (!(std::abs(v * M - k) <= eps * M)) return false;
  }
  return true;
}

std::string to_text(const AxiomReport& report) {
  std::ostringstream out;
  if (report.passed) {
    out << "passed: all axioms hold\n";
    return out.str();
  }
  out << "failed: " << report.violations.size() << " violation(s)\n";
  for (const auto& v : report.violations) {
    out << "  " << axiom_name(v.axiom) << " at (";
    for (std::size_t i = 0; i < v.where.size(); ++i) {
      if (i) out << ",";
      out << v.where[i];
    }
    out << ")";
    if (v.axis >= 0) out << " axis " << (v.axis + 1);
    out << ": observed " << v.observed << ", required " << v.required << "\n";
  }
  return out.str();
}

}  // namespace discop
