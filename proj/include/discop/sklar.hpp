#ifndef DISCOP_SKLAR_HPP_
#define DISCOP_SKLAR_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "discop/grid.hpp"
#include "discop/subcopula.hpp"

namespace discop {

// A univariate step distribution function whose range lies in
// I_M = {0, 1/M, ..., 1}: strictly increasing support points with
// non-decreasing integer cdf levels (k means k/M), final level M.
// Evaluation follows the right-continuous convention P(X <= x).
class StepCDF {
 public:
  StepCDF(int M, std::vector<double> support, std::vector<int> levels);

  int resolution() const { return M_; }
  const std::vector<double>& support() const { return support_; }
  const std::vector<int>& levels() const { return levels_; }

  // Integer level at x: 0 below the support, levels[i] for the last
  // support point <= x.  Handles +/-infinity.
  int level_at(double x) const;
  double cdf(double x) const { return static_cast<double>(level_at(x)) / M_; }

  // The attained range as a sorted set {0} u {levels}, in integer form.
  std::vector<int> range_domain() const;

  bool operator==(const StepCDF& other) const = default;

 private:
  int M_;
  std::vector<double> support_;
  std::vector<int> levels_;
};

// A joint distribution with finite support and all probabilities
// multiples of 1/M (the only shape whose joint CDF can have range inside
// I_M).  Masses are stored as integer counts over M, row-major over the
// product of the per-axis supports, so CDF evaluations are exact.
class DiscreteJointDistribution {
 public:
  DiscreteJointDistribution(int M, std::vector<std::vector<double>> supports,
                            std::vector<std::int64_t> counts);

  // Validates that every mass is within tol of a multiple of 1/M and
  // converts; throws ValidationError ("not representable at resolution
  // M") otherwise.
  static DiscreteJointDistribution from_masses(
      int M, std::vector<std::vector<double>> supports,
      std::span<const double> masses, double tol = 1e-9);

  int resolution() const { return M_; }
  int dimension() const { return static_cast<int>(supports_.size()); }
  const std::vector<std::vector<double>>& supports() const { return supports_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  double mass(std::size_t lin) const {
    return static_cast<double>(counts_[lin]) / M_;
  }

  StepCDF margin(int axis) const;

  // Joint CDF at any real point (+/-infinity allowed), exact as an
  // integer count over M.
  std::int64_t cdf_count(std::span<const double> x) const;
  double cdf(std::span<const double> x) const {
    return static_cast<double>(cdf_count(x)) / M_;
  }

 private:
  int M_;
  std::vector<std::vector<double>> supports_;
  std::vector<std::int64_t> counts_;
  std::vector<std::int64_t> prefix_;  // CDF counts on the closed support grid
  std::vector<int> prefix_sizes_;     // per-axis support size + 1
};

// Forward Sklar direction: H(x) = D(F_1(x_1),...,F_L(x_L)).  D must be an
// irreducible discrete copula whose resolution matches every margin.  The
// evaluator's margins reproduce the F_l and Ran(H) stays inside I_M.
class ComposedJointCdf {
 public:
  ComposedJointCdf(GridFunction copula, std::vector<StepCDF> margins,
                   double eps = kDefaultEps);

  double operator()(std::span<const double> x) const;

  const GridFunction& copula() const { return copula_; }
  const std::vector<StepCDF>& margins() const { return margins_; }

  // The distribution on the product of the margin supports whose CDF is
  // exactly this evaluator.
  DiscreteJointDistribution materialize() const;

 private:
  GridFunction copula_;
  std::vector<StepCDF> margins_;
};

struct ExtractResult {
  GridFunction copula;
  bool unique;  // true iff Ran(F_l) = I_M for every margin
  DiscreteSubcopula subcopula;  // the values pinned by H before extension
};

// Converse Sklar direction: computes the margins of J, forms the
// subcopula on the attained ranges, and extends it to an irreducible
// discrete copula.  The copula is uniquely determined exactly when every
// margin attains all of I_M; otherwise the returned copula is one valid
// extension and `unique` is false.
ExtractResult extract_copula(const DiscreteJointDistribution& j);

}  // namespace discop

#endif  // DISCOP_SKLAR_HPP_
