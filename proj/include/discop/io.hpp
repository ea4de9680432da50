#ifndef DISCOP_IO_HPP_
#define DISCOP_IO_HPP_

#include <string>
#include <utility>
#include <vector>

#include "discop/array.hpp"
#include "discop/ecc.hpp"
#include "discop/empirical.hpp"
#include "discop/grid.hpp"
#include "discop/sklar.hpp"
#include "discop/subcopula.hpp"

namespace discop::io {

// Shortest decimal rendering that round-trips the exact double; all
// writers below use it, so serialization is bit-exact and deterministic.
std::string render(double v);

// Strict locale-independent parse of a complete token; throws ParseError.
double parse_double(const std::string& token);

// Grid file:    "GRIDFN M=<int> L=<int>", then (M+1)^L values row-major.
// Array file:   "STOCHARR M=<int> L=<int>", then M^L values row-major.
// Rank matrix:  "RANKMAT M=<int> L=<int>", then M lines of L integers.
// Subcopula:    "SUBCOP M=<int> L=<int>", L lines of domain integers,
//               then the values row-major over the product domain.
GridFunction read_grid(const std::string& path);
void write_grid(const std::string& path, const GridFunction& f);

StochasticArray read_array(const std::string& path);
void write_array(const std::string& path, const StochasticArray& a);

RankMatrix read_rank_matrix(const std::string& path);
void write_rank_matrix(const std::string& path, const RankMatrix& r);

DiscreteSubcopula read_subcopula(const std::string& path);
void write_subcopula(const std::string& path, const DiscreteSubcopula& ds);

// Sample CSV with header "m,dim1,...,dimL", one row per sample point.
SampleSet read_samples_csv(const std::string& path);
void write_samples_csv(const std::string& path, const SampleSet& s);

// Joint distribution CSV "x1,...,xL,mass"; rows with zero mass may be
// omitted.  The resolution M is supplied by the caller.
DiscreteJointDistribution read_joint_csv(const std::string& path, int M);
void write_joint_csv(const std::string& path,
                     const DiscreteJointDistribution& j);

// Per-axis margin CSV "value,level" with integer levels over M.
StepCDF read_margin_csv(const std::string& path, int M);
void write_margin_csv(const std::string& path, const StepCDF& f);

// Ensemble CSV with header "variable,location,lead_time,member,value"
// (an extra trailing column is allowed and selected by value_column,
// which is how ECC output files are read back).  Margins appear in order
// of first appearance; members 1..M must each appear exactly once per
// margin; NaN or infinite values are rejected.
EnsembleDataset read_ensemble_csv(const std::string& path,
                                  const std::string& value_column = "value");
void write_ensemble_csv(const std::string& path, const EnsembleDataset& e);

// ECC output: the raw rows plus an ecc_value column, margin-major with
// members ascending.
void write_ecc_csv(const std::string& path, const EnsembleDataset& raw,
                   const EnsembleDataset& ecc);

// Margins config: JSON array of {variable, location, lead_time, dist}
// where dist is {"type":"gaussian","mean":..,"sd":..} or
// {"type":"empirical","samples":[..]}.
std::vector<std::pair<MarginId, PredictiveMargin>> read_margins_json(
    const std::string& path);

// Report JSON {preserved, template_hash, sample_ties, per_margin:[...]}.
void write_ecc_report_json(const std::string& path, const EccReport& report);
std::string ecc_report_to_json(const EccReport& report);

// Axiom report as JSON text.
std::string axiom_report_to_json(const AxiomReport& report);

}  // namespace discop::io

#endif  // DISCOP_IO_HPP_
