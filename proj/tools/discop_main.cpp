// Command-line front end: axiom checks, the copula <-> stochastic-array
// conversions, empirical copulas, subcopula extension, both directions of
// the discrete Sklar theorem, the ECC pipeline, and plot-data emission.
//
// Exit codes: 0 success, 1 validation failure, 2 I/O or parse error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "discop/array.hpp"
#include "discop/ecc.hpp"
#include "discop/empirical.hpp"
#include "discop/error.hpp"
#include "discop/grid.hpp"
#include "discop/io.hpp"
#include "discop/sklar.hpp"
#include "discop/subcopula.hpp"

namespace {

using namespace discop;

TiePolicy tie_policy_from_flags(const std::string& ties, bool seed_given,
                                std::uint64_t seed) {
  if (ties == "reject") return TiePolicy::reject();
  if (ties == "first") return TiePolicy::first_occurrence();
  if (ties == "random") {
    if (!seed_given)
      throw ValidationError(
          "--ties random requires an explicit --seed (no implicit seeds)");
    return TiePolicy::random(seed);
  }
  throw ValidationError("unknown tie policy '" + ties +
                        "' (expected reject|first|random)");
}

MarginId parse_margin_id(const std::string& text) {
  const auto a = text.find(',');
  const auto b = text.find(',', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos)
    throw ValidationError("margin id must be 'variable,location,lead_time', got '" +
                          text + "'");
  return MarginId{text.substr(0, a), text.substr(a + 1, b - a - 1),
                  text.substr(b + 1)};
}

int find_margin(const EnsembleDataset& e, const MarginId& id) {
  for (int l = 0; l < e.num_margins(); ++l)
    if (e.margin_ids()[static_cast<std::size_t>(l)] == id) return l;
  throw ValidationError("margin " + id.str() + " not found in the ensemble");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "discop - multivariate discrete copulas on {0,1/M,...,1}^L and "
      "ensemble copula coupling"};
  app.require_subcommand(1);
  int exit_code = 0;

  // ---- check ------------------------------------------------------------
  auto* check = app.add_subcommand(
      "check", "Check the discrete-copula axioms of a grid file "
               "(GRIDFN M=<int> L=<int>, then (M+1)^L values row-major); "
               "exit 0 iff all axioms pass");
  {
    static std::string in;
    static double eps = kDefaultEps;
    static bool as_json = false;
    check->add_option("--in", in, "grid file")->required();
    check->add_option("--eps", eps, "comparison tolerance");
    check->add_flag("--json", as_json, "emit the report as JSON");
    check->callback([&] {
      GridFunction f = io::read_grid(in);
      AxiomReport rep = check_discrete_copula(f, eps);
      std::cout << (as_json ? io::axiom_report_to_json(rep) : to_text(rep));
      if (!rep.passed) exit_code = 1;
    });
  }

  // ---- to-array / from-array ---------------------------------------------
  auto* toarr = app.add_subcommand(
      "to-array", "Convert a copula grid file to its stochastic array "
                  "(STOCHARR M=<int> L=<int>, then M^L values row-major)");
  {
    static std::string in, out;
    static double eps = kDefaultEps;
    toarr->add_option("--in", in, "grid file")->required();
    toarr->add_option("--out", out, "array file")->required();
    toarr->add_option("--eps", eps, "axiom tolerance");
    toarr->callback([&] {
      io::write_array(out, array_from_copula(io::read_grid(in), eps));
      std::cout << "wrote " << out << "\n";
    });
  }

  auto* fromarr = app.add_subcommand(
      "from-array", "Convert a stochastic array file to its copula grid");
  {
    static std::string in, out;
    static double eps = kDefaultEps;
    fromarr->add_option("--in", in, "array file")->required();
    fromarr->add_option("--out", out, "grid file")->required();
    fromarr->add_option("--eps", eps, "axiom tolerance");
    fromarr->callback([&] {
      io::write_grid(out, copula_from_array(io::read_array(in), eps));
      std::cout << "wrote " << out << "\n";
    });
  }

  // ---- empirical ----------------------------------------------------------
  auto* emp = app.add_subcommand(
      "empirical", "Empirical copula and rank matrix of a sample CSV "
                   "(header 'm,dim1,...,dimL', one row per point)");
  {
    static std::string in, grid_out, ranks_out, ties = "reject";
    static std::uint64_t seed = 0;
    static bool seed_given = false;
    emp->add_option("--in", in, "sample CSV")->required();
    emp->add_option("--grid-out", grid_out, "output grid file");
    emp->add_option("--ranks-out", ranks_out, "output rank-matrix file "
                    "(RANKMAT M=<int> L=<int>, then M lines of L integers)");
    emp->add_option("--ties", ties, "tie policy: reject|first|random");
    emp->add_option("--seed", seed, "seed for --ties random")
        ->each([&](const std::string&) { seed_given = true; });
    emp->callback([&] {
      if (grid_out.empty() && ranks_out.empty())
        throw ValidationError("need --grid-out and/or --ranks-out");
      SampleSet s = io::read_samples_csv(in);
      TiePolicy policy = tie_policy_from_flags(ties, seed_given, seed);
      if (!ranks_out.empty()) {
        io::write_rank_matrix(ranks_out, ranks(s, policy));
        std::cout << "wrote " << ranks_out << "\n";
      }
      if (!grid_out.empty()) {
        io::write_grid(grid_out, empirical_copula(s, policy));
        std::cout << "wrote " << grid_out << "\n";
      }
    });
  }

  // ---- extend --------------------------------------------------------------
  auto* ext = app.add_subcommand(
      "extend", "Extend an irreducible discrete subcopula file "
                "(SUBCOP M=<int> L=<int>, L domain lines, then values) to a "
                "full irreducible discrete copula grid");
  {
    static std::string in, out;
    static double eps = kDefaultEps;
    ext->add_option("--in", in, "subcopula file")->required();
    ext->add_option("--out", out, "output grid file")->required();
    ext->add_option("--eps", eps, "axiom tolerance");
    ext->callback([&] {
      io::write_grid(out, extend_irreducible(io::read_subcopula(in), eps));
      std::cout << "wrote " << out << "\n";
    });
  }

  // ---- sklar-compose / sklar-extract ---------------------------------------
  auto* compose = app.add_subcommand(
      "sklar-compose", "Compose an irreducible copula grid with margin CSVs "
                       "(header 'value,level', one file per axis in order) "
                       "into a joint distribution CSV 'x1,...,xL,mass'");
  {
    static std::string grid, out;
    static std::vector<std::string> margin_files;
    compose->add_option("--grid", grid, "copula grid file")->required();
    compose->add_option("--margin", margin_files,
                        "margin CSV, one per axis in axis order")
        ->required();
    compose->add_option("--out", out, "output joint CSV")->required();
    compose->callback([&] {
      GridFunction d = io::read_grid(grid);
      std::vector<StepCDF> margins;
      margins.reserve(margin_files.size());
      for (const auto& p : margin_files)
        margins.push_back(io::read_margin_csv(p, d.resolution()));
      ComposedJointCdf joint(std::move(d), std::move(margins));
      bool unique = true;
      for (const auto& m : joint.margins())
        unique = unique && static_cast<int>(m.range_domain().size()) ==
                               m.resolution() + 1;
      io::write_joint_csv(out, joint.materialize());
      std::cout << "wrote " << out << "\n"
                << "unique: " << (unique ? "true" : "false")
                << (unique ? ""
                           : " (some margin does not attain all of I_M; the "
                             "copula is not recoverable uniquely)")
                << "\n";
    });
  }

  auto* extract = app.add_subcommand(
      "sklar-extract", "Extract an irreducible copula grid from a joint "
                       "distribution CSV 'x1,...,xL,mass' at resolution M");
  {
    static std::string in, grid_out;
    static int M = 0;
    extract->add_option("--in", in, "joint CSV")->required();
    extract->add_option("--M", M, "grid resolution (masses are multiples of 1/M)")
        ->required();
    extract->add_option("--grid-out", grid_out, "output grid file")->required();
    extract->callback([&] {
      ExtractResult res = extract_copula(io::read_joint_csv(in, M));
      io::write_grid(grid_out, res.copula);
      std::cout << "wrote " << grid_out << "\n"
                << "unique: " << (res.unique ? "true" : "false") << "\n";
    });
  }

  // ---- ecc -------------------------------------------------------------------
  auto* ecc = app.add_subcommand(
      "ecc", "Run ensemble copula coupling: raw ensemble CSV (header "
             "'variable,location,lead_time,member,value') + margins JSON -> "
             "output CSV with an ecc_value column + report JSON");
  {
    static std::string raw_path, margins_path, out, report_path,
        scheme_name = "quantiles";
    static std::uint64_t seed = 0;
    ecc->add_option("--raw", raw_path, "raw ensemble CSV")->required();
    ecc->add_option("--margins", margins_path,
                    "margins config JSON: array of {variable, location, "
                    "lead_time, dist:{type:gaussian|empirical,...}}")
        ->required();
    ecc->add_option("--out", out, "output ensemble CSV")->required();
    ecc->add_option("--report", report_path, "output report JSON")->required();
    ecc->add_option("--scheme", scheme_name,
                    "sampling scheme: quantiles|random");
    ecc->add_option("--seed", seed,
                    "seed for tie resolution and random draws (required; "
                    "randomized behavior never uses an implicit seed)")
        ->required();
    ecc->callback([&] {
      EnsembleDataset raw = io::read_ensemble_csv(raw_path);
      auto configured = io::read_margins_json(margins_path);

      std::vector<PredictiveMargin> margins;
      margins.reserve(static_cast<std::size_t>(raw.num_margins()));
      for (const auto& id : raw.margin_ids()) {
        const PredictiveMargin* found = nullptr;
        for (const auto& [cid, margin] : configured)
          if (cid == id) {
            if (found)
              throw ValidationError("margin " + id.str() +
                                    " configured twice in " + margins_path);
            found = &margin;
          }
        if (!found)
          throw ValidationError("margin " + id.str() + " of " + raw_path +
                                " has no entry in " + margins_path);
        margins.push_back(*found);
      }
      if (configured.size() !=
          static_cast<std::size_t>(raw.num_margins()))
        throw ValidationError(
            "margins config lists margins that are not in the raw ensemble");

      SamplingScheme scheme;
      if (scheme_name == "quantiles") {
        scheme = SamplingScheme::quantiles();
      } else if (scheme_name == "random") {
        scheme = SamplingScheme::random_draws(seed);
      } else {
        throw ValidationError("unknown scheme '" + scheme_name +
                              "' (expected quantiles|random)");
      }

      EccResult res = run_ecc(raw, margins, scheme, seed);
      io::write_ecc_csv(out, raw, res.ensemble);
      io::write_ecc_report_json(report_path, res.report);
      std::cout << "wrote " << out << "\n"
                << "wrote " << report_path << "\n"
                << "copula preserved: "
                << (res.report.preservation.preserved ? "true" : "false")
                << "\n";
    });
  }

  // ---- plot-data ----------------------------------------------------------
  auto* plot = app.add_subcommand(
      "plot-data", "Emit plotting data for two margins of an ensemble CSV: "
                   "a scatter CSV 'member,x,y' and the bivariate empirical "
                   "copula as a CSV 'i,j,value'");
  {
    static std::string in, column = "value", margin_x, margin_y, scatter_out,
                       grid_out, ties = "reject";
    static std::uint64_t seed = 0;
    static bool seed_given = false;
    plot->add_option("--in", in, "ensemble CSV (raw or ECC output)")
        ->required();
    plot->add_option("--column", column, "value column: value|ecc_value");
    plot->add_option("--margin-x", margin_x,
                     "first margin as 'variable,location,lead_time'")
        ->required();
    plot->add_option("--margin-y", margin_y, "second margin")->required();
    plot->add_option("--scatter-out", scatter_out, "scatter CSV path")
        ->required();
    plot->add_option("--grid-out", grid_out, "copula grid CSV path")
        ->required();
    plot->add_option("--ties", ties, "tie policy: reject|first|random");
    plot->add_option("--seed", seed, "seed for --ties random")
        ->each([&](const std::string&) { seed_given = true; });
    plot->callback([&] {
      EnsembleDataset e = io::read_ensemble_csv(in, column);
      const int lx = find_margin(e, parse_margin_id(margin_x));
      const int ly = find_margin(e, parse_margin_id(margin_y));
      const int M = e.members();

      std::string scatter = "member,x,y\n";
      for (int m = 0; m < M; ++m) {
        scatter += std::to_string(m + 1) + "," + io::render(e.value(m, lx)) +
                   "," + io::render(e.value(m, ly)) + "\n";
      }
      std::ofstream sf(scatter_out, std::ios::binary);
      if (!sf) throw discop::ParseError("cannot write " + scatter_out);
      sf << scatter;

      SampleSet s;
      s.M = M;
      s.L = 2;
      s.points.resize(static_cast<std::size_t>(M) * 2);
      for (int m = 0; m < M; ++m) {
        s.points[static_cast<std::size_t>(m) * 2] = e.value(m, lx);
        s.points[static_cast<std::size_t>(m) * 2 + 1] = e.value(m, ly);
      }
      TiePolicy policy = tie_policy_from_flags(ties, seed_given, seed);
      GridFunction cop = empirical_copula(s, policy);

      std::string grid = "i,j,value\n";
      for (int i = 0; i <= M; ++i)
        for (int j = 0; j <= M; ++j) {
          const int idx[2] = {i, j};
          grid += std::to_string(i) + "," + std::to_string(j) + "," +
                  io::render(cop(idx)) + "\n";
        }
      std::ofstream gf(grid_out, std::ios::binary);
      if (!gf) throw discop::ParseError("cannot write " + grid_out);
      gf << grid;

      std::cout << "wrote " << scatter_out << "\n"
                << "wrote " << grid_out << "\n";
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // bad usage is a validation failure
  } catch (const discop::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const discop::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
