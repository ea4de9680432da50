// Benchmark of the OpenMP kernels against the serial reference
// implementations.  Also verifies that both paths produce identical bits,
// which is the contract the tests rely on.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "discop/array.hpp"
#include "discop/ecc.hpp"
#include "discop/kernels.hpp"
#include "discop/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double best_ms(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = Clock::now();
    fn();
    auto t1 = Clock::now();
    best = std::min(best,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, const std::string& size, double serial_ms,
            double omp_ms, bool equal) {
  std::printf("%-18s %-18s %10.2f ms %10.2f ms %7.2fx   %s\n", name,
              size.c_str(), serial_ms, omp_ms, serial_ms / omp_ms,
              equal ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  int M = 100;
  int L = 3;
  int members = 50;
  int margins = 20000;
  int reps = 5;

  CLI::App app{"discop kernel benchmark: serial reference vs OpenMP"};
  app.add_option("--M", M, "grid resolution for the grid kernels");
  app.add_option("--L", L, "dimension for the grid kernels");
  app.add_option("--members", members, "ensemble members for the ECC run");
  app.add_option("--margins", margins, "ensemble margins for the ECC run");
  app.add_option("--reps", reps, "repetitions (best time is reported)");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run serially\n");
#endif
  std::printf("%-18s %-18s %13s %13s %9s\n", "kernel", "size", "serial",
              "openmp", "speedup");

  const std::string gsize =
      "M=" + std::to_string(M) + " L=" + std::to_string(L);

  // Random cell masses; A1/A2 do not matter for kernel timing.
  discop::Rng rng = discop::make_rng(7, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t ncells = 1;
  for (int l = 0; l < L; ++l) ncells *= static_cast<std::size_t>(M);
  std::vector<double> cells(ncells);
  for (auto& c : cells) c = unit(rng);

  std::vector<double> grid_serial, grid_omp;
  {
    double ts = best_ms(reps, [&] {
      grid_serial = discop::kernels::serial::prefix_grid(cells, M, L);
    });
    double tp = best_ms(
        reps, [&] { grid_omp = discop::kernels::prefix_grid(cells, M, L); });
    report("prefix_grid", gsize, ts, tp, grid_serial == grid_omp);
  }

  {
    std::vector<double> vol_serial, vol_omp;
    double ts = best_ms(reps, [&] {
      vol_serial = discop::kernels::serial::cell_volumes(grid_serial, M, L);
    });
    double tp = best_ms(reps, [&] {
      vol_omp = discop::kernels::cell_volumes(grid_omp, M, L);
    });
    report("cell_volumes", gsize, ts, tp, vol_serial == vol_omp);
  }

  {
    // Dominance counting works on rank matrices; L=2 keeps the grid flat
    // and the member loop hot.
    const int RM = 200;
    discop::RankMatrix rm = discop::random_rank_matrix(RM, 2, 11);
    std::vector<std::int64_t> c_serial, c_omp;
    double ts = best_ms(reps, [&] {
      c_serial = discop::kernels::serial::dominance_counts(rm.ranks(), RM, 2);
    });
    double tp = best_ms(reps, [&] {
      c_omp = discop::kernels::dominance_counts(rm.ranks(), RM, 2);
    });
    report("dominance_counts", "M=200 L=2", ts, tp, c_serial == c_omp);
  }

  {
    // Full ECC pipeline; margins are processed independently, so this
    // exercises the per-margin parallel loop end to end.
    std::vector<discop::MarginId> ids;
    ids.reserve(static_cast<std::size_t>(margins));
    for (int l = 0; l < margins; ++l)
      ids.push_back({"v", "loc" + std::to_string(l), "0"});
    std::vector<double> values(
        static_cast<std::size_t>(members) * static_cast<std::size_t>(margins));
    for (auto& v : values) v = unit(rng);
    discop::EnsembleDataset raw(ids, members, values);
    std::vector<discop::PredictiveMargin> pm(
        static_cast<std::size_t>(margins),
        discop::PredictiveMargin::gaussian(0.0, 1.0));

    discop::EccResult out1 =
        discop::run_ecc(raw, pm, discop::SamplingScheme::quantiles(), 3);
    double tp = best_ms(reps, [&] {
      out1 = discop::run_ecc(raw, pm, discop::SamplingScheme::quantiles(), 3);
    });
    std::printf("%-18s %-18s %13s %10.2f ms\n", "run_ecc",
                ("M=" + std::to_string(members) +
                 " L=" + std::to_string(margins))
                    .c_str(),
                "-", tp);
  }

  return 0;
}
