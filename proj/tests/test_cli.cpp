// Integration tests that drive the discop binary end to end.  The CLI
// path and the fixtures directory arrive as --cli / --fixtures arguments
// (see tests/CMakeLists.txt).

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string g_cli;
std::string g_fixtures;

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

fs::path scratch() {
  fs::path dir = fs::current_path() / "scratch_cli";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return {};
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  REQUIRE(out);
  out << text;
}

RunResult run(const std::string& args) {
  const auto dir = scratch();
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = g_cli + " " + args + " > " + out.string() + " 2> " +
                          err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WEXITSTATUS(status);
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string fixture(const std::string& name) {
  return (fs::path(g_fixtures) / name).string();
}

}  // namespace

TEST_CASE("check: shipped product-copula fixture passes") {
  RunResult r = run("check --in " + fixture("pi_M2_L2.grid"));
  CHECK(r.code == 0);
  CHECK(r.out.find("passed") != std::string::npos);

  RunResult json = run("check --in " + fixture("pi_M2_L2.grid") + " --json");
  CHECK(json.code == 0);
  CHECK(json.out.find("\"passed\": true") != std::string::npos);
}

TEST_CASE("check: axiom failure exits 1, missing file exits 2") {
  const auto dir = scratch();
  const auto bad = dir / "bad.grid";
  spit(bad,
       "GRIDFN M=2 L=2\n0\n0\n0\n0\n0.9\n0.5\n0\n0.5\n1\n");
  RunResult r = run("check --in " + bad.string());
  CHECK(r.code == 1);
  CHECK(r.out.find("D3") != std::string::npos);

  RunResult missing = run("check --in no_such_file.grid");
  CHECK(missing.code == 2);

  const auto garbled = dir / "garbled.grid";
  spit(garbled, "GRIDFN M=2 L=2\n0\nbroken\n");
  CHECK(run("check --in " + garbled.string()).code == 2);
}

TEST_CASE("to-array / from-array round trip is byte-identical") {
  const auto dir = scratch();
  const auto arr = (dir / "pi.arr").string();
  const auto back = (dir / "pi_back.grid").string();
  REQUIRE(run("to-array --in " + fixture("pi_M2_L2.grid") + " --out " + arr)
              .code == 0);
  CHECK(slurp(arr).find("STOCHARR M=2 L=2") == 0);
  REQUIRE(run("from-array --in " + arr + " --out " + back).code == 0);
  CHECK(slurp(back) == slurp(fixture("pi_M2_L2.grid")));
}

TEST_CASE("empirical: grid and ranks from a sample CSV") {
  const auto dir = scratch();
  const auto samples = dir / "samples.csv";
  spit(samples,
       "m,dim1,dim2\n"
       "1,1.0,2.5\n"
       "2,2.0,1.5\n"
       "3,3.0,3.5\n");
  const auto grid = (dir / "emp.grid").string();
  const auto rm = (dir / "emp.ranks").string();
  RunResult r = run("empirical --in " + samples.string() + " --grid-out " +
                    grid + " --ranks-out " + rm);
  REQUIRE(r.code == 0);
  CHECK(slurp(rm) == "RANKMAT M=3 L=2\n1 2\n2 1\n3 3\n");
  // The emitted grid passes check.
  CHECK(run("check --in " + grid).code == 0);

  // Reject policy on a tied column.
  spit(samples, "m,dim1\n1,5\n2,5\n");
  CHECK(run("empirical --in " + samples.string() + " --grid-out " + grid)
            .code == 1);
  // Random policy needs a seed.
  CHECK(run("empirical --in " + samples.string() + " --grid-out " + grid +
            " --ties random")
            .code == 1);
  CHECK(run("empirical --in " + samples.string() + " --grid-out " + grid +
            " --ties random --seed 4")
            .code == 0);
}

TEST_CASE("extend: corner subcopula extends to a full grid") {
  const auto dir = scratch();
  const auto out = (dir / "extended.grid").string();
  RunResult r =
      run("extend --in " + fixture("subcop_corner.txt") + " --out " + out);
  REQUIRE(r.code == 0);
  CHECK(run("check --in " + out).code == 0);
  // The greedy fill picks the diagonal, i.e. the min copula.
  CHECK(slurp(out) == "GRIDFN M=2 L=2\n0\n0\n0\n0\n0.5\n0.5\n0\n0.5\n1\n");
}

TEST_CASE("sklar-extract reports uniqueness; sklar-compose round trips") {
  const auto dir = scratch();
  const auto grid = (dir / "extracted.grid").string();
  RunResult r = run("sklar-extract --in " + fixture("joint_diag.csv") +
                    " --M 3 --grid-out " + grid);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("unique: true") != std::string::npos);
  CHECK(slurp(grid) == slurp(fixture("min_M3_L2.grid")));

  const auto joint = (dir / "composed.csv").string();
  RunResult c = run("sklar-compose --grid " + fixture("min_M3_L2.grid") +
                    " --margin " + fixture("margin_u3_a.csv") + " --margin " +
                    fixture("margin_u3_b.csv") + " --out " + joint);
  REQUIRE(c.code == 0);
  CHECK(c.out.find("unique: true") != std::string::npos);
  CHECK(slurp(joint) ==
        "x1,x2,mass\n"
        "1,10,0.3333333333333333\n"
        "2,20,0.3333333333333333\n"
        "3,30,0.3333333333333333\n");

  // A reduced-range joint is flagged as non-unique.
  const auto reduced = dir / "reduced.csv";
  spit(reduced, "x1,x2,mass\n0,0,0.5\n1,1,0.5\n");
  RunResult nr = run("sklar-extract --in " + reduced.string() +
                     " --M 4 --grid-out " + grid);
  REQUIRE(nr.code == 0);
  CHECK(nr.out.find("unique: false") != std::string::npos);
}

TEST_CASE("ecc: shipped fixture reproduces the hand reordering") {
  const auto dir = scratch();
  const auto out = (dir / "ecc_out.csv").string();
  const auto report = (dir / "ecc_report.json").string();
  RunResult r = run("ecc --raw " + fixture("ecc_raw.csv") + " --margins " +
                    fixture("ecc_margins.json") + " --out " + out +
                    " --report " + report + " --seed 7");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("copula preserved: true") != std::string::npos);
  CHECK(slurp(out) ==
        "variable,location,lead_time,member,value,ecc_value\n"
        "t2m,berlin,24,1,10,20\n"
        "t2m,berlin,24,2,12,22\n"
        "t2m,berlin,24,3,11,21\n"
        "t2m,hamburg,24,1,5,0.2\n"
        "t2m,hamburg,24,2,4,0.1\n"
        "t2m,hamburg,24,3,6,0.3\n");
  const std::string rep = slurp(report);
  CHECK(rep.find("\"preserved\": true") != std::string::npos);

  // The seed is mandatory.
  CHECK(run("ecc --raw " + fixture("ecc_raw.csv") + " --margins " +
            fixture("ecc_margins.json") + " --out " + out + " --report " +
            report)
            .code == 1);
}

TEST_CASE("ecc: margin config mismatches are validation failures") {
  const auto dir = scratch();
  const auto margins = dir / "short.json";
  spit(margins, R"([{"variable":"t2m","location":"berlin","lead_time":"24",
                     "dist":{"type":"gaussian","mean":0,"sd":1}}])");
  RunResult r = run("ecc --raw " + fixture("ecc_raw.csv") + " --margins " +
                    margins.string() + " --out " + (dir / "o.csv").string() +
                    " --report " + (dir / "r.json").string() + " --seed 1");
  CHECK(r.code == 1);
  CHECK(r.err.find("hamburg") != std::string::npos);
}

TEST_CASE("plot-data emits scatter and copula-grid CSVs") {
  const auto dir = scratch();
  const auto scatter = (dir / "scatter.csv").string();
  const auto grid = (dir / "copula.csv").string();
  RunResult r = run("plot-data --in " + fixture("ecc_raw.csv") +
                    " --margin-x t2m,berlin,24 --margin-y t2m,hamburg,24"
                    " --scatter-out " + scatter + " --grid-out " + grid);
  REQUIRE(r.code == 0);
  CHECK(slurp(scatter) ==
        "member,x,y\n"
        "1,10,5\n"
        "2,12,4\n"
        "3,11,6\n");
  const std::string g = slurp(grid);
  CHECK(g.find("i,j,value") == 0);
  CHECK(g.find("3,3,1") != std::string::npos);  // corner value

  // Unknown margin id.
  CHECK(run("plot-data --in " + fixture("ecc_raw.csv") +
            " --margin-x t2m,nowhere,24 --margin-y t2m,hamburg,24"
            " --scatter-out " + scatter + " --grid-out " + grid)
            .code == 1);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run("check").code == 1);            // missing --in
  CHECK(run("no-such-subcommand").code == 1);
  CHECK(run("--help").code == 0);
}

int main(int argc, char** argv) {
  doctest::Context ctx;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) {
      g_cli = argv[++i];
    } else if (arg == "--fixtures" && i + 1 < argc) {
      g_fixtures = argv[++i];
    }
  }
  if (g_cli.empty() || g_fixtures.empty()) {
    std::fprintf(stderr, "usage: test_cli --cli <discop binary> --fixtures <dir>\n");
    return 1;
  }
  ctx.applyCommandLine(1, argv);  // doctest defaults; our flags are ours
  return ctx.run();
}
