#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "nlohmann/json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

// Runs the CLI with the given arguments, capturing stdout+stderr.
RunResult run(const std::string& args) {
  std::string cmd = std::string(CMPDET_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe))
    r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// Fresh scratch directory per test case.
fs::path scratch(const char* tag) {
  fs::path dir = fs::temp_directory_path() /
                 (std::string("cmpdet_cli_") + tag + "_" +
                  std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli synth plus detect round trip") {
  fs::path dir = scratch("roundtrip");
  fs::path board = dir / "board.pgm";

  RunResult s = run("synth --grid 20 --seed 3 --out " + board.string());
  CHECK(s.code == 0);
  CHECK(s.out.find("synth: wrote") != std::string::npos);
  CHECK(fs::exists(board));
  CHECK(fs::exists(dir / "board.truth.json"));

  RunResult d = run("detect " + board.string());
  REQUIRE(d.code == 0);
  json doc = json::parse(d.out);
  CHECK(doc["width"] == 336);
  CHECK(doc["height"] == 336);
  CHECK(doc["params"]["window"] == 31);
  CHECK(doc["params"]["delta_th"] == 5);
  REQUIRE(doc["corners"].size() == 361);
  for (const json& c : doc["corners"]) {
    CHECK(c.contains("x"));
    CHECK(c.contains("y"));
    CHECK(c.contains("response"));
    CHECK(c.contains("method"));
  }
  // Corners are sorted by (y, x) on the exact subpixel values; after the
  // 6-decimal rounding in the JSON, y must still be non-decreasing.
  for (std::size_t k = 1; k < doc["corners"].size(); ++k) {
    double py = doc["corners"][k - 1]["y"], y = doc["corners"][k]["y"];
    CHECK(py <= y + 1e-5);
  }

  // Reruns are byte-identical.
  RunResult d2 = run("detect " + board.string());
  CHECK(d2.out == d.out);

  // Writing to a file gives the same bytes as stdout.
  fs::path out = dir / "det.json";
  RunResult d3 = run("detect " + board.string() + " --out " + out.string());
  CHECK(d3.code == 0);
  CHECK(slurp(out) == d.out);

  fs::remove_all(dir);
}

TEST_CASE("cli detect handles blank frames and annotation") {
  fs::path dir = scratch("blank");
  fs::path blank = dir / "blank.pgm";
  {
    std::ofstream out(blank, std::ios::binary);
    out << "P5\n64 64\n255\n";
    for (int i = 0; i < 64 * 64; ++i) out.put(char(255));
  }

  RunResult d = run("detect " + blank.string());
  REQUIRE(d.code == 0);
  json doc = json::parse(d.out);
  CHECK(doc["corners"].empty());

  // Annotation writes a copy of the frame with crosses; a blank frame has
  // no corners, so it must equal the input raster.
  fs::path board = dir / "board.pgm";
  run("synth --grid 6 --cell-px 12 --seed 1 --out " + board.string());
  fs::path anno = dir / "anno.pgm";
  RunResult a = run("detect " + board.string() + " --annotate " + anno.string());
  CHECK(a.code == 0);
  CHECK(fs::exists(anno));
  CHECK(slurp(anno) != slurp(board));
  CHECK(slurp(anno).substr(0, 3) == "P5\n");

  fs::remove_all(dir);
}

TEST_CASE("cli rejects bad usage with exit code 2") {
  CHECK(run("detect /nonexistent/frame.pgm").code == 2);
  CHECK(run("detect").code == 2);
  CHECK(run("--bogus-flag").code == 2);
  CHECK(run("").code == 2);

  fs::path dir = scratch("badusage");
  fs::path board = dir / "b.pgm";
  run("synth --grid 4 --cell-px 8 --out " + board.string());
  CHECK(run("detect " + board.string() + " --window 14").code == 2);
  CHECK(run("detect " + board.string() + " --window 1").code == 2);
  CHECK(run("eval --dir " + (dir / "empty").string() + " --tolerance 3").code == 2);
  CHECK(run("synth --grid 20 --deform wobble --out " + board.string()).code == 2);
  // Non-invertible deformation is an input error, not an internal one.
  CHECK(run("synth --grid 20 --deform press --amplitude 500 --radius 0.05 --out " +
            board.string())
            .code == 2);
  fs::remove_all(dir);
}

TEST_CASE("cli eval over a directory reports per-frame stats and errors") {
  fs::path dir = scratch("eval");
  run("synth --grid 8 --cell-px 12 --seed 5 --out " + (dir / "a.pgm").string());
  // A twisted, noisy frame whose refined corners are good to ~0.1 px but not
  // to 1e-4 px.
  run("synth --grid 8 --cell-px 12 --seed 6 --deform twist --amplitude 2 "
      "--noise 4 --out " +
      (dir / "b.pgm").string());
  // An orphan frame without a truth sidecar must be reported, not fatal.
  fs::copy_file(dir / "a.pgm", dir / "orphan.pgm");

  fs::path csv = dir / "stats.csv";
  RunResult e = run("eval --dir " + dir.string() +
                    " --tolerance 3 --window 15 --csv " + csv.string());
  REQUIRE(e.code == 0);
  json rep = json::parse(e.out);
  REQUIRE(rep["frames"].size() == 2);
  REQUIRE(rep["errors"].size() == 1);
  CHECK(std::string(rep["errors"][0]["name"]).find("orphan") !=
        std::string::npos);
  CHECK(rep["sr"] == 1.0);
  CHECK(rep["afp"] == 0.0);
  CHECK(rep["afn"] == 0.0);
  CHECK(rep["tolerance"] == 3.0);
  for (const json& f : rep["frames"]) {
    CHECK(f["tp"] == 49);
    CHECK(f["success"] == true);
  }

  std::string stats = slurp(csv);
  CHECK(stats.find("name,tp,fp,fn,success\n") == 0);
  CHECK(stats.find("a.pgm,49,0,0,1\n") != std::string::npos);
  CHECK(stats.find("b.pgm,49,0,0,1\n") != std::string::npos);

  // An impossibly tight tolerance can no longer match every corner.
  RunResult tight = run("eval --dir " + dir.string() +
                        " --tolerance 0.0001 --window 15");
  REQUIRE(tight.code == 0);
  CHECK(double(json::parse(tight.out)["sr"]) < 1.0);

  fs::remove_all(dir);
}

TEST_CASE("cli eval runs synthetic recipes") {
  fs::path dir = scratch("recipe");
  fs::path recipe = dir / "suite.json";
  {
    std::ofstream out(recipe);
    out << R"({"frames": [
      {"grid": 8, "cell_px": 12, "seed": 1},
      {"grid": 8, "cell_px": 12, "seed": 2,
       "deform": {"mode": "twist", "amplitude": 2.0}}
    ]})";
  }
  RunResult e = run("eval --synth-recipe " + recipe.string() +
                    " --tolerance 3 --window 15");
  REQUIRE(e.code == 0);
  json rep = json::parse(e.out);
  REQUIRE(rep["frames"].size() == 2);
  CHECK(std::string(rep["frames"][0]["name"]).find("grid8") != std::string::npos);
  CHECK(rep["sr"] == 1.0);
  fs::remove_all(dir);
}

TEST_CASE("cli synth respects the amplitude bound in ground truth") {
  fs::path dir = scratch("amp");
  fs::path board = dir / "p.pgm";
  RunResult s = run("synth --grid 20 --deform press --amplitude 6 --out " +
                    board.string());
  REQUIRE(s.code == 0);
  json truth = json::parse(slurp(dir / "p.truth.json"));
  REQUIRE(truth["corners"].size() == 361);
  double worst = 0.0;
  for (const json& c : truth["corners"]) {
    double lx = 8.0 + 16.0 * int(c["i"]), ly = 8.0 + 16.0 * int(c["j"]);
    worst = std::max(worst, std::hypot(double(c["x"]) - lx, double(c["y"]) - ly));
  }
  CHECK(worst <= 6.0 + 1e-9);
  CHECK(worst > 1.0);  // the deformation visibly moved corners
  fs::remove_all(dir);
}

TEST_CASE("cli bench reports one sample per repetition") {
  fs::path dir = scratch("bench");
  fs::path board = dir / "b.pgm";
  run("synth --grid 6 --cell-px 12 --out " + board.string());

  RunResult b = run("bench " + board.string() +
                    " --repetitions 2 --warmup 1 --window 15");
  REQUIRE(b.code == 0);
  json rep = json::parse(b.out);
  CHECK(rep["repetitions"] == 2);
  CHECK(rep["samples_ms"].size() == 2);
  CHECK(rep["corner_count"] == 25);
  CHECK(double(rep["mean_ms"]) > 0.0);

  RunResult one = run("bench " + board.string() +
                      " --repetitions 1 --warmup 0 --window 15");
  REQUIRE(one.code == 0);
  CHECK(json::parse(one.out)["samples_ms"].size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("cli curves writes the oracle sweep tables") {
  fs::path dir = scratch("curves");
  RunResult c = run("curves --out-dir " + dir.string());
  REQUIRE(c.code == 0);

  const char* names[] = {
      "amplitude_vs_azimuth.csv", "amplitude_vs_length.csv",
      "amplitude_vs_width.csv",   "ratio_surface_azimuth.csv",
      "ratio_surface_length.csv", "xcorr_rotation.csv",
      "xcorr_azimuth.csv",        "xcorr_length.csv"};
  for (const char* n : names) CHECK(fs::exists(dir / n));

  // The symmetric corner: 2 cycles per revolution at unit amplitude.
  std::string az = slurp(dir / "amplitude_vs_azimuth.csv");
  CHECK(az.find("3.141593,2,1.000000") != std::string::npos);
  // The 1-cycle amplitude vanishes there.
  CHECK(az.find("3.141593,1,0.000000") != std::string::npos);

  // Equal sectors kill the odd ratios on the ratio surface.
  std::string rs = slurp(dir / "ratio_surface_azimuth.csv");
  CHECK(rs.find("0.785398,3.141593,0.000000") != std::string::npos);

  // The unrotated self-correlation peaks at shift 0.
  std::string xc = slurp(dir / "xcorr_rotation.csv");
  CHECK(xc.find("0,0,1.000000") != std::string::npos);

  fs::remove_all(dir);
}
