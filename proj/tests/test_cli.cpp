#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "wgt_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(WGT_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config(const std::string& name) { return std::string(WGT_CONFIGS) + "/" + name; }

std::string out_dir(const std::string& name) {
  const fs::path p = kWork / name;
  fs::remove_all(p);
  return p.string();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cross-section writes CSV and JSON") {
  const std::string out = out_dir("cs");
  CHECK(run("cross-section --config " + config("mixed_widths.toml") + " --out " + out + " --modes 3") == 0);
  CHECK(first_line(fs::path(out) / "cross_section.csv").find(',') != std::string::npos);
  CHECK(fs::exists(fs::path(out) / "cross_section.json"));
}

TEST_CASE("absence exit codes follow the verdict") {
  CHECK(run("absence --config " + config("t_junction.toml") + " --out " + out_dir("abs_t")) == 0);
  CHECK(fs::exists(kWork / "abs_t" / "r_sweep.csv"));
  CHECK(run("absence --config " + config("strip.toml") + " --out " + out_dir("abs_strip")) == 2);
  CHECK(fs::exists(kWork / "abs_strip" / "absence.json"));
}

TEST_CASE("detect on the strip exports the stabilizing field") {
  const std::string out = out_dir("det");
  CHECK(run("detect --config " + config("strip.toml") + " --out " + out) == 0);
  CHECK(fs::exists(fs::path(out) / "scattering.json"));
  CHECK(fs::exists(fs::path(out) / "eigenvalues.csv"));
  CHECK(first_line(fs::path(out) / "field_stabilizing_0.vtk").rfind("# vtk", 0) == 0);
  CHECK_FALSE(fs::exists(fs::path(out) / "field_trapped_0.vtk"));
}

TEST_CASE("fixed seed gives byte-identical JSON") {
  const std::string a = out_dir("seed_a"), b = out_dir("seed_b");
  REQUIRE(run("detect --seed 5 --config " + config("t_junction.toml") + " --out " + a) == 0);
  REQUIRE(run("detect --seed 5 --config " + config("t_junction.toml") + " --out " + b) == 0);
  CHECK(slurp(fs::path(a) / "scattering.json") == slurp(fs::path(b) / "scattering.json"));
}

TEST_CASE("export-mesh writes a legacy VTK mesh") {
  const std::string out = out_dir("mesh");
  CHECK(run("export-mesh --R 1.5 --refine 1 --config " + config("l_bend.toml") + " --out " + out) == 0);
  CHECK(first_line(fs::path(out) / "mesh.vtk").rfind("# vtk", 0) == 0);
}

TEST_CASE("single-point parameter sweep also runs detection") {
  const fs::path cfg = kWork / "one_point.toml";
  fs::create_directories(kWork);
  std::ofstream(cfg) << "[geometry]\nfixture = \"straight_strip\"\n[scattering]\nmodes = 8\n"
                        "[param_sweep]\nmoves = [[1, \"x\", 1, 0], [2, \"x\", 1, 0]]\ngrid = [1.5]\n";
  const std::string out = out_dir("ps1");
  CHECK(run("param-sweep --config " + cfg.string() + " --out " + out) == 0);
  CHECK(fs::exists(fs::path(out) / "param_sweep.csv"));
  CHECK(fs::exists(fs::path(out) / "crossings.csv"));
  CHECK(fs::exists(fs::path(out) / "scattering.json"));
}

TEST_CASE("input errors exit 1, numerical failures exit 3") {
  const fs::path bad = kWork / "bad.toml";
  fs::create_directories(kWork);
  std::ofstream(bad) << "[geometry]\nfixture = \"hexagon\"\n";
  CHECK(run("detect --config " + bad.string() + " --out " + out_dir("bad")) == 1);
  CHECK(run("detect --config /nonexistent.toml") != 0);
  CHECK(run("") != 0);
  // 40 modes on a 1/16 face cannot be resolved
  CHECK(run("detect --modes 40 --refine 1 --config " + config("strip.toml") + " --out " + out_dir("over")) == 3);
}
