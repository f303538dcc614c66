#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("growthlab_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
  fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

Run run(const std::string& args) {
  const char* bin = std::getenv("GROWTHLAB_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "GROWTHLAB_BIN is not set");
  fs::path o = scratch() / "stdout.txt", e = scratch() / "stderr.txt";
  std::string cmd = std::string("\"") + bin + "\" " + args + " >\"" + o.string() + "\" 2>\"" + e.string() + "\"";
  int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(o);
  r.err = slurp(e);
  return r;
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  FAIL("missing column " << name);
  return 0;
}

}  // namespace

TEST_CASE("verify: minimal suite") {
  auto cfg = write_config("minimal.json", R"J({
    "fields": ["gaussian(1)"],
    "cases": [{"N": 3, "s": "-3/2", "p": 2, "q": 6}]
  })J");
  auto r = run("verify --config \"" + cfg.string() + "\"");
  CHECK(r.code == 0);
  auto rows = csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"field", "N", "k", "j", "s", "p", "q", "scale", "lhs", "rhs", "ratio",
                                            "pi_degree", "verdict"});
  const auto& row = rows[1];
  CHECK(row[column(rows[0], "field")] == "gaussian(1)");
  CHECK(std::stod(row[column(rows[0], "s")]) == -1.5);
  CHECK(row[column(rows[0], "q")] == "6");
  CHECK(row[column(rows[0], "verdict")] == "ok");
  CHECK(std::isfinite(std::stod(row[column(rows[0], "ratio")])));
}

TEST_CASE("verify: excluded s is a configuration error") {
  auto cfg = write_config("excluded.json", R"J({
    "fields": ["gaussian(1)"],
    "cases": [{"N": 3, "s": -1, "p": 2, "q": 2}]
  })J");
  auto r = run("verify --config \"" + cfg.string() + "\"");
  CHECK(r.code == 1);
  CHECK(r.err.find("s = -1") != std::string::npos);
}

TEST_CASE("verify: divergent gradient side") {
  // grad (1+|x|)^{s+1} behaves like (1+|x|)^s, which is not in L^p_s.
  auto cfg = write_config("divergent.json", R"J({
    "fields": ["power(-0.5)", "gaussian(1)"],
    "cases": [{"N": 3, "s": -1.5, "p": 2, "q": 2}]
  })J");
  auto r = run("verify --config \"" + cfg.string() + "\"");
  CHECK(r.code == 2);
  auto rows = csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].back() == "divergent_rhs");
  CHECK(rows[2].back() == "ok");
}

TEST_CASE("scan over s toward the excluded value") {
  auto cfg = write_config("scan_s.json", R"J({
    "fields": ["gaussian(1)"],
    "cases": [{"N": 3, "s": -2, "p": 2, "q": 2}]
  })J");
  auto r = run("scan --config \"" + cfg.string() + "\" --param s --range=-1.4,-1.2,-1.1,-1.05");
  REQUIRE(r.code == 0);
  auto rows = csv(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0][0] == "param");
  const std::size_t rc = column(rows[0], "ratio");
  for (std::size_t i = 2; i < rows.size(); ++i) CHECK(std::stod(rows[i][rc]) > std::stod(rows[i - 1][rc]));

  // Evenly spaced points such as -1.4 + 0.05 i must reach the exact decimal parser cleanly.
  r = run("scan --config \"" + cfg.string() + "\" --param s --range=-1.4:-1.05:8");
  REQUIRE(r.code == 0);
  rows = csv(r.out);
  REQUIRE(rows.size() == 9);
  CHECK(rows[2][1] == "-1.35");
  const std::size_t vc = column(rows[0], "verdict");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][vc] == "ok");
}

TEST_CASE("scan over lambda in a dilation-invariant case") {
  auto cfg = write_config("scan_l.json", R"J({
    "fields": ["aubin_talenti"],
    "cases": [{"N": 3, "s": "-3/2", "p": 2, "q": 6, "scale": "pure"}],
    "sweep": {"param": "lambda", "values": ["1/4", "1/2", "1", "2", "4"]}
  })J");
  auto r = run("scan --config \"" + cfg.string() + "\"");
  REQUIRE(r.code == 0);
  auto rows = csv(r.out);
  REQUIRE(rows.size() == 6);
  const std::size_t rc = column(rows[0], "ratio");
  const double ref = std::stod(rows[3][rc]);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][rc]) == doctest::Approx(ref).epsilon(0.01));
}

TEST_CASE("scan over q across the interval endpoint") {
  auto cfg = write_config("scan_q.json", R"J({
    "fields": ["gaussian(1)"],
    "cases": [{"N": 3, "s": -2, "p": 2, "q": 2}]
  })J");
  auto r = run("scan --config \"" + cfg.string() + "\" --param q --range 2,4,6,7");
  CHECK(r.code == 0);
  auto rows = csv(r.out);
  REQUIRE(rows.size() == 5);
  const std::size_t vc = column(rows[0], "verdict");
  CHECK(rows[1][vc] == "ok");
  CHECK(rows[2][vc] == "ok");
  CHECK(rows[3][vc] == "ok");
  CHECK(rows[4][vc] == "inadmissible_q");
}

TEST_CASE("criterion subcommand") {
  auto a = run("criterion --s -2 --p 2 --q 6 --N 3");
  CHECK(a.code == 0);
  CHECK(a.out.find("verdict=Finite") != std::string::npos);
  CHECK(a.out.find("interval=[2, 6]") != std::string::npos);
  auto b = run("criterion --s -2 --p 2 --q 7 --N 3");
  CHECK(b.out.find("verdict=Divergent") != std::string::npos);
  CHECK(b.out.find("admissible=false") != std::string::npos);
  // p = N = 3 leaves I_{1,p} = [3, inf), so q = 7 is admissible.
  auto c = run("criterion --s -2 --p 3 --q 7 --N 3");
  CHECK(c.out.find("verdict=Finite") != std::string::npos);
  CHECK(c.out.find("interval=[3, inf)") != std::string::npos);
  auto d = run("criterion --s -2 --p 2 --q 2 --N 2 --format json");
  CHECK(d.code == 0);
  auto j = nlohmann::json::parse(d.out);
  CHECK(j["verdict"] == "Finite");
  CHECK(j["admissible"] == true);
  CHECK(j["profile"].size() == 49);
  CHECK(run("criterion --s -2 --p 1/2 --q 2 --N 2").code == 1);
}

TEST_CASE("output is identical across thread counts") {
  auto cfg = write_config("determinism.json", R"J({
    "fields": ["gaussian(1)", "shifted_bump(0.5,0,0,1.5)", {"name": "mixed", "spec": "constant(2)+power(-3)"}],
    "cases": [{"N": 3, "s": -2, "p": 2, "q": 2}, {"N": 3, "s": -0.5, "p": 4, "q": "inf", "pi": {"strategy": "taylor"}}],
    "output": {"format": "json"}
  })J");
  fs::path one = scratch() / "one.json", four = scratch() / "four.json";
  CHECK(run("verify --config \"" + cfg.string() + "\" --jobs 1 --out \"" + one.string() + "\"").code == 0);
  CHECK(run("verify --config \"" + cfg.string() + "\" --jobs 4 --out \"" + four.string() + "\"").code == 0);
  std::string x = slurp(one), y = slurp(four);
  CHECK(!x.empty());
  CHECK(x == y);
  auto j = nlohmann::json::parse(x);
  REQUIRE(j.size() == 6);
  CHECK(j[2]["field"] == "mixed");
  CHECK(j[0]["case"]["s"] == -2);
}

TEST_CASE("configuration errors") {
  auto unknown = write_config("unknown.json", R"J({
    "fields": ["gaussian(1)"],
    "cases": [{"N": 3, "s": -2, "p": 2, "q": 2, "sigma": 1}]
  })J");
  auto r = run("verify --config \"" + unknown.string() + "\"");
  CHECK(r.code == 1);
  CHECK(r.err.find("sigma") != std::string::npos);

  auto broken = write_config("broken.json", "{\n  \"fields\": [\"gaussian(1)\"],\n  \"cases\": [\n");
  r = run("verify --config \"" + broken.string() + "\"");
  CHECK(r.code == 1);
  CHECK(r.err.find("line") != std::string::npos);

  auto field = write_config("field.json", R"J({"fields": ["lorentzian(1)"], "cases": [{"N": 3, "s": -2, "p": 2, "q": 2}]})J");
  r = run("verify --config \"" + field.string() + "\"");
  CHECK(r.code == 1);
  CHECK(r.err.find("lorentzian") != std::string::npos);

  auto q = write_config("q.json", R"J({"fields": ["gaussian(1)"], "cases": [{"N": 3, "s": -2, "p": 2, "q": 7}]})J");
  CHECK(run("verify --config \"" + q.string() + "\"").code == 1);
  CHECK(run("verify --config \"" + (scratch() / "missing.json").string() + "\"").code == 1);
  CHECK(run("scan --config \"" + q.string() + "\"").code == 1);
  CHECK(run("frobnicate").code == 1);
}
