#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "golden.hpp"
#include "tetra/burnside.hpp"
#include "tetra/cli.hpp"
#include "tetra/errors.hpp"

using namespace tetra;
using Json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  static const fs::path d = [] {
    auto p = fs::temp_directory_path() / "tetra_cli_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return d;
}

std::string write_config(const std::string& name, const std::string& text) {
  const auto p = scratch_dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = cli::parse_config(R"(
# comment
[potential]
bond_weight = 2.0
vdw_A = 0.05   # trailing comment
vdw_B = 2e-3
sigma = 0.1
electrostatic = true

[analysis]
l_max = 3
N = 12
newton_tolerance = 1e-10

[output]
format = "csv"
path = "out # not a comment"
)");
  CHECK(c.potential.bond_weight == 2.0);
  CHECK(c.potential.vdw_B == 0.002);
  CHECK(c.analysis.l_max == 3);
  CHECK(c.analysis.N == 12);
  CHECK(c.analysis.newton_tolerance == 1e-10);
  CHECK(c.analysis.steps == 10);
  CHECK(c.output.format == "csv");
  CHECK(c.output.path == "out # not a comment");

  const auto d = cli::parse_config("");
  CHECK(d.analysis.l_max == 4);
  CHECK(d.analysis.N == 16);
  CHECK(d.potential.bond_weight == 1.0);

  for (const char* bad : {"[potential]\nbond_wieght = 1", "[extra]\n", "l_max = 2", "[analysis]\nl_max = 0",
                          "[analysis]\nl_max = 2.5", "[analysis]\nN = 8\nN = 9", "[analysis]\nnewton_tolerance = -1",
                          "[analysis]\nN = \"8\"", "[output]\nformat = \"xml\"", "[output]\npath = out",
                          "[potential]\nbond = 1", "[potential\n", "[analysis]\nN 8", "[analysis]\nN = 8x",
                          "[potential]\nbond_weight = 0"})
    CHECK_THROWS_AS(cli::parse_config(bad), ConfigError);
}

TEST_CASE("report reproduces the analytic equilibrium") {
  const auto r = run({"report"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["equilibrium"]["r_o"].get<double>() == doctest::Approx(std::sqrt(3.0 / 8.0)).epsilon(1e-12));
  CHECK(j["equilibrium"]["nu0_sq"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(j["spectrum"]["multiplicities"] == Json::array({1, 3, 2}));
  CHECK(j["spectrum"]["rotational_zero_modes"] == 3);
  CHECK(j["reps"]["multiplicities"] == Json::array({1, 2, 1, 1, 0}));
  CHECK(j["families"].size() == 7);
  CHECK(j["branches"].size() == 7);
  for (const auto& b : j["branches"]) {
    CHECK(b["max_residual"].get<double>() < 1e-9);
    CHECK(b["final_amplitude"].get<double>() >= 0.05);
  }
  CHECK(j["seed"].is_null());
}

TEST_CASE("invariants and degrees subcommands") {
  const auto r = run({"invariants", "--critical", "0,1"});
  REQUIRE(r.code == 0);
  const auto inv = Json::parse(r.out)["invariants"];
  REQUIRE(inv.size() == 1);
  CHECK(inv[0]["omega"].size() == 1);
  CHECK(inv[0]["omega"][0]["class"] == "(S4 x D1)");
  CHECK(inv[0]["omega"][0]["coeff"] == -1);

  const auto d = run({"degrees", "--j", "4", "--l", "1"});
  REQUIRE(d.code == 0);
  const auto deg = Json::parse(d.out)["degrees"];
  REQUIRE(deg.size() == 1);
  CHECK(deg[0]["terms"].size() == 2);

  // Serialized elements parse back to the same element, both as text and as a term list.
  const auto all = Json::parse(run({"invariants", "--lmax", "2"}).out);
  const auto t = burnside::ClassTable::for_modes({1, 2});
  const std::vector<std::string> printed{golden::omega_01(), golden::omega_11(), golden::omega_21()};
  REQUIRE(all["invariants"].size() >= 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& x = all["invariants"][i];
    burnside::BurnsideElement e;
    for (const auto& term : x["omega"]) e.add(t.find(term["canonical"].get<std::string>()), term["coeff"].get<long long>());
    CHECK(e == t.parse(x["omega_text"].get<std::string>()));
    CHECK(e == t.parse(printed[i]));
  }
  CHECK(all["families"].size() == 7);

  const auto res = run({"invariants", "--critical", "1,2", "--lmax", "2"});
  CHECK(res.code == 1);
}

TEST_CASE("determinism and seed metadata") {
  const auto a = run({"invariants", "--seed", "42"});
  const auto b = run({"invariants", "--seed", "42"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(Json::parse(a.out)["seed"] == 42);
  const auto c1 = run({"branch", "--class", "S4^S4_S4:Z1:D1", "--j", "0", "--steps", "3"});
  const auto c2 = run({"branch", "--class", "(S4 x D1)", "--j", "0", "--steps", "3"});
  REQUIRE(c1.code == 0);
  CHECK(c1.out == c2.out);
  std::istringstream lines(c1.out);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    const auto p = Json::parse(line);
    CHECK(p.contains("amplitude"));
    CHECK(p.contains("lambda"));
    CHECK(p["residual"].get<double>() < 1e-9);
    CHECK(p["predicate_residuals"].size() >= 3);
    ++n;
  }
  CHECK(n == 4);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 1);
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({"degrees", "--j", "7"}).code == 1);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"--config", (scratch_dir() / "missing.toml").string(), "reps"}).code == 1);
  CHECK(run({"--config", write_config("bad.toml", "[analysis]\nfoo = 1\n"), "reps"}).code == 1);
  CHECK(run({"branch", "--class", "(S4 x O2)", "--j", "0"}).code == 1);
  // A Newton tolerance below rounding cannot be met.
  const auto strict = write_config("strict.toml", "[analysis]\nnewton_tolerance = 1e-30\n");
  const auto r = run({"--config", strict, "branch", "--class", "(S4 x D1)", "--j", "0", "--steps", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("no convergence") != std::string::npos);
  CHECK(run({"--config", write_config("csv.toml", "[output]\nformat = \"csv\"\n"), "report"}).code == 1);
}

TEST_CASE("file output and csv") {
  const auto dir = scratch_dir() / "out";
  const auto cfg = write_config("files.toml", "[output]\nformat = \"csv\"\npath = \"" + dir.string() + "\"\n");
  auto r = run({"--config", cfg, "degrees", "--l", "1"});
  REQUIRE(r.code == 0);
  std::ifstream f(dir / "degrees.csv");
  std::string header;
  std::getline(f, header);
  CHECK(header == "j,l,class,canonical,coeff");
  int rows = 0;
  for (std::string line; std::getline(f, line);) ++rows;
  CHECK(rows == 2 + 13 + 6 + 13 + 2);

  const auto env_dir = scratch_dir() / "env";
  ::setenv(cli::kOutputDirEnv, env_dir.string().c_str(), 1);
  r = run({"reps"});
  ::unsetenv(cli::kOutputDirEnv);
  REQUIRE(r.code == 0);
  CHECK(fs::exists(env_dir / "reps.json"));
  CHECK(Json::parse(std::ifstream(env_dir / "reps.json"))["reps"]["multiplicities"] == Json::array({1, 2, 1, 1, 0}));

  const auto traj = scratch_dir() / "traj.csv";
  r = run({"branch", "--class", "(D3 x D1)", "--j", "1", "--steps", "1", "--csv", traj.string()});
  REQUIRE(r.code == 0);
  std::ifstream tf(traj);
  int lines = 0;
  for (std::string line; std::getline(tf, line);) ++lines;
  CHECK(lines == 1 + 2 * 64);
}
