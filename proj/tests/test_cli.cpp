#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gradflow/config.hpp"
#include "gradflow/io.hpp"
#include "gradflow/run.hpp"
#include "test_util.hpp"

using namespace gradflow;
namespace fs = std::filesystem;

namespace {

std::string message_of(const KeyValues& kv) {
  try {
    parse_config(kv);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigError);
    return e.what();
  }
  return {};
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("gradflow_test_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::vector<std::vector<double>> read_rows(const fs::path& path) {
  std::ifstream is(path);
  std::string line;
  std::getline(is, line);
  std::getline(is, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("empty configuration gives the defaults") {
  const auto c = parse_config({});
  CHECK(c.command == Command::Solve);
  CHECK(c.p == 3.0);
  CHECK(c.N == 1);
  CHECK(c.form == EquationForm::RescaledV);
  CHECK(c.preset == Preset::Bump);
  CHECK(c.R0 == 1.0);
  CHECK(c.amplitude == 1.0);
}

TEST_CASE("invalid values name their key") {
  CHECK(message_of({{"p", "2"}}).find("p must exceed 2") != std::string::npos);
  CHECK(message_of({{"p", "3"}, {"q", "1.5"}}).find("config-error: q:") == 0);
  CHECK(message_of({{"p", "3"}, {"q", "2"}}).empty());
  CHECK(message_of({{"colour", "red"}}).find("config-error: colour:") == 0);
  CHECK(message_of({{"N", "two"}}).find("config-error: N:") == 0);
  CHECK(message_of({{"form", "sideways"}}).find("config-error: form:") == 0);
  CHECK(message_of({{"grid", "line"}, {"N", "2"}}).find("config-error: grid:") == 0);
  CHECK(thrown_kind([] { parse_key_values("p 3\n"); }) == ErrorKind::ConfigError);
}

TEST_CASE("key-value files and override order") {
  const auto kv = parse_key_values("# sweep\np = 4   # exponent\n\nN=2\nout = a\n");
  CHECK(kv.at("p") == "4");
  CHECK(kv.at("N") == "2");
  ::unsetenv("GRADFLOW_OUT");
  const auto c = resolve_config(kv, {{"p", "5"}});
  CHECK(c.p == 5.0);
  CHECK(c.N == 2);
  CHECK(c.out == fs::path("a"));
  ::setenv("GRADFLOW_OUT", "from_env", 1);
  CHECK(resolve_config(kv, {{"out", "b"}}).out == fs::path("from_env"));
  ::unsetenv("GRADFLOW_OUT");
}

TEST_CASE("config hash separates configurations") {
  const auto a = parse_config({{"p", "3"}});
  const auto b = parse_config({});
  const auto c = parse_config({{"p", "3.5"}});
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != c.hash());
  CHECK(a.hash().size() == 16);
}

TEST_CASE("zero data solve writes an all-zero table") {
  const auto dir = scratch("zero");
  auto c = parse_config({{"preset", "zero"}, {"grid_cells", "40"}, {"r_max", "3"}, {"t_end", "1"}, {"samples", "4"},
                         {"out", dir.string()}});
  std::ostringstream log;
  CHECK(run(c, log) == 0);
  const auto text = slurp(dir / "norms.csv");
  CHECK(text.rfind("# config_hash=" + c.hash() + "\ntime,L1,Linf,Lip,support_radius\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  const auto rows = read_rows(dir / "norms.csv");
  CHECK(rows.size() == 5);
  for (const auto& row : rows) {
    for (std::size_t j = 1; j < row.size(); ++j) CHECK(row[j] == 0.0);
  }
  CHECK(slurp(dir / "snapshots.csv").rfind("# config_hash=" + c.hash() + "\ntime,x,value\n", 0) == 0);
  const auto summary = nlohmann::json::parse(slurp(dir / "solve_summary.json"));
  CHECK(summary["config_hash"] == c.hash());
  CHECK(summary["final_time"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("solve output is deterministic") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  const KeyValues base{{"grid_cells", "100"}, {"r_max", "4"}, {"t_end", "2"}, {"samples", "5"}};
  auto ka = base, kb = base;
  ka["out"] = a.string();
  kb["out"] = b.string();
  std::ostringstream log;
  REQUIRE(run(parse_config(ka), log) == 0);
  REQUIRE(run(parse_config(kb), log) == 0);
  CHECK(slurp(a / "norms.csv") == slurp(b / "norms.csv"));
  CHECK(slurp(a / "snapshots.csv") == slurp(b / "snapshots.csv"));
  const auto rows = read_rows(a / "norms.csv");
  CHECK(rows.back()[0] == doctest::Approx(2.0));
  CHECK(rows.back()[2] > rows.front()[2]);
}

TEST_CASE("tw command reproduces the separatrix and the sign change") {
  const auto sep = scratch("tw_sep");
  std::ostringstream log;
  REQUIRE(run(parse_config({{"command", "tw"}, {"c", "1"}, {"out", sep.string()}}), log) == 0);
  const auto orbit = read_rows(sep / "orbit.csv");
  REQUIRE(orbit.size() > 10);
  for (const auto& row : orbit) CHECK(std::abs(row[1] - row[2] * row[2]) <= 1e-6 * std::max(row[1], 1e-12));

  const auto slow = scratch("tw_slow");
  REQUIRE(run(parse_config({{"command", "tw"}, {"c", "0.9"}, {"K", "1"}, {"z_extent", "50"}, {"out", slow.string()}}),
              log) == 0);
  const auto rows = read_rows(slow / "orbit.csv");
  bool positive = false, negative = false;
  for (const auto& row : rows) {
    positive = positive || row[2] > 0;
    negative = negative || row[2] < 0;
  }
  CHECK(positive);
  CHECK(negative);
  CHECK(fs::exists(slow / "hump.csv"));
  CHECK(fs::exists(slow / "plateau.csv"));
  const auto summary = nlohmann::json::parse(slurp(slow / "tw_summary.json"));
  CHECK(summary["seed_coefficient"].get<double>() == doctest::Approx(0.225));
}

TEST_CASE("compute errors leave an error record") {
  const auto dir = scratch("err");
  std::ostringstream log;
  auto c = parse_config({{"grid_cells", "20"}, {"r_max", "1.5"}, {"t_end", "50"}, {"out", dir.string()}});
  CHECK(run(c, log) == 2);
  const auto rec = nlohmann::json::parse(slurp(dir / "error.json"));
  CHECK(rec["error"] == "domain-overflow");
  CHECK(rec["config_hash"] == c.hash());
}

TEST_CASE("command-line front end") {
  const auto dir = scratch("exe");
  const std::string exe = GRADFLOW_CLI_PATH;
  const auto cfg = dir.string() + ".cfg";
  {
    std::ofstream os(cfg);
    os << "preset = zero\ngrid_cells = 20\nt_end = 0.5\np = 4\n";
  }
  ::unsetenv("GRADFLOW_OUT");
  const auto cmd = exe + " solve --config " + cfg + " --p 3 --out " + dir.string() + " > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  const auto summary = nlohmann::json::parse(slurp(dir / "solve_summary.json"));
  CHECK(summary["config_hash"] == parse_config({{"preset", "zero"}, {"grid_cells", "20"}, {"t_end", "0.5"},
                                                {"p", "3"}, {"out", dir.string()}}).hash());
  const auto bad = exe + " solve --p 2 --out " + dir.string() + " 2> " + dir.string() + "/stderr.txt";
  CHECK(std::system(bad.c_str()) != 0);
  CHECK(slurp(dir / "stderr.txt").find("p must exceed 2") != std::string::npos);
}
