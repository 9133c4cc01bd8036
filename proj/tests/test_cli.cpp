#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "fermilat/io.hpp"
#include "fermilat/potential.hpp"

using namespace fermilat;
namespace fs = std::filesystem;

namespace {

const fs::path kWorkDir = fs::temp_directory_path() / "fermilat_cli_tests";

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunResult run_cli(const std::string& args) {
  const fs::path out = kWorkDir / "stdout.txt";
  const fs::path err = kWorkDir / "stderr.txt";
  const std::string cmd =
      std::string(FERMILAT_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out), slurp(err)};
}

std::vector<double> parse_csv_row(const std::string& row) {
  std::vector<double> values;
  std::istringstream in(row);
  std::string cell;
  while (std::getline(in, cell, ',')) values.push_back(std::stod(cell));
  return values;
}

struct Setup {
  Setup() {
    fs::create_directories(kWorkDir);
    write_potential((kWorkDir / "zero23.json").string(),
                    constant_potential(Lattice({2, 3}), 0.0));
    write_potential((kWorkDir / "zero111.json").string(),
                    constant_potential(Lattice({1, 1, 1}), 0.0));
    write_potential((kWorkDir / "zero235.json").string(),
                    constant_potential(Lattice({2, 3, 5}), 0.0));
    write_potential((kWorkDir / "v3.json").string(), Potential(Lattice({3}), {0, 0, 0}));

    const Potential V = random_potential(Lattice({2, 3, 5}), 42);
    write_potential((kWorkDir / "v235.json").string(), V);
    write_potential((kWorkDir / "v235_shift.json").string(), translate(V, {1, 2, 3}));

    const Potential sep = combine_separable(
        {random_potential(Lattice({2}), 7), random_potential(Lattice({3, 5}), 8)},
        Lattice({2, 3, 5}));
    write_potential((kWorkDir / "sep.json").string(), sep);
  }
};

const Setup setup_once;

std::string path(const std::string& name) { return (kWorkDir / name).string(); }

}  // namespace

TEST_CASE("spectrum emits the expected CSV row") {
  const auto r = run_cli("spectrum " + path("zero23.json") + " --k 0,0");
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string header, row;
  REQUIRE(std::getline(lines, header));
  CHECK(header == "k1,k2,lambda1,lambda2,lambda3,lambda4,lambda5,lambda6");
  REQUIRE(std::getline(lines, row));
  const auto values = parse_csv_row(row);
  const std::vector<double> expected{0, 0, -3, -3, 0, 1, 1, 4};
  REQUIRE(values.size() == expected.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    CHECK(values[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  }
}

TEST_CASE("spectrum of the one-site lattice") {
  const auto r = run_cli("spectrum " + path("zero111.json") + " --k 0,0,0");
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  const auto values = parse_csv_row(row);
  REQUIRE(values.size() == 4);
  CHECK(values[3] == doctest::Approx(6.0).epsilon(1e-13));
}

TEST_CASE("missing input file exits with the parse code") {
  CHECK(run_cli("spectrum " + path("no_such_file.json") + " --k 0,0").exit_code == 2);
}

TEST_CASE("malformed potential file exits with the parse code") {
  {
    std::ofstream bad(kWorkDir / "bad.json");
    bad << "{\"q\": [2, 3], \"values\": [1, 2]}";  // wrong length
  }
  CHECK(run_cli("spectrum " + path("bad.json") + " --k 0,0").exit_code == 2);
}

TEST_CASE("fermi-poly dump for the free three-site chain") {
  const auto r = run_cli("fermi-poly " + path("v3.json") + " --lambda0 0");
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::vector<nlohmann::json> terms;
  while (std::getline(lines, line)) {
    if (!line.empty()) terms.push_back(nlohmann::json::parse(line));
  }
  REQUIRE(terms.size() == 2);
  CHECK(terms[0]["exp"] == nlohmann::json::array({-1}));
  CHECK(terms[1]["exp"] == nlohmann::json::array({1}));
  for (const auto& t : terms) {
    CHECK(std::abs(t["re"].get<double>() - 1.0) < 1e-12);
    CHECK(std::abs(t["im"].get<double>()) < 1e-12);
  }
  CHECK(r.err.find("kappa axis 1") != std::string::npos);
}

TEST_CASE("fermi-poly of the one-site lattice at lambda0 = 1 has seven terms") {
  const auto r = run_cli("fermi-poly " + path("zero111.json") + " --lambda0 1");
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string line;
  int count = 0;
  bool constant_seen = false;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    ++count;
    const auto t = nlohmann::json::parse(line);
    if (t["exp"] == nlohmann::json::array({0, 0, 0})) {
      constant_seen = true;
      CHECK(std::abs(t["re"].get<double>() + 1.0) < 1e-12);
    }
  }
  CHECK(count == 7);
  CHECK(constant_seen);
}

TEST_CASE("invalid lambda0 exits with the parse code") {
  CHECK(run_cli("fermi-poly " + path("v3.json") + " --lambda0 abc").exit_code == 2);
}

TEST_CASE("check --fermi accepts a translate pair") {
  const auto r = run_cli("check --fermi " + path("v235.json") + " " + path("v235_shift.json") +
                         " --lambda0 0.3");
  CHECK(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["verdict"] == true);
  CHECK(doc["mode"] == "fermi");
  CHECK(doc["report"]["method"] == "PolyCompare");
  CHECK(doc["version"].is_string());
}

TEST_CASE("check --fermi rejects a constant shift") {
  const auto r = run_cli("check --fermi " + path("zero235.json") + " " + path("v235.json") +
                         " --lambda0 0");
  CHECK(r.exit_code == 1);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["verdict"] == false);
  CHECK(!doc["report"]["witnesses"].empty());
}

TEST_CASE("check --floquet on a reflection pair") {
  write_potential(path("v23a.json"), random_potential(Lattice({2, 3}), 19));
  write_potential(path("v23b.json"), reflect(read_potential(path("v23a.json"))));
  const auto r = run_cli("check --floquet " + path("v23a.json") + " " + path("v23b.json"));
  CHECK(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["verdict"] == true);
}

TEST_CASE("check --rigidity drives the full suite") {
  const Potential Y = combine_separable(
      {random_potential(Lattice({2}), 23), random_potential(Lattice({3, 5}), 24)},
      Lattice({2, 3, 5}));
  write_potential(path("rigid_y.json"), Y);
  const auto r = run_cli("check --rigidity " + path("rigid_y.json") +
                         " --partition 1,2 --transform translate:1,1,2 --lambda0 0.3");
  CHECK(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["verdict"] == true);
  CHECK(doc["assertions"]["fermi"]["verdict"] == true);
  CHECK(doc["assertions"]["components"].size() == 2);
}

TEST_CASE("check --identities on a translate pair") {
  const auto r = run_cli("check --identities " + path("v235.json") + " " +
                         path("v235_shift.json") + " --lambda0 0.3 --samples 10");
  CHECK(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["mean"]["verdict"] == true);
  CHECK(doc["quadratic"]["verdict"] == true);
}

TEST_CASE("check --ambarzumian on the zero potential") {
  const auto r = run_cli("check --ambarzumian " + path("zero235.json") + " --lambda0 0");
  CHECK(r.exit_code == 0);
}

TEST_CASE("check --classify-roots reports no counterexamples") {
  const auto r = run_cli("check --classify-roots 2 3 5 --tol 1e-9");
  CHECK(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["zero_count"] == 102);
  CHECK(doc["counterexamples"].empty());
}

TEST_CASE("check demands exactly one mode and enough inputs") {
  CHECK(run_cli("check " + path("v235.json")).exit_code == 2);
  CHECK(run_cli("check --fermi --floquet " + path("v235.json") + " " + path("v235.json"))
            .exit_code == 2);
  CHECK(run_cli("check --fermi " + path("v235.json")).exit_code == 2);
}

TEST_CASE("precondition violations exit with code 5") {
  write_potential(path("v245.json"), random_potential(Lattice({2, 4, 5}), 3));
  CHECK(run_cli("check --ambarzumian " + path("v245.json") + " --lambda0 0").exit_code == 5);
  write_potential(path("v23.json"), random_potential(Lattice({2, 3}), 3));
  CHECK(run_cli("check --shells " + path("v23.json") + " " + path("v23.json")).exit_code == 5);
}

TEST_CASE("separate splits a separable potential and reports the residual") {
  const auto r = run_cli("separate " + path("sep.json") + " --partition 1,2 --out " +
                         path("sep_out"));
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("components: 2") != std::string::npos);
  CHECK(fs::exists(kWorkDir / "sep_out_part1.json"));
  CHECK(fs::exists(kWorkDir / "sep_out_part2.json"));

  // recombine through the CLI and compare with the original
  const auto rc = run_cli("combine " + path("sep_out_part1.json") + " " +
                          path("sep_out_part2.json") + " --out " + path("sep_back.json"));
  REQUIRE(rc.exit_code == 0);
  const Potential original = read_potential(path("sep.json"));
  const Potential back = read_potential(path("sep_back.json"));
  REQUIRE(original.values.size() == back.values.size());
  for (std::size_t i = 0; i < original.values.size(); ++i) {
    CHECK(std::abs(original.values[i] - back.values[i]) < 1e-10);
  }
}

TEST_CASE("separate refuses a non-separable potential with exit code 6") {
  write_potential(path("nonsep.json"), random_potential(Lattice({2, 3, 5}), 11));
  const auto r = run_cli("separate " + path("nonsep.json") + " --partition 1,2");
  CHECK(r.exit_code == 6);
}

TEST_CASE("identical invocations produce byte-identical output") {
  const std::string cmd = "check --identities " + path("v235.json") + " " +
                          path("v235_shift.json") + " --lambda0 0.3 --samples 5 --seed 99";
  const auto a = run_cli(cmd);
  const auto b = run_cli(cmd);
  CHECK(a.out == b.out);
  const auto pa = run_cli("fermi-poly " + path("v235.json") + " --lambda0 0.25");
  const auto pb = run_cli("fermi-poly " + path("v235.json") + " --lambda0 0.25");
  CHECK(pa.out == pb.out);
}

TEST_CASE("bands walks a path file") {
  {
    std::ofstream kp(kWorkDir / "kpath.txt");
    kp << "# quarter turn along the first axis\n";
    kp << "0, 0\n0.125, 0\n0.25, 0\n";
  }
  const auto r = run_cli("bands " + path("zero23.json") + " --kpath " + path("kpath.txt"));
  REQUIRE(r.exit_code == 0);
  int rows = 0;
  std::istringstream lines(r.out);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 4);  // header + 3 points
}
