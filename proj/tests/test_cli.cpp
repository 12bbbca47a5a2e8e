#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "qfilt/io.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(QFILT_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string data_path(const char* name) { return std::string(QFILT_DATA_DIR) + "/" + name; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

}  // namespace

TEST_CASE("check accepts the unit-magnitude filter and rejects the decaying cavity") {
  const RunResult good = run("check " + data_path("unstable_filter.json"));
  CHECK(good.exit_code == 0);
  CHECK(good.output.find("PASS  overall") != std::string::npos);

  const RunResult bad = run("check " + data_path("lossy_cavity.json"));
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("FAIL") != std::string::npos);
}

TEST_CASE("missing input files are usage errors") {
  const RunResult res = run("check /nonexistent/model.json");
  CHECK(res.exit_code == 2);
}

TEST_CASE("malformed flags are usage errors and help exits cleanly") {
  CHECK(run("realize").exit_code == 2);              // missing input
  CHECK(run("frobnicate x.json").exit_code == 2);    // unknown subcommand
  CHECK(run("--help").exit_code == 0);
  CHECK(run("check --help").exit_code == 0);
}

TEST_CASE("realize emits the physical-scale filter matrices") {
  const RunResult res = run("realize --json " + data_path("unstable_filter.json"));
  REQUIRE(res.exit_code == 0);
  const qfilt::io::json j = qfilt::io::json::parse(res.output);
  CHECK(j.at("kind") == "realize_report");
  CHECK(j.at("realizability").at("pass").get<bool>());
  CHECK(j.at("doubled_up_symmetry").at("pass").get<bool>());

  const auto& A = j.at("system").at("A");
  REQUIRE(A.at("rows") == 2);
  CHECK(A.at("data")[0][0].get<double>() == doctest::Approx(1.0));
  CHECK(A.at("data")[1][0].get<double>() == doctest::Approx(0.0));
  CHECK(A.at("data")[3][0].get<double>() == doctest::Approx(1.0));
  const double r2 = std::sqrt(2.0);
  const auto& B = j.at("system").at("B");
  CHECK(B.at("data")[1][0].get<double>() == doctest::Approx(r2));
  CHECK(B.at("data")[2][0].get<double>() == doctest::Approx(-r2));
  const auto& C = j.at("system").at("C");
  CHECK(C.at("data")[1][0].get<double>() == doctest::Approx(-r2));
  CHECK(C.at("data")[2][0].get<double>() == doctest::Approx(r2));
}

TEST_CASE("slh reports the filter coupling") {
  const RunResult res = run("slh --json " + data_path("unstable_filter.json"));
  REQUIRE(res.exit_code == 0);
  const qfilt::io::json j = qfilt::io::json::parse(res.output);
  const auto& K = j.at("oscillator").at("K");
  CHECK(K.at("rows") == 1);
  CHECK(K.at("data")[0][0].get<double>() == doctest::Approx(0.0));
  CHECK(K.at("data")[1][0].get<double>() == doctest::Approx(-std::sqrt(2.0)));
  CHECK(j.at("hamiltonian_terms").size() == 2);  // drive terms only

  const RunResult human = run("slh " + data_path("unstable_filter.json"));
  CHECK(human.output.find("S:") != std::string::npos);
  CHECK(human.output.find("L1 =") != std::string::npos);
  CHECK(human.output.find("a1^dag") != std::string::npos);
}

TEST_CASE("mirrored eigenvalues abort the transform with the named condition") {
  write_file("cli_eigpair.json", R"({
    "kind": "state_space",
    "sign_convention": "paper_negative_s",
    "n": 1, "m": 1,
    "A": {"rows": 2, "cols": 2, "data": [[1,0],[0,0],[0,0],[-1,0]]},
    "B": {"rows": 2, "cols": 2, "data": [[1,0],[0,0],[0,0],[1,0]]},
    "C": {"rows": 2, "cols": 2, "data": [[1,0],[0,0],[0,0],[1,0]]},
    "D": {"rows": 2, "cols": 2, "data": [[1,0],[0,0],[0,0],[1,0]]}
  })");
  const RunResult res = run("realize cli_eigpair.json");
  CHECK(res.exit_code == 1);
  CHECK(res.output.find("eigenvalue pair condition") != std::string::npos);
}

TEST_CASE("sweep produces the documented CSV layout") {
  const RunResult res = run("sweep --grid-points 5 " + data_path("two_mode_model.json"));
  REQUIRE(res.exit_code == 0);
  CHECK(res.output.rfind(
            "omega,re_signal,im_signal,abs2_signal,abs2_noise_a,abs2_noise_b,formula_ratio\n",
            0) == 0);
  int lines = 0;
  for (char ch : res.output)
    if (ch == '\n') ++lines;
  CHECK(lines == 6);  // header plus five rows
}

TEST_CASE("losscurve names its convention in the output") {
  const RunResult res = run("losscurve --La-points 3");
  REQUIRE(res.exit_code == 0);
  CHECK(res.output.find("# ratio_convention: amplitude") != std::string::npos);
  CHECK(res.output.find("L_a,eps_a,eps_per_m") != std::string::npos);

  const RunResult power = run("losscurve --La-points 3 --convention power");
  CHECK(power.output.find("# ratio_convention: power") != std::string::npos);
}

TEST_CASE("every subcommand is deterministic across runs") {
  const std::string cmds[] = {
      "check --json " + data_path("unstable_filter.json"),
      "realize --json " + data_path("unstable_filter.json"),
      "slh --json " + data_path("unstable_filter.json"),
      "synth --json " + data_path("unstable_filter.json"),
      "sweep --grid-points 20 " + data_path("two_mode_model.json"),
      "losscurve --La-points 4",
  };
  for (const auto& c : cmds) {
    const RunResult a = run(c);
    const RunResult b = run(c);
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.output == b.output);
    CHECK_FALSE(a.output.empty());
  }
}

TEST_CASE("output files are written when requested") {
  const RunResult res =
      run("realize --json -o cli_out.json " + data_path("unstable_filter.json"));
  REQUIRE(res.exit_code == 0);
  std::ifstream in("cli_out.json", std::ios::binary);
  REQUIRE(in.good());
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const qfilt::io::json j = qfilt::io::json::parse(content);
  CHECK(j.at("kind") == "realize_report");
}
