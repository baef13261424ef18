#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "roam/cli.hpp"

using namespace roam;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args, const std::string& stdin_text = {}) {
  std::vector<const char*> argv{"roam"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  CliResult r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// a simple regular commute: AP1 held 900 s, AP3 long and frequent, AP2 rare
const char* kCommuteTrace =
    "mn1,AP2,0,300\n"
    "mn1,AP1,1000,900\n"
    "mn1,AP3,2500,1200\n"
    "mn1,AP1,4300,900\n"
    "mn1,AP3,5800,1200\n"
    "mn1,AP1,7600,900\n"
    "mn1,AP3,9100,1200\n"
    "mn1,AP1,10900,900\n";

}  // namespace

TEST_CASE("version flag prints the version and succeeds") {
  const CliResult r = run({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out.find("roam 0.1.0") != std::string::npos);
}

TEST_CASE("help succeeds and lists the subcommands") {
  const CliResult r = run({"--help"});
  CHECK(r.code == 0);
  for (const char* sub : {"rank", "predict", "evaluate", "synth"})
    CHECK(r.out.find(sub) != std::string::npos);
}

TEST_CASE("rank reads stdin and prints one line per network, best first") {
  const CliResult r = run({"rank", "-"}, kCommuteTrace);
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string first;
  std::getline(lines, first);
  CHECK(first.find("rank node=mn1 network=AP1") == 0);  // just left AP1: top ranked
  int count = 0;
  std::string line = first;
  do {
    CHECK(line.find("rank node=mn1 network=") == 0);
    ++count;
  } while (std::getline(lines, line) && !line.empty());
  CHECK(count == 3);
}

TEST_CASE("identical invocations produce byte-identical stdout") {
  const CliResult a = run({"rank", "-"}, kCommuteTrace);
  const CliResult b = run({"rank", "-"}, kCommuteTrace);
  CHECK(a.out == b.out);
  const CliResult c = run({"synth", "--networks", "4", "--waypoints", "20", "--duration",
                           "80000", "--seed", "9"});
  const CliResult d = run({"synth", "--networks", "4", "--waypoints", "20", "--duration",
                           "80000", "--seed", "9"});
  CHECK(c.out == d.out);
}

TEST_CASE("predict emits notifications naming the learnt alternative") {
  const CliResult r = run({"predict", "-"}, kCommuteTrace);
  REQUIRE(r.code == 0);
  // the final 900 s stay on AP1 triggers the check at minute 14: 60 s left
  CHECK(r.out.find("notify node=mn1 target=AP3 remaining_s=60\n") != std::string::npos);
  CHECK(r.out.find("predict node=mn1 ") != std::string::npos);
}

TEST_CASE("predict on an empty trace exits with the input-error code") {
  const CliResult r = run({"predict", "-"}, "# nothing here\n");
  CHECK(r.code == 1);
  CHECK(r.err.find("empty") != std::string::npos);
}

TEST_CASE("missing input files exit with the I/O code") {
  const CliResult r = run({"rank", "/nonexistent/trace.csv"});
  CHECK(r.code == 2);
}

TEST_CASE("malformed traces abort in strict mode and pass in lenient mode") {
  const std::string text = "mn1,AP1,0,60\nbroken line\nmn1,AP2,100,60\nmn1,AP1,200,60\n";
  const CliResult strict = run({"rank", "-"}, text);
  CHECK(strict.code == 1);
  const CliResult lenient = run({"rank", "--lenient", "-"}, text);
  CHECK(lenient.code == 0);
  CHECK(lenient.err.find("skipped 1") != std::string::npos);
}

TEST_CASE("synth output feeds straight back into evaluate") {
  const CliResult synth = run({"synth", "--networks", "2", "--waypoints", "12", "--duration",
                               "48000", "--structure", "alternating", "--seed", "3"});
  REQUIRE(synth.code == 0);
  const CliResult eval = run({"evaluate", "--format", "csv", "-"}, synth.out);
  REQUIRE(eval.code == 0);
  std::istringstream lines(eval.out);
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == kReportHeader);
  std::getline(lines, row);
  CHECK(row.find("mn-synth,2,12,") == 0);
  CHECK(row.rfind(",0") == row.size() - 2);  // alternating walk: 0% error
}

TEST_CASE("evaluate writes the distribution files when asked") {
  const CliResult synth = run({"synth", "--networks", "3", "--waypoints", "15", "--duration",
                               "60000", "--seed", "4"});
  REQUIRE(synth.code == 0);
  const CliResult eval =
      run({"evaluate", "--dist", "cli_dist_test", "--bins", "5", "-"}, synth.out);
  REQUIRE(eval.code == 0);
  std::ifstream mass("cli_dist_test_density.csv"), cdf("cli_dist_test_cdf.csv");
  REQUIRE(mass.good());
  REQUIRE(cdf.good());
  std::string header;
  std::getline(mass, header);
  CHECK(header == "bin_lo,bin_hi,mass");
  std::getline(cdf, header);
  CHECK(header == "bin_lo,bin_hi,cdf");
  mass.close();
  cdf.close();
  std::remove("cli_dist_test_density.csv");
  std::remove("cli_dist_test_cdf.csv");
}

TEST_CASE("evaluate refuses traces too short to score") {
  const CliResult r = run({"evaluate", "-"}, "mn1,AP1,0,60\nmn1,AP2,100,60\n");
  CHECK(r.code == 1);
  CHECK(r.err.find("mn1") != std::string::npos);
}

TEST_CASE("infeasible synth profiles exit with the input-error code") {
  const CliResult r =
      run({"synth", "--networks", "9", "--waypoints", "4", "--duration", "50000"});
  CHECK(r.code == 1);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("unknown flags are a usage error") {
  const CliResult r = run({"rank", "--frobnicate", "-"});
  CHECK(r.code != 0);
}

TEST_CASE("multi-node traces produce one evaluation row per node, sorted") {
  std::string trace;
  for (int i = 0; i < 6; ++i) {
    const std::string t = std::to_string(i * 1000);
    trace += "zeta,A" + std::string(i % 2 ? "P2" : "P1") + "," + t + ",400\n";
    trace += "alpha,A" + std::string(i % 2 ? "P2" : "P1") + "," + t + ",400\n";
  }
  const CliResult eval = run({"evaluate", "--format", "csv", "-"}, trace);
  REQUIRE(eval.code == 0);
  CHECK(eval.out.find("alpha,") < eval.out.find("zeta,"));
}
