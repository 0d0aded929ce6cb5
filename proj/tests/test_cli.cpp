#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sdsieve/cli.hpp"

using namespace sdsieve;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("entry subcommand emits the documented row") {
  RunResult r = run({"entry", "--seq", "fib", "--d", "6"});
  REQUIRE(r.code == 0);
  auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "p,outcome,m_p,method");
  CHECK(lines[1] == "6,finite,12,lcm-composition");
}

TEST_CASE("entry over a prime range reports alpha-hat") {
  RunResult r = run({"entry", "--seq", "mersenne", "--primes-up-to", "20"});
  REQUIRE(r.code == 0);
  auto lines = data_lines(r.out);
  CHECK(lines.size() == 1 + 8);  // header + primes up to 20
  CHECK(lines[1] == "2,infinite,inf,scan");
  CHECK(lines[2] == "3,finite,2,order-divisor");
  CHECK(r.err.find("alpha-hat") != std::string::npos);
}

TEST_CASE("unknown subcommand exits 2 with usage") {
  RunResult r = run({"frobnicate"});
  CHECK(r.code == 2);
  CHECK(r.err.find("Usage") != std::string::npos);
}

TEST_CASE("missing required option exits 2") {
  RunResult r = run({"m-sum", "--z", "10"});
  CHECK(r.code == 2);
}

TEST_CASE("m-sum matches the worked example") {
  RunResult r = run({"m-sum", "--seq", "trivial", "--z", "5", "--strategy", "both"});
  REQUIRE(r.code == 0);
  auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 2);
  // M(Pi_5) for x_n = n is phi(30)/30 = 4/15
  CHECK(lines[1].find("5,3,4/15,") == 0);
}

TEST_CASE("resource guards exit 3") {
  RunResult r = run({"m-sum", "--seq", "fib", "--z", "200", "--strategy", "direct"});
  CHECK(r.code == 3);
  CHECK(r.err.find("OmegaTooLarge") != std::string::npos);
}

TEST_CASE("invalid sequence spec exits 2") {
  RunResult r = run({"m-sum", "--seq", "wat", "--z", "10"});
  CHECK(r.code == 2);
  CHECK(r.err.find("SpecInvalid") != std::string::npos);
}

TEST_CASE("figure1 writes header plus one row per prime and is reproducible") {
  std::string path = "/tmp/sdsieve_test_fig1.csv";
  RunResult r1 = run({"figure1", "--seq", "mersenne", "--zmax", "60", "--out", path});
  REQUIRE(r1.code == 0);
  std::ifstream in(path);
  std::stringstream data;
  data << in.rdbuf();
  auto lines = data_lines(data.str());
  CHECK(lines.size() == 1 + 17);
  CHECK(lines[0].rfind("z,M,M_float", 0) == 0);

  RunResult r2 = run({"figure1", "--seq", "mersenne", "--zmax", "60"});
  REQUIRE(r2.code == 0);
  RunResult r3 = run({"figure1", "--seq", "mersenne", "--zmax", "60"});
  CHECK(r2.out == r3.out);  // identical data bytes
  CHECK(data.str() == r2.out);
  std::remove(path.c_str());
}

TEST_CASE("sieve-count matches the worked example") {
  RunResult r = run({"sieve-count", "--seq", "mersenne", "--N", "100", "--z", "5"});
  REQUIRE(r.code == 0);
  auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "N,z,omega,count,predicted,bound,within_bound");
  CHECK(lines[1] == "100,5,3,50,50/1,8,true");
}

TEST_CASE("rough and prime-density run") {
  RunResult rough = run({"rough", "--seq", "fib", "--N", "10000"});
  CHECK(rough.code == 0);
  CHECK(data_lines(rough.out).size() == 2);

  RunResult pd = run({"prime-density", "--seq", "paritydemo", "--N", "200"});
  CHECK(pd.code == 0);
  CHECK(data_lines(pd.out).size() == 4);  // header + three checkpoints
}

TEST_CASE("envelope emits verification columns") {
  RunResult r = run({"envelope", "--seq", "mersenne", "--z", "31"});
  REQUIRE(r.code == 0);
  auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[1].rfind("31,5,31,5,31,true", 0) == 0);
}

TEST_CASE("eds subcommands") {
  std::string curve = "eds:0,0,1,-1,0:0,0";
  RunResult terms = run({"eds", "terms", "--curve", curve, "--nmax", "10"});
  REQUIRE(terms.code == 0);
  auto lines = data_lines(terms.out);
  REQUIRE(lines.size() == 11);
  CHECK(lines[0] == "n,a,b");
  CHECK(lines[5] == "5,1,2");  // x(5P) = 2/8 form: a_5 = 1, b_5 = 2

  RunResult orders = run({"eds", "orders", "--curve", curve, "--pmax", "20"});
  REQUIRE(orders.code == 0);
  CHECK(data_lines(orders.out).size() == 1 + 8);

  RunResult kob = run({"eds", "koblitz", "--curve", curve, "--z", "100", "--N", "1000"});
  REQUIRE(kob.code == 0);
  CHECK(kob.err.find("h(z)") != std::string::npos);
  CHECK(kob.err.find("sieve check") != std::string::npos);
}

TEST_CASE("multiples subcommands emit JSON") {
  RunResult mpl = run({"multiples", "verify-mpl", "--seed", "2,3,5", "--N", "10000"});
  REQUIRE(mpl.code == 0);
  CHECK(mpl.out.find("\"verdict\": \"pass\"") != std::string::npos);

  RunResult a1 = run({"multiples", "theorem-a1", "--B", "pow2", "--m", "1", "--horizons",
                      "1e3,1e4,1e5"});
  REQUIRE(a1.code == 0);
  CHECK(a1.out.find("\"verdict\": \"nonincreasing\"") != std::string::npos);
  CHECK(a1.out.find("\"horizons\"") != std::string::npos);

  RunResult bad = run({"multiples", "verify-mpl", "--seed", "1,2", "--N", "100"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("SeedContainsUnit") != std::string::npos);
}

TEST_CASE("config file supplies defaults but flags win") {
  std::string path = "/tmp/sdsieve_test_config.txt";
  {
    std::ofstream cfg(path);
    cfg << "# comment line\n";
    cfg << "seq=mersenne\n";
    cfg << "z=5\n";
  }
  RunResult from_cfg = run({"m-sum", "--config", path});
  REQUIRE(from_cfg.code == 0);
  CHECK(data_lines(from_cfg.out)[1].rfind("5,3,", 0) == 0);

  RunResult overridden = run({"m-sum", "--config", path, "--z", "7"});
  REQUIRE(overridden.code == 0);
  CHECK(data_lines(overridden.out)[1].rfind("7,4,", 0) == 0);
  std::remove(path.c_str());
}

TEST_CASE("json format option") {
  RunResult r = run({"m-sum", "--seq", "trivial", "--z", "5", "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"M\": \"4/15\"") != std::string::npos);
}

TEST_CASE("report stream carries version and warnings") {
  RunResult r = run({"m-sum", "--seq", "mersenne", "--z", "5"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("# sdsieve 0.1.0") != std::string::npos);
  CHECK(r.err.find("m_2 infinite") != std::string::npos);
  CHECK(r.err.find("# wall-ms:") != std::string::npos);
}
