#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kCli = JETCALC_CLI_PATH;

int run(const std::string& args) {
  std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : (rc >> 8) & 0xff;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempFiles {
  std::vector<std::string> names;
  std::string make(const std::string& tag) {
    std::string n = "cli_tmp_" + tag + ".jet";
    names.push_back(n);
    return n;
  }
  ~TempFiles() {
    for (const auto& n : names) std::remove(n.c_str());
  }
};

}  // namespace

TEST_CASE("gen is deterministic") {
  TempFiles tmp;
  std::string a = tmp.make("gen_a"), b = tmp.make("gen_b");
  CHECK(run("gen --kind classical --m 2 --order-classical 3 --seed 5 --out " + a) == 0);
  CHECK(run("gen --kind classical --m 2 --order-classical 3 --seed 5 --out " + b) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(!slurp(a).empty());
}

TEST_CASE("reduce, reconstruct, reduce is byte-identical") {
  TempFiles tmp;
  std::string lam = tmp.make("lam"), k = tmp.make("k");
  CHECK(run("gen --kind classical --m 2 --order-classical 3 --seed 5 --out " + lam) == 0);
  CHECK(run("gen --kind linear --m 2 --n 2 --order-linear 3 --seed 6 --out " + k) == 0);
  std::string red = tmp.make("red"), rl = tmp.make("rl"), rk = tmp.make("rk"),
              red2 = tmp.make("red2");
  CHECK(run("reduce --classical-in " + lam + " --linear-in " + k + " --k 2 --out " + red) ==
        0);
  CHECK(run("reconstruct --in " + red + " --out-classical " + rl + " --out-linear " + rk) ==
        0);
  CHECK(run("reduce --classical-in " + rl + " --linear-in " + rk + " --k 2 --out " + red2) ==
        0);
  CHECK(slurp(red) == slurp(red2));
  CHECK(!slurp(red).empty());
}

TEST_CASE("actions and curvature compose through files") {
  TempFiles tmp;
  std::string lam = tmp.make("lam2"), g = tmp.make("g"), lamG = tmp.make("lamG"),
              w = tmp.make("w");
  CHECK(run("gen --kind classical --m 2 --order-classical 2 --seed 9 --out " + lam) == 0);
  CHECK(run("gen --kind group --m 2 --n 1 --order-base 4 --order-gauge 3 --seed 10 --out " +
            g) == 0);
  CHECK(run("act --in " + lam + " --group-in " + g + " --out " + lamG) == 0);
  CHECK(run("curvature --in " + lamG + " --i 1 --out " + w) == 0);
  CHECK(!slurp(w).empty());
}

TEST_CASE("check suites pass") {
  CHECK(run("check --suite bianchi --m 2 --n 2 --order 3 --seed 7") == 0);
  CHECK(run("check --suite series --m 2 --order 3 --seed 3") == 0);
  CHECK(run("check --suite all --m 2 --n 1 --order 2 --seed 4") == 0);
}

TEST_CASE("factorize reports exact residuals") {
  CHECK(run("factorize --op trR2 --k 2 --seed 11") == 0);
  CHECK(run("factorize --op curvC0 --k 1 --m 2 --n 2 --seed 12") == 0);
  // the raw-coordinate probe does not factor through the reduced data
  CHECK(run("factorize --op rawK111d11 --k 2 --seed 11") != 0);
}

TEST_CASE("orbit solver exit codes") {
  TempFiles tmp;
  std::string lam = tmp.make("lam3"), k = tmp.make("k3"), lamB = tmp.make("lamB"),
              h = tmp.make("h");
  CHECK(run("gen --kind classical --m 2 --order-classical 2 --seed 20 --out " + lam) == 0);
  CHECK(run("gen --kind linear --m 2 --n 1 --order-linear 2 --seed 21 --out " + k) == 0);
  CHECK(run("gen --kind classical --m 2 --order-classical 2 --seed 22 --out " + lamB) == 0);
  CHECK(run("orbit --classical-in " + lam + " --linear-in " + k + " --classical-in2 " + lam +
            " --linear-in2 " + k + " --k 1 --out " + h) == 0);
  CHECK(run("orbit --classical-in " + lam + " --linear-in " + k + " --classical-in2 " +
            lamB + " --linear-in2 " + k + " --k 1 --out " + h) != 0);
}

TEST_CASE("bad invocations exit nonzero") {
  CHECK(run("gen --kind bogus --out cli_tmp_x.jet") != 0);
  CHECK(run("definitely-not-a-subcommand") != 0);
  CHECK(run("act --in missing_file.jet --group-in missing_too.jet --out cli_tmp_x.jet") !=
        0);
  CHECK(run("check --suite nope") != 0);
  std::remove("cli_tmp_x.jet");
}
