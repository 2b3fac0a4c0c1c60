#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "jetcalc/io.hpp"
#include "jetcalc/random.hpp"

using namespace jetcalc;

TEST_CASE("tensor file round trip") {
  RandomGen rng(71);
  RTensor t = randomClassical(2, 2, rng, 3);
  std::ostringstream out;
  io::writeTensorFile(out, t, "lam");
  std::istringstream in(out.str());
  CHECK(io::readTensorFile(in) == t);

  RTensor f = randomTensor(3, 2, {SlotKind::FiberUp, SlotKind::BaseDown}, 2, rng, 3);
  std::ostringstream out2;
  io::writeTensorFile(out2, f, "phi");
  std::istringstream in2(out2.str());
  CHECK(io::readTensorFile(in2) == f);
}

TEST_CASE("group element round trip") {
  RandomGen rng(72);
  WGroupElement g = randomGroupElement(2, 2, 4, 3, rng, 3);
  std::ostringstream out;
  io::writeGroupFile(out, g);
  std::istringstream in(out.str());
  CHECK(io::readGroupFile(in) == g);
}

TEST_CASE("reduced data round trips") {
  RandomGen rng(73);
  RTensor lam = randomClassical(2, 2, rng, 3);
  RTensor kjet = randomLinear(2, 1, 2, rng, 3);
  for (int k = 1; k <= 2; ++k) {
    ReducedFirst d = reduceFirst(lam, kjet, k);
    std::ostringstream out;
    io::writeReducedFirstFile(out, d);
    std::istringstream in(out.str());
    CHECK(io::readReducedFirstFile(in) == d);
  }
  RTensor phi = randomTensor(2, 1, {SlotKind::FiberUp}, 2, rng, 2);
  ReducedSecond d2 = reduceSecond(lam, kjet, phi, 1);
  std::ostringstream out2;
  io::writeReducedSecondFile(out2, d2);
  std::istringstream in2(out2.str());
  CHECK(io::readReducedSecondFile(in2) == d2);
}

TEST_CASE("writes are deterministic") {
  RandomGen r1(74), r2(74);
  std::ostringstream a, b;
  io::writeTensorFile(a, randomClassical(2, 2, r1, 3), "lam");
  io::writeTensorFile(b, randomClassical(2, 2, r2, 3), "lam");
  CHECK(a.str() == b.str());
}

TEST_CASE("rejects broken symmetry") {
  std::string file =
      "jetcalc-file v1\n"
      "type tensor\n"
      "tensor lam\n"
      "m 2\nn 1\norder 0\n"
      "slots BU BD BD\n"
      "sym 2,3\n"
      "lam[1,1,2|] = 1\n"   // mu-nu asymmetric: mirror coordinate missing
      "end\n";
  std::istringstream in(file);
  CHECK_THROWS_AS(io::readTensorFile(in), io::ParseError);
}

TEST_CASE("rejects unknown schema version") {
  std::istringstream in("jetcalc-file v9\ntype tensor\n");
  CHECK_THROWS_AS(io::readTensorFile(in), io::ParseError);
}

TEST_CASE("rejects malformed rational with a line number") {
  std::string file =
      "jetcalc-file v1\n"
      "type tensor\n"
      "tensor t\n"
      "m 2\nn 1\norder 0\n"
      "slots BD\n"
      "t[1|] = 3/4/5\n"
      "end\n";
  std::istringstream in(file);
  try {
    io::readTensorFile(in);
    FAIL("expected a parse error");
  } catch (const io::ParseError& e) {
    CHECK(std::string(e.what()).find("line 8") != std::string::npos);
  }
}

TEST_CASE("rejects coordinates beyond the trust order") {
  std::string file =
      "jetcalc-file v1\n"
      "type tensor\n"
      "tensor t\n"
      "m 2\nn 1\norder 1\n"
      "slots BD\n"
      "t[1|1,2] = 1\n"
      "end\n";
  std::istringstream in(file);
  CHECK_THROWS_AS(io::readTensorFile(in), io::ParseError);
}

TEST_CASE("rejects truncated files") {
  std::string file =
      "jetcalc-file v1\n"
      "type tensor\n"
      "tensor t\n"
      "m 2\nn 1\norder 0\n"
      "slots BD\n";
  std::istringstream in(file);
  CHECK_THROWS_AS(io::readTensorFile(in), io::ParseError);
}
