#include <doctest.h>

#include <sstream>

#include "adauction/rational.hpp"

using adauction::Rat;

TEST_CASE("decimal strings parse exactly") {
  CHECK(Rat::parse("2.60") == Rat(13, 5));
  CHECK(Rat::parse("0.45") == Rat(9, 20));
  CHECK(Rat::parse("-1.5") == Rat(-3, 2));
  CHECK(Rat::parse("3") == Rat(3));
  CHECK(Rat::parse("+0.0") == Rat(0));
  CHECK(Rat::parse("1e3") == Rat(1000));
  CHECK(Rat::parse("2.5e-2") == Rat(1, 40));
}

TEST_CASE("fraction strings parse and reduce") {
  CHECK(Rat::parse("500/21") == Rat(500, 21));
  CHECK(Rat::parse("4/8") == Rat(1, 2));
  CHECK(Rat::parse("-3/9") == Rat(-1, 3));
}

TEST_CASE("malformed numbers are rejected") {
  CHECK_THROWS(Rat::parse(""));
  CHECK_THROWS(Rat::parse("1/0"));
  CHECK_THROWS(Rat::parse("1.2.3"));
  CHECK_THROWS(Rat::parse("abc"));
  CHECK_THROWS(Rat::parse("1/-2"));
}

TEST_CASE("canonical formatting") {
  CHECK(Rat(13, 5).str() == "13/5");
  CHECK(Rat(4, 2).str() == "2");
  CHECK(Rat(-1, 3).str() == "-1/3");
  CHECK(Rat(0).str() == "0");
  std::ostringstream os;
  os << Rat(21, 25);
  CHECK(os.str() == "21/25");
}

TEST_CASE("decimal rendering rounds half away from zero") {
  CHECK(Rat(21, 25).decimal_str(2) == "0.84");
  CHECK(Rat(1, 3).decimal_str(4) == "0.3333");
  CHECK(Rat(1, 2).decimal_str(0) == "1");
  CHECK(Rat(-1, 2).decimal_str(0) == "-1");
  CHECK(Rat(500, 21).decimal_str(3) == "23.810");
}

TEST_CASE("arithmetic and comparisons") {
  const Rat a(3, 4), b(1, 6);
  CHECK(a + b == Rat(11, 12));
  CHECK(a - b == Rat(7, 12));
  CHECK(a * b == Rat(1, 8));
  CHECK(a / b == Rat(9, 2));
  CHECK(a > b);
  CHECK(-a < b);
  CHECK(abs(Rat(-5, 3)) == Rat(5, 3));
  CHECK_THROWS(a / Rat(0));
}
