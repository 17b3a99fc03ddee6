#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sepbeam/model.hpp"

using namespace sepbeam;

TEST_CASE("validate_system accepts the reference setups") {
  CHECK(validate_system(test::make_setup1()).empty());
  CHECK(validate_system(test::make_setup2()).empty());
  CHECK(validate_system(test::make_setup3()).empty());
  CHECK(validate_system(test::make_orthogonal()).empty());
}

TEST_CASE("validate_system reports column mismatches") {
  WiretapSystem sys = test::make_setup1();
  sys.h_e = CMat(2, 3);
  auto issues = validate_system(sys);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].find("column") != std::string::npos);
}

TEST_CASE("validate_system reports non-positive noise and power") {
  WiretapSystem sys = test::make_setup1();
  sys.n_b = 0.0;
  auto issues = validate_system(sys);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].find("n_b") != std::string::npos);

  sys = test::make_setup1();
  sys.power = -1.0;
  CHECK(validate_system(sys).size() == 1);
}

TEST_CASE("validate_system reports non-finite entries") {
  WiretapSystem sys = test::make_setup1();
  sys.h_b(0, 0) = cdouble(std::nan(""), 0.0);
  CHECK(validate_system(sys).size() == 1);
}

TEST_CASE("validate_constellation checks distinctness and length") {
  WiretapSystem sys = test::make_setup1();
  Constellation cons;
  cons.eve_lb_min = 0.1;
  cons.symbols = {{cdouble(1, 1), cdouble(1, -1)}, {cdouble(-1, -1), cdouble(1, -1)}};
  CHECK(validate_constellation(cons, sys).empty());

  cons.symbols.push_back(cons.symbols[0]);
  CHECK_FALSE(validate_constellation(cons, sys).empty());
}

TEST_CASE("beam de-normalization round-trips") {
  BeamVector bv;
  bv.w_bar = {cdouble(-0.8784, 0.0), cdouble(0.4779, 0.0)};
  bv.power = 2.5;
  CVec w = vscale(bv.w_bar, std::sqrt(bv.power));
  CVec back = vscale(w, 1.0 / std::sqrt(bv.power));
  for (size_t i = 0; i < back.size(); ++i)
    CHECK(std::abs(back[i] - bv.w_bar[i]) <= 1e-12);
}

TEST_CASE("canonical_phase rotates the first significant entry to be real") {
  CVec v = {cdouble(0.0, 0.5), cdouble(0.5, -0.5)};
  CVec c = canonical_phase(v);
  CHECK(c[0].imag() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(c[0].real() >= 0.0);
  CHECK(std::abs(norm2(c) - norm2(v)) <= 1e-14);

  // Leading negligible entry is skipped.
  CVec w = {cdouble(1e-15, 0.0), cdouble(0.0, -1.0)};
  CVec cw = canonical_phase(w);
  CHECK(cw[1].real() == doctest::Approx(1.0).epsilon(1e-12));
}
