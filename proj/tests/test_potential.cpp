#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "pmt/potential.hpp"

using namespace pmt;

namespace {
const std::string kData = PMT_TEST_DATA;
}

TEST_CASE("parse builds the expected trees") {
  const MapParams p(1.0);
  CHECK(parse_potential("-1.0*logdf", p) == Potential::scale(-1.0, Potential::neg_log_df()));
  CHECK(parse_potential("omega(0.5) + const(0.2)", p) ==
        Potential::sum({Potential::omega(0.5), Potential::constant(0.2)}));
  const Potential big = parse_potential("2*omega(1.5)", p);
  CHECK(natural_exponent(big, p) == 1.0);
  CHECK_NOTHROW(holder_data(big, p, 1.0));
}

TEST_CASE("parse errors carry positions") {
  const MapParams p(1.0);
  CHECK_THROWS_AS(parse_potential("omega(", p), ParseError);
  CHECK_THROWS_AS(parse_potential("sine(1)", p), ParseError);
  CHECK_THROWS_AS(parse_potential("omega(-1)", p), ParseError);
  CHECK_THROWS_AS(parse_potential("logdf +", p), ParseError);
  try {
    parse_potential("logdf + foo", p);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position == 8);
  }
}

TEST_CASE("printer round trip") {
  const MapParams p(0.8);
  for (const char* text : {"logdf", "-1*logdf", "omega(0.5)+const(0.2)", "0.7*omega(0.5)+0.2*logdf+const(0.1)",
                           "2*omega(1.5) - 3*const(0.25)", "-0.5*omega(0.5)+logdf"}) {
    const Potential a = parse_potential(text, p);
    CHECK(parse_potential(to_string(a), p) == a);
  }
}

TEST_CASE("pointwise values") {
  const MapParams p(1.0);
  CHECK(eval_potential(Potential::omega(0.5), p, 0.25) == doctest::Approx(-0.5));
  CHECK(eval_potential(Potential::neg_log_df(), p, 0.0) == 0.0);
  CHECK(eval_potential(Potential::neg_log_df(), p, 1.0) == doctest::Approx(-std::log(3.0)));
  for (const double x : {0.0, 0.3, 1.0}) CHECK(eval_potential(Potential::constant(0.7), p, x) == 0.7);
  CHECK_THROWS_AS(eval_potential(Potential::omega(0.5), p, 1.5), DomainError);
}

TEST_CASE("Hoelder data") {
  const MapParams p(0.8);
  CHECK(holder_data(Potential::omega(0.5), p, 0.5).seminorm == doctest::Approx(1.0));
  CHECK(holder_data(Potential::constant(3.0), p, 1.0).seminorm == 0.0);
  CHECK(natural_exponent(Potential::neg_log_df(), p) == doctest::Approx(0.8));
  const HolderData g = holder_data(Potential::neg_log_df(), p, 0.8);
  CHECK(std::isfinite(g.seminorm));
  CHECK(g.seminorm > 0.0);
  CHECK_THROWS_AS(holder_data(Potential::neg_log_df(), p, 1.0), ExponentMismatch);
  CHECK(natural_exponent(Potential::neg_log_df(), MapParams(2.0)) == 1.0);

  // oracle: two-point sampling of omega(g), sup approached as y -> 0
  for (const double gm : {0.3, 0.5, 1.0}) {
    double best = 0.0;
    for (int i = 1; i <= 2000; ++i) {
      const double x = i / 2000.0;
      best = std::max(best, (std::pow(x, gm) - 0.0) / std::pow(x - 0.0, gm));  // pair (x, 0)
      const double y = x / 2;
      best = std::max(best, (std::pow(x, gm) - std::pow(y, gm)) / std::pow(x - y, gm));
    }
    CHECK(best <= holder_data(Potential::omega(gm), p, gm).seminorm + 1e-12);
    CHECK(best >= 1.0 - 1e-12);
  }
}

TEST_CASE("lower envelope and subadditivity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const MapParams p(0.8);
  for (const char* text : {"omega(0.5)", "logdf", "0.7*omega(0.5)+0.2*logdf+const(0.1)",
                           "-0.3*omega(0.8)+1.5*logdf"}) {
    const Potential phi = parse_potential(text, p);
    const double g = natural_exponent(phi, p);
    const HolderData h = holder_data(phi, p, g);
    const double phi0 = eval_potential(phi, p, 0.0);
    double sampled = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double x = u(rng);
      const double y = u(rng);
      CHECK(eval_potential(phi, p, x) >= phi0 - h.seminorm * std::pow(x, g) - 1e-12);
      if (x != y)
        sampled = std::max(sampled, std::abs(eval_potential(phi, p, x) - eval_potential(phi, p, y)) /
                                        std::pow(std::abs(x - y), g));
    }
    CHECK(sampled <= h.seminorm + 1e-12);
  }
}

TEST_CASE("Birkhoff sums") {
  const MapParams p(0.8);
  const Potential phi = parse_potential("0.7*omega(0.5)+0.2*logdf", p);
  CHECK(birkhoff(phi, p, 0.3, 0) == 0.0);
  CHECK(birkhoff(phi, p, 0.3, 1) == doctest::Approx(eval_potential(phi, p, 0.3)));
  CHECK(birkhoff(Potential::constant(0.4), p, 0.9, 7) == doctest::Approx(2.8));
  const double x = 0.37;
  CHECK(birkhoff(Potential::neg_log_df(), p, x, 2) ==
        doctest::Approx(-std::log(deriv(p, x) * deriv(p, eval(p, x)))).epsilon(1e-10));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double y = u(rng);
    double fy = y;
    for (int k = 0; k < 4; ++k) fy = eval(p, fy);
    CHECK(std::abs(birkhoff(phi, p, y, 9) - birkhoff(phi, p, y, 4) - birkhoff(phi, p, fy, 5)) <
          1e-9);
  }
}

TEST_CASE("neutral weights") {
  const MapParams p(0.8);
  for (const int n : {1, 5, 50}) CHECK(zeta_n(Potential::constant(1.3), p, n) == doctest::Approx(1.0));
  const Potential phi = parse_potential("0.4*omega(0.5)+logdf", p);
  const double x1 = p.x1();
  CHECK(zeta_n(phi, p, 1) ==
        doctest::Approx(std::exp(eval_potential(phi, p, x1) - eval_potential(phi, p, 0.0))));
  const NeutralOrbit o = neutral_orbit(p, 40);
  for (const int n : {2, 10, 40}) {
    double dfn = 1.0;
    double x = o[n];
    for (int k = 0; k < n; ++k) {
      dfn *= deriv(p, x);
      x = eval(p, x);
    }
    CHECK(zeta_n(Potential::neg_log_df(), p, n) == doctest::Approx(1.0 / dfn).epsilon(1e-10));
  }
}

TEST_CASE("tabulated potentials") {
  const MapParams p(1.0);
  const Potential t = parse_potential("table(" + kData + "/ramp.csv)", p);
  for (const double x : {0.0, 0.1, 0.6, 1.0})
    CHECK(eval_potential(t, p, x) == doctest::Approx(-x));
  const HolderData h = holder_data(t, p, 1.0);
  CHECK(h.seminorm == 1.0);
  CHECK_THROWS_AS(parse_potential("table(" + kData + "/bad_seminorm.csv)", p), std::invalid_argument);
  CHECK_THROWS_AS(parse_potential("table(" + kData + "/missing.csv)", p), std::invalid_argument);
}
