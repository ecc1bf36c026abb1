#include <doctest.h>

#include <cmath>

#include "ergocube/torus.hpp"

using namespace ergocube;

TEST_CASE("trig polynomial literals") {
  const TrigPoly c = parse_trig_poly("[[1, 0.5, 0]]");
  CHECK(c == TrigPoly::cosine(1));
  CHECK(c.coefficient(-1) == Complex(0.5L));
  CHECK(std::fabs(static_cast<double>(c.evaluate(0.25L))) < 1e-15);
  CHECK(static_cast<double>(c.evaluate(0.5L)) == doctest::Approx(-1));
  CHECK(static_cast<double>(c.sup_bound()) == doctest::Approx(1));
  CHECK_THROWS_AS(parse_trig_poly("[[-1, 1, 0]]"), ValidationError);
  CHECK_THROWS_AS(parse_trig_poly("[[0, 1, 1]]"), ValidationError);
  CHECK_THROWS_AS(parse_trig_poly("[1, 2]"), ValidationError);
  CHECK(parse_trig_poly(format_trig_poly(c)) == c);
}

TEST_CASE("Fourier oracles") {
  const TorusSystem sys = *builtin_torus("torus-sqrt23");
  const TrigPoly one = TrigPoly::constant(1), cs = TrigPoly::cosine(1);
  CHECK(static_cast<double>(fourier_host_integral(sys, one, one, one, one)) == doctest::Approx(1));
  CHECK(std::fabs(static_cast<double>(fourier_host_integral(sys, cs, one, one, one))) < 1e-15);
  CHECK(static_cast<double>(fourier_host_integral(sys, cs, cs, cs, cs)) == doctest::Approx(0.125));
  CHECK(static_cast<double>(fourier_cubic_limit(sys, cs, cs, cs, 0)) == doctest::Approx(0.25));
  CHECK(static_cast<double>(fourier_cubic_limit(sys, cs, cs, cs, 0.5L)) == doctest::Approx(-0.25));
  const TrigPoly f1 = parse_trig_poly("[[0, 0.3, 0], [2, 0.1, 0.2]]"), f2 = parse_trig_poly("[[0, -0.5, 0], [1, 0.2, 0]]");
  CHECK(static_cast<double>(fourier_cubic_limit(sys, f1, f2, one, 0.1L)) == doctest::Approx(0.3 * -0.5));
  TorusSystem rational{0.5L, 0.25L, false, "rational"};
  CHECK_THROWS_AS(fourier_host_integral(rational, cs, cs, cs, cs), UnsupportedRegimeError);
}

TEST_CASE("torus averages") {
  const TorusSystem sys = *builtin_torus("torus-sqrt23");
  const TrigPoly one = TrigPoly::constant(1), cs = TrigPoly::cosine(1);
  const TrigPoly ones[] = {one, one, one, one};
  CHECK(torus_average(sys, AverageKind::cubic, std::span(ones, 3), 0, 17) == doctest::Approx(1));
  CHECK(torus_average(sys, AverageKind::fourfold, std::span(ones, 4), 0, 9) == doctest::Approx(1));
  CHECK(torus_average(sys, AverageKind::windowed_sn, std::span(ones, 1), 0, 9) == doctest::Approx(1));

  // direct loop for the cubic average at small N
  const TrigPoly three[] = {cs, cs, cs};
  const long double x = 0.3L;
  double direct = 0;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j)
      direct += static_cast<double>(cs.evaluate(std::fmod(x + i * sys.alpha, 1.0L)) *
                                    cs.evaluate(std::fmod(x + j * sys.beta, 1.0L)) *
                                    cs.evaluate(std::fmod(x + i * sys.alpha + j * sys.beta, 1.0L)));
  CHECK(torus_average(sys, AverageKind::cubic, three, x, 20) == doctest::Approx(direct / 400).epsilon(1e-12));

  const TrigPoly single[] = {cs};
  const double a = torus_average(sys, AverageKind::windowed_sn, single, 0, 200, {16, 1});
  const double b = torus_average(sys, AverageKind::windowed_sn, single, 0, 200, {16, 3});
  CHECK(a == b);  // threads never change the bits
  CHECK(std::fabs(a - 0.125) < 2e-2);
}
