#include <doctest.h>

#include "ergocube/averaging.hpp"
#include "ergocube/generate.hpp"
#include "ergocube/joinings.hpp"
#include "ergocube/reference_sums.hpp"

using namespace ergocube;

TEST_CASE("constant observables") {
  const FiniteMPS sys = *builtin_system("grid-2x3");
  const Observable c = Observable::constant(6, ratio(1, 2));
  for (std::uint64_t n : {1, 5, 7}) {
    CHECK(cubic_average(sys, c, c, c, 0, n) == ratio(1, 8));
    const Observable fs[] = {c, c, c, c};
    CHECK(fourfold_average(sys, fs, 3, n) == ratio(1, 16));
    CHECK(windowed_sn(sys, c, 2, n) == ratio(1, 16));
  }
}

TEST_CASE("Birkhoff averages over full periods") {
  const FiniteMPS grid = *builtin_system("grid-2x3");
  const Observable f = parse_observable("1,2,3,4,5,6");
  const GroupElement both[] = {kS, kT};
  CHECK(birkhoff_average(grid, f, 0, both, 6) == ratio(7, 2));
  const FiniteMPS ring = rotation_system(5, 1, {2, 0}, {0, 0});
  const GroupElement s_only[] = {kS};
  CHECK(birkhoff_average(ring, parse_observable("1,0,0,0,0"), 3, s_only, 5) == ratio(1, 5));
  // 3 steps from 0 under +2 mod 5 visit 0, 2, 4
  CHECK(birkhoff_average(ring, parse_observable("1,0,1,0,1"), 0, s_only, 3) == 1);
}

TEST_CASE("z4-diagonal fourfold average is 1/8 at multiples of 4") {
  const FiniteMPS z4 = *builtin_system("z4-diagonal");
  const Observable f = parse_observable("1,0,-1,0");
  const Observable fs[] = {f, f, f, f};
  for (std::uint64_t n = 4; n <= 64; n += 4) CHECK(fourfold_average(z4, fs, 0, n) == ratio(1, 8));
  for (std::uint64_t n : {1, 2, 3, 5}) CHECK(fourfold_average(z4, fs, 0, n) == reference::fourfold_average(z4, fs, 0, n));
}

TEST_CASE("factored forms equal the direct loops") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 15; ++t) {
    const FiniteMPS sys = random_system(Family::mixed, rng);
    std::vector<Observable> fs;
    for (int k = 0; k < 4; ++k) fs.push_back(random_observable(sys.size(), rng));
    const std::size_t x = rng() % sys.size();
    for (std::uint64_t n = 1; n <= 6; ++n) {
      CHECK(fourfold_average(sys, fs, x, n) == reference::fourfold_average(sys, fs, x, n));
      CHECK(windowed_sn(sys, fs[0], x, n) == reference::windowed_sn(sys, fs[0], x, n));
      CHECK(cubic_average(sys, fs[0], fs[1], fs[2], x, n) == reference::cubic_average(sys, fs[0], fs[1], fs[2], x, n));
      CHECK(windowed_sn(sys, fs[0], x, n) >= 0);
    }
  }
}

TEST_CASE("windowed S_N stabilizes at the seminorm") {
  const FiniteMPS z4 = *builtin_system("z4-diagonal");
  const Observable f = parse_observable("1,0,-1,0");
  for (std::uint64_t n : {4, 8, 16, 256}) CHECK(windowed_sn(z4, f, 1, n) == ratio(1, 8));
  const FiniteMPS prod = *builtin_system("product-2x3");
  const Observable g = parse_observable("1,-1,1/2,0,1,-1/4");
  const Rational s4 = host_seminorm(host_measure(prod), g).fourth_power;
  for (std::uint64_t n : {6, 12, 60}) CHECK(windowed_sn(prod, g, 4, n) == s4);
}

TEST_CASE("cubic bound") {
  const FiniteMPS z4 = *builtin_system("z4-diagonal");
  const Observable one = Observable::constant(4, 1);
  const BoundCheck ok = check_bound_average(z4, one, one, one, 0, 3);
  CHECK(ok.lhs == 1);
  CHECK(ok.rhs == 1);
  CHECK(ok.holds);
  CHECK_FALSE(check_bound_average(z4, one, one, one, 0, 3, ratio(1, 2)).holds);
  CHECK_THROWS_AS(check_bound_average(z4, one.scaled(2), one, one, 0, 3), PreconditionError);
}

TEST_CASE("telescoping") {
  const Rational a[] = {ratio(1, 2), ratio(1, 2)};
  const Rational b[] = {1, 1};
  const TelescopingCheck tc = check_telescoping(a, b);
  CHECK(tc.identity_holds);
  CHECK(tc.bound_applicable);
  CHECK(tc.bound_holds);
  const Rational big[] = {2, 2};
  CHECK_FALSE(check_telescoping(big, b).bound_applicable);
  const Rational shorter[] = {1};
  CHECK_THROWS_AS(check_telescoping(a, shorter), DimensionError);
}

TEST_CASE("decomposition") {
  const FiniteMPS z4 = *builtin_system("z4-diagonal");
  const Observable f = parse_observable("1,0,-1,0");
  const std::uint64_t sched[] = {1, 2, 4};
  CHECK_THROWS_WITH_AS(decompose_and_converge(z4, f, f, f, 0, sched), doctest::Contains("magic, free"),
                       PreconditionError);

  const FiniteMPS prod = *builtin_system("product-2x3");
  const Observable f1 = parse_observable("1,0,-1,1/2,1,0"), f2 = parse_observable("0,1,1,-1,1/2,1"),
                   f3 = parse_observable("1,1,-1,0,1/4,-1");
  const std::uint64_t s2[] = {1, 2, 3, 5, 6, 7, 12};
  const auto rep = decompose_and_converge(prod, f1, f2, f3, 2, s2);
  CHECK(rep.g_part.is_zero());
  for (const auto& row : rep.rows) {
    CHECK(row.sum_equal);
    CHECK(row.track_b == 0);
  }
  CHECK(rep.rows[4].track_a == rep.track_a_limit);
  CHECK(rep.rows[6].direct == rep.track_a_limit);
}

TEST_CASE("average reports") {
  AverageSpec spec;
  spec.kind = AverageKind::fourfold;
  const Observable f = parse_observable("1,0,-1,0");
  spec.observables = {f, f, f, f};
  spec.schedule = {4, 8, 16};
  const auto rep = average_report(*builtin_system("z4-diagonal"), spec, "z4-diagonal");
  CHECK(rep.to_csv() == "N,value,reference,abs_error\n4,1/8,1/8,0/1\n8,1/8,1/8,0/1\n16,1/8,1/8,0/1\n");
  spec.schedule = {4, 4};
  CHECK_THROWS_AS(average_report(*builtin_system("z4-diagonal"), spec, ""), ValidationError);
  CHECK_THROWS_AS(parse_schedule("8,4"), ValidationError);
  CHECK(parse_schedule("pow2:2..4") == std::vector<std::uint64_t>{4, 8, 16});
}
