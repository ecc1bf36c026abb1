#include <doctest.h>

#include "ergocube/generate.hpp"
#include "ergocube/joinings.hpp"

using namespace ergocube;

namespace {

// Z_n with S = T = +1: I_S is trivial so mu_S = mu x mu, and I_{TxT} is
// generated by d = x1 - x0. Hence |||f|||^4 = (1/n) sum_d a(d)^2 with the
// autocorrelation a(d) = (1/n) sum_x f(x) f(x + d).
Rational diagonal_oracle(const Observable& f) {
  const std::size_t n = f.size();
  Rational total;
  for (std::size_t d = 0; d < n; ++d) {
    Rational a;
    for (std::size_t x = 0; x < n; ++x) a += f[x] * f[(x + d) % n];
    a /= static_cast<long>(n);
    total += a * a;
  }
  return total / static_cast<long>(n);
}

// (Z_a x Z_b, sigma x id, id x tau) with unit rotations: the box norm of the
// matrix F(y, w) = f(y b + w).
Rational box_oracle(const Observable& f, std::size_t a, std::size_t b) {
  Rational total;
  for (std::size_t y = 0; y < a; ++y)
    for (std::size_t y2 = 0; y2 < a; ++y2)
      for (std::size_t w = 0; w < b; ++w)
        for (std::size_t w2 = 0; w2 < b; ++w2)
          total += f[y * b + w] * f[y2 * b + w] * f[y * b + w2] * f[y2 * b + w2];
  return total / static_cast<long>(a * a * b * b);
}

}  // namespace

TEST_CASE("z4-diagonal constants") {
  const FiniteMPS z4 = *builtin_system("z4-diagonal");
  const HostMeasure hm = host_measure(z4);
  CHECK(hm.mu_s.support_size() == 16);
  CHECK(hm.mu_st.support_size() == 64);
  const Observable f = parse_observable("1,0,-1,0");
  CHECK(diagonal_oracle(f) == ratio(1, 8));
  CHECK(host_seminorm(hm, f).fourth_power == ratio(1, 8));
  for (const auto& [q, w] : hm.mu_st.entries()) {
    CHECK(w == ratio(1, 64));
    CHECK((q[1] + 4 - q[0]) % 4 == (q[3] + 4 - q[2]) % 4);
  }
}

TEST_CASE("seminorm agrees with the diagonal-rotation oracle") {
  std::mt19937_64 rng(11);
  for (std::size_t n = 2; n <= 6; ++n) {
    const FiniteMPS sys = rotation_system(n, 1, {1, 0}, {1, 0});
    const HostMeasure hm = host_measure(sys);
    for (int k = 0; k < 5; ++k) {
      const Observable f = random_observable(n, rng);
      CHECK(host_seminorm(hm, f).fourth_power == diagonal_oracle(f));
    }
  }
}

TEST_CASE("seminorm agrees with the box-norm oracle on product systems") {
  std::mt19937_64 rng(12);
  for (auto [a, b] : {std::pair<std::size_t, std::size_t>{2, 3}, {3, 3}, {2, 2}, {4, 2}}) {
    const FiniteMPS sys = rotation_system(a, b, {1, 0}, {0, 1});
    const HostMeasure hm = host_measure(sys);
    for (int k = 0; k < 5; ++k) {
      const Observable f = random_observable(a * b, rng);
      CHECK(host_seminorm(hm, f).fourth_power == box_oracle(f, a, b));
    }
  }
}

TEST_CASE("magic verdicts") {
  const MagicReport z4 = is_magic(*builtin_system("z4-diagonal"));
  CHECK_FALSE(z4.is_magic);
  CHECK(z4.failure == MagicFailure::complement_not_in_kernel);
  REQUIRE(z4.counterexample);
  const FiniteMPS sys = *builtin_system("z4-diagonal");
  CHECK(cond_exp(sys, *z4.counterexample, z4.w).is_zero());
  CHECK(host_seminorm(host_measure(sys), *z4.counterexample).fourth_power > 0);

  CHECK(is_magic(*builtin_system("product-2x3")).is_magic);
  CHECK(is_magic(*builtin_system("grid-2x3")).is_magic);
  CHECK(is_magic(*builtin_system("one-point")).is_magic);
  CHECK(measurability_check(*builtin_system("product-2x3")));
  CHECK(product_factor_independent(*builtin_system("product-2x3")));
}

TEST_CASE("seminorm Gram kernel matches |||f||| = 0") {
  const FiniteMPS prod = *builtin_system("product-2x3");
  const HostMeasure hm = host_measure(prod);
  const auto gram = seminorm_gram(hm);
  const auto kernel = null_space(gram, prod.size());
  // W is all of P(X) here, so only f = 0 has zero seminorm.
  CHECK(kernel.empty());
  const FiniteMPS z4 = *builtin_system("z4-diagonal");
  CHECK(null_space(seminorm_gram(host_measure(z4)), 4).empty());
}

TEST_CASE("magic extension") {
  const FiniteMPS z4 = *builtin_system("z4-diagonal");
  const MagicExtension ext = magic_extension(z4);
  CHECK(is_magic(ext.system).is_magic);
  CHECK(is_ergodic(ext.system));
  CHECK(is_free(ext.system).free);
  CHECK(ext.system.size() == 16);
  CHECK(ext.components.size() == 4);
  for (std::size_t k = 0; k < ext.points.size(); ++k) CHECK(ext.factor_map[k] == ext.points[k][3]);

  const MagicExtension one = magic_extension(*builtin_system("one-point"));
  CHECK(one.system.size() == 1);
  CHECK_THROWS_AS(magic_extension(rotation_system(3, 1, {1, 0}, {0, 0})), PreconditionError);
  CHECK_THROWS_AS(magic_extension(rotation_system(4, 1, {2, 0}, {2, 0})), PreconditionError);

  // already magic input stays magic, ergodic, free
  const MagicExtension prod = magic_extension(*builtin_system("product-2x3"));
  CHECK(is_magic(prod.system).is_magic);
  CHECK(is_ergodic(prod.system));
  CHECK(is_free(prod.system).free);
}

TEST_CASE("primitive integer vectors") {
  CHECK(primitive_integer(parse_observable("-1/2,1/3,0")) == parse_observable("3,-2,0"));
}
