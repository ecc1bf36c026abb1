#include "ergocube/generate.hpp"

#include <numeric>

namespace ergocube {

std::optional<Family> parse_family(std::string_view name) {
  if (name == "rotation") return Family::rotation;
  if (name == "ergodic") return Family::ergodic;
  if (name == "product") return Family::product;
  if (name == "union") return Family::union_;
  if (name == "reweighted") return Family::reweighted;
  if (name == "mixed") return Family::mixed;
  return std::nullopt;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::rotation: return "rotation";
    case Family::ergodic: return "ergodic";
    case Family::product: return "product";
    case Family::union_: return "union";
    case Family::reweighted: return "reweighted";
    case Family::mixed: return "mixed";
  }
  return "?";
}

namespace {

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::pair<std::size_t, std::size_t> random_sides(std::mt19937_64& rng, const GeneratorLimits& lim,
                                                 std::size_t min_side) {
  for (;;) {
    std::size_t a = uniform(rng, min_side, lim.max_side);
    std::size_t b = uniform(rng, min_side, lim.max_side);
    if (a * b <= lim.max_points) return {a, b};
  }
}

FiniteMPS random_rotation(std::mt19937_64& rng, const GeneratorLimits& lim) {
  auto [a, b] = random_sides(rng, lim, 1);
  return rotation_system(a, b, {uniform(rng, 0, a - 1), uniform(rng, 0, b - 1)},
                         {uniform(rng, 0, a - 1), uniform(rng, 0, b - 1)});
}

FiniteMPS random_ergodic(std::mt19937_64& rng, const GeneratorLimits& lim) {
  for (;;) {
    auto [a, b] = random_sides(rng, lim, 1);
    if (a * b < 2) continue;
    std::pair<std::size_t, std::size_t> s{uniform(rng, 0, a - 1), uniform(rng, 0, b - 1)};
    std::pair<std::size_t, std::size_t> t{uniform(rng, 0, a - 1), uniform(rng, 0, b - 1)};
    auto sys = rotation_system(a, b, s, t);
    if (!sys.s().is_identity() && !sys.t().is_identity() && is_ergodic(sys)) return sys;
  }
}

std::size_t random_unit(std::mt19937_64& rng, std::size_t m) {
  if (m == 1) return 0;
  for (;;) {
    std::size_t u = uniform(rng, 1, m - 1);
    if (std::gcd(u, m) == 1) return u;
  }
}

FiniteMPS random_product(std::mt19937_64& rng, const GeneratorLimits& lim) {
  auto [a, b] = random_sides(rng, lim, 2);
  return rotation_system(a, b, {random_unit(rng, a), 0}, {0, random_unit(rng, b)});
}

std::vector<Rational> random_masses(std::mt19937_64& rng, std::size_t k) {
  std::vector<long> raw(k);
  long total = 0;
  for (auto& r : raw) total += (r = static_cast<long>(uniform(rng, 1, 5)));
  std::vector<Rational> out;
  for (auto r : raw) out.push_back(ratio(r, total));
  return out;
}

FiniteMPS random_union(std::mt19937_64& rng, const GeneratorLimits& lim) {
  std::size_t parts = uniform(rng, 2, 3);
  GeneratorLimits part_lim = lim;
  part_lim.max_points = std::max<std::size_t>(1, lim.max_points / parts);
  part_lim.max_side = std::min(lim.max_side, part_lim.max_points);
  std::vector<FiniteMPS> systems;
  for (std::size_t k = 0; k < parts; ++k) systems.push_back(random_rotation(rng, part_lim));
  return disjoint_union(systems, random_masses(rng, parts));
}

FiniteMPS random_reweighted(std::mt19937_64& rng, const GeneratorLimits& lim) {
  auto base = random_rotation(rng, lim);
  auto comps = ergodic_decomposition(base);
  auto masses = random_masses(rng, comps.size());
  std::vector<Rational> w(base.size());
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (std::size_t k = 0; k < comps[c].support.size(); ++k)
      w[comps[c].support[k]] = comps[c].measure[k] * masses[c];
  return FiniteMPS(std::move(w), base.s(), base.t());
}

}  // namespace

FiniteMPS random_system(Family family, std::mt19937_64& rng, const GeneratorLimits& limits) {
  switch (family) {
    case Family::rotation: return random_rotation(rng, limits);
    case Family::ergodic: return random_ergodic(rng, limits);
    case Family::product: return random_product(rng, limits);
    case Family::union_: return random_union(rng, limits);
    case Family::reweighted: return random_reweighted(rng, limits);
    case Family::mixed: {
      static constexpr Family choices[] = {Family::rotation, Family::ergodic, Family::product,
                                           Family::union_, Family::reweighted};
      return random_system(choices[uniform(rng, 0, 4)], rng, limits);
    }
  }
  throw std::logic_error("unknown family");
}

std::pair<FiniteMPS, FiniteMPS> random_product_factors(std::mt19937_64& rng, const GeneratorLimits& limits) {
  const std::size_t a = uniform(rng, 1, limits.max_side), b = uniform(rng, 1, limits.max_side);
  return {rotation_system(a, 1, {random_unit(rng, a), 0}, {0, 0}),
          rotation_system(b, 1, {0, 0}, {random_unit(rng, b), 0})};
}

Observable random_observable(std::size_t n, std::mt19937_64& rng) {
  std::vector<Rational> v(n);
  for (auto& x : v) x = ratio(static_cast<long>(uniform(rng, 0, 8)) - 4, 4);
  return Observable(std::move(v));
}

Observable random_sign_observable(std::size_t n, std::mt19937_64& rng) {
  std::vector<Rational> v(n);
  for (auto& x : v) x = uniform(rng, 0, 1) ? 1 : -1;
  return Observable(std::move(v));
}

std::optional<FiniteMPS> builtin_system(std::string_view name) {
  if (name == "z4-diagonal") return rotation_system(4, 1, {1, 0}, {1, 0});
  if (name == "product-2x3") return rotation_system(2, 3, {1, 0}, {0, 1});
  if (name == "grid-2x3") {
    // column-major grid: point (r, c) has index r + 2c; S moves along rows,
    // T along columns.
    std::vector<std::size_t> s(6), t(6);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 3; ++c) {
        s[r + 2 * c] = (r + 1) % 2 + 2 * c;
        t[r + 2 * c] = r + 2 * ((c + 1) % 3);
      }
    return FiniteMPS(std::vector<Rational>(6, ratio(1, 6)), Permutation(s), Permutation(t));
  }
  if (name == "one-point") return FiniteMPS({Rational(1)}, Permutation::identity(1), Permutation::identity(1));
  return std::nullopt;
}

std::vector<std::string> builtin_system_names() {
  return {"z4-diagonal", "product-2x3", "grid-2x3", "one-point"};
}

}  // namespace ergocube
