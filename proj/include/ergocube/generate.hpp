#pragma once

// Builtin systems and seeded random families. Commuting permutation pairs are
// hard to sample uniformly, so the families are structured: translations of
// Z_a x Z_b, disjoint unions of those, and re-weightings across orbits.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ergocube/finite.hpp"

namespace ergocube {

enum class Family {
  rotation,    // Z_a x Z_b with arbitrary translations S, T
  ergodic,     // rotation with S, T != id generating the whole group
  product,     // (Z_a x Z_b, sigma x id, id x tau), sigma and tau transitive
  union_,      // disjoint union of 2-3 rotations with random masses
  reweighted,  // rotation with independent random masses on its orbits
  mixed,       // one of the above, chosen at random
};

std::optional<Family> parse_family(std::string_view name);
std::string family_name(Family f);

struct GeneratorLimits {
  std::size_t max_side = 4;    // a, b <= max_side
  std::size_t max_points = 12;
};

FiniteMPS random_system(Family family, std::mt19937_64& rng, const GeneratorLimits& limits = {});

/// Factors for a product system: Y = (Z_a, sigma, id), W = (Z_b, id, tau)
/// with sigma, tau unit rotations; a, b in [1, max_side].
std::pair<FiniteMPS, FiniteMPS> random_product_factors(std::mt19937_64& rng, const GeneratorLimits& limits = {});

/// Values k/4 with k uniform in [-4, 4]; sup norm <= 1.
Observable random_observable(std::size_t n, std::mt19937_64& rng);
Observable random_sign_observable(std::size_t n, std::mt19937_64& rng);

/// "z4-diagonal", "product-2x3", "grid-2x3", "one-point".
std::optional<FiniteMPS> builtin_system(std::string_view name);
std::vector<std::string> builtin_system_names();

}  // namespace ergocube
