#pragma once

// Dynamical cubes on finite systems. Closure is trivial on a finite space,
// so Q_{S,T}(X) is the plain enumeration of (x, S^i x, T^j x, S^i T^j x)
// over the S- and T-periods.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ergocube/finite.hpp"
#include "ergocube/report.hpp"

namespace ergocube {

struct CubeSpace {
  std::vector<Tuple> points;  // sorted, distinct

  std::size_t index_of(const Tuple& q) const;  // throws if absent
  bool contains(const Tuple& q) const;
};

CubeSpace cube_space(const FiniteMPS& sys);

/// {(x, R^i x)} over the period of R, sorted.
std::vector<std::pair<std::size_t, std::size_t>> two_sided_cube(const FiniteMPS& sys, const GroupElement& r);

/// A finite set with d commuting permutations acting on it.
struct ActionSpace {
  std::size_t size = 0;
  std::vector<Permutation> generators;
  std::vector<std::string> names;
};

/// G_{S,T} on Q_{S,T}: id x S x id x S, id x id x T x T, S^4 and T^4
/// (the last two generate the diagonal subgroup). Point k is cube.points[k].
ActionSpace cube_action(const FiniteMPS& sys, const CubeSpace& cube);

/// The system itself under S and T.
ActionSpace system_action(const FiniteMPS& sys);

/// Max over start points z and points y of
///   | (1/N^d) #{i in [0,N)^d : g^i z = y} - reference[y] |.
Rational unique_ergodicity_deviation(const ActionSpace& action, std::span<const Rational> reference,
                                     std::uint64_t n);

/// Reference given as a measure on X^4; weights read at the cube points.
std::vector<Rational> cube_reference(const CubeSpace& cube, const SparseMeasure& reference);

ConvergenceReport empirical_unique_ergodicity(const ActionSpace& action, std::span<const Rational> reference,
                                              std::span<const std::uint64_t> schedule,
                                              const std::string& name = "");

struct ProductCubeReport {
  std::size_t cube_points = 0;
  bool shape_ok = false;        // every point is ((y,w),(y',w),(y,w'),(y',w'))
  bool bijective = false;       // phi onto Y x Y x W x W
  bool conjugates = false;      // phi g = g' phi for each generator
  bool group_matches = false;   // images generate <sigma_1, sigma_2, tau_1, tau_2>
  bool pushforward_ok = false;  // phi_* mu_{S,T} = rho_Y x rho_Y x rho_W x rho_W
  bool ok() const { return shape_ok && bijective && conjugates && group_matches && pushforward_ok; }
};

/// Y carries sigma as S (its T is the identity), W carries tau as T (its S
/// is the identity); both must be ergodic.
ProductCubeReport product_cube_identification(const FiniteMPS& y, const FiniteMPS& w);

struct CubeSupportFinding {
  bool equal = false;
  std::size_t cube_points = 0;
  std::size_t support_points = 0;
  std::vector<Tuple> only_in_cube;
  std::vector<Tuple> only_in_support;
};

/// Compares Q_{S,T} with supp(mu_{S,T}). Reported, not asserted.
CubeSupportFinding compare_cube_support(const FiniteMPS& sys);

}  // namespace ergocube
