#pragma once

// Conditional expectations, the relative independent squares mu_S and
// mu_{S,T} (the Host measure), the Host seminorm, the magic test and the
// free ergodic magic extension.

#include <optional>
#include <string>
#include <vector>

#include "ergocube/core.hpp"
#include "ergocube/finite.hpp"
#include "ergocube/rational_linalg.hpp"

namespace ergocube {

/// Block-wise weighted average of f over p.
Observable cond_exp(const FiniteMPS& sys, const Observable& f, const Partition& p);

/// mu_S(x0, x1) = w(x0) w(x1) / w(B) for x0, x1 in a common I_S-block B.
SparseMeasure rel_indep_square(const FiniteMPS& sys);

/// id x S x id x S
Tuple s_star(const FiniteMPS& sys, const Tuple& q);
/// id x id x T x T
Tuple t_star(const FiniteMPS& sys, const Tuple& q);
/// g x g x ... x g, any arity
Tuple diagonal(const FiniteMPS& sys, const GroupElement& g, const Tuple& q);

struct HostMeasure {
  FiniteMPS base;
  Partition i_s;
  SparseMeasure mu_s;
  /// supp(mu_S) in increasing order; the index space of `i_tt`.
  std::vector<Tuple> pairs;
  /// Orbits of T x T on supp(mu_S).
  Partition i_tt;
  SparseMeasure mu_st;
};

HostMeasure host_measure(const FiniteMPS& sys);

struct Seminorm {
  Rational fourth_power;  // canonical, exact
  double value;           // real fourth root, diagnostic only
};

Seminorm host_seminorm(const HostMeasure& hm, const Observable& f);

/// Gram matrix of the quadratic form q(f) = sum_y int f x e_y x f x e_y dmu_{S,T}
/// in point-indicator coordinates. It is positive semidefinite and its null
/// space is exactly {f : |||f||| = 0}: q(f) = 0 forces E(f x h | I_{TxT}) = 0
/// for every h, and h = f gives |||f|||^4 = 0; the converse is Cauchy-Schwarz.
RationalMatrix seminorm_gram(const HostMeasure& hm);

enum class MagicFailure {
  none,
  complement_not_in_kernel,  // E(f|W) = 0 but |||f||| != 0
  kernel_not_in_complement,  // |||f||| = 0 but E(f|W) != 0
};

struct MagicReport {
  bool is_magic = false;
  MagicFailure failure = MagicFailure::none;
  std::optional<Observable> counterexample;
  std::size_t seminorm_kernel_dim = 0;
  std::size_t w_complement_dim = 0;
  Partition w;  // I_S v I_T
};

MagicReport is_magic(const FiniteMPS& sys);
MagicReport is_magic(const HostMeasure& hm);

std::string describe(MagicFailure f);

struct ComponentVerdict {
  std::vector<Tuple> support;  // quadruples, increasing
  Rational mass;
  FreenessResult freeness;
  std::optional<bool> magic;  // unset when the component was not examined
};

struct MagicExtension {
  FiniteMPS system;                     // selected component, points renumbered
  std::vector<Tuple> points;            // quadruple of each point of `system`
  std::vector<std::size_t> factor_map;  // (x0, x1, x2, x3) -> x3
  std::vector<ComponentVerdict> components;  // selection order
  std::size_t selected = 0;                  // index into `components`
};

/// Builds (X^4, mu_{S,T}, S*, T*), decomposes it into ergodic components
/// under <S*, T*> and returns the first free magic component in order of
/// decreasing mass, ties broken by the lexicographically smallest support.
/// Requires sys ergodic with S != id and T != id (unless sys is one point).
MagicExtension magic_extension(const FiniteMPS& sys);

/// E(f0 x f1 | I_{TxT}) == E(E(f0|W) x E(f1|W) | I_{TxT}) on (X^2, mu_S).
bool measurability_identity(const HostMeasure& hm, const Observable& f0, const Observable& f1);

/// The identity above for every pair of point indicators (a spanning family).
bool measurability_check(const FiniteMPS& sys);
bool measurability_check(const HostMeasure& hm);

/// mu(A n B) = mu(A) mu(B) for every I_T-block A and I_S-block B.
bool product_factor_independent(const FiniteMPS& sys);

/// Scales a nonzero rational vector to coprime integers (first nonzero
/// entry positive).
Observable primitive_integer(const Observable& f);

}  // namespace ergocube
