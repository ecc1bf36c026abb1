#pragma once

// Finite measure-preserving systems (X, mu, S, T) with two commuting
// permutations, and the orbit machinery built on them.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ergocube/core.hpp"

namespace ergocube {

class Permutation {
 public:
  Permutation() = default;
  /// Throws ValidationError if `image` is not a bijection of {0..n-1}.
  explicit Permutation(std::vector<std::size_t> image);

  static Permutation identity(std::size_t n);
  /// x -> x + shift mod n.
  static Permutation rotation(std::size_t n, std::size_t shift);

  std::size_t size() const { return image_.size(); }
  std::size_t operator()(std::size_t x) const { return image_[x]; }
  const std::vector<std::size_t>& image() const { return image_; }

  /// (a.then(b))(x) = b(a(x)).
  Permutation then(const Permutation& next) const;
  Permutation inverse() const;
  /// Any integer exponent, by repeated squaring.
  Permutation power(std::int64_t k) const;

  bool is_identity() const;
  /// lcm of the cycle lengths.
  Integer order() const;
  /// Smallest p >= 1 with p-fold application fixing x.
  std::size_t cycle_length(std::size_t x) const;

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<std::size_t> image_;
};

/// The element S^i T^j of the Z^2 action generated by S and T.
struct GroupElement {
  std::int64_t i = 0;
  std::int64_t j = 0;

  GroupElement operator+(const GroupElement& o) const { return {i + o.i, j + o.j}; }
  GroupElement operator-() const { return {-i, -j}; }
  bool operator==(const GroupElement&) const = default;
};

std::string format_group_element(const GroupElement& g);

/// A finite probability space with two commuting measure-preserving
/// permutations. Immutable after construction; zero-weight points are
/// stripped (and the points renumbered) when the system is built.
class FiniteMPS {
 public:
  FiniteMPS() = default;
  /// Validates: weights non-negative summing to 1 ("bad weights"),
  /// S T = T S ("non-commuting"), weights constant along S and T
  /// ("non-preserving"). Zero-weight points must form an invariant set and
  /// are removed.
  FiniteMPS(std::vector<Rational> weights, Permutation s, Permutation t);

  std::size_t size() const { return weights_.size(); }
  const std::vector<Rational>& weights() const { return weights_; }
  const Rational& weight(std::size_t x) const { return weights_[x]; }
  const Permutation& s() const { return s_; }
  const Permutation& t() const { return t_; }
  SparseMeasure measure() const { return SparseMeasure::from_weights(weights_); }

  /// Old index of every retained point (identity unless zeros were stripped).
  const std::vector<std::size_t>& retained_points() const { return retained_; }

  /// S^i T^j x, via the cached binary power tables.
  std::size_t apply(const GroupElement& g, std::size_t x) const;
  /// S^i T^j as a permutation.
  Permutation element(const GroupElement& g) const;

  /// S^k x for k = 0..len-1 (and likewise for T).
  std::vector<std::size_t> s_orbit(std::size_t x, std::size_t len) const;
  std::vector<std::size_t> t_orbit(std::size_t x, std::size_t len) const;

  bool operator==(const FiniteMPS& o) const {
    return weights_ == o.weights_ && s_ == o.s_ && t_ == o.t_;
  }

 private:
  static std::size_t apply_power(const std::vector<Permutation>& table, const Integer& order,
                                 std::int64_t k, std::size_t x);

  std::vector<Rational> weights_;
  Permutation s_, t_;
  std::vector<std::size_t> retained_;
  Integer s_order_, t_order_;
  // table[b] = generator^(2^b)
  std::vector<Permutation> s_powers_, t_powers_;
};

/// Orbit partition of the subgroup generated by `gens`. {S} realizes I_S,
/// {T} realizes I_T, {S, T} the G-invariant algebra.
Partition invariant_partition(const FiniteMPS& sys, std::span<const GroupElement> gens);
Partition invariant_partition(const FiniteMPS& sys, std::initializer_list<GroupElement> gens);

/// Orbit partition of the group generated by arbitrary permutations.
Partition orbit_partition(std::size_t n, std::span<const Permutation> gens);

inline constexpr GroupElement kS{1, 0};
inline constexpr GroupElement kT{0, 1};

struct ErgodicComponent {
  std::vector<std::size_t> support;  // increasing
  std::vector<Rational> measure;     // conditional weights on `support`
  Rational mass;
};

std::vector<ErgodicComponent> ergodic_decomposition(const FiniteMPS& sys);

struct FreenessResult {
  bool free = false;
  std::optional<GroupElement> witness;  // S^i T^j = id with (i, j) != (0, 0)
};

/// Exhaustive over the window 0 <= i < ord(S), 0 <= j < ord(T). A generator
/// that is itself the identity is a witness ((1,0) or (0,1)), except on the
/// one-point space, which is free by convention.
FreenessResult is_free(const FiniteMPS& sys);

bool is_ergodic(const FiniteMPS& sys);

inline std::size_t apply_group(const FiniteMPS& sys, const GroupElement& g, std::size_t x) {
  return sys.apply(g, x);
}

/// Restriction to an invariant subset, renormalized. `support` must be a
/// union of G-orbits; it is returned in the order used for the new indices.
FiniteMPS restrict_to(const FiniteMPS& sys, std::span<const std::size_t> support);

/// Disjoint union; component k gets total mass masses[k] (positive, summing
/// to one).
FiniteMPS disjoint_union(std::span<const FiniteMPS> parts, std::span<const Rational> masses);

/// (Y x W, S_Y x S_W, T_Y x T_W); point (y, w) has index y * |W| + w.
FiniteMPS product_system(const FiniteMPS& y, const FiniteMPS& w);

/// Translation system on Z_a x Z_b with uniform weights, S = +s, T = +t.
/// Point (u, v) has index u * b + v.
FiniteMPS rotation_system(std::size_t a, std::size_t b, std::pair<std::size_t, std::size_t> s,
                          std::pair<std::size_t, std::size_t> t);

/// Order of g as a permutation of the whole space.
Integer element_order(const FiniteMPS& sys, const GroupElement& g);

}  // namespace ergocube
