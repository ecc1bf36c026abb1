#pragma once

// Exact-arithmetic carriers shared by every module: rationals, finite
// partitions (finite sigma-algebras), observables and sparse measures on
// finite powers X^k.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "ergocube/errors.hpp"

namespace ergocube {

/// GMP rationals are kept canonical (reduced, positive denominator) by every
/// arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q" or "p". Throws ValidationError on malformed text or q == 0.
Rational parse_rational(std::string_view text);

/// Always "p/q", including integers ("3/1"), so serialization is lossless
/// and uniform.
std::string format_rational(const Rational& value);

/// num/den in lowest terms.
Rational ratio(long num, long den);

double to_double(const Rational& value);
Rational abs(const Rational& value);

/// A partition of {0..n-1}. Labels are canonical: blocks are numbered in
/// order of first occurrence, so two partitions are equal iff their label
/// sequences are equal.
class Partition {
 public:
  Partition() = default;
  /// Accepts arbitrary labels and renumbers them canonically.
  explicit Partition(std::span<const std::size_t> labels);

  static Partition singletons(std::size_t n);
  static Partition trivial(std::size_t n);

  std::size_t size() const { return labels_.size(); }
  std::size_t block_count() const { return block_count_; }
  std::size_t block_of(std::size_t point) const { return labels_.at(point); }
  const std::vector<std::size_t>& labels() const { return labels_; }

  /// Blocks in label order; each block lists its points in increasing order.
  std::vector<std::vector<std::size_t>> blocks() const;

  /// True iff every block of *this lies inside a block of `coarser`.
  bool refines(const Partition& coarser) const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<std::size_t> labels_;
  std::size_t block_count_ = 0;
};

/// The join of two sigma-algebras: atoms are the nonempty intersections of
/// a block of p with a block of q.
Partition common_refinement(const Partition& p, const Partition& q);

/// A real-valued function on an n-point space with exact values.
class Observable {
 public:
  Observable() = default;
  explicit Observable(std::vector<Rational> values);

  static Observable constant(std::size_t n, const Rational& value);
  static Observable indicator(std::size_t n, std::size_t point);
  static Observable indicator(std::size_t n, std::span<const std::size_t> points);

  std::size_t size() const { return values_.size(); }
  const Rational& operator[](std::size_t x) const { return values_[x]; }
  const std::vector<Rational>& values() const { return values_; }
  const Rational& sup_norm() const { return sup_norm_; }
  bool is_zero() const { return sup_norm_ == 0; }

  Observable operator+(const Observable& other) const;
  Observable operator-(const Observable& other) const;
  Observable operator*(const Observable& other) const;
  Observable scaled(const Rational& factor) const;

  bool operator==(const Observable& other) const { return values_ == other.values_; }

 private:
  std::vector<Rational> values_;
  Rational sup_norm_;
};

std::string format_observable(const Observable& f);

/// Parses a comma separated list of rationals, e.g. "1,0,-1/2,0".
Observable parse_observable(std::string_view text);

using Tuple = std::vector<std::size_t>;

/// A probability measure on X^k (X = {0..n-1}) stored by its support.
/// Weights are strictly positive and sum to exactly one.
class SparseMeasure {
 public:
  SparseMeasure() = default;
  /// Drops nothing: zero or negative weights are a ValidationError, as are
  /// tuples of the wrong arity or out-of-range indices.
  SparseMeasure(std::size_t arity, std::size_t base_size,
                std::map<Tuple, Rational> entries);

  static SparseMeasure from_weights(std::span<const Rational> weights);
  static SparseMeasure product(const SparseMeasure& a, const SparseMeasure& b);

  std::size_t arity() const { return arity_; }
  std::size_t base_size() const { return base_size_; }
  std::size_t support_size() const { return entries_.size(); }
  const std::map<Tuple, Rational>& entries() const { return entries_; }

  /// Zero when the tuple is outside the support.
  Rational weight(const Tuple& tuple) const;
  bool contains(const Tuple& tuple) const { return entries_.contains(tuple); }

  bool operator==(const SparseMeasure&) const = default;

 private:
  std::size_t arity_ = 0;
  std::size_t base_size_ = 0;
  std::map<Tuple, Rational> entries_;
};

/// Sum over the support of weight * prod_j fs[j](tuple[j]).
Rational integrate(const SparseMeasure& m, std::span<const Observable> fs);

/// One-dimensional marginal along coordinate `coord`.
SparseMeasure marginal(const SparseMeasure& m, std::size_t coord);

/// Weights of a one-dimensional measure as a dense vector of length n.
std::vector<Rational> dense_weights(const SparseMeasure& m);

}  // namespace ergocube
