#pragma once

// Multiple ergodic averages on finite systems, exact.
//
// Every average here is a sum over a box of exponents. Along the G-orbit of
// the start point x, S^i T^j x depends only on (i mod p, j mod q) where p and
// q are the S- and T-periods of x, so each box sum collapses to a sum over
// residue classes weighted by how often each class occurs in the window.
// The cost depends on p and q only, not on N.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ergocube/finite.hpp"
#include "ergocube/report.hpp"

namespace ergocube {

enum class AverageKind { cubic, fourfold, windowed_sn, birkhoff_1d, birkhoff_2d };

std::optional<AverageKind> parse_average_kind(std::string_view name);
std::string average_kind_name(AverageKind kind);
std::size_t observable_count(AverageKind kind);

struct AverageSpec {
  AverageKind kind = AverageKind::cubic;
  std::vector<Observable> observables;
  std::size_t start = 0;
  std::vector<std::uint64_t> schedule;

  /// Observable count matches kind; schedule strictly increasing and >= 1.
  void validate(std::size_t n) const;
};

/// (1/N^2) sum_{i,j<N} f1(S^i x) f2(T^j x) f3(S^i T^j x)
Rational cubic_average(const FiniteMPS& sys, const Observable& f1, const Observable& f2,
                       const Observable& f3, std::size_t x, std::uint64_t n);

/// (1/N^4) sum_{i,j,k,p<N} f0(S^i T^j x) f1(S^{i+k} T^j x) f2(S^i T^{j+p} x) f3(S^{i+k} T^{j+p} x)
Rational fourfold_average(const FiniteMPS& sys, std::span<const Observable> fs, std::size_t x,
                          std::uint64_t n);

/// S_N(f, x): the four-fold sum over the window i, j in [0, N-1],
/// k in [-i, N-1-i], p in [-j, N-1-j], divided by N^4, in absolute value.
Rational windowed_sn(const FiniteMPS& sys, const Observable& f, std::size_t x, std::uint64_t n);

/// (1/N^d) sum over [0, N-1]^d of f(g_1^{i_1} ... g_d^{i_d} x).
Rational birkhoff_average(const FiniteMPS& sys, const Observable& f, std::size_t x,
                          std::span<const GroupElement> gens, std::uint64_t n);

struct BoundCheck {
  Rational lhs;  // (cubic average)^4
  Rational rhs;  // C * S_N(f3, x)
  bool holds = false;
};

/// Compares (cubic average)^4 with C * S_N(f3, x). Requires sup norms <= 1.
BoundCheck check_bound_average(const FiniteMPS& sys, const Observable& f1, const Observable& f2,
                               const Observable& f3, std::size_t x, std::uint64_t n,
                               const Rational& constant = 1);

struct TelescopingCheck {
  bool identity_holds = false;
  bool bound_applicable = false;  // all |a_i|, |b_i| <= 1
  bool bound_holds = false;       // vacuously true when not applicable
};

/// prod a - prod b = sum_k a_1..a_{k-1} (a_k - b_k) b_{k+1}..b_n, and
/// |prod a - prod b| <= sum |a_k - b_k| when every entry is bounded by 1.
TelescopingCheck check_telescoping(std::span<const Rational> a, std::span<const Rational> b);

struct DecompositionRow {
  std::uint64_t n = 0;
  Rational track_a;   // cubic average against E(f3|W), via paired 1-d averages
  Rational track_b;   // cubic average against g = f3 - E(f3|W)
  Rational direct;    // cubic average against f3
  bool sum_equal = false;
  Rational sn_g;      // S_N(g, x)
  double b_bound = 0; // 2 * S_N(g, x)^(1/4)
};

struct DecompositionReport {
  Observable w_part;  // E(f3|W)
  Observable g_part;  // f3 - E(f3|W)
  Rational track_a_limit;
  std::vector<DecompositionRow> rows;
};

/// Requires sys magic, ergodic and free; the PreconditionError lists every
/// property that fails.
DecompositionReport decompose_and_converge(const FiniteMPS& sys, const Observable& f1,
                                           const Observable& f2, const Observable& f3, std::size_t x,
                                           std::span<const std::uint64_t> schedule);

/// Runs spec.kind along the schedule. References: the Host integral for
/// fourfold and windowed_sn, the conditional expectation on the invariant
/// algebra for Birkhoff averages, none for cubic.
ConvergenceReport average_report(const FiniteMPS& sys, const AverageSpec& spec, const std::string& name);

}  // namespace ergocube
