#pragma once

// Direct, unfactored sums. Slow on purpose: each one walks its index box
// point by point with plain S and T steps, sharing no code with the
// residue-class routines it is used to check.

#include <cstdint>
#include <span>

#include "ergocube/finite.hpp"

namespace ergocube::reference {

Rational cubic_average(const FiniteMPS& sys, const Observable& f1, const Observable& f2, const Observable& f3,
                       std::size_t x, std::uint64_t n);

/// Quadruple loop over i, j, k, p in [0, N).
Rational fourfold_average(const FiniteMPS& sys, std::span<const Observable> fs, std::size_t x, std::uint64_t n);

/// Quadruple loop over the window i, j in [0, N), k in [-i, N-1-i], p in [-j, N-1-j].
Rational windowed_sn(const FiniteMPS& sys, const Observable& f, std::size_t x, std::uint64_t n);

/// |||f|||^4 as the mu_S-integral of E(f x f | I_{TxT})^2, with the T x T
/// orbits found by walking.
Rational seminorm_fourth_power(const FiniteMPS& sys, const Observable& f);

}  // namespace ergocube::reference
