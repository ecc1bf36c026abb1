#pragma once

// Circle rotations S x = x + alpha, T x = x + beta with trigonometric
// polynomial observables: closed-form Fourier oracles and floating-point
// evaluation of the averages.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ergocube/averaging.hpp"
#include "ergocube/report.hpp"

namespace ergocube {

using Complex = std::complex<long double>;

/// Finitely supported Fourier series f(x) = sum_n c(n) e(n x), e(t) = exp(2 pi i t),
/// with c(-n) = conj c(n) so that f is real.
class TrigPoly {
 public:
  TrigPoly() = default;

  /// From the n >= 0 half; the n < 0 half is filled in by conjugation.
  /// Negative frequencies or a non-real c(0) are a ValidationError.
  static TrigPoly from_half(const std::map<std::int64_t, Complex>& half);
  static TrigPoly constant(long double c);
  /// cos(2 pi k x)
  static TrigPoly cosine(std::int64_t k = 1);

  const std::map<std::int64_t, Complex>& coefficients() const { return coeffs_; }
  Complex coefficient(std::int64_t n) const;

  long double evaluate(long double x) const;
  /// sum |c(n)|, an upper bound on the sup norm.
  long double sup_bound() const;

  bool operator==(const TrigPoly&) const = default;

 private:
  std::map<std::int64_t, Complex> coeffs_;  // zero coefficients omitted
};

/// JSON literal [[freq, re, im], ...] listing the n >= 0 half.
TrigPoly parse_trig_poly(std::string_view json_text);
std::string format_trig_poly(const TrigPoly& f);

struct TorusSystem {
  long double alpha = 0;
  long double beta = 0;
  bool irrational = false;  // declared: 1, alpha, beta rationally independent
  std::string name;
};

/// "torus-sqrt23": alpha = sqrt 2 - 1, beta = sqrt 3 - 1.
std::optional<TorusSystem> builtin_torus(std::string_view name);

/// Integral of f0 x f1 x f2 x f3 against mu_{S,T}:
///   sum_n c0(n) c1(-n) c2(-n) c3(n).
/// UnsupportedRegimeError unless the system is declared irrational.
long double fourier_host_integral(const TorusSystem& sys, const TrigPoly& f0, const TrigPoly& f1,
                                  const TrigPoly& f2, const TrigPoly& f3);

/// Limit of the cubic average at x: sum_n c1(n) c2(n) c3(-n) e(n x).
long double fourier_cubic_limit(const TorusSystem& sys, const TrigPoly& f1, const TrigPoly& f2,
                                const TrigPoly& f3, long double x);

struct TorusOptions {
  std::size_t block_size = 64;  // rows per partial sum; part of the result's identity
  unsigned threads = 1;         // does not change the result
};

/// Same windows as the finite averages. Partial sums over blocks of rows
/// are compensated and merged in block order.
double torus_average(const TorusSystem& sys, AverageKind kind, std::span<const TrigPoly> fs, long double x,
                     std::uint64_t n, const TorusOptions& opts = {});

/// Oracle for `kind`: cubic limit, Host integral (fourfold, windowed_sn) or
/// the mean c(0) (Birkhoff).
long double torus_reference(const TorusSystem& sys, AverageKind kind, std::span<const TrigPoly> fs,
                            long double x);

ConvergenceReport torus_report(const TorusSystem& sys, AverageKind kind, std::span<const TrigPoly> fs,
                               long double x, std::span<const std::uint64_t> schedule,
                               const TorusOptions& opts = {});

}  // namespace ergocube
