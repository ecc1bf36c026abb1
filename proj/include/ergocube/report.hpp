#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ergocube/core.hpp"

namespace ergocube {

/// Exact on finite systems, double on the torus.
class Number {
 public:
  Number() = default;
  Number(Rational r) : value_(std::move(r)) {}
  Number(double d) : value_(d) {}

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  const Rational& exact() const { return std::get<Rational>(value_); }
  double to_double() const;
  /// "p/q" when exact, shortest round-trip decimal ("%.17g") otherwise.
  std::string str() const;

 private:
  std::variant<Rational, double> value_;
};

/// |a - b|; exact when both are exact.
Number abs_difference(const Number& a, const Number& b);

struct ReportRow {
  std::uint64_t n = 0;
  Number value;
  std::optional<Number> reference;
  std::optional<Number> abs_error;
  double seconds = 0;  // wall time; not part of the CSV
};

struct ConvergenceReport {
  std::string system;
  std::string spec;
  std::vector<ReportRow> rows;

  void add(std::uint64_t n, Number value, std::optional<Number> reference, double seconds = 0);

  /// Header N,value,reference,abs_error; reference and abs_error left empty
  /// when no oracle applies. Byte-identical for identical inputs.
  std::string to_csv() const;
  std::string to_text() const;
};

/// "4,8,16" or "pow2:a..b" (2^a .. 2^b). Must be strictly increasing, >= 1.
std::vector<std::uint64_t> parse_schedule(const std::string& text);

}  // namespace ergocube
