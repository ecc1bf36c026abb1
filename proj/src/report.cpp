#include "ergocube/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ergocube {

double Number::to_double() const {
  return is_exact() ? ergocube::to_double(exact()) : std::get<double>(value_);
}

std::string Number::str() const {
  if (is_exact()) return format_rational(exact());
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(value_));
  return buf;
}

Number abs_difference(const Number& a, const Number& b) {
  if (a.is_exact() && b.is_exact()) return Number(abs(Rational(a.exact() - b.exact())));
  return Number(std::fabs(a.to_double() - b.to_double()));
}

void ConvergenceReport::add(std::uint64_t n, Number value, std::optional<Number> reference, double seconds) {
  ReportRow row;
  row.n = n;
  row.seconds = seconds;
  if (reference) row.abs_error = abs_difference(value, *reference);
  row.value = std::move(value);
  row.reference = std::move(reference);
  rows.push_back(std::move(row));
}

std::string ConvergenceReport::to_csv() const {
  std::ostringstream os;
  os << "N,value,reference,abs_error\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.value.str() << ',';
    if (r.reference) os << r.reference->str();
    os << ',';
    if (r.abs_error) os << r.abs_error->str();
    os << '\n';
  }
  return os.str();
}

std::string ConvergenceReport::to_text() const {
  std::ostringstream os;
  os << "system: " << system << "\nspec: " << spec << '\n';
  for (const auto& r : rows) {
    os << "N=" << r.n << "  value=" << r.value.str();
    if (r.reference) os << "  reference=" << r.reference->str();
    if (r.abs_error) os << "  abs_error=" << r.abs_error->str() << " (~" << r.abs_error->to_double() << ')';
    os << "  seconds=" << r.seconds << '\n';
  }
  return os.str();
}

namespace {

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ValidationError("bad schedule entry '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::vector<std::uint64_t> parse_schedule(const std::string& text) {
  std::vector<std::uint64_t> out;
  if (text.rfind("pow2:", 0) == 0) {
    auto body = std::string_view(text).substr(5);
    auto dots = body.find("..");
    if (dots == std::string_view::npos) throw ValidationError("bad schedule: expected pow2:a..b");
    auto a = parse_u64(body.substr(0, dots));
    auto b = parse_u64(body.substr(dots + 2));
    if (b >= 63) throw ValidationError("bad schedule: exponent too large");
    for (auto k = a; k <= b; ++k) out.push_back(std::uint64_t{1} << k);
  } else {
    std::string_view rest(text);
    while (!rest.empty()) {
      auto comma = rest.find(',');
      out.push_back(parse_u64(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }
  if (out.empty()) throw ValidationError("bad schedule: empty");
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (out[k] == 0) throw ValidationError("bad schedule: entries must be >= 1");
    if (k && out[k] <= out[k - 1]) throw ValidationError("bad schedule: not strictly increasing");
  }
  return out;
}

}  // namespace ergocube
