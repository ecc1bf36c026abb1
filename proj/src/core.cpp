#include "ergocube/core.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>
#include <utility>

namespace ergocube {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw ValidationError("bad rational: empty string");
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  auto valid_int = [](const std::string& t, bool allow_sign) {
    if (t.empty()) return false;
    std::size_t start = (allow_sign && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (start == t.size()) return false;
    return std::all_of(t.begin() + static_cast<std::ptrdiff_t>(start), t.end(),
                       [](unsigned char c) { return std::isdigit(c); });
  };
  if (!valid_int(num, true) || !valid_int(den, false))
    throw ValidationError("bad rational: '" + std::string(text) + "'");
  if (num[0] == '+') num.erase(0, 1);
  Integer n(num), d(den);
  if (d == 0) throw ValidationError("bad rational: zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational ratio(long num, long den) {
  if (den == 0) throw ValidationError("bad rational: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

double to_double(const Rational& value) { return value.get_d(); }

Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

// ---------------------------------------------------------------------------

Partition::Partition(std::span<const std::size_t> labels) : labels_(labels.size()) {
  std::unordered_map<std::size_t, std::size_t> renumber;
  for (std::size_t x = 0; x < labels.size(); ++x) {
    auto [it, inserted] = renumber.try_emplace(labels[x], renumber.size());
    labels_[x] = it->second;
  }
  block_count_ = renumber.size();
}

Partition Partition::singletons(std::size_t n) {
  std::vector<std::size_t> labels(n);
  for (std::size_t x = 0; x < n; ++x) labels[x] = x;
  return Partition(labels);
}

Partition Partition::trivial(std::size_t n) {
  std::vector<std::size_t> labels(n, 0);
  return Partition(labels);
}

std::vector<std::vector<std::size_t>> Partition::blocks() const {
  std::vector<std::vector<std::size_t>> out(block_count_);
  for (std::size_t x = 0; x < labels_.size(); ++x) out[labels_[x]].push_back(x);
  return out;
}

bool Partition::refines(const Partition& coarser) const {
  if (coarser.size() != size()) throw DimensionError("refines: partitions of different sizes");
  std::vector<std::size_t> image(block_count_, static_cast<std::size_t>(-1));
  for (std::size_t x = 0; x < labels_.size(); ++x) {
    auto& target = image[labels_[x]];
    if (target == static_cast<std::size_t>(-1))
      target = coarser.labels_[x];
    else if (target != coarser.labels_[x])
      return false;
  }
  return true;
}

Partition common_refinement(const Partition& p, const Partition& q) {
  if (p.size() != q.size()) throw DimensionError("common_refinement: partitions of different sizes");
  std::vector<std::size_t> labels(p.size());
  const std::size_t k = q.block_count();
  for (std::size_t x = 0; x < p.size(); ++x) labels[x] = p.block_of(x) * k + q.block_of(x);
  return Partition(labels);
}

// ---------------------------------------------------------------------------

Observable::Observable(std::vector<Rational> values) : values_(std::move(values)) {
  for (const auto& v : values_) {
    Rational a = ergocube::abs(v);
    if (a > sup_norm_) sup_norm_ = a;
  }
}

Observable Observable::constant(std::size_t n, const Rational& value) {
  return Observable(std::vector<Rational>(n, value));
}

Observable Observable::indicator(std::size_t n, std::size_t point) {
  std::vector<Rational> v(n);
  v.at(point) = 1;
  return Observable(std::move(v));
}

Observable Observable::indicator(std::size_t n, std::span<const std::size_t> points) {
  std::vector<Rational> v(n);
  for (auto p : points) v.at(p) = 1;
  return Observable(std::move(v));
}

namespace {
template <class Op>
Observable pointwise(const Observable& a, const Observable& b, Op op) {
  if (a.size() != b.size()) throw DimensionError("observable sizes differ");
  std::vector<Rational> out(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) out[x] = op(a[x], b[x]);
  return Observable(std::move(out));
}
}  // namespace

Observable Observable::operator+(const Observable& other) const {
  return pointwise(*this, other, [](const Rational& u, const Rational& v) { return Rational(u + v); });
}

Observable Observable::operator-(const Observable& other) const {
  return pointwise(*this, other, [](const Rational& u, const Rational& v) { return Rational(u - v); });
}

Observable Observable::operator*(const Observable& other) const {
  return pointwise(*this, other, [](const Rational& u, const Rational& v) { return Rational(u * v); });
}

Observable Observable::scaled(const Rational& factor) const {
  std::vector<Rational> out(values_.size());
  for (std::size_t x = 0; x < values_.size(); ++x) out[x] = values_[x] * factor;
  return Observable(std::move(out));
}

std::string format_observable(const Observable& f) {
  std::ostringstream os;
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (x) os << ',';
    os << format_rational(f[x]);
  }
  return os.str();
}

Observable parse_observable(std::string_view text) {
  std::vector<Rational> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    values.push_back(parse_rational(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return Observable(std::move(values));
}

// ---------------------------------------------------------------------------

SparseMeasure::SparseMeasure(std::size_t arity, std::size_t base_size,
                             std::map<Tuple, Rational> entries)
    : arity_(arity), base_size_(base_size), entries_(std::move(entries)) {
  if (arity_ == 0) throw ValidationError("sparse measure: arity must be at least 1");
  Rational total;
  for (const auto& [tuple, w] : entries_) {
    if (tuple.size() != arity_) throw ValidationError("sparse measure: tuple of wrong arity");
    for (auto x : tuple)
      if (x >= base_size_) throw ValidationError("sparse measure: index out of range");
    if (w <= 0) throw ValidationError("sparse measure: non-positive weight");
    total += w;
  }
  if (total != 1) throw ValidationError("sparse measure: weights sum to " + format_rational(total) + ", not 1");
}

SparseMeasure SparseMeasure::from_weights(std::span<const Rational> weights) {
  std::map<Tuple, Rational> entries;
  for (std::size_t x = 0; x < weights.size(); ++x)
    if (weights[x] != 0) entries.emplace(Tuple{x}, weights[x]);
  return SparseMeasure(1, weights.size(), std::move(entries));
}

SparseMeasure SparseMeasure::product(const SparseMeasure& a, const SparseMeasure& b) {
  if (a.base_size() != b.base_size()) throw DimensionError("product: base sizes differ");
  std::map<Tuple, Rational> entries;
  for (const auto& [ta, wa] : a.entries()) {
    for (const auto& [tb, wb] : b.entries()) {
      Tuple t = ta;
      t.insert(t.end(), tb.begin(), tb.end());
      entries.emplace(std::move(t), wa * wb);
    }
  }
  return SparseMeasure(a.arity() + b.arity(), a.base_size(), std::move(entries));
}

Rational SparseMeasure::weight(const Tuple& tuple) const {
  auto it = entries_.find(tuple);
  return it == entries_.end() ? Rational(0) : it->second;
}

Rational integrate(const SparseMeasure& m, std::span<const Observable> fs) {
  if (fs.size() != m.arity())
    throw DimensionError("integrate: " + std::to_string(fs.size()) + " observables for arity " +
                         std::to_string(m.arity()));
  for (const auto& f : fs)
    if (f.size() != m.base_size()) throw DimensionError("integrate: observable length mismatch");
  Rational total;
  Rational term;
  for (const auto& [tuple, w] : m.entries()) {
    term = w;
    for (std::size_t j = 0; j < tuple.size() && term != 0; ++j) term *= fs[j][tuple[j]];
    total += term;
  }
  return total;
}

SparseMeasure marginal(const SparseMeasure& m, std::size_t coord) {
  if (coord >= m.arity()) throw DimensionError("marginal: coordinate out of range");
  std::map<Tuple, Rational> entries;
  for (const auto& [tuple, w] : m.entries()) entries[Tuple{tuple[coord]}] += w;
  return SparseMeasure(1, m.base_size(), std::move(entries));
}

std::vector<Rational> dense_weights(const SparseMeasure& m) {
  if (m.arity() != 1) throw DimensionError("dense_weights: measure is not one-dimensional");
  std::vector<Rational> out(m.base_size());
  for (const auto& [tuple, w] : m.entries()) out[tuple[0]] = w;
  return out;
}

}  // namespace ergocube
