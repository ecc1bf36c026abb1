#include "ergocube/finite.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

namespace ergocube {

Permutation::Permutation(std::vector<std::size_t> image) : image_(std::move(image)) {
  std::vector<char> seen(image_.size(), 0);
  for (auto y : image_) {
    if (y >= image_.size() || seen[y]) throw ValidationError("not a permutation");
    seen[y] = 1;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> image(n);
  std::iota(image.begin(), image.end(), std::size_t{0});
  return Permutation(std::move(image));
}

Permutation Permutation::rotation(std::size_t n, std::size_t shift) {
  std::vector<std::size_t> image(n);
  for (std::size_t x = 0; x < n; ++x) image[x] = (x + shift) % n;
  return Permutation(std::move(image));
}

Permutation Permutation::then(const Permutation& next) const {
  if (next.size() != size()) throw DimensionError("composing permutations of different sizes");
  Permutation out;
  out.image_.resize(size());
  for (std::size_t x = 0; x < size(); ++x) out.image_[x] = next.image_[image_[x]];
  return out;
}

Permutation Permutation::inverse() const {
  Permutation out;
  out.image_.resize(size());
  for (std::size_t x = 0; x < size(); ++x) out.image_[image_[x]] = x;
  return out;
}

Permutation Permutation::power(std::int64_t k) const {
  Permutation base = k < 0 ? inverse() : *this;
  auto e = static_cast<std::uint64_t>(k < 0 ? -k : k);
  Permutation result = identity(size());
  while (e) {
    if (e & 1) result = result.then(base);
    base = base.then(base);
    e >>= 1;
  }
  return result;
}

bool Permutation::is_identity() const {
  for (std::size_t x = 0; x < size(); ++x)
    if (image_[x] != x) return false;
  return true;
}

Integer Permutation::order() const {
  Integer result = 1;
  std::vector<char> seen(size(), 0);
  for (std::size_t x = 0; x < size(); ++x) {
    if (seen[x]) continue;
    std::size_t len = 0;
    for (std::size_t y = x; !seen[y]; y = image_[y]) {
      seen[y] = 1;
      ++len;
    }
    result = lcm(result, Integer(static_cast<unsigned long>(len)));
  }
  return result;
}

std::size_t Permutation::cycle_length(std::size_t x) const {
  std::size_t len = 1;
  for (std::size_t y = image_[x]; y != x; y = image_[y]) ++len;
  return len;
}

std::string format_group_element(const GroupElement& g) {
  std::ostringstream os;
  os << '(' << g.i << ',' << g.j << ')';
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Permutation> binary_powers(const Permutation& p, const Integer& order) {
  std::vector<Permutation> table{p};
  std::size_t bits = mpz_sizeinbase(order.get_mpz_t(), 2);
  while (table.size() < bits) table.push_back(table.back().then(table.back()));
  return table;
}

}  // namespace

FiniteMPS::FiniteMPS(std::vector<Rational> weights, Permutation s, Permutation t) {
  const std::size_t n = weights.size();
  if (n == 0) throw ValidationError("bad weights: empty system");
  if (s.size() != n || t.size() != n)
    throw ValidationError("bad permutation: S and T must act on " + std::to_string(n) + " points");
  Rational total;
  for (const auto& w : weights) {
    if (w < 0) throw ValidationError("bad weights: negative weight");
    total += w;
  }
  if (total != 1) throw ValidationError("bad weights: weights sum to " + format_rational(total));
  for (std::size_t x = 0; x < n; ++x)
    if (s(t(x)) != t(s(x))) throw ValidationError("non-commuting: S T != T S at point " + std::to_string(x));
  for (std::size_t x = 0; x < n; ++x)
    if (weights[s(x)] != weights[x] || weights[t(x)] != weights[x])
      throw ValidationError("non-preserving: weight not invariant at point " + std::to_string(x));

  // Measure preservation makes the zero set invariant, so stripping is safe.
  std::vector<std::size_t> new_index(n, static_cast<std::size_t>(-1));
  for (std::size_t x = 0; x < n; ++x) {
    if (weights[x] != 0) {
      new_index[x] = retained_.size();
      retained_.push_back(x);
    }
  }
  std::vector<std::size_t> s_img(retained_.size()), t_img(retained_.size());
  for (std::size_t k = 0; k < retained_.size(); ++k) {
    s_img[k] = new_index[s(retained_[k])];
    t_img[k] = new_index[t(retained_[k])];
    weights_.push_back(std::move(weights[retained_[k]]));
  }
  s_ = Permutation(std::move(s_img));
  t_ = Permutation(std::move(t_img));
  s_order_ = s_.order();
  t_order_ = t_.order();
  s_powers_ = binary_powers(s_, s_order_);
  t_powers_ = binary_powers(t_, t_order_);
}

std::size_t FiniteMPS::apply_power(const std::vector<Permutation>& table, const Integer& order,
                                   std::int64_t k, std::size_t x) {
  Integer e(static_cast<long>(k));
  e %= order;
  if (e < 0) e += order;
  for (std::size_t b = 0; b < table.size(); ++b)
    if (mpz_tstbit(e.get_mpz_t(), b)) x = table[b](x);
  return x;
}

std::size_t FiniteMPS::apply(const GroupElement& g, std::size_t x) const {
  x = apply_power(t_powers_, t_order_, g.j, x);
  return apply_power(s_powers_, s_order_, g.i, x);
}

Permutation FiniteMPS::element(const GroupElement& g) const {
  return s_.power(g.i).then(t_.power(g.j));
}

std::vector<std::size_t> FiniteMPS::s_orbit(std::size_t x, std::size_t len) const {
  std::vector<std::size_t> out(len);
  for (std::size_t k = 0; k < len; ++k, x = s_(x)) out[k] = x;
  return out;
}

std::vector<std::size_t> FiniteMPS::t_orbit(std::size_t x, std::size_t len) const {
  std::vector<std::size_t> out(len);
  for (std::size_t k = 0; k < len; ++k, x = t_(x)) out[k] = x;
  return out;
}

// ---------------------------------------------------------------------------

Partition orbit_partition(std::size_t n, std::span<const Permutation> gens) {
  std::vector<std::size_t> label(n, static_cast<std::size_t>(-1));
  std::vector<std::size_t> stack;
  std::size_t next = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (label[x] != static_cast<std::size_t>(-1)) continue;
    label[x] = next;
    stack.push_back(x);
    while (!stack.empty()) {
      std::size_t y = stack.back();
      stack.pop_back();
      for (const auto& g : gens) {
        // orbits of a finite group: forward images suffice
        std::size_t z = g(y);
        if (label[z] == static_cast<std::size_t>(-1)) {
          label[z] = next;
          stack.push_back(z);
        }
      }
    }
    ++next;
  }
  return Partition(label);
}

Partition invariant_partition(const FiniteMPS& sys, std::span<const GroupElement> gens) {
  if (gens.empty()) throw PreconditionError("invariant_partition: no generators");
  std::vector<Permutation> perms;
  perms.reserve(gens.size());
  for (const auto& g : gens) perms.push_back(sys.element(g));
  return orbit_partition(sys.size(), perms);
}

Partition invariant_partition(const FiniteMPS& sys, std::initializer_list<GroupElement> gens) {
  return invariant_partition(sys, std::span<const GroupElement>(gens.begin(), gens.size()));
}

std::vector<ErgodicComponent> ergodic_decomposition(const FiniteMPS& sys) {
  auto blocks = invariant_partition(sys, {kS, kT}).blocks();
  std::vector<ErgodicComponent> out;
  out.reserve(blocks.size());
  for (auto& block : blocks) {
    ErgodicComponent c;
    for (auto x : block) c.mass += sys.weight(x);
    for (auto x : block) c.measure.push_back(sys.weight(x) / c.mass);
    c.support = std::move(block);
    out.push_back(std::move(c));
  }
  return out;
}

FreenessResult is_free(const FiniteMPS& sys) {
  if (sys.size() == 1) return {true, std::nullopt};
  if (sys.s().is_identity()) return {false, GroupElement{1, 0}};
  if (sys.t().is_identity()) return {false, GroupElement{0, 1}};
  const Integer s_order = sys.s().order();
  const Integer t_order = sys.t().order();
  if (!s_order.fits_slong_p() || !t_order.fits_slong_p() || s_order * t_order > Integer(1L << 26))
    throw PreconditionError("is_free: period window too large to enumerate");
  const long p = s_order.get_si();
  const long q = t_order.get_si();
  // S^i T^j = id  <=>  S^i = T^{-j}; compare against a table of T-powers.
  std::vector<Permutation> t_inverse_powers;
  t_inverse_powers.reserve(static_cast<std::size_t>(q));
  Permutation t_inv = sys.t().inverse();
  Permutation cur = Permutation::identity(sys.size());
  for (long j = 0; j < q; ++j) {
    t_inverse_powers.push_back(cur);
    cur = cur.then(t_inv);
  }
  Permutation s_pow = Permutation::identity(sys.size());
  for (long i = 0; i < p; ++i) {
    for (long j = 0; j < q; ++j) {
      if ((i || j) && s_pow == t_inverse_powers[static_cast<std::size_t>(j)])
        return {false, GroupElement{i, j}};
    }
    s_pow = s_pow.then(sys.s());
  }
  return {true, std::nullopt};
}

bool is_ergodic(const FiniteMPS& sys) {
  return invariant_partition(sys, {kS, kT}).block_count() == 1;
}

FiniteMPS restrict_to(const FiniteMPS& sys, std::span<const std::size_t> support) {
  std::vector<std::size_t> new_index(sys.size(), static_cast<std::size_t>(-1));
  for (std::size_t k = 0; k < support.size(); ++k) new_index.at(support[k]) = k;
  Rational mass;
  for (auto x : support) mass += sys.weight(x);
  std::vector<Rational> w(support.size());
  std::vector<std::size_t> s(support.size()), t(support.size());
  for (std::size_t k = 0; k < support.size(); ++k) {
    const auto x = support[k];
    w[k] = sys.weight(x) / mass;
    s[k] = new_index[sys.s()(x)];
    t[k] = new_index[sys.t()(x)];
    if (s[k] == static_cast<std::size_t>(-1) || t[k] == static_cast<std::size_t>(-1))
      throw PreconditionError("restrict_to: support is not invariant");
  }
  return FiniteMPS(std::move(w), Permutation(std::move(s)), Permutation(std::move(t)));
}

FiniteMPS disjoint_union(std::span<const FiniteMPS> parts, std::span<const Rational> masses) {
  if (parts.size() != masses.size() || parts.empty())
    throw DimensionError("disjoint_union: one mass per part required");
  std::vector<Rational> w;
  std::vector<std::size_t> s, t;
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (masses[k] <= 0) throw ValidationError("bad weights: union masses must be positive");
    const auto& p = parts[k];
    for (std::size_t x = 0; x < p.size(); ++x) {
      w.push_back(p.weight(x) * masses[k]);
      s.push_back(offset + p.s()(x));
      t.push_back(offset + p.t()(x));
    }
    offset += p.size();
  }
  return FiniteMPS(std::move(w), Permutation(std::move(s)), Permutation(std::move(t)));
}

FiniteMPS product_system(const FiniteMPS& y, const FiniteMPS& w) {
  const std::size_t ny = y.size(), nw = w.size(), n = ny * nw;
  std::vector<Rational> weights(n);
  std::vector<std::size_t> s(n), t(n);
  for (std::size_t a = 0; a < ny; ++a) {
    for (std::size_t b = 0; b < nw; ++b) {
      const std::size_t x = a * nw + b;
      weights[x] = y.weight(a) * w.weight(b);
      s[x] = y.s()(a) * nw + w.s()(b);
      t[x] = y.t()(a) * nw + w.t()(b);
    }
  }
  return FiniteMPS(std::move(weights), Permutation(std::move(s)), Permutation(std::move(t)));
}

FiniteMPS rotation_system(std::size_t a, std::size_t b, std::pair<std::size_t, std::size_t> s,
                          std::pair<std::size_t, std::size_t> t) {
  if (a == 0 || b == 0) throw ValidationError("rotation_system: empty group");
  const std::size_t n = a * b;
  std::vector<std::size_t> s_img(n), t_img(n);
  for (std::size_t u = 0; u < a; ++u) {
    for (std::size_t v = 0; v < b; ++v) {
      s_img[u * b + v] = ((u + s.first) % a) * b + (v + s.second) % b;
      t_img[u * b + v] = ((u + t.first) % a) * b + (v + t.second) % b;
    }
  }
  std::vector<Rational> w(n, Rational(1, static_cast<unsigned long>(n)));
  return FiniteMPS(std::move(w), Permutation(std::move(s_img)), Permutation(std::move(t_img)));
}

Integer element_order(const FiniteMPS& sys, const GroupElement& g) {
  return sys.element(g).order();
}

}  // namespace ergocube
