#include "ergocube/joinings.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace ergocube {

Observable cond_exp(const FiniteMPS& sys, const Observable& f, const Partition& p) {
  if (f.size() != sys.size() || p.size() != sys.size()) throw DimensionError("cond_exp: size mismatch");
  std::vector<Rational> mass(p.block_count()), integral(p.block_count());
  for (std::size_t x = 0; x < sys.size(); ++x) {
    mass[p.block_of(x)] += sys.weight(x);
    integral[p.block_of(x)] += sys.weight(x) * f[x];
  }
  std::vector<Rational> out(sys.size());
  for (std::size_t x = 0; x < sys.size(); ++x) out[x] = integral[p.block_of(x)] / mass[p.block_of(x)];
  return Observable(std::move(out));
}

namespace {

// Relative independent square of (points, weights) over a partition of the
// point indices: pairs (u, v) in a common block with weight w(u) w(v) / w(B).
std::map<std::pair<std::size_t, std::size_t>, Rational> relative_square(
    std::span<const Rational> weights, const Partition& p) {
  std::map<std::pair<std::size_t, std::size_t>, Rational> out;
  for (const auto& block : p.blocks()) {
    Rational mass;
    for (auto x : block) mass += weights[x];
    for (auto u : block)
      for (auto v : block) out.emplace(std::pair{u, v}, weights[u] * weights[v] / mass);
  }
  return out;
}

}  // namespace

SparseMeasure rel_indep_square(const FiniteMPS& sys) {
  auto sq = relative_square(sys.weights(), invariant_partition(sys, {kS}));
  std::map<Tuple, Rational> entries;
  for (auto& [pair, w] : sq) entries.emplace(Tuple{pair.first, pair.second}, std::move(w));
  return SparseMeasure(2, sys.size(), std::move(entries));
}

Tuple s_star(const FiniteMPS& sys, const Tuple& q) {
  return {q.at(0), sys.s()(q.at(1)), q.at(2), sys.s()(q.at(3))};
}

Tuple t_star(const FiniteMPS& sys, const Tuple& q) {
  return {q.at(0), q.at(1), sys.t()(q.at(2)), sys.t()(q.at(3))};
}

Tuple diagonal(const FiniteMPS& sys, const GroupElement& g, const Tuple& q) {
  Tuple out(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) out[k] = sys.apply(g, q[k]);
  return out;
}

HostMeasure host_measure(const FiniteMPS& sys) {
  HostMeasure hm;
  hm.base = sys;
  hm.i_s = invariant_partition(sys, {kS});
  hm.mu_s = rel_indep_square(sys);

  std::vector<Rational> pair_weight;
  std::map<Tuple, std::size_t> index;
  for (const auto& [pair, w] : hm.mu_s.entries()) {
    index.emplace(pair, hm.pairs.size());
    hm.pairs.push_back(pair);
    pair_weight.push_back(w);
  }
  // T x T preserves supp(mu_S) because mu_S is g x g invariant.
  std::vector<std::size_t> tt(hm.pairs.size());
  for (std::size_t k = 0; k < hm.pairs.size(); ++k)
    tt[k] = index.at(Tuple{sys.t()(hm.pairs[k][0]), sys.t()(hm.pairs[k][1])});
  const Permutation tt_perm(std::move(tt));
  hm.i_tt = orbit_partition(hm.pairs.size(), std::span<const Permutation>(&tt_perm, 1));

  std::map<Tuple, Rational> entries;
  for (auto& [pq, w] : relative_square(pair_weight, hm.i_tt)) {
    const auto& a = hm.pairs[pq.first];
    const auto& b = hm.pairs[pq.second];
    entries.emplace(Tuple{a[0], a[1], b[0], b[1]}, std::move(w));
  }
  hm.mu_st = SparseMeasure(4, sys.size(), std::move(entries));
  return hm;
}

Seminorm host_seminorm(const HostMeasure& hm, const Observable& f) {
  const Observable fs[4] = {f, f, f, f};
  Seminorm out;
  out.fourth_power = integrate(hm.mu_st, fs);
  out.value = std::pow(std::max(0.0, to_double(out.fourth_power)), 0.25);
  return out;
}

RationalMatrix seminorm_gram(const HostMeasure& hm) {
  const std::size_t n = hm.base.size();
  RationalMatrix m(n, std::vector<Rational>(n));
  for (const auto& [q, w] : hm.mu_st.entries())
    if (q[1] == q[3]) m[q[0]][q[2]] += w;
  return m;
}

Observable primitive_integer(const Observable& f) {
  Integer den = 1;
  for (const auto& v : f.values()) den = lcm(den, Integer(v.get_den()));
  std::vector<Integer> ints;
  Integer g = 0;
  for (const auto& v : f.values()) {
    ints.push_back(Integer(v.get_num() * (den / v.get_den())));
    g = gcd(g, ints.back());
  }
  if (g == 0) return f;
  auto first = std::find_if(ints.begin(), ints.end(), [](const Integer& z) { return z != 0; });
  if (*first < 0) g = -g;
  std::vector<Rational> out;
  for (auto& z : ints) out.emplace_back(Integer(z / g));
  return Observable(std::move(out));
}

std::string describe(MagicFailure f) {
  switch (f) {
    case MagicFailure::none: return "none";
    case MagicFailure::complement_not_in_kernel: return "E(f|W) = 0 but |||f||| != 0";
    case MagicFailure::kernel_not_in_complement: return "|||f||| = 0 but E(f|W) != 0";
  }
  return "?";
}

MagicReport is_magic(const FiniteMPS& sys) { return is_magic(host_measure(sys)); }

MagicReport is_magic(const HostMeasure& hm) {
  const auto& sys = hm.base;
  const std::size_t n = sys.size();
  MagicReport report;
  report.w = common_refinement(hm.i_s, invariant_partition(sys, {kT}));

  const auto gram = seminorm_gram(hm);
  const auto kernel = null_space(gram, n);
  report.seminorm_kernel_dim = kernel.size();

  // {f : E(f|W) = 0} is spanned by w(x0) e_x - w(x) e_x0 within each W-block.
  std::vector<std::vector<Rational>> complement;
  for (const auto& block : report.w.blocks()) {
    for (std::size_t k = 1; k < block.size(); ++k) {
      std::vector<Rational> g(n);
      g[block[k]] = sys.weight(block[0]);
      g[block[0]] = -sys.weight(block[k]);
      complement.push_back(std::move(g));
    }
  }
  report.w_complement_dim = complement.size();

  for (const auto& g : complement) {
    auto image = multiply(gram, g);
    if (std::any_of(image.begin(), image.end(), [](const Rational& r) { return r != 0; })) {
      report.failure = MagicFailure::complement_not_in_kernel;
      report.counterexample = primitive_integer(Observable(g));
      return report;
    }
  }
  for (const auto& k : kernel) {
    Observable f(k);
    if (!cond_exp(sys, f, report.w).is_zero()) {
      report.failure = MagicFailure::kernel_not_in_complement;
      report.counterexample = primitive_integer(f);
      return report;
    }
  }
  report.is_magic = true;
  return report;
}

// ---------------------------------------------------------------------------

MagicExtension magic_extension(const FiniteMPS& sys) {
  if (!is_ergodic(sys)) throw PreconditionError("magic_extension: system is not ergodic");
  if (sys.size() > 1 && (sys.s().is_identity() || sys.t().is_identity()))
    throw PreconditionError("magic_extension: S and T must not be the identity");

  const auto hm = host_measure(sys);
  std::vector<Tuple> points;
  std::vector<Rational> weights;
  std::map<Tuple, std::size_t> index;
  for (const auto& [q, w] : hm.mu_st.entries()) {
    index.emplace(q, points.size());
    points.push_back(q);
    weights.push_back(w);
  }
  std::vector<std::size_t> s_img(points.size()), t_img(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    s_img[k] = index.at(s_star(sys, points[k]));
    t_img[k] = index.at(t_star(sys, points[k]));
  }
  const FiniteMPS full(std::move(weights), Permutation(std::move(s_img)), Permutation(std::move(t_img)));

  auto comps = ergodic_decomposition(full);
  std::sort(comps.begin(), comps.end(), [](const ErgodicComponent& a, const ErgodicComponent& b) {
    if (a.mass != b.mass) return a.mass > b.mass;
    return a.support < b.support;  // indices follow the lexicographic order of the quadruples
  });

  MagicExtension out;
  std::optional<std::size_t> chosen;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    ComponentVerdict v;
    v.mass = comps[c].mass;
    for (auto k : comps[c].support) v.support.push_back(points[k]);
    if (!chosen) {
      auto sub = restrict_to(full, comps[c].support);
      v.freeness = is_free(sub);
      if (v.freeness.free) {
        v.magic = is_magic(sub).is_magic;
        if (*v.magic) {
          chosen = c;
          out.system = std::move(sub);
          out.points = v.support;
          for (const auto& q : out.points) out.factor_map.push_back(q[3]);
        }
      }
    } else {
      v.freeness = is_free(restrict_to(full, comps[c].support));
    }
    out.components.push_back(std::move(v));
  }
  if (!chosen) {
    std::ostringstream os;
    os << "magic_extension: no free magic ergodic component among " << comps.size() << ':';
    for (const auto& v : out.components) {
      os << "\n  mass " << format_rational(v.mass) << ", " << v.support.size() << " points: ";
      if (!v.freeness.free)
        os << "not free (witness " << format_group_element(*v.freeness.witness) << ")";
      else
        os << "not magic";
    }
    throw ConstructionError(os.str());
  }
  out.selected = *chosen;
  return out;
}

// ---------------------------------------------------------------------------

bool measurability_identity(const HostMeasure& hm, const Observable& f0, const Observable& f1) {
  const auto& sys = hm.base;
  const auto w = common_refinement(hm.i_s, invariant_partition(sys, {kT}));
  const auto g0 = cond_exp(sys, f0, w);
  const auto g1 = cond_exp(sys, f1, w);
  const auto& pairs = hm.pairs;
  std::vector<Rational> mass(hm.i_tt.block_count()), lhs(mass.size()), rhs(mass.size());
  std::size_t k = 0;
  for (const auto& [pair, weight] : hm.mu_s.entries()) {
    const auto b = hm.i_tt.block_of(k);
    mass[b] += weight;
    lhs[b] += weight * f0[pairs[k][0]] * f1[pairs[k][1]];
    rhs[b] += weight * g0[pairs[k][0]] * g1[pairs[k][1]];
    ++k;
  }
  // Both conditional expectations share the denominator mass[b].
  return lhs == rhs;
}

bool measurability_check(const FiniteMPS& sys) { return measurability_check(host_measure(sys)); }

bool measurability_check(const HostMeasure& hm) {
  const auto& sys = hm.base;
  const auto w = common_refinement(hm.i_s, invariant_partition(sys, {kT}));
  std::vector<Rational> w_mass(w.block_count());
  for (std::size_t x = 0; x < sys.size(); ++x) w_mass[w.block_of(x)] += sys.weight(x);
  const auto w_blocks = w.blocks();

  // For indicators e_a, e_b and each I_{TxT}-block beta (times mu_S(beta)):
  //   lhs = mu_S(a, b) [(a, b) in beta]
  //   rhs = w(a) w(b) / (w(W_a) w(W_b)) * mu_S(beta n (W_a x W_b))
  std::vector<std::map<std::pair<std::size_t, std::size_t>, Rational>> cross(hm.i_tt.block_count());
  std::size_t k = 0;
  for (const auto& [pair, weight] : hm.mu_s.entries()) {
    cross[hm.i_tt.block_of(k)][{w.block_of(pair[0]), w.block_of(pair[1])}] += weight;
    ++k;
  }
  std::map<Tuple, std::size_t> pair_index;
  for (std::size_t p = 0; p < hm.pairs.size(); ++p) pair_index.emplace(hm.pairs[p], p);

  for (std::size_t beta = 0; beta < cross.size(); ++beta) {
    for (const auto& [blocks, m] : cross[beta]) {
      const Rational scale = m / (w_mass[blocks.first] * w_mass[blocks.second]);
      for (auto a : w_blocks[blocks.first]) {
        for (auto b : w_blocks[blocks.second]) {
          const Rational rhs = sys.weight(a) * sys.weight(b) * scale;
          auto it = pair_index.find(Tuple{a, b});
          const bool inside = it != pair_index.end() && hm.i_tt.block_of(it->second) == beta;
          const Rational lhs = inside ? hm.mu_s.weight(Tuple{a, b}) : Rational(0);
          if (lhs != rhs) return false;
        }
      }
    }
  }
  return true;
}

bool product_factor_independent(const FiniteMPS& sys) {
  const auto i_s = invariant_partition(sys, {kS});
  const auto i_t = invariant_partition(sys, {kT});
  std::vector<Rational> mass_s(i_s.block_count()), mass_t(i_t.block_count());
  std::map<std::pair<std::size_t, std::size_t>, Rational> joint;
  for (std::size_t x = 0; x < sys.size(); ++x) {
    mass_s[i_s.block_of(x)] += sys.weight(x);
    mass_t[i_t.block_of(x)] += sys.weight(x);
    joint[{i_t.block_of(x), i_s.block_of(x)}] += sys.weight(x);
  }
  for (std::size_t a = 0; a < mass_t.size(); ++a) {
    for (std::size_t b = 0; b < mass_s.size(); ++b) {
      auto it = joint.find({a, b});
      const Rational both = it == joint.end() ? Rational(0) : it->second;
      if (both != mass_t[a] * mass_s[b]) return false;
    }
  }
  return true;
}

}  // namespace ergocube
