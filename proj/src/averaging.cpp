#include "ergocube/averaging.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "ergocube/joinings.hpp"

namespace ergocube {

std::optional<AverageKind> parse_average_kind(std::string_view name) {
  if (name == "cubic") return AverageKind::cubic;
  if (name == "fourfold") return AverageKind::fourfold;
  if (name == "windowed" || name == "windowed_sn") return AverageKind::windowed_sn;
  if (name == "birkhoff1" || name == "birkhoff_1d") return AverageKind::birkhoff_1d;
  if (name == "birkhoff2" || name == "birkhoff_2d") return AverageKind::birkhoff_2d;
  return std::nullopt;
}

std::string average_kind_name(AverageKind kind) {
  switch (kind) {
    case AverageKind::cubic: return "cubic";
    case AverageKind::fourfold: return "fourfold";
    case AverageKind::windowed_sn: return "windowed_sn";
    case AverageKind::birkhoff_1d: return "birkhoff_1d";
    case AverageKind::birkhoff_2d: return "birkhoff_2d";
  }
  return "?";
}

std::size_t observable_count(AverageKind kind) {
  switch (kind) {
    case AverageKind::cubic: return 3;
    case AverageKind::fourfold: return 4;
    default: return 1;
  }
}

void AverageSpec::validate(std::size_t n) const {
  if (observables.size() != observable_count(kind))
    throw ValidationError(average_kind_name(kind) + " needs " + std::to_string(observable_count(kind)) +
                          " observables, got " + std::to_string(observables.size()));
  for (const auto& f : observables)
    if (f.size() != n) throw DimensionError("observable length does not match the system");
  if (start >= n) throw DimensionError("start point out of range");
  if (schedule.empty()) throw ValidationError("empty N schedule");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (schedule[k] == 0) throw ValidationError("N schedule entries must be >= 1");
    if (k && schedule[k] <= schedule[k - 1]) throw ValidationError("N schedule not strictly increasing");
  }
}

namespace {

// f = numer / den with integer numerators.
struct ScaledObservable {
  std::vector<Integer> numer;
  Integer den = 1;

  explicit ScaledObservable(const Observable& f) {
    for (const auto& v : f.values()) den = lcm(den, Integer(v.get_den()));
    numer.reserve(f.size());
    for (const auto& v : f.values()) numer.push_back(v.get_num() * (den / v.get_den()));
  }
  const Integer& operator[](std::size_t x) const { return numer[x]; }
};

Integer to_integer(std::uint64_t v) {
  Integer z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof v, 0, 0, &v);
  return z;
}

// Number of i in [0, N) with i = r (mod p), for r < p.
std::vector<Integer> residue_counts(std::size_t p, std::uint64_t n) {
  const std::uint64_t full = n / p, rem = n % p;
  std::vector<Integer> c(p);
  for (std::size_t r = 0; r < p; ++r) c[r] = to_integer(full + (r < rem ? 1 : 0));
  return c;
}

// grid[r][t] = S^r T^t x for r < p, t < q.
struct OrbitGrid {
  std::size_t p, q;
  std::vector<std::vector<std::size_t>> at;

  OrbitGrid(const FiniteMPS& sys, std::size_t x)
      : p(sys.s().cycle_length(x)), q(sys.t().cycle_length(x)), at(p) {
    auto row0 = sys.s_orbit(x, p);
    for (std::size_t r = 0; r < p; ++r) at[r] = sys.t_orbit(row0[r], q);
  }
};

Rational make_ratio(const Integer& num, const Integer& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

void require_match(const FiniteMPS& sys, std::span<const Observable> fs, std::size_t x, std::uint64_t n) {
  for (const auto& f : fs)
    if (f.size() != sys.size()) throw DimensionError("observable length does not match the system");
  if (x >= sys.size()) throw DimensionError("start point out of range");
  if (n == 0) throw PreconditionError("N must be >= 1");
}

}  // namespace

Rational cubic_average(const FiniteMPS& sys, const Observable& f1, const Observable& f2,
                       const Observable& f3, std::size_t x, std::uint64_t n) {
  const Observable fs[] = {f1, f2, f3};
  require_match(sys, fs, x, n);
  const ScaledObservable g1(f1), g2(f2), g3(f3);
  const OrbitGrid grid(sys, x);
  const auto cs = residue_counts(grid.p, n), ct = residue_counts(grid.q, n);
  Integer total, row, term;
  for (std::size_t r = 0; r < grid.p; ++r) {
    const auto& a = g1[grid.at[r][0]];
    if (a == 0 || cs[r] == 0) continue;
    row = 0;
    for (std::size_t t = 0; t < grid.q; ++t) {
      if (ct[t] == 0) continue;
      term = g2[grid.at[0][t]] * g3[grid.at[r][t]];
      row += term * ct[t];
    }
    total += cs[r] * a * row;
  }
  const Integer nn = to_integer(n);
  return make_ratio(total, nn * nn * g1.den * g2.den * g3.den);
}

Rational fourfold_average(const FiniteMPS& sys, std::span<const Observable> fs, std::size_t x,
                          std::uint64_t n) {
  if (fs.size() != 4) throw DimensionError("fourfold_average needs four observables");
  require_match(sys, fs, x, n);
  const ScaledObservable g0(fs[0]), g1(fs[1]), g2(fs[2]), g3(fs[3]);
  const OrbitGrid grid(sys, x);
  const std::size_t p = grid.p, q = grid.q;
  const auto cs = residue_counts(p, n), ct = residue_counts(q, n);
  // Window weight of residues (r, s): #{(i, k) : i = r, i + k = s} = c(r) c(s - r).
  std::vector<Integer> a(q), b(q), conv(q);
  Integer total, inner, ws;
  for (std::size_t r = 0; r < p; ++r) {
    if (cs[r] == 0) continue;
    for (std::size_t s = 0; s < p; ++s) {
      ws = cs[r] * cs[(s + p - r) % p];
      if (ws == 0) continue;
      for (std::size_t t = 0; t < q; ++t) {
        a[t] = g0[grid.at[r][t]] * g1[grid.at[s][t]];
        b[t] = g2[grid.at[r][t]] * g3[grid.at[s][t]];
      }
      inner = 0;
      for (std::size_t t = 0; t < q; ++t) {
        if (ct[t] == 0 || a[t] == 0) continue;
        Integer acc;
        for (std::size_t u = 0; u < q; ++u)
          if (b[u] != 0) acc += ct[(u + q - t) % q] * b[u];
        inner += ct[t] * a[t] * acc;
      }
      total += ws * inner;
    }
  }
  const Integer nn = to_integer(n);
  const Integer n4 = nn * nn * nn * nn;
  return make_ratio(total, n4 * g0.den * g1.den * g2.den * g3.den);
}

Rational windowed_sn(const FiniteMPS& sys, const Observable& f, std::size_t x, std::uint64_t n) {
  require_match(sys, std::span<const Observable>(&f, 1), x, n);
  const ScaledObservable g(f);
  const OrbitGrid grid(sys, x);
  const auto cs = residue_counts(grid.p, n), ct = residue_counts(grid.q, n);
  // With i + k and j + p ranging freely over [0, N-1] the sum is
  // sum_{i,b} (sum_j F(i,j) F(b,j))^2 with F(i,j) = f(S^i T^j x).
  Integer total, gram;
  for (std::size_t r = 0; r < grid.p; ++r) {
    if (cs[r] == 0) continue;
    for (std::size_t s = 0; s < grid.p; ++s) {
      if (cs[s] == 0) continue;
      gram = 0;
      for (std::size_t t = 0; t < grid.q; ++t)
        if (ct[t] != 0) gram += ct[t] * g[grid.at[r][t]] * g[grid.at[s][t]];
      total += cs[r] * cs[s] * gram * gram;
    }
  }
  const Integer nn = to_integer(n);
  const Integer d2 = g.den * g.den;
  return abs(make_ratio(total, nn * nn * nn * nn * d2 * d2));
}

Rational birkhoff_average(const FiniteMPS& sys, const Observable& f, std::size_t x,
                          std::span<const GroupElement> gens, std::uint64_t n) {
  require_match(sys, std::span<const Observable>(&f, 1), x, n);
  if (gens.empty()) throw PreconditionError("birkhoff_average: no generators");
  const ScaledObservable g(f);
  std::vector<Permutation> perms;
  std::vector<std::vector<Integer>> counts;
  for (const auto& e : gens) {
    perms.push_back(sys.element(e));
    counts.push_back(residue_counts(perms.back().cycle_length(x), n));
  }
  // Depth-first over residue tuples; the generators commute, so the order of
  // application does not matter.
  Integer total;
  auto walk = [&](auto&& self, std::size_t depth, std::size_t point, const Integer& weight) -> void {
    if (depth == perms.size()) {
      total += weight * g[point];
      return;
    }
    std::size_t y = point;
    for (std::size_t r = 0; r < counts[depth].size(); ++r, y = perms[depth](y))
      if (counts[depth][r] != 0) self(self, depth + 1, y, Integer(weight * counts[depth][r]));
  };
  walk(walk, 0, x, Integer(1));
  Integer denom = g.den;
  const Integer nn = to_integer(n);
  for (std::size_t k = 0; k < perms.size(); ++k) denom *= nn;
  return make_ratio(total, denom);
}

BoundCheck check_bound_average(const FiniteMPS& sys, const Observable& f1, const Observable& f2,
                               const Observable& f3, std::size_t x, std::uint64_t n,
                               const Rational& constant) {
  for (const auto* f : {&f1, &f2, &f3})
    if (f->sup_norm() > 1) throw PreconditionError("check_bound_average: sup norm exceeds 1");
  BoundCheck out;
  const Rational avg = cubic_average(sys, f1, f2, f3, x, n);
  const Rational sq = avg * avg;
  out.lhs = sq * sq;
  out.rhs = constant * windowed_sn(sys, f3, x, n);
  out.holds = out.lhs <= out.rhs;
  return out;
}

TelescopingCheck check_telescoping(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw DimensionError("check_telescoping: sequences of different length");
  const std::size_t n = a.size();
  Rational pa = 1, pb = 1;
  for (std::size_t k = 0; k < n; ++k) {
    pa *= a[k];
    pb *= b[k];
  }
  // prefix[k] = a_1..a_k, suffix[k] = b_{k+1}..b_n
  std::vector<Rational> prefix(n + 1, Rational(1)), suffix(n + 1, Rational(1));
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] * a[k];
  for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] * b[k];
  Rational telescoped, l1;
  for (std::size_t k = 0; k < n; ++k) {
    telescoped += prefix[k] * (a[k] - b[k]) * suffix[k + 1];
    l1 += abs(Rational(a[k] - b[k]));
  }
  TelescopingCheck out;
  out.identity_holds = (pa - pb) == telescoped;
  out.bound_applicable = true;
  for (std::size_t k = 0; k < n; ++k)
    if (abs(a[k]) > 1 || abs(b[k]) > 1) out.bound_applicable = false;
  out.bound_holds = !out.bound_applicable || abs(Rational(pa - pb)) <= l1;
  return out;
}

DecompositionReport decompose_and_converge(const FiniteMPS& sys, const Observable& f1,
                                           const Observable& f2, const Observable& f3, std::size_t x,
                                           std::span<const std::uint64_t> schedule) {
  std::vector<std::string> failed;
  if (!is_magic(sys).is_magic) failed.push_back("magic");
  if (!is_ergodic(sys)) failed.push_back("ergodic");
  if (!is_free(sys).free) failed.push_back("free");
  if (!failed.empty()) {
    std::string msg = "decompose_and_converge: system is not";
    for (std::size_t k = 0; k < failed.size(); ++k) msg += (k ? ", " : " ") + failed[k];
    throw PreconditionError(msg);
  }
  const auto i_s = invariant_partition(sys, {kS});
  const auto i_t = invariant_partition(sys, {kT});
  const auto w = common_refinement(i_s, i_t);

  DecompositionReport out;
  out.w_part = cond_exp(sys, f3, w);
  out.g_part = f3 - out.w_part;

  // E(f3|W) = sum over W-blocks A n B (A in I_T, B in I_S) of c 1_A 1_B, and
  // 1_A(S^i T^j x) = 1_A(S^i x), 1_B(S^i T^j x) = 1_B(T^j x).
  struct Piece {
    Rational c;
    Observable f1_on_a, f2_on_b;
  };
  std::vector<Piece> pieces;
  const auto t_blocks = i_t.blocks();
  const auto s_blocks = i_s.blocks();
  for (const auto& block : w.blocks()) {
    const Rational& c = out.w_part[block[0]];
    if (c == 0) continue;
    const auto& a = t_blocks[i_t.block_of(block[0])];
    const auto& b = s_blocks[i_s.block_of(block[0])];
    pieces.push_back({c, f1 * Observable::indicator(sys.size(), a), f2 * Observable::indicator(sys.size(), b)});
  }
  for (const auto& pc : pieces) {
    out.track_a_limit += pc.c * cond_exp(sys, pc.f1_on_a, i_s)[x] * cond_exp(sys, pc.f2_on_b, i_t)[x];
  }

  const GroupElement s_gen[] = {kS};
  const GroupElement t_gen[] = {kT};
  for (auto n : schedule) {
    DecompositionRow row;
    row.n = n;
    for (const auto& pc : pieces)
      row.track_a += pc.c * birkhoff_average(sys, pc.f1_on_a, x, s_gen, n) *
                     birkhoff_average(sys, pc.f2_on_b, x, t_gen, n);
    row.track_b = cubic_average(sys, f1, f2, out.g_part, x, n);
    row.direct = cubic_average(sys, f1, f2, f3, x, n);
    row.sum_equal = (row.track_a + row.track_b) == row.direct;
    row.sn_g = windowed_sn(sys, out.g_part, x, n);
    row.b_bound = 2.0 * std::pow(to_double(row.sn_g), 0.25);
    out.rows.push_back(std::move(row));
  }
  return out;
}

ConvergenceReport average_report(const FiniteMPS& sys, const AverageSpec& spec, const std::string& name) {
  spec.validate(sys.size());
  ConvergenceReport report;
  report.system = name;
  std::ostringstream desc;
  desc << average_kind_name(spec.kind) << " x=" << spec.start;
  report.spec = desc.str();

  const auto& fs = spec.observables;
  std::optional<Number> reference;
  switch (spec.kind) {
    case AverageKind::fourfold:
      reference = Number(integrate(host_measure(sys).mu_st, fs));
      break;
    case AverageKind::windowed_sn:
      reference = Number(host_seminorm(host_measure(sys), fs[0]).fourth_power);
      break;
    case AverageKind::birkhoff_1d:
      reference = Number(cond_exp(sys, fs[0], invariant_partition(sys, {kS}))[spec.start]);
      break;
    case AverageKind::birkhoff_2d:
      reference = Number(cond_exp(sys, fs[0], invariant_partition(sys, {kS, kT}))[spec.start]);
      break;
    case AverageKind::cubic:
      break;
  }
  const GroupElement one_gen[] = {kS};
  const GroupElement two_gens[] = {kS, kT};
  for (auto n : spec.schedule) {
    const auto t0 = std::chrono::steady_clock::now();
    Rational value;
    switch (spec.kind) {
      case AverageKind::cubic: value = cubic_average(sys, fs[0], fs[1], fs[2], spec.start, n); break;
      case AverageKind::fourfold: value = fourfold_average(sys, fs, spec.start, n); break;
      case AverageKind::windowed_sn: value = windowed_sn(sys, fs[0], spec.start, n); break;
      case AverageKind::birkhoff_1d: value = birkhoff_average(sys, fs[0], spec.start, one_gen, n); break;
      case AverageKind::birkhoff_2d: value = birkhoff_average(sys, fs[0], spec.start, two_gens, n); break;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.add(n, Number(std::move(value)), reference, secs);
  }
  return report;
}

}  // namespace ergocube
