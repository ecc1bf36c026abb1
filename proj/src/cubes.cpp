#include "ergocube/cubes.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include "ergocube/joinings.hpp"

namespace ergocube {

std::size_t CubeSpace::index_of(const Tuple& q) const {
  auto it = std::lower_bound(points.begin(), points.end(), q);
  if (it == points.end() || *it != q) throw DimensionError("tuple is not a cube point");
  return static_cast<std::size_t>(it - points.begin());
}

bool CubeSpace::contains(const Tuple& q) const { return std::binary_search(points.begin(), points.end(), q); }

CubeSpace cube_space(const FiniteMPS& sys) {
  std::set<Tuple> pts;
  for (std::size_t x = 0; x < sys.size(); ++x) {
    const auto row = sys.s_orbit(x, sys.s().cycle_length(x));
    const std::size_t q = sys.t().cycle_length(x);
    const auto col = sys.t_orbit(x, q);
    for (auto sx : row) {
      const auto corner = sys.t_orbit(sx, q);
      for (std::size_t j = 0; j < q; ++j) pts.insert(Tuple{x, sx, col[j], corner[j]});
    }
  }
  return CubeSpace{std::vector<Tuple>(pts.begin(), pts.end())};
}

std::vector<std::pair<std::size_t, std::size_t>> two_sided_cube(const FiniteMPS& sys, const GroupElement& r) {
  const Permutation p = sys.element(r);
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t x = 0; x < sys.size(); ++x) {
    std::size_t y = x;
    do {
      out.emplace(x, y);
      y = p(y);
    } while (y != x);
  }
  return {out.begin(), out.end()};
}

ActionSpace cube_action(const FiniteMPS& sys, const CubeSpace& cube) {
  ActionSpace a;
  a.size = cube.points.size();
  auto lift = [&](auto&& map, const std::string& name) {
    std::vector<std::size_t> image(a.size);
    for (std::size_t k = 0; k < a.size; ++k) {
      const Tuple q = map(cube.points[k]);
      if (!cube.contains(q)) throw ConstructionError("cube space not invariant under " + name);
      image[k] = cube.index_of(q);
    }
    a.generators.emplace_back(std::move(image));
    a.names.push_back(name);
  };
  lift([&](const Tuple& q) { return s_star(sys, q); }, "id x S x id x S");
  lift([&](const Tuple& q) { return t_star(sys, q); }, "id x id x T x T");
  lift([&](const Tuple& q) { return diagonal(sys, kS, q); }, "S x S x S x S");
  lift([&](const Tuple& q) { return diagonal(sys, kT, q); }, "T x T x T x T");
  return a;
}

ActionSpace system_action(const FiniteMPS& sys) {
  return ActionSpace{sys.size(), {sys.s(), sys.t()}, {"S", "T"}};
}

namespace {

// out = sum_{i<N} g^i in, on integer count vectors.
std::vector<Integer> box_step(const Permutation& g, const std::vector<Integer>& in, std::uint64_t n) {
  std::vector<Integer> out(in.size());
  for (std::size_t u = 0; u < in.size(); ++u) {
    if (in[u] == 0) continue;
    const std::size_t len = g.cycle_length(u);
    const std::uint64_t full = n / len, rem = n % len;
    std::size_t y = u;
    for (std::size_t r = 0; r < len; ++r, y = g(y)) {
      const std::uint64_t c = full + (r < rem ? 1 : 0);
      if (c) out[y] += in[u] * Integer(std::to_string(c));
    }
  }
  return out;
}

}  // namespace

Rational unique_ergodicity_deviation(const ActionSpace& action, std::span<const Rational> reference,
                                     std::uint64_t n) {
  if (reference.size() != action.size) throw DimensionError("reference does not match the action space");
  if (n == 0) throw PreconditionError("N must be >= 1");
  Integer denom = 1;
  const Integer nn(std::to_string(n));
  for (std::size_t k = 0; k < action.generators.size(); ++k) denom *= nn;
  Rational worst;
  for (std::size_t z = 0; z < action.size; ++z) {
    std::vector<Integer> counts(action.size);
    counts[z] = 1;
    for (const auto& g : action.generators) counts = box_step(g, counts, n);
    for (std::size_t y = 0; y < action.size; ++y) {
      Rational avg(counts[y], denom);
      avg.canonicalize();
      const Rational dev = abs(Rational(avg - reference[y]));
      if (dev > worst) worst = dev;
    }
  }
  return worst;
}

std::vector<Rational> cube_reference(const CubeSpace& cube, const SparseMeasure& reference) {
  std::vector<Rational> out;
  out.reserve(cube.points.size());
  for (const auto& q : cube.points) out.push_back(reference.weight(q));
  return out;
}

ConvergenceReport empirical_unique_ergodicity(const ActionSpace& action, std::span<const Rational> reference,
                                              std::span<const std::uint64_t> schedule, const std::string& name) {
  ConvergenceReport report;
  report.system = name;
  report.spec = "max deviation of singleton box averages, d=" + std::to_string(action.generators.size());
  for (auto n : schedule) {
    const auto t0 = std::chrono::steady_clock::now();
    Rational dev = unique_ergodicity_deviation(action, reference, n);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.add(n, Number(std::move(dev)), Number(Rational(0)), secs);
  }
  return report;
}

namespace {

// All elements of the group generated by `gens`, as image vectors.
std::set<std::vector<std::size_t>> generated_group(std::size_t n, const std::vector<Permutation>& gens) {
  std::set<std::vector<std::size_t>> seen{Permutation::identity(n).image()};
  std::vector<Permutation> frontier{Permutation::identity(n)};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& p : frontier)
      for (const auto& g : gens) {
        Permutation q = p.then(g);
        if (seen.insert(q.image()).second) next.push_back(std::move(q));
      }
    frontier = std::move(next);
  }
  return seen;
}

}  // namespace

ProductCubeReport product_cube_identification(const FiniteMPS& y, const FiniteMPS& w) {
  if (!y.t().is_identity()) throw PreconditionError("product_cube_identification: Y must have T = id");
  if (!w.s().is_identity()) throw PreconditionError("product_cube_identification: W must have S = id");
  if (!is_ergodic(y) || !is_ergodic(w))
    throw PreconditionError("product_cube_identification: Y and W must be ergodic");
  const std::size_t ny = y.size(), nw = w.size();
  const FiniteMPS prod = product_system(y, w);
  const CubeSpace cube = cube_space(prod);
  ProductCubeReport rep;
  rep.cube_points = cube.points.size();

  auto yc = [&](std::size_t p) { return p / nw; };
  auto wc = [&](std::size_t p) { return p % nw; };
  // phi(q) as an index into Y x Y x W x W, (y, y', w, w') -> ((y ny + y') nw + w) nw + w'
  auto encode = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return ((a * ny + b) * nw + c) * nw + d;
  };
  const std::size_t target = ny * ny * nw * nw;

  rep.shape_ok = true;
  std::vector<std::size_t> phi(cube.points.size());
  for (std::size_t k = 0; k < cube.points.size(); ++k) {
    const auto& q = cube.points[k];
    if (wc(q[0]) != wc(q[1]) || wc(q[2]) != wc(q[3]) || yc(q[0]) != yc(q[2]) || yc(q[1]) != yc(q[3]))
      rep.shape_ok = false;
    phi[k] = encode(yc(q[0]), yc(q[1]), wc(q[0]), wc(q[2]));
  }
  {
    std::vector<std::size_t> sorted = phi;
    std::sort(sorted.begin(), sorted.end());
    rep.bijective = rep.shape_ok && sorted.size() == target &&
                    std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  }
  if (!rep.bijective) return rep;

  // Independent generators on Y x Y x W x W.
  auto coord_map = [&](int slot) {
    std::vector<std::size_t> image(target);
    for (std::size_t a = 0; a < ny; ++a)
      for (std::size_t b = 0; b < ny; ++b)
        for (std::size_t c = 0; c < nw; ++c)
          for (std::size_t d = 0; d < nw; ++d) {
            std::size_t a2 = a, b2 = b, c2 = c, d2 = d;
            if (slot == 0) a2 = y.s()(a);
            if (slot == 1) b2 = y.s()(b);
            if (slot == 2) c2 = w.t()(c);
            if (slot == 3) d2 = w.t()(d);
            image[encode(a, b, c, d)] = encode(a2, b2, c2, d2);
          }
    return Permutation(std::move(image));
  };
  std::vector<Permutation> independent;
  for (int slot = 0; slot < 4; ++slot) independent.push_back(coord_map(slot));

  // Transport every cube generator through phi.
  const ActionSpace act = cube_action(prod, cube);
  std::vector<Permutation> transported;
  for (const auto& g : act.generators) {
    std::vector<std::size_t> image(target);
    for (std::size_t k = 0; k < cube.points.size(); ++k) image[phi[k]] = phi[g(k)];
    transported.emplace_back(std::move(image));
  }
  // id x S x id x S -> id x sigma x id x id, id x id x T x T -> id x id x id x tau,
  // S^4 -> sigma x sigma x id x id, T^4 -> id x id x tau x tau.
  const std::vector<Permutation> expected = {
      independent[1], independent[3], independent[0].then(independent[1]),
      independent[2].then(independent[3])};
  rep.conjugates = transported == expected;
  rep.group_matches = generated_group(target, transported) == generated_group(target, independent);

  const HostMeasure hm = host_measure(prod);
  rep.pushforward_ok = true;
  std::vector<Rational> pushed(target);
  for (const auto& [q, wt] : hm.mu_st.entries()) {
    if (!cube.contains(q)) {
      rep.pushforward_ok = false;
      break;
    }
    pushed[phi[cube.index_of(q)]] += wt;
  }
  if (rep.pushforward_ok) {
    for (std::size_t a = 0; a < ny && rep.pushforward_ok; ++a)
      for (std::size_t b = 0; b < ny; ++b)
        for (std::size_t c = 0; c < nw; ++c)
          for (std::size_t d = 0; d < nw; ++d)
            if (pushed[encode(a, b, c, d)] != y.weight(a) * y.weight(b) * w.weight(c) * w.weight(d))
              rep.pushforward_ok = false;
  }
  return rep;
}

CubeSupportFinding compare_cube_support(const FiniteMPS& sys) {
  const CubeSpace cube = cube_space(sys);
  const HostMeasure hm = host_measure(sys);
  CubeSupportFinding f;
  f.cube_points = cube.points.size();
  f.support_points = hm.mu_st.support_size();
  for (const auto& q : cube.points)
    if (!hm.mu_st.contains(q)) f.only_in_cube.push_back(q);
  for (const auto& [q, wt] : hm.mu_st.entries())
    if (!cube.contains(q)) f.only_in_support.push_back(q);
  f.equal = f.only_in_cube.empty() && f.only_in_support.empty();
  return f;
}

}  // namespace ergocube
