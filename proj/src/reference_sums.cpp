#include "ergocube/reference_sums.hpp"

#include <map>
#include <set>

namespace ergocube::reference {

namespace {

std::size_t step(const Permutation& p, std::size_t x, std::int64_t k) {
  if (k >= 0) {
    for (std::int64_t r = 0; r < k; ++r) x = p(x);
    return x;
  }
  const Permutation inv = p.inverse();
  for (std::int64_t r = 0; r < -k; ++r) x = inv(x);
  return x;
}

std::size_t at(const FiniteMPS& sys, std::size_t x, std::int64_t i, std::int64_t j) {
  return step(sys.t(), step(sys.s(), x, i), j);
}

}  // namespace

Rational cubic_average(const FiniteMPS& sys, const Observable& f1, const Observable& f2, const Observable& f3,
                       std::size_t x, std::uint64_t n) {
  Rational sum;
  const auto N = static_cast<std::int64_t>(n);
  for (std::int64_t i = 0; i < N; ++i)
    for (std::int64_t j = 0; j < N; ++j)
      sum += f1[at(sys, x, i, 0)] * f2[at(sys, x, 0, j)] * f3[at(sys, x, i, j)];
  return sum / Rational(N * N);
}

Rational fourfold_average(const FiniteMPS& sys, std::span<const Observable> fs, std::size_t x, std::uint64_t n) {
  Rational sum;
  const auto N = static_cast<std::int64_t>(n);
  for (std::int64_t i = 0; i < N; ++i)
    for (std::int64_t j = 0; j < N; ++j)
      for (std::int64_t k = 0; k < N; ++k)
        for (std::int64_t p = 0; p < N; ++p)
          sum += fs[0][at(sys, x, i, j)] * fs[1][at(sys, x, i + k, j)] * fs[2][at(sys, x, i, j + p)] *
                 fs[3][at(sys, x, i + k, j + p)];
  return sum / Rational(N * N * N * N);
}

Rational windowed_sn(const FiniteMPS& sys, const Observable& f, std::size_t x, std::uint64_t n) {
  Rational sum;
  const auto N = static_cast<std::int64_t>(n);
  for (std::int64_t i = 0; i < N; ++i)
    for (std::int64_t j = 0; j < N; ++j)
      for (std::int64_t k = -i; k <= N - 1 - i; ++k)
        for (std::int64_t p = -j; p <= N - 1 - j; ++p)
          sum += f[at(sys, x, i, j)] * f[at(sys, x, i + k, j)] * f[at(sys, x, i, j + p)] *
                 f[at(sys, x, i + k, j + p)];
  sum /= Rational(N * N * N * N);
  return sum < 0 ? Rational(-sum) : sum;
}

Rational seminorm_fourth_power(const FiniteMPS& sys, const Observable& f) {
  const std::size_t n = sys.size();
  // S-orbit label of every point, by walking.
  std::vector<std::size_t> s_label(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    if (s_label[x] != n) continue;
    std::size_t y = x;
    do {
      s_label[y] = x;
      y = sys.s()(y);
    } while (y != x);
  }
  std::vector<Rational> s_mass(n);
  for (std::size_t x = 0; x < n; ++x) s_mass[s_label[x]] += sys.weight(x);
  auto mu_s = [&](std::size_t a, std::size_t b) {
    return s_label[a] == s_label[b] ? Rational(sys.weight(a) * sys.weight(b) / s_mass[s_label[a]]) : Rational(0);
  };
  // Integral of E(f x f | I_{TxT})^2 over mu_S, orbit by orbit.
  std::set<std::pair<std::size_t, std::size_t>> done;
  Rational total;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (mu_s(a, b) == 0 || done.contains({a, b})) continue;
      Rational mass, integral;
      std::size_t u = a, v = b;
      do {
        done.insert({u, v});
        mass += mu_s(u, v);
        integral += mu_s(u, v) * f[u] * f[v];
        u = sys.t()(u);
        v = sys.t()(v);
      } while (u != a || v != b);
      total += integral * integral / mass;
    }
  return total;
}

}  // namespace ergocube::reference
