// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "ergocube/averaging.hpp"
#include "ergocube/cubes.hpp"
#include "ergocube/generate.hpp"
#include "ergocube/joinings.hpp"
#include "ergocube/reference_sums.hpp"
#include "ergocube/torus.hpp"

using namespace ergocube;

namespace {

struct Config {
  std::uint64_t seed = 2024;
  double torus_tolerance = 2e-2;
  double float_tolerance = 1e-9;
};

struct Outcome {
  bool pass = true;
  std::string detail;
  double budget = 0;  // seconds; 0 means no limit
};

using Clock = std::chrono::steady_clock;

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? "; " : "") + parts[k];
  return out;
}

Outcome criterion1(const Config& cfg) {
  Outcome o{true, "", 60};
  const Family families[] = {Family::rotation, Family::union_, Family::reweighted};
  std::size_t checks = 0;
  std::vector<std::string> bad;
  for (std::size_t t = 0; t < 100; ++t) {
    std::mt19937_64 rng(cfg.seed + t);
    const FiniteMPS sys = random_system(families[t % 3], rng);
    const HostMeasure hm = host_measure(sys);
    std::vector<Observable> fs;
    std::vector<Rational> n4;
    for (int k = 0; k < 4; ++k) {
      fs.push_back(random_observable(sys.size(), rng));
      n4.push_back(host_seminorm(hm, fs.back()).fourth_power);
      if (n4.back() < 0) bad.push_back("negative |||f|||^4, seed " + std::to_string(cfg.seed + t));
    }
    const Rational v = integrate(hm.mu_st, fs);
    if (v * v * v * v > n4[0] * n4[1] * n4[2] * n4[3]) bad.push_back("Cauchy-Schwarz, seed " + std::to_string(cfg.seed + t));
    for (long c : {-3L, 2L}) {
      const Rational cr(c);
      if (host_seminorm(hm, fs[1].scaled(cr)).fourth_power != cr * cr * cr * cr * n4[1])
        bad.push_back("homogeneity, seed " + std::to_string(cfg.seed + t));
    }
    checks += 7;
  }
  o.pass = bad.empty();
  o.detail = std::to_string(checks) + " exact checks on 100 systems" + (bad.empty() ? "" : ": " + join(bad));
  return o;
}

Outcome criterion2(const Config& cfg) {
  Outcome o{true, "", 120};
  std::vector<std::string> bad;
  std::size_t total_points = 0;
  for (std::size_t t = 0; t < 50; ++t) {
    std::mt19937_64 rng(cfg.seed + 1000 + t);
    const FiniteMPS sys = random_system(Family::ergodic, rng);
    try {
      const MagicExtension ext = magic_extension(sys);
      total_points += ext.system.size();
      std::string why;
      if (!is_magic(ext.system).is_magic) why += " not-magic";
      if (!is_ergodic(ext.system)) why += " not-ergodic";
      if (!is_free(ext.system).free) why += " not-free";
      if (!why.empty()) bad.push_back("seed " + std::to_string(cfg.seed + 1000 + t) + ":" + why);
    } catch (const std::exception& e) {
      bad.push_back("seed " + std::to_string(cfg.seed + 1000 + t) + ": " + e.what());
    }
  }
  o.pass = bad.empty();
  o.detail = "50 extensions, " + std::to_string(total_points) + " points in total" + (bad.empty() ? "" : ": " + join(bad));
  return o;
}

Outcome criterion3(const Config&) {
  Outcome o{true, "", 0};
  const FiniteMPS z4 = *builtin_system("z4-diagonal");
  const Observable f = parse_observable("1,0,-1,0");
  const HostMeasure hm = host_measure(z4);
  std::vector<std::string> bad;
  const Rational s4 = host_seminorm(hm, f).fourth_power;
  // independent route: (1/4) sum_d a(d)^2 with a(d) the autocorrelation
  Rational oracle;
  for (std::size_t d = 0; d < 4; ++d) {
    Rational a;
    for (std::size_t x = 0; x < 4; ++x) a += f[x] * f[(x + d) % 4];
    a /= 4;
    oracle += a * a / 4;
  }
  if (s4 != ratio(1, 8) || oracle != ratio(1, 8)) bad.push_back("|||f|||^4 = " + format_rational(s4));
  if (hm.mu_st.support_size() != 64) bad.push_back("support " + std::to_string(hm.mu_st.support_size()));
  if (cube_space(z4).points.size() != 64) bad.push_back("cube enumeration disagrees with 64");
  const Observable fs[] = {f, f, f, f};
  for (std::uint64_t n = 4; n <= 128; n += 4)
    if (fourfold_average(z4, fs, 0, n) != ratio(1, 8)) bad.push_back("fourfold at N=" + std::to_string(n));
  if (reference::fourfold_average(z4, fs, 0, 8) != ratio(1, 8)) bad.push_back("naive fourfold at N=8");
  o.pass = bad.empty();
  o.detail = "|||f|||^4 = " + format_rational(s4) + ", support 64, fourfold 1/8 at N = 4..128 step 4" +
             (bad.empty() ? "" : ": " + join(bad));
  return o;
}

// Exhaustive check of (cubic average)^4 <= C S_N(f3, x) over +-1 observables,
// in integer arithmetic. Only the values of f1 on the S-orbit of x, f2 on the
// T-orbit of x and f3 on the G-orbit of x enter; f2 and f3 are enumerated over
// all sign patterns there, and f1 is taken as the sign of its coefficient,
// which maximizes |average| over all f1.
struct SweepResult {
  std::size_t cases = 0;
  std::size_t violations = 0;
  std::string first;
};

SweepResult sweep(const FiniteMPS& sys, const Rational& c, std::uint64_t max_n) {
  SweepResult res;
  const std::size_t n = sys.size();
  const long cp = c.get_num().get_si(), cq = c.get_den().get_si();
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<std::size_t> orbit_s = sys.s_orbit(x, sys.s().cycle_length(x));
    std::vector<std::size_t> orbit_t = sys.t_orbit(x, sys.t().cycle_length(x));
    for (std::uint64_t N = 1; N <= max_n; ++N) {
      // point indices of S^i T^j x
      std::vector<std::vector<std::size_t>> at(N, std::vector<std::size_t>(N));
      for (std::size_t i = 0; i < N; ++i) {
        std::size_t y = x;
        for (std::size_t r = 0; r < i; ++r) y = sys.s()(y);
        for (std::size_t j = 0; j < N; ++j) {
          at[i][j] = y;
          y = sys.t()(y);
        }
      }
      for (std::uint32_t m3 = 0; m3 < (1u << n); ++m3) {
        auto f3 = [&](std::size_t p) -> long { return (m3 >> p) & 1 ? -1 : 1; };
        long long sn = 0;
        for (std::size_t i = 0; i < N; ++i)
          for (std::size_t b = 0; b < N; ++b) {
            long long g = 0;
            for (std::size_t j = 0; j < N; ++j) g += f3(at[i][j]) * f3(at[b][j]);
            sn += g * g;
          }
        for (std::uint32_t m2 = 0; m2 < (1u << orbit_t.size()); ++m2) {
          // f2(T^j x) depends on j mod |orbit_t|
          std::vector<long long> coef(n, 0);
          for (std::size_t i = 0; i < N; ++i) {
            long long row = 0;
            for (std::size_t j = 0; j < N; ++j) row += ((m2 >> (j % orbit_t.size())) & 1 ? -1 : 1) * f3(at[i][j]);
            coef[at[i][0]] += row;
          }
          long long best = 0;
          for (auto p : orbit_s) best += coef[p] < 0 ? -coef[p] : coef[p];
          // (best / N^2)^4 <= (p/q) sn / N^4  <=>  q best^4 <= p sn N^4
          const Integer lhs = Integer(cq) * Integer(static_cast<long>(best)) * Integer(static_cast<long>(best)) * Integer(static_cast<long>(best)) * Integer(static_cast<long>(best));
          const Integer rhs = Integer(cp) * Integer(static_cast<long>(sn)) * Integer(static_cast<long>(N * N)) *
                              Integer(static_cast<long>(N * N));
          ++res.cases;
          if (lhs > rhs && res.violations++ == 0)
            res.first = "x=" + std::to_string(x) + " N=" + std::to_string(N) + " f3 mask " + std::to_string(m3);
        }
      }
    }
  }
  return res;
}

Outcome criterion4(const Config& cfg) {
  Outcome o{true, "", 120};
  std::vector<FiniteMPS> systems;
  for (std::size_t s1 = 0; s1 < 2; ++s1)
    for (std::size_t s2 = 0; s2 < 2; ++s2)
      for (std::size_t t1 = 0; t1 < 2; ++t1)
        for (std::size_t t2 = 0; t2 < 2; ++t2) systems.push_back(rotation_system(2, 2, {s1, s2}, {t1, t2}));
  for (std::size_t s1 = 0; s1 < 2; ++s1)
    for (std::size_t s2 = 0; s2 < 3; ++s2)
      for (std::size_t t1 = 0; t1 < 2; ++t1)
        for (std::size_t t2 = 0; t2 < 3; ++t2) systems.push_back(rotation_system(2, 3, {s1, s2}, {t1, t2}));

  Rational c = 1;
  std::vector<std::string> escalations;
  for (;;) {
    std::size_t cases = 0, violations = 0;
    std::string first;
    for (const auto& sys : systems) {
      const auto r = sweep(sys, c, 8);
      cases += r.cases;
      if (r.violations && first.empty()) first = r.first;
      violations += r.violations;
    }
    std::size_t random_violations = 0;
    for (std::size_t t = 0; t < 200; ++t) {
      std::mt19937_64 rng(cfg.seed + 5000 + t);
      const FiniteMPS sys = random_system(Family::mixed, rng);
      const std::size_t x = rng() % sys.size();
      const std::uint64_t n = 1 + rng() % 16;
      const Observable f1 = random_sign_observable(sys.size(), rng), f2 = random_sign_observable(sys.size(), rng),
                       f3 = random_sign_observable(sys.size(), rng);
      if (!check_bound_average(sys, f1, f2, f3, x, n, c).holds) ++random_violations;
    }
    // the same statement through the library, exhaustively on one small system
    const FiniteMPS probe = rotation_system(2, 2, {1, 0}, {0, 1});
    std::size_t library_cases = 0;
    for (std::uint32_t m = 0; m < (1u << 12); ++m) {
      std::vector<Observable> g;
      for (int k = 0; k < 3; ++k) {
        std::vector<Rational> v(4);
        for (int p = 0; p < 4; ++p) v[p] = (m >> (4 * k + p)) & 1 ? -1 : 1;
        g.emplace_back(std::move(v));
      }
      for (std::size_t x = 0; x < 4; ++x)
        for (std::uint64_t n = 1; n <= 3; ++n) {
          ++library_cases;
          if (!check_bound_average(probe, g[0], g[1], g[2], x, n, c).holds) ++random_violations;
        }
    }
    std::ostringstream d;
    d << "C = " << format_rational(c) << ": " << cases << " sweep cases over " << systems.size()
      << " systems, " << library_cases << " library cases, 200 random trials; violations " << violations << " + " << random_violations;
    if (violations + random_violations == 0) {
      o.detail = d.str() + (escalations.empty() ? "" : " after escalation [" + join(escalations) + "]");
      o.pass = escalations.empty();
      return o;
    }
    escalations.push_back(d.str() + (first.empty() ? "" : " first " + first));
    if (c >= 64) {
      o.pass = false;
      o.detail = join(escalations);
      return o;
    }
    c *= 2;
  }
}

Outcome criterion5(const Config& cfg) {
  Outcome o{true, "", 0};
  std::vector<std::string> bad;
  std::size_t systems = 0, rows = 0;
  for (std::size_t t = 0; systems < 20 && t < 1000; ++t) {
    std::mt19937_64 rng(cfg.seed + 7000 + t);
    const FiniteMPS sys = random_system(t % 2 ? Family::product : Family::ergodic, rng);
    if (!is_ergodic(sys) || !is_free(sys).free || !is_magic(sys).is_magic) continue;
    ++systems;
    const std::size_t x = rng() % sys.size();
    const Observable f1 = random_observable(sys.size(), rng), f2 = random_observable(sys.size(), rng),
                     f3 = random_observable(sys.size(), rng);
    const std::uint64_t p = Integer(lcm(sys.s().order(), sys.t().order())).get_ui();
    std::vector<std::uint64_t> schedule;
    for (std::uint64_t n = 1; n <= 16; ++n) schedule.push_back(n);
    for (std::uint64_t m = p; m <= 64; m += p)
      if (m > 16) schedule.push_back(m);
    const auto rep = decompose_and_converge(sys, f1, f2, f3, x, schedule);
    for (const auto& row : rep.rows) {
      ++rows;
      if (!row.sum_equal) bad.push_back("sum at N=" + std::to_string(row.n));
      if (row.n % p == 0 && std::fabs(to_double(row.track_b)) > row.b_bound + cfg.float_tolerance)
        bad.push_back("track (b) bound at N=" + std::to_string(row.n));
    }
  }
  if (systems < 20) bad.push_back("only " + std::to_string(systems) + " qualifying systems generated");
  o.pass = bad.empty();
  o.detail = std::to_string(systems) + " systems, " + std::to_string(rows) + " rows" + (bad.empty() ? "" : ": " + join(bad));
  return o;
}

Outcome criterion6(const Config& cfg) {
  Outcome o{true, "", 30};
  const TorusSystem sys = *builtin_torus("torus-sqrt23");
  const TrigPoly cs = TrigPoly::cosine(1);
  const TrigPoly three[] = {cs, cs, cs};
  const TrigPoly one[] = {cs};
  const double ref_c = static_cast<double>(fourier_cubic_limit(sys, cs, cs, cs, 0));
  const double ref_s = static_cast<double>(fourier_host_integral(sys, cs, cs, cs, cs));
  std::vector<double> ec, es;
  std::ostringstream d;
  for (int k = 4; k <= 10; ++k) {
    const std::uint64_t n = std::uint64_t{1} << k;
    ec.push_back(std::fabs(torus_average(sys, AverageKind::cubic, three, 0, n) - ref_c));
    es.push_back(std::fabs(torus_average(sys, AverageKind::windowed_sn, one, 0, n) - ref_s));
  }
  const bool within = ec.back() < cfg.torus_tolerance && es.back() < cfg.torus_tolerance;
  std::vector<std::string> rises;
  for (std::size_t k = 1; k < ec.size(); ++k) {
    if (ec[k] >= ec[k - 1]) rises.push_back("cubic 2^" + std::to_string(k + 3) + "->2^" + std::to_string(k + 4));
    if (es[k] >= es[k - 1]) rises.push_back("S_N 2^" + std::to_string(k + 3) + "->2^" + std::to_string(k + 4));
  }
  // diagnostic only: the smallest C with err <= C N^(-1/2) along the schedule
  double envelope = 0;
  for (std::size_t k = 0; k < ec.size(); ++k)
    envelope = std::max({envelope, ec[k] * std::sqrt(std::ldexp(1.0, static_cast<int>(k) + 4)),
                         es[k] * std::sqrt(std::ldexp(1.0, static_cast<int>(k) + 4))});
  char buf[160];
  std::snprintf(buf, sizeof buf, "N=1024: cubic err %.3g, S_N err %.3g (tol %.3g)", ec.back(), es.back(),
                cfg.torus_tolerance);
  d << buf;
  if (!within) d << "; outside tolerance";
  if (!rises.empty()) d << "; error not decreasing at " << join(rises);
  d << "; errors cubic";
  for (double e : ec) {
    std::snprintf(buf, sizeof buf, " %.2e", e);
    d << buf;
  }
  d << ", S_N";
  for (double e : es) {
    std::snprintf(buf, sizeof buf, " %.2e", e);
    d << buf;
  }
  std::snprintf(buf, sizeof buf, "; max err*sqrt(N) %.3g", envelope);
  d << buf;
  o.pass = within && rises.empty();
  o.detail = d.str();
  return o;
}

Outcome criterion7(const Config& cfg) {
  Outcome o{true, "", 0};
  std::vector<std::string> bad;
  for (std::size_t t = 0; t < 20; ++t) {
    std::mt19937_64 rng(cfg.seed + 9000 + t);
    const auto [y, w] = random_product_factors(rng);
    const auto rep = product_cube_identification(y, w);
    if (!rep.ok()) bad.push_back("identification, seed " + std::to_string(cfg.seed + 9000 + t));
  }
  std::size_t wrong_checked = 0;
  for (const auto& name : builtin_system_names()) {
    const FiniteMPS sys = *builtin_system(name);
    const CubeSpace cube = cube_space(sys);
    const ActionSpace act = cube_action(sys, cube);
    const std::uint64_t p = Integer(lcm(sys.s().order(), sys.t().order())).get_ui();
    const auto right = cube_reference(cube, host_measure(sys).mu_st);
    for (std::uint64_t n : {p, 2 * p, 4 * p})
      if (unique_ergodicity_deviation(act, right, n) != 0) bad.push_back(name + " deviation at N=" + std::to_string(n));
    if (sys.size() > 1) {
      const SparseMeasure mu = sys.measure();
      const auto wrong = cube_reference(cube, SparseMeasure::product(SparseMeasure::product(mu, mu),
                                                                     SparseMeasure::product(mu, mu)));
      if (!(unique_ergodicity_deviation(act, wrong, 4 * p) > 0)) bad.push_back(name + " wrong reference not detected");
      ++wrong_checked;
    }
  }
  o.pass = bad.empty();
  o.detail = "20 product identifications, " + std::to_string(builtin_system_names().size()) +
             " finite builtins at period multiples, wrong reference detected on " + std::to_string(wrong_checked) +
             (bad.empty() ? "" : ": " + join(bad));
  return o;
}

Outcome criterion8(const Config& cfg) {
  Outcome o{true, "", 0};
  std::vector<std::string> bad;
  std::size_t comparisons = 0;
  for (std::size_t t = 0; t < 50; ++t) {
    std::mt19937_64 rng(cfg.seed + 11000 + t);
    const FiniteMPS sys = random_system(Family::mixed, rng);
    std::vector<Observable> fs;
    for (int k = 0; k < 4; ++k) fs.push_back(random_observable(sys.size(), rng));
    const std::size_t x = rng() % sys.size();
    for (std::uint64_t n = 1; n <= 8; ++n) {
      if (fourfold_average(sys, fs, x, n) != reference::fourfold_average(sys, fs, x, n))
        bad.push_back("fourfold seed " + std::to_string(cfg.seed + 11000 + t) + " N=" + std::to_string(n));
      if (windowed_sn(sys, fs[0], x, n) != reference::windowed_sn(sys, fs[0], x, n))
        bad.push_back("windowed seed " + std::to_string(cfg.seed + 11000 + t) + " N=" + std::to_string(n));
      comparisons += 2;
    }
  }
  o.pass = bad.empty();
  o.detail = std::to_string(comparisons) + " exact comparisons" + (bad.empty() ? "" : ": " + join(bad));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  CLI::App app{"acceptance criteria"};
  app.add_option("--seed", cfg.seed, "base seed");
  app.add_option("--torus-tolerance", cfg.torus_tolerance, "absolute error allowed at N = 1024");
  app.add_option("--float-tolerance", cfg.float_tolerance, "slack for the track (b) bound");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome(const Config&)>>> criteria = {
      {"exact seminorm identities", criterion1},
      {"magic extension correctness", criterion2},
      {"worked constants on z4-diagonal", criterion3},
      {"cubic-average bound with C = 1", criterion4},
      {"main-theorem decomposition", criterion5},
      {"torus oracle agreement", criterion6},
      {"cube structure", criterion7},
      {"factored vs naive sums", criterion8},
  };
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[k].second(cfg);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (o.budget > 0 && secs > o.budget) {
      o.pass = false;
      o.detail += "; over the " + std::to_string(static_cast<int>(o.budget)) + " s budget";
    }
    all = all && o.pass;
    std::printf("criterion %zu: %s  %s (%.2f s)  %s\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
