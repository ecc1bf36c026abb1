#include "ergocube/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "ergocube/averaging.hpp"
#include "ergocube/cubes.hpp"
#include "ergocube/joinings.hpp"
#include "ergocube/reference_sums.hpp"
#include "ergocube/system_io.hpp"
#include "ergocube/torus.hpp"

namespace ergocube {

bool VerifySummary::ok() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.failures == 0; });
}

namespace {

using Rng = std::mt19937_64;

// A trial returns an empty string on success, otherwise what went wrong.
// Findings go through the second argument.
using Trial = std::function<std::string(Rng&, std::vector<std::string>&)>;

struct Suite {
  std::string name;
  Family default_family;
  std::function<Trial(const VerifyConfig&, Family)> make;
};

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Rational lcm_of_periods(const FiniteMPS& sys) {
  Integer l = lcm(sys.s().order(), sys.t().order());
  return Rational(l);
}

std::uint64_t period_multiple(const FiniteMPS& sys) { return lcm_of_periods(sys).get_num().get_ui(); }

std::string describe(const FiniteMPS& sys) { return system_to_json(sys).dump(); }

Trial core_trial(const VerifyConfig& cfg, Family fam) {
  return [&cfg, fam](Rng& rng, std::vector<std::string>&) -> std::string {
    const FiniteMPS sys = random_system(fam, rng, cfg.limits);
    const Partition is = invariant_partition(sys, {kS}), it = invariant_partition(sys, {kT});
    const Partition w = common_refinement(is, it);
    if (!w.refines(is) || !w.refines(it)) return "common refinement does not refine its inputs";
    const SparseMeasure mu_s = rel_indep_square(sys);
    for (std::size_t c = 0; c < 2; ++c)
      if (marginal(mu_s, c).entries() != sys.measure().entries()) return "mu_S marginal differs from mu";
    const Observable f = random_observable(sys.size(), rng);
    for (const auto& v : f.values())
      if (parse_rational(format_rational(v)) != v) return "rational text round trip failed";
    if (parse_observable(format_observable(f)) != f) return "observable text round trip failed";
    return "";
  };
}

Trial finite_trial(const VerifyConfig& cfg, Family fam) {
  return [&cfg, fam](Rng& rng, std::vector<std::string>&) -> std::string {
    const FiniteMPS sys = random_system(fam, rng, cfg.limits);
    for (GroupElement g : {kS, kT}) {
      const Partition p = invariant_partition(sys, {g});
      for (std::size_t x = 0; x < sys.size(); ++x)
        if (p.block_of(sys.apply(g, x)) != p.block_of(x)) return "invariant partition not invariant";
    }
    const auto comps = ergodic_decomposition(sys);
    Rational total;
    for (const auto& c : comps) {
      total += c.mass;
      if (!is_ergodic(restrict_to(sys, c.support))) return "ergodic component is not ergodic";
    }
    if (total != 1) return "component masses do not sum to 1";
    if (system_from_json(nlohmann::json::parse(system_to_json(sys).dump())) != sys)
      return "JSON round trip changed the system";
    const auto fr = is_free(sys);
    if (fr.witness && sys.apply(*fr.witness, 0) != 0) return "freeness witness does not fix point 0";
    return "";
  };
}

Trial seminorm_trial(const VerifyConfig& cfg, Family fam) {
  return [&cfg, fam](Rng& rng, std::vector<std::string>&) -> std::string {
    const FiniteMPS sys = random_system(fam, rng, cfg.limits);
    const HostMeasure hm = host_measure(sys);
    std::vector<Observable> fs;
    std::vector<Rational> norms;
    for (int k = 0; k < 4; ++k) {
      fs.push_back(random_observable(sys.size(), rng));
      norms.push_back(host_seminorm(hm, fs.back()).fourth_power);
      if (norms.back() < 0) return "negative seminorm fourth power on " + describe(sys);
      if (norms.back() != reference::seminorm_fourth_power(sys, fs.back()))
        return "seminorm disagrees with the conditional-expectation oracle on " + describe(sys);
    }
    const Rational integral = integrate(hm.mu_st, fs);
    const Rational sq = integral * integral;
    if (sq * sq > norms[0] * norms[1] * norms[2] * norms[3]) return "quartic Cauchy-Schwarz violated on " + describe(sys);
    const Rational c = ratio(static_cast<long>(pick(rng, 1, 7)) - 4, static_cast<long>(pick(rng, 1, 3)));
    const Rational c2 = c * c;
    if (host_seminorm(hm, fs[0].scaled(c)).fourth_power != c2 * c2 * norms[0]) return "homogeneity violated";
    if (host_seminorm(hm, fs[0] + fs[1]).value > host_seminorm(hm, fs[0]).value + host_seminorm(hm, fs[1]).value + 1e-12)
      return "triangle inequality violated on " + describe(sys);
    const MagicReport mr = is_magic(hm);
    if (mr.is_magic && !measurability_check(hm)) return "magic system fails the W-measurability identity";
    return "";
  };
}

Trial extension_trial(const VerifyConfig& cfg, Family fam) {
  return [&cfg, fam](Rng& rng, std::vector<std::string>&) -> std::string {
    const FiniteMPS sys = random_system(fam, rng, cfg.limits);
    if (!is_ergodic(sys) || ((sys.s().is_identity() || sys.t().is_identity()) && sys.size() > 1))
      return "";  // outside the precondition; the default family never lands here
    const MagicExtension ext = magic_extension(sys);
    std::string bad;
    if (!is_magic(ext.system).is_magic) bad += " magic";
    if (!is_ergodic(ext.system)) bad += " ergodic";
    if (!is_free(ext.system).free) bad += " free";
    if (!bad.empty()) return "extension fails:" + bad + " for " + describe(sys);
    std::vector<Rational> pushed(sys.size());
    for (std::size_t k = 0; k < ext.system.size(); ++k) pushed[ext.factor_map[k]] += ext.system.weight(k);
    for (std::size_t k = 0; k < ext.system.size(); ++k) {
      const auto x = ext.factor_map[k];
      if (ext.factor_map[ext.system.s()(k)] != sys.s()(x) || ext.factor_map[ext.system.t()(k)] != sys.t()(x))
        return "factor map does not intertwine the actions";
    }
    if (pushed != sys.weights()) return "factor map does not push the measure forward onto mu";
    if (system_from_json(system_to_json(ext.system)) != ext.system) return "extension JSON round trip failed";
    return "";
  };
}

Trial averaging_trial(const VerifyConfig& cfg, Family fam) {
  return [&cfg, fam](Rng& rng, std::vector<std::string>&) -> std::string {
    const FiniteMPS sys = random_system(fam, rng, cfg.limits);
    const std::size_t x = pick(rng, 0, sys.size() - 1);
    std::vector<Observable> fs;
    for (int k = 0; k < 4; ++k) fs.push_back(random_observable(sys.size(), rng));
    const std::uint64_t n = pick(rng, 1, 8);
    if (fourfold_average(sys, fs, x, n) != reference::fourfold_average(sys, fs, x, n))
      return "fourfold factored != naive at N=" + std::to_string(n);
    if (windowed_sn(sys, fs[0], x, n) != reference::windowed_sn(sys, fs[0], x, n))
      return "windowed_sn factored != naive at N=" + std::to_string(n);
    if (cubic_average(sys, fs[0], fs[1], fs[2], x, n) != reference::cubic_average(sys, fs[0], fs[1], fs[2], x, n))
      return "cubic factored != naive at N=" + std::to_string(n);
    if (is_ergodic(sys)) {
      const std::uint64_t p = period_multiple(sys);
      const HostMeasure hm = host_measure(sys);
      if (windowed_sn(sys, fs[0], x, p) != host_seminorm(hm, fs[0]).fourth_power ||
          windowed_sn(sys, fs[0], x, 2 * p) != windowed_sn(sys, fs[0], x, p))
        return "windowed_sn at a period multiple differs from the seminorm on " + describe(sys);
      if (fourfold_average(sys, fs, x, p) != integrate(hm.mu_st, fs))
        return "fourfold average at a period multiple differs from the Host integral on " + describe(sys);
      const GroupElement gens[] = {kS, kT};
      const Rational mean = integrate(sys.measure(), std::span<const Observable>(fs.data(), 1));
      if (birkhoff_average(sys, fs[0], x, gens, p) != mean) return "full-period Birkhoff average differs from the mean";
    }
    return "";
  };
}

Trial bound_trial(const VerifyConfig& cfg, Family fam) {
  // The first trial is f = 1 everywhere, where lhs = rhs / C = 1.
  auto first = std::make_shared<bool>(true);
  return [&cfg, fam, first](Rng& rng, std::vector<std::string>&) -> std::string {
    const FiniteMPS sys = random_system(fam, rng, cfg.limits);
    const std::size_t x = pick(rng, 0, sys.size() - 1);
    const std::uint64_t n = pick(rng, 1, 16);
    std::vector<Observable> fs;
    for (int k = 0; k < 3; ++k)
      fs.push_back(*first ? Observable::constant(sys.size(), 1) : random_sign_observable(sys.size(), rng));
    *first = false;
    const BoundCheck bc = check_bound_average(sys, fs[0], fs[1], fs[2], x, n, cfg.bound_constant);
    if (!bc.holds)
      return "bound fails at N=" + std::to_string(n) + ": lhs " + format_rational(bc.lhs) + " > rhs " +
             format_rational(bc.rhs) + " (C = " + format_rational(cfg.bound_constant) + ")";
    return "";
  };
}

Trial telescoping_trial(const VerifyConfig&, Family) {
  return [](Rng& rng, std::vector<std::string>&) -> std::string {
    const std::size_t len = pick(rng, 1, 6);
    std::vector<Rational> a(len), b(len);
    for (std::size_t k = 0; k < len; ++k) {
      a[k] = ratio(static_cast<long>(pick(rng, 0, 12)) - 6, 4);
      b[k] = ratio(static_cast<long>(pick(rng, 0, 8)) - 4, 4);
    }
    const TelescopingCheck tc = check_telescoping(a, b);
    if (!tc.identity_holds) return "telescoping identity fails";
    if (!tc.bound_holds) return "telescoping bound fails";
    return "";
  };
}

Trial decomposition_trial(const VerifyConfig& cfg, Family fam) {
  return [&cfg, fam](Rng& rng, std::vector<std::string>&) -> std::string {
    const FiniteMPS sys = random_system(fam, rng, cfg.limits);
    if (!is_ergodic(sys) || !is_free(sys).free || !is_magic(sys).is_magic) return "";
    const std::size_t x = pick(rng, 0, sys.size() - 1);
    const Observable f1 = random_observable(sys.size(), rng), f2 = random_observable(sys.size(), rng),
                     f3 = random_observable(sys.size(), rng);
    const std::uint64_t p = period_multiple(sys);
    std::vector<std::uint64_t> schedule;
    for (std::uint64_t n = 1; n <= 12; ++n) schedule.push_back(n);
    if (p > 12) schedule.push_back(p);
    const auto rep = decompose_and_converge(sys, f1, f2, f3, x, schedule);
    for (const auto& row : rep.rows) {
      if (!row.sum_equal) return "track sums differ from the direct average at N=" + std::to_string(row.n);
      if (row.n % p == 0 && std::fabs(to_double(row.track_b)) > row.b_bound + 1e-9)
        return "track (b) exceeds 2 S_N^(1/4) at N=" + std::to_string(row.n);
    }
    return "";
  };
}

Trial cubes_trial(const VerifyConfig& cfg, Family fam) {
  return [&cfg, fam](Rng& rng, std::vector<std::string>& findings) -> std::string {
    const FiniteMPS sys = random_system(fam, rng, cfg.limits);
    const CubeSpace cube = cube_space(sys);
    const ActionSpace act = cube_action(sys, cube);  // throws if Q is not invariant
    (void)act;
    if (is_ergodic(sys)) {
      const std::uint64_t p = period_multiple(sys);
      if (unique_ergodicity_deviation(system_action(sys), sys.weights(), p) != 0)
        return "system box average at a period multiple is not the invariant measure";
      if (is_free(sys).free && is_magic(sys).is_magic) {
        const auto finding = compare_cube_support(sys);
        if (!finding.equal)
          findings.push_back("Q_{S,T} != supp(mu_{S,T}) (" + std::to_string(finding.cube_points) + " vs " +
                             std::to_string(finding.support_points) + " points) on " + describe(sys));
        else if (unique_ergodicity_deviation(act, cube_reference(cube, host_measure(sys).mu_st), p) != 0)
          return "cube box average at a period multiple is not mu_{S,T}";
      }
    }
    const auto [y, w] = random_product_factors(rng, cfg.limits);
    const auto rep = product_cube_identification(y, w);
    if (!rep.ok()) return "product cube identification fails for |Y|=" + std::to_string(y.size()) +
                          ", |W|=" + std::to_string(w.size());
    return "";
  };
}

TrigPoly random_trig(Rng& rng) {
  std::uniform_real_distribution<double> coef(-1, 1);
  std::map<std::int64_t, Complex> half;
  const std::size_t terms = pick(rng, 1, 5);
  for (std::size_t k = 0; k < terms; ++k) {
    const auto n = static_cast<std::int64_t>(pick(rng, 0, 4));
    half[n] = n == 0 ? Complex(coef(rng)) : Complex(coef(rng), coef(rng));
  }
  return TrigPoly::from_half(half);
}

Trial torus_trial(const VerifyConfig&, Family) {
  return [](Rng& rng, std::vector<std::string>&) -> std::string {
    const TorusSystem sys = *builtin_torus("torus-sqrt23");
    TrigPoly f[4];
    long double norm4[4];
    for (int k = 0; k < 4; ++k) {
      f[k] = random_trig(rng);
      norm4[k] = fourier_host_integral(sys, f[k], f[k], f[k], f[k]);
      if (norm4[k] < -1e-12L) return "negative Fourier seminorm";
    }
    const long double v = fourier_host_integral(sys, f[0], f[1], f[2], f[3]);
    if (v * v * v * v > norm4[0] * norm4[1] * norm4[2] * norm4[3] + 1e-12L) return "Fourier quartic Cauchy-Schwarz fails";
    return "";
  };
}

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = {
      {"core", Family::mixed, core_trial},
      {"finite", Family::mixed, finite_trial},
      {"seminorm", Family::mixed, seminorm_trial},
      {"extension", Family::ergodic, extension_trial},
      {"averaging", Family::mixed, averaging_trial},
      {"bound", Family::mixed, bound_trial},
      {"telescoping", Family::mixed, telescoping_trial},
      {"decomposition", Family::product, decomposition_trial},
      {"cubes", Family::mixed, cubes_trial},
      {"torus", Family::mixed, torus_trial},
  };
  return all;
}

}  // namespace

std::vector<std::string> verify_suite_names() {
  std::vector<std::string> out;
  for (const auto& s : suites()) out.push_back(s.name);
  return out;
}

VerifySummary run_verify(const VerifyConfig& config) {
  VerifySummary summary;
  if (config.trials == 0) summary.warnings.push_back("zero trials: every suite passes vacuously");
  const auto known = verify_suite_names();
  for (const auto& name : config.suites)
    if (std::ranges::find(known, name) == known.end())
      throw ValidationError("unknown suite '" + name + "'");
  for (const auto& suite : suites()) {
    if (!config.suites.empty() && std::ranges::find(config.suites, suite.name) == config.suites.end()) continue;
    SuiteResult res;
    res.suite = suite.name;
    const Trial trial = suite.make(config, config.family.value_or(suite.default_family));
    for (std::size_t t = 0; t < config.trials; ++t) {
      const std::uint64_t seed = config.seed + t;
      Rng rng(seed);
      std::string err;
      try {
        err = trial(rng, res.findings);
      } catch (const std::exception& e) {
        err = std::string("exception: ") + e.what();
      }
      ++res.trials;
      if (!err.empty()) {
        ++res.failures;
        res.notes.push_back("seed " + std::to_string(seed) + ": " + err);
      }
    }
    summary.suites.push_back(std::move(res));
  }
  return summary;
}

std::string format_summary(const VerifySummary& summary) {
  std::ostringstream os;
  for (const auto& w : summary.warnings) os << "warning: " << w << '\n';
  for (const auto& s : summary.suites) {
    os << (s.failures ? "FAIL " : "ok   ") << s.suite << "  trials=" << s.trials << " failures=" << s.failures
       << " findings=" << s.findings.size() << '\n';
    for (const auto& n : s.notes) os << "    " << n << '\n';
    for (std::size_t k = 0; k < s.findings.size() && k < 5; ++k) os << "    finding: " << s.findings[k] << '\n';
  }
  os << (summary.ok() ? "all suites passed" : "property violations found") << '\n';
  return os.str();
}

}  // namespace ergocube
