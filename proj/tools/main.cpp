#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ergocube/averaging.hpp"
#include "ergocube/cubes.hpp"
#include "ergocube/generate.hpp"
#include "ergocube/joinings.hpp"
#include "ergocube/system_io.hpp"
#include "ergocube/torus.hpp"
#include "ergocube/verify.hpp"

using namespace ergocube;
using nlohmann::json;

namespace {

constexpr int kConfigError = 1;
constexpr int kViolation = 2;

struct Common {
  std::string system_path;
  std::string builtin;
  std::optional<std::uint64_t> seed;
  std::string family = "mixed";
  std::string out;
  std::string format = "csv";
  std::string schedule;
  std::size_t block_size = 64;
  unsigned threads = 1;
  std::optional<double> tolerance;
};

void add_source(CLI::App* cmd, Common& c) {
  cmd->add_option("--system", c.system_path, "finite system JSON file");
  cmd->add_option("--builtin", c.builtin, "builtin system name");
  cmd->add_option("--seed", c.seed, "generator seed (with --family)");
  cmd->add_option("--family", c.family, "generator family: rotation, ergodic, product, union, reweighted, mixed");
}

void add_output(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "output path (default stdout)");
  cmd->add_option("--format", c.format, "csv or text")->check(CLI::IsMember({"csv", "text"}));
}

struct Source {
  std::optional<FiniteMPS> finite;
  std::optional<TorusSystem> torus;
  std::string name;
};

Source load(const Common& c) {
  const int given = !c.system_path.empty() + !c.builtin.empty() + c.seed.has_value();
  if (given != 1) throw ValidationError("give exactly one of --system, --builtin, --seed");
  Source s;
  if (!c.system_path.empty()) {
    s.finite = read_system(c.system_path);
    s.name = c.system_path;
  } else if (!c.builtin.empty()) {
    s.name = c.builtin;
    if (auto f = builtin_system(c.builtin)) s.finite = *f;
    else if (auto t = builtin_torus(c.builtin)) s.torus = *t;
    else throw ValidationError("unknown builtin '" + c.builtin + "'");
  } else {
    auto fam = parse_family(c.family);
    if (!fam) throw ValidationError("unknown family '" + c.family + "'");
    std::mt19937_64 rng(*c.seed);
    s.finite = random_system(*fam, rng);
    s.name = "seed " + std::to_string(*c.seed) + " family " + c.family;
  }
  return s;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) std::cout << text;
  else write_text_atomically(c.out, text);
}

json partition_json(const Partition& p) { return p.labels(); }

std::vector<Observable> parse_observables(const std::vector<std::string>& texts, std::size_t n) {
  std::vector<Observable> out;
  for (const auto& t : texts) {
    Observable f = parse_observable(t);
    if (f.size() != n)
      throw ValidationError("observable '" + t + "' has " + std::to_string(f.size()) + " values, system has " +
                            std::to_string(n) + " points");
    out.push_back(std::move(f));
  }
  return out;
}

int cmd_analyze(const Common& c, const std::vector<std::string>& obs) {
  const Source src = load(c);
  if (!src.finite) throw ValidationError("analyze needs a finite system");
  const FiniteMPS& sys = *src.finite;
  const auto fs = parse_observables(obs, sys.size());
  const HostMeasure hm = host_measure(sys);
  const MagicReport mr = is_magic(hm);
  const FreenessResult fr = is_free(sys);
  json doc;
  doc["system"] = src.name;
  doc["points"] = sys.size();
  doc["I_S"] = partition_json(invariant_partition(sys, {kS}));
  doc["I_T"] = partition_json(invariant_partition(sys, {kT}));
  doc["W"] = partition_json(mr.w);
  doc["ergodic"] = is_ergodic(sys);
  doc["free"] = fr.free;
  doc["freeness_witness"] = fr.witness ? json(format_group_element(*fr.witness)) : json(nullptr);
  doc["magic"] = mr.is_magic;
  doc["magic_failure"] = describe(mr.failure);
  doc["counterexample"] = mr.counterexample ? json(format_observable(*mr.counterexample)) : json(nullptr);
  doc["seminorm_kernel_dim"] = mr.seminorm_kernel_dim;
  doc["w_complement_dim"] = mr.w_complement_dim;
  doc["host_support_size"] = hm.mu_st.support_size();
  json norms = json::array();
  for (const auto& f : fs)
    norms.push_back({{"observable", format_observable(f)},
                     {"fourth_power", format_rational(host_seminorm(hm, f).fourth_power)}});
  doc["seminorms"] = norms;
  if (c.format == "text") {
    std::ostringstream os;
    for (auto it = doc.begin(); it != doc.end(); ++it) os << it.key() << ": " << it.value().dump() << '\n';
    emit(c, os.str());
  } else {
    emit(c, doc.dump(2) + "\n");
  }
  return 0;
}

int cmd_average(const Common& c, const std::string& kind_name, const std::vector<std::string>& obs,
                const std::vector<std::string>& trig, const std::string& x_text) {
  const Source src = load(c);
  const auto kind = parse_average_kind(kind_name);
  if (!kind) throw ValidationError("unknown kind '" + kind_name + "'");
  const auto schedule = parse_schedule(c.schedule.empty() ? "1,2,4,8,16" : c.schedule);
  ConvergenceReport report;
  if (src.torus) {
    if (!obs.empty()) throw ValidationError("torus systems take --trig observables");
    std::vector<TrigPoly> fs;
    for (const auto& t : trig) fs.push_back(parse_trig_poly(t));
    if (fs.size() == 1 && observable_count(*kind) > 1) fs.assign(observable_count(*kind), fs[0]);
    if (fs.size() != observable_count(*kind))
      throw ValidationError(average_kind_name(*kind) + " needs " + std::to_string(observable_count(*kind)) +
                            " --trig observables");
    long double x = x_text.empty() ? 0 : std::stold(x_text);
    report = torus_report(*src.torus, *kind, fs, x, schedule, TorusOptions{c.block_size, c.threads});
  } else {
    if (!trig.empty()) throw ValidationError("finite systems take --observable values");
    AverageSpec spec;
    spec.kind = *kind;
    spec.observables = parse_observables(obs, src.finite->size());
    if (spec.observables.size() == 1 && observable_count(*kind) > 1)
      spec.observables.assign(observable_count(*kind), spec.observables[0]);
    spec.start = x_text.empty() ? 0 : std::stoul(x_text);
    spec.schedule = schedule;
    report = average_report(*src.finite, spec, src.name);
  }
  emit(c, c.format == "csv" ? report.to_csv() : report.to_text());
  if (c.tolerance && !report.rows.empty() && report.rows.back().abs_error &&
      report.rows.back().abs_error->to_double() > *c.tolerance) {
    std::cerr << "final abs_error " << report.rows.back().abs_error->str() << " exceeds tolerance " << *c.tolerance
              << '\n';
    return kViolation;
  }
  return 0;
}

int cmd_extend(const Common& c) {
  const Source src = load(c);
  if (!src.finite) throw ValidationError("extend needs a finite system");
  const MagicExtension ext = magic_extension(*src.finite);
  json doc = system_to_json(ext.system);
  doc["factor_map"] = ext.factor_map;
  doc["points"] = ext.points;
  std::ostringstream rep;
  rep << "extension of " << src.name << ": " << ext.system.size() << " points, " << ext.components.size()
      << " components under <S*, T*>\n";
  for (std::size_t k = 0; k < ext.components.size(); ++k) {
    const auto& comp = ext.components[k];
    rep << (k == ext.selected ? "* " : "  ") << "component " << k << ": mass " << format_rational(comp.mass)
        << ", " << comp.support.size() << " points, free " << (comp.freeness.free ? "yes" : "no");
    if (comp.magic) rep << ", magic " << (*comp.magic ? "yes" : "no");
    rep << '\n';
  }
  const bool magic = is_magic(ext.system).is_magic, ergodic = is_ergodic(ext.system),
             free = is_free(ext.system).free;
  rep << "selected: magic " << magic << ", ergodic " << ergodic << ", free " << free << '\n';
  if (c.out.empty()) {
    std::cout << doc.dump() << '\n';
    std::cerr << rep.str();
  } else {
    write_text_atomically(c.out, doc.dump(2) + "\n");
    std::cout << rep.str();
  }
  return magic && ergodic && free ? 0 : kViolation;
}

int cmd_cube(const Common& c, const std::string& identify) {
  if (!identify.empty()) {
    const auto comma = identify.find(',');
    if (comma == std::string::npos) throw ValidationError("--identify expects A,B");
    const std::size_t a = std::stoul(identify.substr(0, comma)), b = std::stoul(identify.substr(comma + 1));
    if (a == 0 || b == 0) throw ValidationError("--identify sides must be >= 1");
    const auto y = rotation_system(a, 1, {a > 1 ? 1 : 0, 0}, {0, 0});
    const auto w = rotation_system(b, 1, {0, 0}, {b > 1 ? 1 : 0, 0});
    const auto rep = product_cube_identification(y, w);
    std::ostringstream os;
    os << "cube points: " << rep.cube_points << "\nshape: " << rep.shape_ok << "\nbijective: " << rep.bijective
       << "\nconjugates: " << rep.conjugates << "\ngroup matches: " << rep.group_matches
       << "\npushforward: " << rep.pushforward_ok << '\n';
    emit(c, os.str());
    return rep.ok() ? 0 : kViolation;
  }
  const Source src = load(c);
  if (!src.finite) throw ValidationError("cube needs a finite system");
  const FiniteMPS& sys = *src.finite;
  const CubeSpace cube = cube_space(sys);
  const ActionSpace act = cube_action(sys, cube);
  const auto finding = compare_cube_support(sys);
  std::cerr << "cube points: " << cube.points.size() << ", supp(mu_ST): " << finding.support_points
            << (finding.equal ? " (equal)" : " (differ)") << '\n';
  std::vector<std::uint64_t> schedule;
  if (c.schedule.empty()) {
    const Integer p = lcm(sys.s().order(), sys.t().order());
    schedule = {1, p.get_ui(), 4 * p.get_ui()};
    std::sort(schedule.begin(), schedule.end());
    schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());
  } else {
    schedule = parse_schedule(c.schedule);
  }
  const auto ref = cube_reference(cube, host_measure(sys).mu_st);
  const auto report = empirical_unique_ergodicity(act, ref, schedule, src.name);
  emit(c, c.format == "csv" ? report.to_csv() : report.to_text());
  return 0;
}

int cmd_verify(const Common& c, std::size_t trials, const std::string& constant,
               const std::vector<std::string>& suites) {
  VerifyConfig cfg;
  cfg.seed = c.seed.value_or(1);
  cfg.trials = trials;
  cfg.bound_constant = parse_rational(constant);
  cfg.suites = suites;
  if (c.family != "mixed") {
    auto fam = parse_family(c.family);
    if (!fam) throw ValidationError("unknown family '" + c.family + "'");
    cfg.family = *fam;
  }
  const auto summary = run_verify(cfg);
  emit(c, format_summary(summary));
  return summary.ok() ? 0 : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergocube: Host measures, magic extensions, cubes and cubic averages"};
  app.require_subcommand(1);
  Common common;

  auto* analyze = app.add_subcommand("analyze", "partitions, ergodicity, freeness, magic verdict, seminorms");
  std::vector<std::string> observables, trig;
  add_source(analyze, common);
  add_output(analyze, common);
  analyze->add_option("--observable", observables, "comma separated rationals (repeatable)");

  auto* average = app.add_subcommand("average", "run an average along an N schedule");
  std::string kind = "cubic", x_text;
  add_source(average, common);
  add_output(average, common);
  average->add_option("--kind", kind, "cubic, fourfold, windowed, birkhoff1, birkhoff2");
  average->add_option("--observable", observables, "finite observable (repeatable; one is reused for all slots)");
  average->add_option("--trig", trig, "torus observable [[freq, re, im], ...] (repeatable)")->allow_extra_args(false);
  average->add_option("--x", x_text, "start point: index (finite) or real (torus)");
  average->add_option("--schedule", common.schedule, "N schedule: 4,8,16 or pow2:a..b");
  average->add_option("--block-size", common.block_size, "rows per partial sum (torus)");
  average->add_option("--threads", common.threads, "worker threads (torus)");
  average->add_option("--tolerance", common.tolerance, "exit 2 if the final abs_error exceeds this");

  auto* extend = app.add_subcommand("extend", "free ergodic magic extension");
  add_source(extend, common);
  extend->add_option("--out", common.out, "write the extension system here");

  auto* cube = app.add_subcommand("cube", "cube space and empirical unique ergodicity");
  std::string identify;
  add_source(cube, common);
  add_output(cube, common);
  cube->add_option("--schedule", common.schedule, "N schedule");
  cube->add_option("--identify", identify, "A,B: check the product identification for Z_A x Z_B");

  auto* verify = app.add_subcommand("verify", "run the property suites");
  std::size_t trials = 100;
  std::string constant = "1";
  std::vector<std::string> suites;
  verify->add_option("--seed", common.seed, "base seed");
  verify->add_option("--trials", trials, "trials per suite");
  verify->add_option("--bound-constant", constant, "C in the cubic-average bound");
  verify->add_option("--family", common.family, "override each suite's family");
  verify->add_option("--suite", suites, "run only these suites (repeatable)");
  verify->add_option("--out", common.out, "summary path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*analyze) return cmd_analyze(common, observables);
    if (*average) return cmd_average(common, kind, observables, trig, x_text);
    if (*extend) return cmd_extend(common);
    if (*cube) return cmd_cube(common, identify);
    if (*verify) return cmd_verify(common, trials, constant, suites);
  } catch (const ConstructionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}
