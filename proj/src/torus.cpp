#include "ergocube/torus.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace ergocube {

TrigPoly TrigPoly::from_half(const std::map<std::int64_t, Complex>& half) {
  TrigPoly p;
  for (const auto& [n, c] : half) {
    if (n < 0) throw ValidationError("trig poly: give the n >= 0 half only (got frequency " + std::to_string(n) + ")");
    if (n == 0 && c.imag() != 0) throw ValidationError("trig poly: c(0) must be real");
    if (c == Complex(0)) continue;
    p.coeffs_[n] = c;
    if (n > 0) p.coeffs_[-n] = std::conj(c);
  }
  return p;
}

TrigPoly TrigPoly::constant(long double c) { return from_half({{0, Complex(c)}}); }

TrigPoly TrigPoly::cosine(std::int64_t k) {
  if (k == 0) return constant(1);
  return from_half({{k < 0 ? -k : k, Complex(0.5L)}});
}

Complex TrigPoly::coefficient(std::int64_t n) const {
  auto it = coeffs_.find(n);
  return it == coeffs_.end() ? Complex(0) : it->second;
}

long double TrigPoly::evaluate(long double x) const {
  long double sum = 0;
  for (const auto& [n, c] : coeffs_) {
    if (n < 0) continue;
    if (n == 0) {
      sum += c.real();
      continue;
    }
    const long double t = 2 * std::numbers::pi_v<long double> * std::fmod(n * x, 1.0L);
    sum += 2 * (c.real() * std::cos(t) - c.imag() * std::sin(t));
  }
  return sum;
}

long double TrigPoly::sup_bound() const {
  long double s = 0;
  for (const auto& [n, c] : coeffs_) s += std::abs(c);
  return s;
}

TrigPoly parse_trig_poly(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("trig poly: ") + e.what());
  }
  if (!doc.is_array()) throw ValidationError("trig poly: expected [[freq, re, im], ...]");
  std::map<std::int64_t, Complex> half;
  for (const auto& term : doc) {
    if (!term.is_array() || term.size() != 3 || !term[0].is_number_integer() || !term[1].is_number() ||
        !term[2].is_number())
      throw ValidationError("trig poly: each term must be [freq, re, im]");
    const auto n = term[0].get<std::int64_t>();
    if (half.contains(n)) throw ValidationError("trig poly: repeated frequency " + std::to_string(n));
    half[n] = Complex(term[1].get<double>(), term[2].get<double>());
  }
  return TrigPoly::from_half(half);
}

std::string format_trig_poly(const TrigPoly& f) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& [n, c] : f.coefficients())
    if (n >= 0) doc.push_back({n, static_cast<double>(c.real()), static_cast<double>(c.imag())});
  return doc.dump();
}

std::optional<TorusSystem> builtin_torus(std::string_view name) {
  if (name == "torus-sqrt23")
    return TorusSystem{std::sqrt(2.0L) - 1, std::sqrt(3.0L) - 1, true, "torus-sqrt23"};
  return std::nullopt;
}

namespace {

void require_irrational(const TorusSystem& sys) {
  if (!sys.irrational)
    throw UnsupportedRegimeError("closed forms need 1, alpha, beta rationally independent; " + sys.name +
                                 " is not declared so");
}

}  // namespace

long double fourier_host_integral(const TorusSystem& sys, const TrigPoly& f0, const TrigPoly& f1,
                                  const TrigPoly& f2, const TrigPoly& f3) {
  require_irrational(sys);
  Complex sum = 0;
  for (const auto& [n, c0] : f0.coefficients()) sum += c0 * f1.coefficient(-n) * f2.coefficient(-n) * f3.coefficient(n);
  return sum.real();
}

long double fourier_cubic_limit(const TorusSystem& sys, const TrigPoly& f1, const TrigPoly& f2,
                                const TrigPoly& f3, long double x) {
  require_irrational(sys);
  Complex sum = 0;
  for (const auto& [n, c1] : f1.coefficients()) {
    const long double t = 2 * std::numbers::pi_v<long double> * std::fmod(n * x, 1.0L);
    sum += c1 * f2.coefficient(n) * f3.coefficient(-n) * Complex(std::cos(t), std::sin(t));
  }
  return sum.real();
}

namespace {

struct Kahan {
  double sum = 0, comp = 0;
  void add(double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

// f(x + i alpha + j beta) for i < rows, j < cols, row-major.
class Grid {
 public:
  Grid(const TorusSystem& sys, const TrigPoly& f, long double x, std::size_t rows, std::size_t cols)
      : cols_(cols), v_(rows * cols) {
    for (std::size_t i = 0; i < rows; ++i) {
      const long double xi = std::fmod(x + std::fmod(static_cast<long double>(i) * sys.alpha, 1.0L), 1.0L);
      for (std::size_t j = 0; j < cols; ++j) {
        const long double phase = std::fmod(xi + std::fmod(static_cast<long double>(j) * sys.beta, 1.0L), 1.0L);
        v_[i * cols + j] = static_cast<double>(f.evaluate(phase));
      }
    }
  }
  const double* row(std::size_t i) const { return v_.data() + i * cols_; }

 private:
  std::size_t cols_;
  std::vector<double> v_;
};

double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < n; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}

// Runs row_sum(i) for every row, Kahan-summed within fixed blocks of rows,
// then merges the block sums in block order.
double blocked_sum(std::size_t rows, const TorusOptions& opts, const std::function<double(std::size_t)>& row_sum) {
  const std::size_t bs = opts.block_size ? opts.block_size : 1;
  const std::size_t blocks = (rows + bs - 1) / bs;
  std::vector<double> partial(blocks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t b; (b = next.fetch_add(1)) < blocks;) {
      Kahan k;
      for (std::size_t i = b * bs; i < std::min(rows, (b + 1) * bs); ++i) k.add(row_sum(i));
      partial[b] = k.sum;
    }
  };
  const unsigned nt = std::max(1u, opts.threads);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  Kahan total;
  for (double p : partial) total.add(p);
  return total.sum;
}

const Grid& shared_grid(std::vector<std::pair<const TrigPoly*, Grid>>& cache, const TorusSystem& sys,
                        const TrigPoly& f, long double x, std::size_t side) {
  for (auto& [p, g] : cache)
    if (*p == f) return g;
  cache.emplace_back(&f, Grid(sys, f, x, side, side));
  return cache.back().second;
}

}  // namespace

double torus_average(const TorusSystem& sys, AverageKind kind, std::span<const TrigPoly> fs, long double x,
                     std::uint64_t n64, const TorusOptions& opts) {
  if (n64 == 0) throw PreconditionError("N must be >= 1");
  if (fs.size() != observable_count(kind))
    throw ValidationError(average_kind_name(kind) + " needs " + std::to_string(observable_count(kind)) +
                          " observables");
  if (n64 > (1u << 14)) throw PreconditionError("torus_average: N above 2^14 is not supported");
  const std::size_t n = n64;
  const double nd = static_cast<double>(n);
  std::vector<std::pair<const TrigPoly*, Grid>> cache;
  cache.reserve(4);

  switch (kind) {
    case AverageKind::birkhoff_1d: {
      const Grid g(sys, fs[0], x, n, 1);
      return blocked_sum(n, opts, [&](std::size_t i) { return g.row(i)[0]; }) / nd;
    }
    case AverageKind::birkhoff_2d: {
      const Grid g(sys, fs[0], x, n, n);
      const std::vector<double> ones(n, 1.0);
      return blocked_sum(n, opts, [&](std::size_t i) { return dot(g.row(i), ones.data(), n); }) /
             (nd * nd);
    }
    case AverageKind::cubic: {
      const Grid a(sys, fs[0], x, n, 1);  // f1(x + i alpha)
      const TorusSystem t_only{sys.beta, 0, sys.irrational, sys.name};
      const Grid b(t_only, fs[1], x, n, 1);  // f2(x + j beta)
      std::vector<double> col(n);
      for (std::size_t j = 0; j < n; ++j) col[j] = b.row(j)[0];
      const Grid& c = shared_grid(cache, sys, fs[2], x, n);
      return blocked_sum(n, opts, [&](std::size_t i) { return a.row(i)[0] * dot(col.data(), c.row(i), n); }) /
             (nd * nd);
    }
    case AverageKind::windowed_sn: {
      // sum_{i,b<N} (sum_{j<N} F(i,j) F(b,j))^2, with b = i + k and j + p free.
      const Grid& g = shared_grid(cache, sys, fs[0], x, n);
      const double s = blocked_sum(n, opts, [&](std::size_t i) {
        Kahan k;
        const double d = dot(g.row(i), g.row(i), n);
        k.add(d * d);
        for (std::size_t b = i + 1; b < n; ++b) {
          const double e = dot(g.row(i), g.row(b), n);
          k.add(2 * e * e);
        }
        return k.sum;
      });
      return std::fabs(s / (nd * nd * nd * nd));
    }
    case AverageKind::fourfold: {
      const Grid& f0 = shared_grid(cache, sys, fs[0], x, 2 * n);
      const Grid& f1 = shared_grid(cache, sys, fs[1], x, 2 * n);
      const Grid& f2 = shared_grid(cache, sys, fs[2], x, 2 * n);
      const Grid& f3 = shared_grid(cache, sys, fs[3], x, 2 * n);
      const double s = blocked_sum(n, opts, [&](std::size_t i) {
        std::vector<double> prefix(2 * n + 1);
        Kahan k;
        for (std::size_t s_row = i; s_row < i + n; ++s_row) {
          const double* r2 = f2.row(i);
          const double* r3 = f3.row(s_row);
          for (std::size_t t = 0; t < 2 * n; ++t) prefix[t + 1] = prefix[t] + r2[t] * r3[t];
          const double* r0 = f0.row(i);
          const double* r1 = f1.row(s_row);
          double acc = 0;
          for (std::size_t j = 0; j < n; ++j) acc += r0[j] * r1[j] * (prefix[j + n] - prefix[j]);
          k.add(acc);
        }
        return k.sum;
      });
      return s / (nd * nd * nd * nd);
    }
  }
  return 0;
}

long double torus_reference(const TorusSystem& sys, AverageKind kind, std::span<const TrigPoly> fs,
                            long double x) {
  if (fs.size() != observable_count(kind)) throw ValidationError("wrong number of observables");
  switch (kind) {
    case AverageKind::cubic: return fourier_cubic_limit(sys, fs[0], fs[1], fs[2], x);
    case AverageKind::fourfold: return fourier_host_integral(sys, fs[0], fs[1], fs[2], fs[3]);
    case AverageKind::windowed_sn: return fourier_host_integral(sys, fs[0], fs[0], fs[0], fs[0]);
    case AverageKind::birkhoff_1d:
    case AverageKind::birkhoff_2d:
      require_irrational(sys);
      return fs[0].coefficient(0).real();
  }
  return 0;
}

ConvergenceReport torus_report(const TorusSystem& sys, AverageKind kind, std::span<const TrigPoly> fs,
                               long double x, std::span<const std::uint64_t> schedule, const TorusOptions& opts) {
  ConvergenceReport report;
  report.system = sys.name;
  std::ostringstream desc;
  desc << average_kind_name(kind) << " x=" << static_cast<double>(x) << " block=" << opts.block_size;
  report.spec = desc.str();
  std::optional<Number> ref;
  if (sys.irrational) ref = Number(static_cast<double>(torus_reference(sys, kind, fs, x)));
  for (auto n : schedule) {
    const auto t0 = std::chrono::steady_clock::now();
    const double v = torus_average(sys, kind, fs, x, n, opts);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.add(n, Number(v), ref, secs);
  }
  return report;
}

}  // namespace ergocube
