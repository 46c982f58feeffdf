#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bmdist/errors.hpp"
#include "bmdist/gauge/radius.hpp"
#include "bmdist/numeric/matrix.hpp"
#include "bmdist/parallel.hpp"
#include "bmdist/reference_matrices.hpp"

namespace bmdist {

enum class SearchTemplate { free, parametric };

inline const char* to_string(SearchTemplate t) { return t == SearchTemplate::free ? "free" : "parametric"; }

inline constexpr double kSingularDet = 1e-9;
inline constexpr double kImprovementMargin = 1e-3;

struct SearchConfig {
  int n = 3;
  int starts = 64;
  int max_iters = 400;
  std::uint64_t master_seed = 0;
  double initial_step = 0.25;
  double decay = 0.5;
  std::optional<int> snap_denominator_cap;
  SearchTemplate template_kind = SearchTemplate::free;
  unsigned workers = 0;  // not part of the result; any value gives the same run

  void validate() const {
    if (n < 2 || n > 8) throw DimensionError("search dimension must be in 2..8");
    if (starts < 1) throw DomainError("starts must be >= 1");
    if (max_iters < 1) throw DomainError("max_iters must be >= 1");
    if (!(decay > 0.0 && decay < 1.0)) throw DomainError("decay must lie in (0, 1)");
    if (!(initial_step > 0.0)) throw DomainError("initial step must be positive");
    if (snap_denominator_cap && *snap_denominator_cap < 1) throw DomainError("snap denominator cap must be >= 1");
    if (template_kind == SearchTemplate::parametric && n != 6) {
      throw DomainError("the parametric template exists only for n = 6");
    }
  }
};

struct TracePoint {
  std::uint64_t iteration = 0;
  double value = 0;
};

struct SnapResult {
  RationalMatrix matrix;
  std::optional<RadiusResult> radius;  // empty when the snapped matrix is singular
};

struct SearchRun {
  SearchConfig config;
  RealMatrix best_matrix;
  RadiusResult best;                     // recomputed from best_matrix
  std::vector<std::optional<double>> per_start;  // empty entry: start never became feasible
  int winning_start = 0;
  std::vector<TracePoint> trace;         // winning start only
  std::optional<std::pair<double, double>> params;  // parametric template (x, y)
  std::optional<double> reference;       // best-known value for n, when one exists
  bool improvement_candidate = false;
  std::optional<SnapResult> snapped;
  double wall_seconds = 0;
};

namespace detail {

// Reproducible uniform [-1, 1] independent of the standard library's
// distribution implementations.
class UnitRng {
 public:
  explicit UnitRng(std::uint64_t seed) : engine_(seed) {}
  double symmetric() {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
  }

 private:
  std::mt19937_64 engine_;
};

struct Evaluation {
  double value = std::numeric_limits<double>::infinity();
  RealMatrix inverse;
  bool ok() const { return std::isfinite(value); }
};

inline Evaluation evaluate(const RealMatrix& t) {
  Evaluation e;
  if (std::fabs(determinant(t)) < kSingularDet) return e;
  try {
    e.inverse = invert(t);
  } catch (const SingularMatrixError&) {
    return e;
  }
  e.value = max_l1(e.inverse.data(), static_cast<int>(t.rows()), 1).value;
  return e;
}

// Minimum-norm point of the convex hull of `g` (Frank-Wolfe with exact line
// search).
inline std::vector<double> min_norm_point(const std::vector<std::vector<double>>& g) {
  std::vector<double> x = g.front();
  const std::size_t dim = x.size();
  auto dot = [dim](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < dim; ++i) s += a[i] * b[i];
    return s;
  };
  for (int it = 0; it < 200; ++it) {
    std::size_t best = 0;
    double best_dot = dot(g[0], x);
    for (std::size_t k = 1; k < g.size(); ++k) {
      const double d = dot(g[k], x);
      if (d < best_dot) {
        best_dot = d;
        best = k;
      }
    }
    std::vector<double> diff(dim);
    for (std::size_t i = 0; i < dim; ++i) diff[i] = g[best][i] - x[i];
    const double denom = dot(diff, diff);
    if (denom <= 0) break;
    const double gamma = std::clamp(-dot(x, diff) / denom, 0.0, 1.0);
    if (gamma <= 1e-12) break;
    for (std::size_t i = 0; i < dim; ++i) x[i] += gamma * diff[i];
  }
  return x;
}

// Gradients of v -> ||T^{-1} v||_1 at the eps-active vertices:
// d||T^{-1}v||_1 = -s^T T^{-1} dT T^{-1} v, so grad = -(T^{-T} s)(T^{-1} v)^T.
inline std::vector<std::vector<double>> active_gradients(const RealMatrix& inv, double f, double eps) {
  const int n = static_cast<int>(inv.rows());
  struct Active {
    double l1;
    std::uint32_t bits;
    std::vector<double> w;
  };
  std::vector<Active> active;
  gray_scan<double>(inv.data(), n, 0, canonical_count(n),
                    [&](double l1, std::uint32_t bits, const std::vector<double>& w) {
                      if (l1 >= f - eps) active.push_back({l1, bits, w});
                    });
  std::sort(active.begin(), active.end(), [](const Active& a, const Active& b) {
    return a.l1 != b.l1 ? a.l1 > b.l1 : a.bits < b.bits;
  });
  if (active.size() > 64) active.resize(64);
  std::vector<std::vector<double>> grads;
  for (const auto& a : active) {
    std::vector<double> u(n, 0.0);  // T^{-T} s
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int i = 0; i < n; ++i) {
        const double sign = a.w[i] > 0 ? 1.0 : (a.w[i] < 0 ? -1.0 : 0.0);
        s += inv(i, j) * sign;
      }
      u[j] = s;
    }
    std::vector<double> g(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g[i * n + j] = -u[i] * a.w[j];
    grads.push_back(std::move(g));
  }
  return grads;
}

inline RealMatrix step_clipped(const RealMatrix& t, const std::vector<double>& dir, double step) {
  RealMatrix out = t;
  const std::size_t n = t.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = std::clamp(t(i, j) - step * dir[i * n + j], -1.0, 1.0);
  return out;
}

struct StartResult {
  bool feasible = false;
  RealMatrix best;
  double value = std::numeric_limits<double>::infinity();
  std::vector<TracePoint> trace;
};

// Bounded redraws for a nonsingular start.
inline constexpr int kStartRetries = 1000;
// Entrywise perturbation applied after a start converges.
inline constexpr double kKickScale = 0.2;

inline StartResult run_free_start(const SearchConfig& cfg, int start) {
  UnitRng rng(cfg.master_seed ^ static_cast<std::uint64_t>(start));
  const int n = cfg.n;
  StartResult r;
  RealMatrix t(n, n);
  Evaluation cur;
  for (int attempt = 0; attempt < kStartRetries && !cur.ok(); ++attempt) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t(i, j) = rng.symmetric();
    cur = evaluate(t);
  }
  if (!cur.ok()) return r;
  r.feasible = true;
  r.best = t;
  r.value = cur.value;
  r.trace.push_back({0, cur.value});
  std::uint64_t iteration = 0;
  auto accept = [&](RealMatrix next, Evaluation e) {
    t = std::move(next);
    cur = std::move(e);
    if (cur.value < r.value) {
      r.best = t;
      r.value = cur.value;
      if (r.trace.back().iteration == iteration) {
        r.trace.back().value = cur.value;
      } else {
        r.trace.push_back({iteration, cur.value});
      }
    }
  };

  double h = cfg.initial_step;      // pattern step
  double h_sub = cfg.initial_step;  // subgradient trial step
  for (iteration = 1; iteration <= static_cast<std::uint64_t>(cfg.max_iters); ++iteration) {
    bool moved = false;

    // (a) Descent along the min-norm element of nearby-active subgradients.
    for (double rel : {1e-2, 1e-4, 1e-7}) {
      auto grads = active_gradients(cur.inverse, cur.value, rel * cur.value);
      auto d = min_norm_point(grads);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double& dij = d[i * n + j];
          if ((t(i, j) >= 1.0 && dij < 0) || (t(i, j) <= -1.0 && dij > 0)) dij = 0;
        }
      double dmax = 0;
      for (double x : d) dmax = std::max(dmax, std::fabs(x));
      if (dmax < 1e-14) continue;
      for (double& x : d) x /= dmax;
      bool ok = false;
      for (double s = h_sub; s > 1e-12; s *= 0.5) {
        RealMatrix cand = step_clipped(t, d, s);
        Evaluation e = evaluate(cand);
        if (e.ok() && e.value < cur.value - 1e-15 * cur.value) {
          h_sub = std::min(1.0, s == h_sub ? 2 * s : s);
          accept(std::move(cand), std::move(e));
          ok = true;
          break;
        }
      }
      if (ok) {
        moved = true;
        break;
      }
    }

    // (b) Coordinate pattern sweep.
    bool swept = false;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (double sign : {1.0, -1.0}) {
          const double old = t(i, j);
          const double next = std::clamp(old + sign * h, -1.0, 1.0);
          if (next == old) continue;
          RealMatrix cand = t;
          cand(i, j) = next;
          Evaluation e = evaluate(cand);
          if (e.ok() && e.value < cur.value - 1e-15 * cur.value) {
            accept(std::move(cand), std::move(e));
            swept = true;
            break;
          }
        }
    if (!swept) h *= cfg.decay;
    moved = moved || swept;

    // Converged: kick the best point and descend again with the remaining
    // budget.
    if (!moved && h < 1e-10) {
      Evaluation kicked;
      RealMatrix cand = r.best;
      for (int attempt = 0; attempt < kStartRetries && !kicked.ok(); ++attempt) {
        cand = r.best;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) cand(i, j) = std::clamp(cand(i, j) + kKickScale * rng.symmetric(), -1.0, 1.0);
        kicked = evaluate(cand);
      }
      if (!kicked.ok()) break;
      t = std::move(cand);
      cur = std::move(kicked);
      h = cfg.initial_step;
      h_sub = cfg.initial_step;
    }
  }
  return r;
}

}  // namespace detail

// Nearest rational with denominator <= max_den; ties go to the smaller
// denominator, then toward zero.
inline Rational snap_value(const Rational& x, int max_den) {
  if (max_den < 1) throw DomainError("max_den must be >= 1");
  std::optional<Rational> best;
  Rational best_dist;
  for (int q = 1; q <= max_den; ++q) {
    const Rational scaled = x * q;
    Integer lo = scaled.get_num() / scaled.get_den();  // truncation
    if (scaled < 0 && lo * scaled.get_den() != scaled.get_num()) lo -= 1;
    for (const Integer& p : {lo, Integer(lo + 1)}) {
      Rational cand = make_rational(p, Integer(q));
      Rational dist = ::abs(cand - x);
      const bool better = !best || dist < best_dist ||
                          (dist == best_dist && cand.get_den() == best->get_den() && ::abs(cand) < ::abs(*best));
      if (better) {
        best = cand;
        best_dist = dist;
      }
    }
  }
  return *best;
}

inline RationalMatrix snap_rational(const Matrix& t, int max_den) {
  const RationalMatrix exact = t.mode() == Mode::exact ? t.exact() : to_rational(t.floating());
  RationalMatrix out(exact.rows(), exact.cols());
  for (std::size_t i = 0; i < exact.rows(); ++i)
    for (std::size_t j = 0; j < exact.cols(); ++j) out(i, j) = snap_value(exact(i, j), max_den);
  return out;
}

inline SnapResult snap_and_measure(const Matrix& t, int max_den, unsigned workers = 0) {
  SnapResult s;
  s.matrix = snap_rational(t, max_den);
  try {
    s.radius = radius(Matrix(s.matrix), workers);
  } catch (const SingularMatrixError&) {
  }
  return s;
}

struct ParametricResult {
  double x = 0, y = 0;
  double radius = 0;
  double start_x = 0, start_y = 0;  // after moving off a singular start
  bool start_adjusted = false;
};

inline constexpr const char* kDim6Template = "dim6-circulant";
inline constexpr double kParametricResolution = 1e-5;

namespace detail {

inline double template_value(double x, double y) {
  return evaluate(dim6_circulant(x, y)).value;
}

template <class F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, double tol) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? std::pair{c, fc} : std::pair{d, fd};
}

// Moves (x0, y0) into [-1, 1]^2 and then outward in growing axis steps until
// `value` is finite. Empty when nothing nearby works.
template <class F>
std::optional<std::pair<double, double>> nonsingular_start(F&& value, double x0, double y0) {
  x0 = std::clamp(x0, -1.0, 1.0);
  y0 = std::clamp(y0, -1.0, 1.0);
  if (std::isfinite(value(x0, y0))) return std::pair{x0, y0};
  for (int k = 1; k <= 64; ++k) {
    const double delta = 1e-3 * k;
    for (auto [dx, dy] : {std::pair{delta, 0.0}, {-delta, 0.0}, {0.0, delta}, {0.0, -delta}}) {
      const double x = std::clamp(x0 + dx, -1.0, 1.0), y = std::clamp(y0 + dy, -1.0, 1.0);
      if (std::isfinite(value(x, y))) return std::pair{x, y};
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Nested golden-section refinement of the dimension-6 pattern over a
// (x0 +- window) x (y0 +- window) box clipped to [-1, 1]^2. A start outside
// the box or at a singular pattern is replaced by a nearby feasible one.
inline ParametricResult parametric_refine(const std::string& template_id, double x0, double y0,
                                          double window = 0.1) {
  if (template_id != kDim6Template) throw UsageError("unknown template '" + template_id + "'");
  ParametricResult res;
  const double orig_x = x0, orig_y = y0;
  const bool start_ok = std::fabs(x0) <= 1.0 && std::fabs(y0) <= 1.0 && std::isfinite(detail::template_value(x0, y0));
  auto moved = detail::nonsingular_start(detail::template_value, x0, y0);
  if (!moved) throw SearchFailure("no nonsingular start near the requested parameters");
  std::tie(x0, y0) = *moved;
  res.start_adjusted = !start_ok || x0 != orig_x || y0 != orig_y;
  const double start_value = detail::template_value(x0, y0);
  res.start_x = x0;
  res.start_y = y0;
  const double xlo = std::max(-1.0, x0 - window), xhi = std::min(1.0, x0 + window);
  const double ylo = std::max(-1.0, y0 - window), yhi = std::min(1.0, y0 + window);
  auto inner = [&](double x) {
    return detail::golden_min([&](double y) { return detail::template_value(x, y); }, ylo, yhi,
                              kParametricResolution);
  };
  auto [bx, bv] = detail::golden_min([&](double x) { return inner(x).second; }, xlo, xhi, kParametricResolution);
  const double by = inner(bx).first;
  if (bv < start_value) {
    res.x = bx;
    res.y = by;
    res.radius = bv;
  } else {
    res.x = x0;
    res.y = y0;
    res.radius = start_value;
  }
  return res;
}

// Reference value for the improvement flag, parsed from the built-in table.
inline std::optional<double> search_reference(int n) {
  auto v = reference_value(n);
  if (!v) return std::nullopt;
  return to_double(parse_rational(*v));
}

inline SearchRun local_search(const SearchConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const auto starts = static_cast<std::uint64_t>(cfg.starts);
  std::vector<detail::StartResult> results(starts);
  std::vector<std::optional<std::pair<double, double>>> params(starts);

  parallel_for(starts, cfg.workers, [&](std::uint64_t s) {
    if (cfg.template_kind == SearchTemplate::free) {
      results[s] = detail::run_free_start(cfg, static_cast<int>(s));
      return;
    }
    detail::UnitRng rng(cfg.master_seed ^ s);
    const double x0 = rng.symmetric(), y0 = rng.symmetric();
    try {
      // Re-centre the refinement box on each pass until it stops improving.
      auto p = parametric_refine(kDim6Template, x0, y0, 0.25);
      auto& r = results[s];
      r.trace = {{0, detail::template_value(p.start_x, p.start_y)}};
      for (int pass = 1; pass <= cfg.max_iters; ++pass) {
        if (p.radius < r.trace.back().value) r.trace.push_back({static_cast<std::uint64_t>(pass), p.radius});
        const auto next = parametric_refine(kDim6Template, p.x, p.y, 0.25);
        if (!(next.radius < p.radius - 1e-12)) break;
        p = next;
      }
      r.feasible = true;
      r.best = dim6_circulant(p.x, p.y);
      r.value = p.radius;
      params[s] = std::pair{p.x, p.y};
    } catch (const SearchFailure&) {
    }
  });

  SearchRun run;
  run.config = cfg;
  int winner = -1;
  for (std::uint64_t s = 0; s < starts; ++s) {
    const auto& r = results[s];
    run.per_start.push_back(r.feasible ? std::optional<double>(r.value) : std::nullopt);
    if (r.feasible && (winner < 0 || r.value < results[winner].value)) winner = static_cast<int>(s);
  }
  if (winner < 0) throw SearchFailure("no feasible nonsingular start found");
  run.winning_start = winner;
  run.best_matrix = results[winner].best;
  run.trace = results[winner].trace;
  run.params = params[winner];
  run.best = radius(Matrix(run.best_matrix), cfg.workers);
  run.reference = search_reference(cfg.n);
  if (run.reference) run.improvement_candidate = run.best.value.to_double() < *run.reference - kImprovementMargin;
  if (cfg.snap_denominator_cap) run.snapped = snap_and_measure(Matrix(run.best_matrix), *cfg.snap_denominator_cap, cfg.workers);
  run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

}  // namespace bmdist
