#include "pforge/convex_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pforge/errors.hpp"

namespace pforge::convex {

namespace {

constexpr double kTailCap = 1e12;

void check_domain(const ConvexTarget& target, const Vec& t) {
  if (static_cast<int>(t.size()) != target.arity)
    throw DomainError("argument has " + std::to_string(t.size()) + " components, target arity is " +
                      std::to_string(target.arity));
  for (double x : t)
    if (!(x > target.alpha)) throw DomainError("argument component " + std::to_string(x) + " <= alpha");
}

double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Richardson table over a halving step sequence; order 1 for one-sided
// quotients, order 2 for central ones.
double richardson(const std::function<double(double)>& q, double h0, int levels, int order) {
  std::vector<std::vector<double>> T(levels);
  double h = h0;
  for (int i = 0; i < levels; ++i, h *= 0.5) {
    T[i].resize(i + 1);
    T[i][0] = q(h);
    for (int k = 1; k <= i; ++k) {
      double pw = std::ldexp(1.0, order * k);
      T[i][k] = (pw * T[i][k - 1] - T[i - 1][k - 1]) / (pw - 1);
    }
  }
  return T[levels - 1][levels - 1];
}

double left_room(const ConvexTarget& target, double t) { return (t - target.alpha) / 2; }

// Global underestimator probe grid for arity m.
std::vector<Vec> probe_grid(const ConvexTarget& target) {
  double lo = target.alpha * (1 + 1e-9) + 1e-12;
  double hi = 100 * target.alpha;
  std::vector<Vec> out;
  if (target.arity == 1) {
    for (double x : geometric_grid(lo, hi, 400)) out.push_back({x});
  } else if (target.arity == 2) {
    auto g = geometric_grid(lo, hi, 60);
    for (double x : g)
      for (double y : g) out.push_back({x, y});
  } else {
    auto g = geometric_grid(lo, hi, 8);
    std::vector<std::size_t> idx(target.arity, 0);
    for (;;) {
      Vec p(target.arity);
      for (int k = 0; k < target.arity; ++k) p[k] = g[idx[k]];
      out.push_back(p);
      int k = 0;
      while (k < target.arity && ++idx[k] == g.size()) idx[k++] = 0;
      if (k == target.arity) break;
    }
  }
  return out;
}

}  // namespace

std::vector<double> geometric_grid(double lo, double hi, int count) {
  std::vector<double> g(count);
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  double r = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) g[i] = lo * std::exp(r * i);
  g.back() = hi;
  return g;
}

ConvexTarget demo_target() {
  ConvexTarget t;
  t.arity = 1;
  t.alpha = 1.0;
  t.b = 0.0;
  t.c = 0.5;
  t.L = 1.0;
  t.kind = "closed_form";
  t.name = "demo";
  t.body = [](const Vec& x) { return x[0] + 1.0 / (4.0 * x[0]); };
  return t;
}

ConvexTarget linear_target(double h0, double v0, double alpha) {
  ConvexTarget t;
  t.arity = 1;
  t.alpha = alpha;
  t.b = std::min(h0, 0.0);
  t.c = h0;
  t.L = std::abs(v0);
  t.kind = "closed_form";
  t.name = "linear";
  t.body = [h0, v0](const Vec& x) { return h0 + v0 * x[0]; };
  return t;
}

ConvexTarget max_affine_target(std::vector<std::pair<double, double>> pieces, double alpha) {
  if (pieces.empty()) throw EmptySample("max_affine_target needs at least one piece");
  ConvexTarget t;
  t.arity = 1;
  t.alpha = alpha;
  t.kind = "closed_form";
  t.name = "max_affine";
  t.b = std::numeric_limits<double>::infinity();
  t.c = -std::numeric_limits<double>::infinity();
  for (auto [h, v] : pieces) {
    t.b = std::min(t.b, h);
    t.c = std::max(t.c, h);
    t.L = std::max(t.L, std::abs(v));
  }
  t.body = [pieces = std::move(pieces)](const Vec& x) {
    double best = -std::numeric_limits<double>::infinity();
    for (auto [h, v] : pieces) best = std::max(best, h + v * x[0]);
    return best;
  };
  return t;
}

ConvexTarget quadratic_ratio_target(double alpha) {
  ConvexTarget t;
  t.arity = 2;
  t.alpha = alpha;
  t.b = 0.0;
  t.c = 0.0;
  t.L = std::numeric_limits<double>::infinity();
  t.kind = "closed_form";
  t.name = "quadratic_ratio";
  t.body = [](const Vec& x) { return x[0] * x[0] / (4.0 * x[1]); };
  return t;
}

ConvexTarget support_table_target(std::vector<SupportPoint> rows, double alpha) {
  if (rows.empty()) throw EmptySample("support table is empty");
  ConvexTarget t;
  t.arity = static_cast<int>(rows.front().v.size());
  t.alpha = alpha;
  t.tol = 1e-6;
  t.kind = "support_table";
  t.name = "support_table";
  t.b = std::numeric_limits<double>::infinity();
  t.c = -std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    if (static_cast<int>(r.v.size()) != t.arity) throw DomainError("support table rows differ in arity");
    t.b = std::min(t.b, r.h);
    t.c = std::max(t.c, r.h);
    for (double v : r.v) t.L = std::max(t.L, std::abs(v));
  }
  t.body = [rows = std::move(rows)](const Vec& x) { return reconstruct_from_support(rows, x); };
  return t;
}

double eval_target(const ConvexTarget& target, const Vec& t) {
  check_domain(target, t);
  return target.body(t);
}

double eval_target(const ConvexTarget& target, double t) { return eval_target(target, Vec{t}); }

SubgradientInterval subdifferential_1d(const ConvexTarget& target, double t) {
  if (target.arity != 1) throw DomainError("subdifferential_1d needs a one-parameter target");
  check_domain(target, {t});
  auto f = [&](double x) { return target.body({x}); };
  double scale = std::max(1.0, std::abs(t));
  double h0 = std::min(1e-3 * scale, left_room(target, t));
  double ft = f(t);
  double hi = richardson([&](double h) { return (f(t + h) - ft) / h; }, h0, 4, 1);
  double lo = richardson([&](double h) { return (ft - f(t - h)) / h; }, h0, 4, 1);
  if (std::abs(hi - lo) <= 1e-6) {
    double mid = 0.5 * (lo + hi);
    return {mid, mid};
  }
  if (lo > hi) std::swap(lo, hi);
  return {lo, hi};
}

Vec gradient(const ConvexTarget& target, const Vec& t) {
  check_domain(target, t);
  Vec g(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    double h0 = std::min(1e-2 * std::max(1.0, std::abs(t[k])), left_room(target, t[k]));
    g[k] = richardson(
        [&](double h) {
          Vec a = t, b = t;
          a[k] += h;
          b[k] -= h;
          return (target.body(a) - target.body(b)) / (2 * h);
        },
        h0, 5, 2);
  }
  return g;
}

SupportPoint support_point(const ConvexTarget& target, const Vec& t, const Vec& v) {
  check_domain(target, t);
  if (v.size() != t.size()) throw DomainError("slope and point differ in arity");
  const double tol = std::max(target.tol, 1e-6);
  if (target.arity == 1) {
    SubgradientInterval s = subdifferential_1d(target, t[0]);
    if (v[0] < s.lo - tol || v[0] > s.hi + tol)
      throw NotASubgradient("slope " + std::to_string(v[0]) + " outside [" + std::to_string(s.lo) + ", " +
                            std::to_string(s.hi) + "]");
  }
  double ft = target.body(t);
  SupportPoint sp{ft - dot(v, t), v};
  for (const Vec& x : probe_grid(target)) {
    double gap = sp.h + dot(v, x) - target.body(x);
    if (gap > tol * std::max(1.0, std::abs(target.body(x))))
      throw NotASubgradient("supporting hyperplane lies above the target by " + std::to_string(gap));
  }
  return sp;
}

SupportPoint support_point(const ConvexTarget& target, double t, double v) {
  return support_point(target, Vec{t}, Vec{v});
}

std::vector<SupportPoint> sample_support_set(const ConvexTarget& target, const std::vector<double>& grid) {
  if (grid.empty()) throw EmptySample("support grid is empty");
  std::vector<SupportPoint> out;
  for (double t : grid) {
    SubgradientInterval s = subdifferential_1d(target, t);
    out.push_back(support_point(target, t, s.lo));
    if (s.hi > s.lo) out.push_back(support_point(target, t, s.hi));
  }
  return out;
}

std::vector<SupportPoint> sample_support_set(const ConvexTarget& target, const std::vector<Vec>& grid) {
  if (grid.empty()) throw EmptySample("support grid is empty");
  if (target.arity == 1) {
    std::vector<double> g;
    for (const Vec& p : grid) g.push_back(p.at(0));
    return sample_support_set(target, g);
  }
  std::vector<SupportPoint> out;
  for (const Vec& t : grid) out.push_back(support_point(target, t, gradient(target, t)));
  return out;
}

double reconstruct_from_support(const std::vector<SupportPoint>& points, const Vec& t) {
  if (points.empty()) throw EmptySample("reconstruction from an empty support sample");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) best = std::max(best, p.h + dot(p.v, t));
  return best;
}

double reconstruct_from_support(const std::vector<SupportPoint>& points, double t) {
  return reconstruct_from_support(points, Vec{t});
}

namespace {

// min over t > alpha of f(t) - gamma - v t: geometric grid, tail doubling
// while the minimum sits on the right edge, then golden-section refinement.
double underestimator_gap(const ConvexTarget& target, double gamma, double v) {
  auto g = [&](double t) { return target.body({t}) - gamma - v * t; };
  double lo = target.alpha * (1 + 1e-12) + 1e-15;
  double hi = 100 * target.alpha;
  const int n = 256;
  std::vector<double> ts;
  std::size_t best = 0;
  double best_val = 0;
  for (;;) {
    ts = geometric_grid(lo, hi, n);
    best = 0;
    best_val = g(ts[0]);
    for (std::size_t i = 1; i < ts.size(); ++i) {
      double val = g(ts[i]);
      if (val < best_val) {
        best_val = val;
        best = i;
      }
    }
    if (best + 1 < ts.size() || hi >= kTailCap * target.alpha) break;
    hi *= 16;
  }
  double a = std::log(ts[best == 0 ? 0 : best - 1]);
  double b = std::log(ts[std::min(best + 1, ts.size() - 1)]);
  const double r = 0.5 * (std::sqrt(5.0) - 1);
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = g(std::exp(x1)), f2 = g(std::exp(x2));
  for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = g(std::exp(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = g(std::exp(x2));
    }
  }
  return std::min({best_val, f1, f2});
}

}  // namespace

double slope_function(const ConvexTarget& target, double gamma) {
  if (target.arity != 1) throw DomainError("slope_function needs a one-parameter target");
  const double eps = 1e-12;
  if (gamma < target.b - eps || gamma > target.c + eps)
    throw DomainError("gamma " + std::to_string(gamma) + " outside [b, c]");
  // any v above (f(t)-gamma)/t at some t fails, so this brackets from above
  double hi = std::numeric_limits<double>::infinity();
  for (double t : geometric_grid(target.alpha * (1 + 1e-12) + 1e-15, 100 * target.alpha, 64))
    hi = std::min(hi, (target.body({t}) - gamma) / t);
  double lo = hi - 1.0;
  double width = 1.0;
  while (underestimator_gap(target, gamma, lo) < 0) {
    width *= 2;
    lo = hi - width;
    if (width > 1e12) throw DomainError("slope_function failed to bracket");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (underestimator_gap(target, gamma, mid) >= 0)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

LipschitzBounds lipschitz_bounds(const ConvexTarget& target, double beta) {
  double fb = eval_target(target, beta);
  return {(fb - target.b) / beta, (fb - target.c) / beta};
}

std::vector<Kink> kink_scan(const ConvexTarget& target, double lo, double hi, int cells, double threshold) {
  if (target.arity != 1) throw DomainError("kink_scan needs a one-parameter target");
  lo = std::max(lo, target.alpha * (1 + 1e-9) + 1e-12);
  if (!(hi > lo)) return {};
  auto f = [&](double x) { return target.body({x}); };
  double dx = (hi - lo) / cells;
  std::vector<double> xs(cells + 1), sl(cells);
  for (int i = 0; i <= cells; ++i) xs[i] = lo + dx * i;
  xs[cells] = hi;
  for (int i = 0; i < cells; ++i) sl[i] = (f(xs[i + 1]) - f(xs[i])) / (xs[i + 1] - xs[i]);
  // D[k] = sl[k+1] - sl[k-1] carries a jump in cell k on top of smooth curvature;
  // subtracting the mean of D[k-3] and D[k+3] cancels the curvature part.
  auto D = [&](int k) { return sl[k + 1] - sl[k - 1]; };
  std::vector<char> flag(cells, 0);
  for (int k = 1; k + 1 < cells; ++k) {
    double base;
    if (k - 3 >= 1 && k + 3 + 1 < cells)
      base = 0.5 * (D(k - 3) + D(k + 3));
    else if (k + 6 + 1 < cells)
      base = 2 * D(k + 3) - D(k + 6);
    else if (k - 6 >= 1)
      base = 2 * D(k - 3) - D(k - 6);
    else
      base = 0;
    flag[k] = std::abs(D(k) - base) > threshold;
  }
  std::vector<Kink> out;
  int k = 1;
  while (k + 1 < cells) {
    if (!flag[k]) {
      ++k;
      continue;
    }
    int k2 = k;
    while (k2 + 2 < cells && flag[k2 + 1]) ++k2;
    double a = xs[k - 1], b = xs[k2 + 1];
    double left = sl[k - 1], right = sl[k2 + 1];
    double target_q = 0.5 * (left + right);
    const double h = 1e-9 * std::max(1.0, std::abs(a));
    auto q = [&](double m) { return (f(m + h) - f(m)) / h; };
    for (int it = 0; it < 200 && b - a > h; ++it) {
      double m = 0.5 * (a + b);
      if (q(m) < target_q)
        a = m;
      else
        b = m;
    }
    double z = 0.5 * (a + b) + 0.5 * h;
    const double h0 = 1e-6 * std::max(1.0, std::abs(z));
    auto one_sided = [&](double e) { return (f(z + 2 * e) - f(z + e)) / e - (f(z - e) - f(z - 2 * e)) / e; };
    double jump = 2 * one_sided(h0) - one_sided(2 * h0);
    if (std::abs(jump) > threshold) out.push_back({z, jump});
    k = k2 + 2;
  }
  return out;
}

}  // namespace pforge::convex
