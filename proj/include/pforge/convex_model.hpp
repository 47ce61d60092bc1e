#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace pforge::convex {

using Vec = std::vector<double>;

/// A convex function on (alpha, inf)^m together with the hypothesis data
/// (intercept interval [b, c] and slope bound L).
struct ConvexTarget {
  int arity = 1;
  double alpha = 1.0;
  double b = 0.0;
  double c = 0.0;
  double L = 0.0;
  /// 1e-9 for closed forms, 1e-6 for tabulated bodies.
  double tol = 1e-9;
  std::string kind;
  std::string name;
  std::function<double(const Vec&)> body;
};

struct SupportPoint {
  double h = 0.0;
  Vec v;
};

struct SubgradientInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct Kink {
  double z = 0.0;
  double jump = 0.0;
};

ConvexTarget demo_target();
ConvexTarget linear_target(double h0, double v0, double alpha = 1.0);
/// f(t) = max_i (h_i + v_i t).
ConvexTarget max_affine_target(std::vector<std::pair<double, double>> pieces, double alpha);
/// F(t1, t2) = t1^2 / (4 t2), convex on (alpha, inf)^2 with unbounded gradient as t2 -> 0.
ConvexTarget quadratic_ratio_target(double alpha = 0.5);
/// f(t) = max over rows of h + v.t.
ConvexTarget support_table_target(std::vector<SupportPoint> rows, double alpha);

double eval_target(const ConvexTarget& target, const Vec& t);
double eval_target(const ConvexTarget& target, double t);

SubgradientInterval subdifferential_1d(const ConvexTarget& target, double t);
/// Central-difference gradient with Richardson refinement.
Vec gradient(const ConvexTarget& target, const Vec& t);

/// (f(t) - v.t, v) after checking v against the numerical subdifferential and
/// a global underestimator probe.
SupportPoint support_point(const ConvexTarget& target, const Vec& t, const Vec& v);
SupportPoint support_point(const ConvexTarget& target, double t, double v);

std::vector<SupportPoint> sample_support_set(const ConvexTarget& target, const std::vector<double>& grid);
std::vector<SupportPoint> sample_support_set(const ConvexTarget& target, const std::vector<Vec>& grid);

double reconstruct_from_support(const std::vector<SupportPoint>& points, const Vec& t);
double reconstruct_from_support(const std::vector<SupportPoint>& points, double t);

/// s(gamma) = sup { v : gamma + t v <= f(t) for all t > alpha }.
double slope_function(const ConvexTarget& target, double gamma);

struct LipschitzBounds {
  double upper = 0.0;
  double lower = 0.0;
};
LipschitzBounds lipschitz_bounds(const ConvexTarget& target, double beta);

/// Locates points in (lo, hi) where one-sided slopes differ by more than threshold.
std::vector<Kink> kink_scan(const ConvexTarget& target, double lo, double hi, int cells = 4096,
                            double threshold = 1e-6);

/// Geometric grid of `count` points in [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, int count);

}  // namespace pforge::convex
