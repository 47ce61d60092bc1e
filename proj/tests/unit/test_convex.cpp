#include <doctest.h>

#include <cmath>

#include "../support.hpp"
#include "pforge/convex_model.hpp"
#include "pforge/errors.hpp"
#include "pforge/targets.hpp"

using namespace pforge::convex;

namespace {

double demo_f(double t) { return t + 1 / (4 * t); }

}  // namespace

TEST_CASE("evaluation examples") {
  CHECK(eval_target(demo_target(), 2.0) == doctest::Approx(2.125).epsilon(1e-15));
  CHECK(eval_target(quadratic_ratio_target(), Vec{2, 1}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(eval_target(linear_target(0.3, 0.5), 2.0) == doctest::Approx(1.3).epsilon(1e-15));
  CHECK_THROWS_AS(eval_target(demo_target(), 1.0), pforge::DomainError);
  CHECK_THROWS_AS(eval_target(demo_target(), 0.5), pforge::DomainError);
  CHECK_THROWS_AS(eval_target(quadratic_ratio_target(), Vec{2}), pforge::DomainError);
}

TEST_CASE("subdifferential examples") {
  auto s = subdifferential_1d(demo_target(), 2.0);
  CHECK(s.lo == doctest::Approx(0.9375).epsilon(1e-9));
  CHECK(s.hi == doctest::Approx(0.9375).epsilon(1e-9));
  auto kink = subdifferential_1d(max_affine_target({{0, 1}, {-1, 2}}, 0.5), 1.0);
  CHECK(kink.lo == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(kink.hi == doctest::Approx(2.0).epsilon(1e-9));
  pforge::targets::PhaseTransitionSpec pt{1.0, {2.0}, 3.0};
  auto j = subdifferential_1d(pforge::targets::as_convex_target(pt), 2.0);
  CHECK(j.hi - j.lo == doctest::Approx(0.125).epsilon(1e-9));
}

TEST_CASE("subdifferential matches hand differentiation on random points") {
  testsupport::Gen g(31);
  for (int i = 0; i < 300; ++i) {
    double t = g.uniform(1.01, 50);
    auto s = subdifferential_1d(demo_target(), t);
    CHECK(std::abs(s.lo - (1 - 1 / (4 * t * t))) < 1e-8);
    CHECK(s.lo <= s.hi);
  }
}

TEST_CASE("support point examples") {
  auto p = support_point(demo_target(), 2.0, 0.9375);
  CHECK(p.h == doctest::Approx(0.25).epsilon(1e-12));
  auto q = support_point(quadratic_ratio_target(), Vec{2, 1}, Vec{1, -1});
  CHECK(std::abs(q.h) < 1e-12);
  for (double t : {1.5, 4.0, 9.0}) CHECK(support_point(linear_target(0.3, 0.5), t, 0.5).h == doctest::Approx(0.3));
  CHECK_THROWS_AS(support_point(demo_target(), 2.0, 0.5), pforge::NotASubgradient);
  CHECK_THROWS_AS(support_point(quadratic_ratio_target(), Vec{2, 1}, Vec{1, 0}), pforge::NotASubgradient);
}

TEST_CASE("support set sample examples") {
  auto pts = sample_support_set(demo_target(), std::vector<double>{1.5, 2, 3});
  REQUIRE(pts.size() == 3);
  double h[] = {1.0 / 3, 0.25, 1.0 / 6};
  double v[] = {1 - 1.0 / 9, 1 - 1.0 / 16, 1 - 1.0 / 36};
  for (int i = 0; i < 3; ++i) {
    CHECK(pts[i].h == doctest::Approx(h[i]).epsilon(1e-8));
    CHECK(pts[i].v[0] == doctest::Approx(v[i]).epsilon(1e-8));
  }
  auto lin = sample_support_set(linear_target(0.3, 0.5), std::vector<double>{1.5, 2, 7});
  for (const auto& p : lin) {
    CHECK(p.h == doctest::Approx(0.3));
    CHECK(p.v[0] == doctest::Approx(0.5));
  }
  pforge::targets::PhaseTransitionSpec pt{1.0, {2.0}, 3.0};
  auto at_kink = sample_support_set(pforge::targets::as_convex_target(pt), std::vector<double>{2.0});
  REQUIRE(at_kink.size() == 2);
  CHECK(at_kink[0].v[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(at_kink[1].v[0] == doctest::Approx(0.125).epsilon(1e-9));
  CHECK(at_kink[0].h + 2 * at_kink[0].v[0] == doctest::Approx(at_kink[1].h + 2 * at_kink[1].v[0]));
}

TEST_CASE("reconstruction examples") {
  std::vector<SupportPoint> pts;
  for (double g : {0.2, 0.25, 0.3}) pts.push_back({g, {1 - g * g}});
  CHECK(reconstruct_from_support(pts, 2.0) == doctest::Approx(2.125).epsilon(1e-15));
  CHECK(reconstruct_from_support({{0.4, {0.7}}}, 3.0) == doctest::Approx(2.5));
  CHECK(reconstruct_from_support({{0.0, {1, -1}}}, Vec{2, 1}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(reconstruct_from_support(std::vector<SupportPoint>{}, 2.0), pforge::EmptySample);
}

TEST_CASE("reconstruction dominance on random samples") {
  testsupport::Gen g(41);
  auto target = demo_target();
  std::vector<double> grid;
  for (int i = 0; i < 40; ++i) grid.push_back(g.uniform(1.001, 30));
  auto pts = sample_support_set(target, grid);
  for (int i = 0; i < 2000; ++i) {
    double t = g.uniform(1.0001, 100);
    for (const auto& p : pts) CHECK(p.h + p.v[0] * t <= demo_f(t) + 1e-9);
  }
}

TEST_CASE("slope function examples and oracle") {
  auto target = demo_target();
  CHECK(slope_function(target, 0.25) == doctest::Approx(0.9375).epsilon(1e-9));
  CHECK(slope_function(target, 0.5) == doctest::Approx(0.75).epsilon(1e-9));
  for (double gamma = 0; gamma <= 0.5; gamma += 1.0 / 128)
    CHECK(std::abs(slope_function(target, gamma) - (1 - gamma * gamma)) < 1e-6);
  auto lin = linear_target(0.3, 0.5);
  for (double gamma : {0.0, 0.1, 0.3}) CHECK(slope_function(lin, gamma) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_THROWS_AS(slope_function(target, 0.6), pforge::DomainError);
  CHECK_THROWS_AS(slope_function(target, -0.1), pforge::DomainError);
}

TEST_CASE("slope function is non-increasing and 1/alpha-Lipschitz") {
  for (auto target : {demo_target(), pforge::targets::as_convex_target({1.0, {2, 3, 4}, 3.0}),
                      max_affine_target({{0.5, 1}, {0.1, 1.5}, {-1, 2}}, 1.0)}) {
    double prev = 0;
    double prev_g = 0;
    const int steps = 64;
    for (int i = 0; i <= steps; ++i) {
      double gamma = target.b + (target.c - target.b) * i / steps;
      double s = slope_function(target, gamma);
      if (i) {
        CHECK(s <= prev + 1e-6);
        CHECK(std::abs(s - prev) <= std::abs(gamma - prev_g) / target.alpha + 1e-6);
      }
      prev = s;
      prev_g = gamma;
    }
  }
}

TEST_CASE("support-line family recovers the target") {
  auto target = demo_target();
  std::vector<SupportPoint> lines;
  for (int i = 0; i <= 512; ++i) {
    double g = 0.5 * i / 512;
    lines.push_back({g, {slope_function(target, g)}});
  }
  for (double t = 1.01; t < 40; t *= 1.07)
    CHECK(std::abs(reconstruct_from_support(lines, t) - demo_f(t)) < t * 1e-6 + 1e-6);
}

TEST_CASE("lipschitz bounds") {
  auto lb = lipschitz_bounds(demo_target(), 2.0);
  CHECK(lb.upper == doctest::Approx(1.0625));
  CHECK(lb.lower == doctest::Approx(0.8125));
  auto lin = lipschitz_bounds(linear_target(0.3, 0.5), 2.0);
  CHECK(lin.upper >= 0.5);
  CHECK(lipschitz_bounds(linear_target(0.0, 0.5), 2.0).upper == doctest::Approx(0.5));
  for (double t = 1.1; t < 20; t += 0.7) {
    auto s = subdifferential_1d(demo_target(), t);
    CHECK(s.hi <= lb.upper + 1e-9);
  }
}

TEST_CASE("2-D example: zero intercepts and unbounded gradient") {
  auto target = quadratic_ratio_target(0.5);
  testsupport::Gen g(43);
  for (int i = 0; i < 200; ++i) {
    Vec t{g.uniform(0.6, 20), g.uniform(0.6, 20)};
    auto grad = gradient(target, t);
    CHECK(grad[0] == doctest::Approx(t[0] / (2 * t[1])).epsilon(1e-7));
    CHECK(grad[1] == doctest::Approx(-t[0] * t[0] / (4 * t[1] * t[1])).epsilon(1e-7));
    auto sp = support_point(target, t, grad);
    CHECK(std::abs(sp.h) < 1e-9);
  }
  auto thin = quadratic_ratio_target(1e-4);
  double prev = 0;
  for (double t2 = 1.0; t2 > 1e-3; t2 /= 4) {
    auto grad = gradient(thin, Vec{1.0, t2});
    double norm = std::hypot(grad[0], grad[1]);
    CHECK(norm > prev);
    prev = norm;
  }
  CHECK(prev > 1e4);
}

TEST_CASE("midpoint convexity on probe grids") {
  auto grid = geometric_grid(1.001, 100, 60);
  for (auto target : {demo_target(), pforge::targets::as_convex_target({1.0, {2, 3, 4}, 3.0})})
    for (double x : grid)
      for (double y : grid)
        CHECK(eval_target(target, (x + y) / 2) <= (eval_target(target, x) + eval_target(target, y)) / 2 + 1e-9);
}

TEST_CASE("kink scan on a max-affine target") {
  auto target = max_affine_target({{0, 1}, {-1, 2}, {-4, 3}}, 0.5);
  auto kinks = kink_scan(target, 0.6, 6);
  REQUIRE(kinks.size() == 2);
  CHECK(kinks[0].z == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(kinks[1].z == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(kinks[0].jump == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(demo_target().kind == "closed_form");
  CHECK(kink_scan(demo_target(), 1.01, 10).empty());
}
