#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "../support.hpp"
#include "pforge/errors.hpp"
#include "pforge/potential.hpp"
#include "pforge/sturmian.hpp"

using namespace pforge::potential;
using pforge::Rational;
using pforge::product::Word;

namespace {

PotentialSpec demo_spec(SpecOptions opts = {}) {
  if (opts.extra.empty()) opts.extra = {Rational(1, 3)};
  return one_parameter_spec(pforge::convex::demo_target(), opts);
}

Word z_word(const PotentialSpec& spec, const Rational& gamma, const Rational& a, std::int64_t start, std::size_t n) {
  auto y = pforge::sturmian::generate_word(gamma, a, start, n);
  Word w;
  for (int v : y) w.push_back(spec.alphabet.encode({0, v}));
  return w;
}

// phi by growing windows and testing membership of each one directly.
double phi_oracle(const PotentialSpec& spec, const Word& word, std::size_t c, Mode mode) {
  double best = -1e300;
  for (std::size_t g = 0; g < spec.grid.size(); ++g) {
    double v = spec.grid[g].values[0];
    std::size_t l = 1;
    for (;; ++l) {
      if (l > c + 1 || c + l > word.size()) {
        v -= mode == Mode::Optimistic ? 0.0 : spec.delta(l - 1);
        break;
      }
      Word win(word.begin() + static_cast<std::ptrdiff_t>(c + 1 - l), word.begin() + static_cast<std::ptrdiff_t>(c + l));
      if (!pforge::product::z_membership(win, *spec.members[g])) {
        v -= spec.delta(l - 1);
        break;
      }
    }
    best = std::max(best, v);
  }
  return best;
}

}  // namespace

TEST_CASE("delta examples") {
  DeltaSchedule d(1.0, 0.5, 1.0);
  CHECK(delta(d, 1) == doctest::Approx(16.5).epsilon(1e-15));
  CHECK(delta(d, 0) == doctest::Approx(18.5).epsilon(1e-15));
  CHECK(delta(d, kInfinity) == 0.0);
  CHECK(delta(d, 2) == doctest::Approx((16.5 + 9 * std::log(2.0)) / 2));
  CHECK(delta(d, 2) == doctest::Approx(11.369).epsilon(1e-4));
  CHECK_THROWS_AS(DeltaSchedule(0.0, 0.5, 1.0), pforge::DomainError);
}

TEST_CASE("delta schedule properties") {
  for (auto [alpha, c, L] : {std::tuple{1.0, 0.5, 1.0}, std::tuple{0.5, 3.0, 0.2}, std::tuple{2.0, 1.0, 0.0}}) {
    DeltaSchedule d(alpha, c, L);
    std::size_t first_bad = 0;
    for (std::size_t j = 1; j < 1000000 && !first_bad; ++j)
      if (!(d(j) > d(j + 1))) first_bad = j;
    CHECK(first_bad == 0);
    for (std::size_t j = 1; j <= 10000; j += 7) {
      double ident = d(j) * static_cast<double>(j) * std::min(alpha, 1.0) - 9 * std::log(static_cast<double>(j));
      CHECK(ident == doctest::Approx(c + 2 * L + 14).epsilon(1e-12));
    }
    CHECK(d(0) == doctest::Approx(d(1) + 2 * L));
    CHECK(d(1000000) < 1e-3);
  }
}

TEST_CASE("bracket-negativity margin under demo constants") {
  const double alpha = 1, c = 0.5, L = 1;
  DeltaSchedule d(alpha, c, L);
  for (std::size_t j = 1; j <= 10000; ++j) {
    double jd = static_cast<double>(j);
    CHECK(jd * d(j) > (c + 2 * L + 9 + 9 * std::log(jd)) / alpha + 4);
  }
}

TEST_CASE("gamma grid") {
  auto g = gamma_grid(0, 0.5, 1.0 / 64, {Rational(1, 3)});
  CHECK(g.size() == 34);
  CHECK(g.front() == Rational(0));
  CHECK(g.back() == Rational(1, 2));
  CHECK(std::find(g.begin(), g.end(), Rational(1, 3)) != g.end());
  auto h = gamma_grid(0, 0.3, 0.25, {});
  CHECK(h == std::vector<Rational>{Rational(0), Rational(1, 4), Rational::from_double(0.3)});
  CHECK_THROWS_AS(gamma_grid(0, 0.5, 1.0 / 64, {Rational(2)}), pforge::DomainError);
}

TEST_CASE("demo spec values follow the slope function") {
  auto spec = demo_spec();
  REQUIRE(spec.grid.size() == 34);
  CHECK(spec.alphabet.size() == 4);
  for (const auto& p : spec.grid) {
    double g = p.gamma.gamma0.to_double();
    CHECK(std::abs(p.values[0] - (1 - g * g)) < 1e-6);
  }
}

TEST_CASE("phi_gamma_at examples") {
  auto spec = demo_spec();
  std::size_t idx = 16;  // gamma = 1/4
  REQUIRE(spec.grid[idx].gamma.gamma0 == Rational(1, 4));
  Word w = z_word(spec, Rational(1, 4), Rational(0), 0, 9);
  CHECK(phi_gamma_at(spec, w, 4, idx, 0, Mode::Optimistic) == spec.grid[idx].values[0]);
  CHECK(phi_gamma_at(spec, w, 4, idx, 0, Mode::Pessimistic) == spec.grid[idx].values[0] - spec.delta(5));
  Word bad(3, spec.alphabet.encode({1, 1}));
  CHECK(phi_gamma_at(spec, bad, 1, idx, 0, Mode::Optimistic) == spec.grid[idx].values[0] - 16.5);
  CHECK(phi_gamma_at(spec, bad, 0, idx, 0, Mode::Optimistic) == spec.grid[idx].values[0]);
}

TEST_CASE("phi_at pins to s(gamma) on generated windows") {
  auto spec = demo_spec();
  testsupport::Gen g(71);
  for (int i = 0; i < 200; ++i) {
    const auto& p = spec.grid[g.below(spec.grid.size())];
    Rational a(static_cast<std::int64_t>(g.below(1000)), 1000);
    Word w = z_word(spec, p.gamma.gamma0, a, g.range(-100, 100), 33);
    double phi = phi_at(spec, w, 16, Mode::Optimistic);
    CHECK(phi >= p.values[0]);
    CHECK(phi == phi_oracle(spec, w, 16, Mode::Optimistic));
    CHECK(phi <= p.values[0] + (2.0 / 33) / spec.target.alpha);
  }
}

TEST_CASE("phi_at on a block outside every Z_gamma") {
  auto spec = demo_spec();
  Word bad{spec.alphabet.encode({1, 1}), spec.alphabet.encode({1, 1}), spec.alphabet.encode({0, 0})};
  double phi = phi_at(spec, bad, 1, Mode::Optimistic);
  CHECK(phi <= 1 - 16.5);
  auto single = demo_spec(SpecOptions{.grid_override = std::vector<Rational>{Rational(1, 4)}});
  Word w = z_word(single, Rational(1, 4), Rational(0), 0, 5);
  CHECK(phi_at(single, w, 2, Mode::Optimistic) == phi_gamma_at(single, w, 2, 0, 0, Mode::Optimistic));
}

TEST_CASE("equicontinuity modulus") {
  auto spec = demo_spec();
  testsupport::Gen g(73);
  for (int i = 0; i < 200; ++i) {
    std::size_t l = static_cast<std::size_t>(g.range(1, 5));
    std::size_t n = 2 * l - 1 + 6;
    Word u(n), v(n);
    for (auto& x : u) x = g.range(0, 3);
    v = u;
    std::size_t c = n / 2;
    for (std::size_t k = 0; k < n; ++k)
      if (k + l <= c || k >= c + l) v[k] = g.range(0, 3);
    double du = phi_at(spec, u, c, Mode::Pessimistic), dv = phi_at(spec, v, c, Mode::Pessimistic);
    CHECK(std::abs(du - dv) <= spec.delta(l) + 1e-12);
  }
}

TEST_CASE("cylinder sums") {
  auto single = demo_spec(SpecOptions{.grid_override = std::vector<Rational>{Rational(1, 4)}});
  Word w = z_word(single, Rational(1, 4), Rational(0), 0, 8);
  CHECK(cylinder_sum_upper(single, w, {2.0}) == doctest::Approx(15.0).epsilon(1e-12));
  auto spec = demo_spec();
  double full = cylinder_sum_upper(spec, w, {2.0});
  CHECK(full >= 15.0 - 1e-9);
  CHECK(full <= 8 * 2 * 1.0);
  auto flat = demo_spec(SpecOptions{.grid_override = std::vector<Rational>{Rational(1, 4)}, .delta_scale = 0});
  Word any{0, 3, 3, 1, 2};
  CHECK(cylinder_sum_upper(flat, any, {2.0}) == doctest::Approx(5 * 2 * 0.9375).epsilon(1e-12));
}

TEST_CASE("phi and cylinder sums agree with the window oracle on random words") {
  auto spec = demo_spec();
  testsupport::Gen g(79);
  for (int i = 0; i < 150; ++i) {
    Word w(static_cast<std::size_t>(g.range(1, 11)));
    for (auto& x : w) x = g.range(0, 3);
    double t = g.uniform(1.1, 4);
    double sum = 0;
    for (std::size_t c = 0; c < w.size(); ++c) {
      double o = phi_oracle(spec, w, c, Mode::Optimistic);
      CHECK(phi_at(spec, w, c, Mode::Optimistic) == o);
      CHECK(phi_at(spec, w, c, Mode::Pessimistic) == phi_oracle(spec, w, c, Mode::Pessimistic));
      sum += t * o;
    }
    CHECK(cylinder_sum_upper(spec, w, {t}) == doctest::Approx(sum).epsilon(1e-12));
  }
}

TEST_CASE("theorem-form spec from the 2-D example") {
  auto target = pforge::convex::quadratic_ratio_target(0.5);
  target.L = 4;
  target.c = 0.5;
  std::vector<pforge::convex::Vec> nodes{{2, 1}, {1, 1}, {2, 2}};
  auto spec = theorem_spec(target, nodes);
  CHECK(spec.value_count() == 2);
  CHECK(spec.grid.size() >= 2);
  for (const auto& p : spec.grid) CHECK(p.gamma.gamma0 == Rational(0));
  CHECK(spec.grid[0].values[0] == doctest::Approx(1.0));
  CHECK(spec.grid[0].values[1] == doctest::Approx(-1.0));
  CHECK(spec.alphabet.components() == 4);
}
