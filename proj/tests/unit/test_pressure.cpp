#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "../support.hpp"
#include "pforge/errors.hpp"
#include "pforge/pressure.hpp"

using namespace pforge::pressure;
using pforge::Rational;
using pforge::potential::PotentialSpec;
using pforge::potential::SpecOptions;

namespace {

PotentialSpec demo_spec(SpecOptions opts = {}) {
  if (opts.extra.empty() && !opts.grid_override) opts.extra = {Rational(1, 3)};
  return pforge::potential::one_parameter_spec(pforge::convex::demo_target(), opts);
}

Budget exact() {
  Budget b;
  b.prune_relative = 0;
  return b;
}

// (1/n) ln of the sum over all words of exp(cylinder sum), by enumeration.
double brute_upper(const PotentialSpec& spec, const pforge::convex::Vec& t, std::size_t n) {
  const auto A = static_cast<std::uint64_t>(spec.alphabet.size());
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= A;
  std::vector<double> logs;
  double mx = -1e300;
  for (std::uint64_t code = 0; code < total; ++code) {
    pforge::product::Word w(n);
    std::uint64_t c = code;
    for (std::size_t i = n; i-- > 0;) {
      w[i] = static_cast<int>(c % A);
      c /= A;
    }
    logs.push_back(pforge::potential::cylinder_sum_upper(spec, w, t));
    mx = std::max(mx, logs.back());
  }
  double s = 0;
  for (double l : logs) s += std::exp(l - mx);
  return (mx + std::log(s) + std::log(static_cast<double>(spec.decorations))) / static_cast<double>(n);
}

struct ThreadEnv {
  explicit ThreadEnv(const char* v) { setenv("PRESSURE_FORGE_THREADS", v, 1); }
  ~ThreadEnv() { unsetenv("PRESSURE_FORGE_THREADS"); }
};

}  // namespace

TEST_CASE("upper pressure equals brute-force enumeration") {
  auto spec = demo_spec();
  for (std::size_t n = 1; n <= 5; ++n)
    for (double t : {1.1, 1.5, 2.0, 3.0}) {
      auto r = upper_pressure(spec, {t}, n, exact());
      CHECK(r.value == doctest::Approx(brute_upper(spec, {t}, n)).epsilon(1e-12));
      CHECK(r.pruned_mass_bound == 0.0);
      CHECK(r.pruned_subtrees == 0);
    }
}

TEST_CASE("upper pressure matches enumeration on random grids") {
  testsupport::Gen g(97);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<Rational> grid;
    int m = g.range(1, 6);
    for (int i = 0; i < m; ++i) grid.push_back(Rational(g.range(0, 32), 64));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    SpecOptions opts;
    opts.grid_override = grid;
    opts.delta_scale = g.uniform(0.01, 1);
    auto spec = demo_spec(opts);
    std::size_t n = static_cast<std::size_t>(g.range(1, 5));
    double t = g.uniform(1.05, 4);
    CHECK(upper_pressure(spec, {t}, n, exact()).value == doctest::Approx(brute_upper(spec, {t}, n)).epsilon(1e-12));
  }
}

TEST_CASE("theorem form upper pressure equals enumeration") {
  auto target = pforge::convex::quadratic_ratio_target(0.5);
  target.L = 1;
  auto spec = pforge::potential::theorem_spec(target, {{2, 1}, {1, 1}, {1, 2}});
  std::size_t n = 1;
  double A = static_cast<double>(spec.alphabet.size());
  while (std::pow(A, static_cast<double>(n + 1)) <= 20000) ++n;
  for (pforge::convex::Vec t : {pforge::convex::Vec{2, 1}, pforge::convex::Vec{1.5, 3}}) {
    auto r = upper_pressure(spec, t, n, exact());
    CHECK(r.value == doctest::Approx(brute_upper(spec, t, n)).epsilon(1e-12));
  }
}

TEST_CASE("pruning bounds bracket the exact sum") {
  auto spec = demo_spec();
  Budget b;
  b.prune_relative = 1e-3;
  for (double t : {1.5, 3.0, 6.0}) {
    auto ex = upper_pressure(spec, {t}, 6, exact()).value;
    auto r = upper_pressure(spec, {t}, 6, b);
    CHECK(r.value >= ex - 1e-12);
    CHECK(r.value - r.pruned_mass_bound <= ex + 1e-12);
    CHECK(r.pruned_mass_bound >= 0.0);
  }
}

TEST_CASE("constant potential has pressure ln|A| + t v") {
  SpecOptions opts;
  opts.grid_override = std::vector<Rational>{Rational(1, 4)};
  opts.delta_scale = 0;
  auto spec = demo_spec(opts);
  for (std::size_t n : {1u, 3u, 6u})
    for (double t : {1.5, 2.0}) {
      auto r = upper_pressure(spec, {t}, n);
      CHECK(r.value == doctest::Approx(std::log(4.0) + t * 0.9375).epsilon(1e-12));
    }
}

TEST_CASE("lower pressure examples") {
  auto spec = demo_spec();
  CHECK(lower_pressure(spec, {1.5}) == doctest::Approx(5.0 / 3).epsilon(1e-9));
  CHECK(lower_pressure(spec, {2.0}) == doctest::Approx(2.125).epsilon(1e-9));
  testsupport::Gen g(101);
  for (int i = 0; i < 100; ++i) {
    double t = g.uniform(1.01, 20);
    double lo = lower_pressure(spec, {t});
    CHECK(lo <= t + 1 / (4 * t) + 1e-9);
    CHECK(lo >= t + 1 / (4 * t) - t * (spec.eta * spec.eta) - 1e-6);
  }
}

TEST_CASE("decorations add ln k / n to the upper pressure only") {
  SpecOptions plain_opts;
  auto plain = demo_spec(plain_opts);
  SpecOptions opts;
  opts.decorations = 3;
  auto dec = demo_spec(opts);
  for (std::size_t n : {2u, 4u, 5u}) {
    double u0 = upper_pressure(plain, {2.0}, n, exact()).value;
    double u3 = upper_pressure(dec, {2.0}, n, exact()).value;
    CHECK(u3 == doctest::Approx(u0 + std::log(3.0) / static_cast<double>(n)).epsilon(1e-12));
    CHECK(u3 == doctest::Approx(brute_upper(dec, {2.0}, n)).epsilon(1e-12));
  }
  CHECK(lower_pressure(dec, {2.0}) == lower_pressure(plain, {2.0}));
}

TEST_CASE("doubling the length never raises the upper pressure") {
  auto spec = demo_spec();
  for (std::size_t n : {1u, 2u, 3u, 4u})
    for (double t : {1.2, 2.0, 5.0})
      CHECK(upper_pressure(spec, {t}, 2 * n, exact()).value <= upper_pressure(spec, {t}, n, exact()).value + 1e-12);
}

TEST_CASE("sandwich rows") {
  auto spec = demo_spec();
  auto rows = sandwich(spec, {{1.5}, {2.0}, {3.0}}, {4, 6, 8});
  REQUIRE(rows.size() == 9);
  for (const auto& r : rows) {
    CHECK_FALSE(r.budget_exceeded);
    CHECK(r.lower <= r.target + 1e-9);
    CHECK(r.target <= r.upper + 1e-9);
    CHECK(r.gap == doctest::Approx(r.upper - r.lower));
    CHECK(r.target == doctest::Approx(r.t[0] + 1 / (4 * r.t[0])));
    CHECK(r.gamma_grid_spacing == spec.eta);
  }
  for (std::size_t i = 0; i + 1 < rows.size(); ++i)
    if (rows[i].t == rows[i + 1].t) CHECK(rows[i + 1].gap < rows[i].gap);
}

TEST_CASE("results do not depend on the thread count") {
  auto spec = demo_spec();
  UpperResult one, four;
  {
    ThreadEnv env("1");
    one = upper_pressure(spec, {2.0}, 8);
  }
  {
    ThreadEnv env("4");
    four = upper_pressure(spec, {2.0}, 8);
  }
  CHECK(one.value == four.value);
  CHECK(one.log_partition == four.log_partition);
  CHECK(one.pruned_mass_bound == four.pruned_mass_bound);
  CHECK(one.leaves == four.leaves);
}

TEST_CASE("budget errors") {
  auto spec = demo_spec();
  Budget small;
  small.max_words = 1000;
  CHECK_THROWS_AS(upper_pressure(spec, {2.0}, 5, small), pforge::BudgetExceeded);
  CHECK_NOTHROW(upper_pressure(spec, {2.0}, 4, small));
  Budget tables;
  tables.max_table_bytes = 100;
  CHECK_THROWS_AS(WindowTables(spec, 6, tables), pforge::BudgetExceeded);
  auto rows = sandwich(spec, {{2.0}}, {4, 6}, small);
  REQUIRE(rows.size() == 2);
  CHECK_FALSE(rows[0].budget_exceeded);
  CHECK(rows[1].budget_exceeded);
  CHECK(std::isnan(rows[1].upper));
  CHECK_FALSE(rows[1].error.empty());
  CHECK_THROWS_AS(upper_pressure(spec, {2.0, 1.0}, 3), pforge::DomainError);
}
