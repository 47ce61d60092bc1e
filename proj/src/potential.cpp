#include "pforge/potential.hpp"

#include <algorithm>
#include <cmath>

#include "pforge/errors.hpp"

namespace pforge::potential {

DeltaSchedule::DeltaSchedule(double alpha, double c, double L, double scale)
    : alpha_(alpha), c_(c), L_(L), scale_(scale) {
  if (!(alpha > 0)) throw DomainError("delta schedule needs alpha > 0");
  if (!(L >= 0) || !std::isfinite(L)) throw DomainError("delta schedule needs a finite L >= 0");
  if (!(scale >= 0)) throw DomainError("delta scale must be non-negative");
}

double DeltaSchedule::operator()(std::size_t j) const {
  if (j == kInfinity) return 0.0;
  if (j == 0) return (*this)(1) + 2 * L_;
  double jd = static_cast<double>(j);
  return scale_ * (c_ + 2 * L_ + 14 + 9 * std::log(jd)) / (jd * std::min(alpha_, 1.0));
}

double delta(const DeltaSchedule& schedule, std::size_t j) { return schedule(j); }

std::vector<Rational> gamma_grid(double b, double c, double eta, const std::vector<Rational>& extra) {
  if (!(eta > 0)) throw DomainError("grid spacing must be positive");
  if (!(c >= b)) throw DomainError("grid needs b <= c");
  Rational rb = Rational::from_double(b);
  Rational rc = Rational::from_double(c);
  Rational step = Rational::from_double(eta);
  std::vector<Rational> g;
  for (Rational x = rb; x <= rc; x = x + step) {
    g.push_back(x);
    if (g.size() > 1'000'000) throw BudgetExceeded("gamma grid too large");
  }
  if (g.back() != rc) g.push_back(rc);
  for (const Rational& x : extra) {
    if (x < rb || x > rc) throw DomainError("extra grid point " + x.str() + " outside [b, c]");
    g.push_back(x);
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

namespace {

PotentialSpec base_spec(const convex::ConvexTarget& target, product::ProductAlphabet alphabet,
                        const SpecOptions& options) {
  if (options.decorations < 1) throw DomainError("decorations must be at least 1");
  return PotentialSpec{target,
                       std::move(alphabet),
                       {},
                       {},
                       DeltaSchedule(target.alpha, target.c, std::isfinite(target.L) ? target.L : 0.0,
                                     options.delta_scale),
                       options.eta,
                       options.decorations,
                       options.precision_bits};
}

}  // namespace

PotentialSpec one_parameter_spec(const convex::ConvexTarget& target, const SpecOptions& options) {
  if (target.arity != 1) throw DomainError("one-parameter spec needs a one-parameter target");
  PotentialSpec spec = base_spec(
      target, product::ProductAlphabet(product::Form::OneParameter, 1, target.b, target.c, target.L), options);
  std::vector<Rational> gammas =
      options.grid_override ? *options.grid_override : gamma_grid(target.b, target.c, options.eta, options.extra);
  if (gammas.empty()) throw EmptySample("gamma grid is empty");
  for (const Rational& g : gammas) {
    GridPoint p;
    p.gamma.gamma0 = g;
    p.values = {convex::slope_function(target, g.to_double())};
    spec.grid.push_back(p);
    spec.members.push_back(std::make_shared<product::ZGamma>(spec.alphabet, p.gamma, options.precision_bits));
  }
  return spec;
}

PotentialSpec theorem_spec(const convex::ConvexTarget& target, const std::vector<convex::Vec>& t_nodes,
                           const SpecOptions& options) {
  PotentialSpec spec = base_spec(
      target, product::ProductAlphabet(product::Form::Theorem, target.arity, target.b, target.c, target.L), options);
  const double tol = std::max(target.tol, 1e-6);
  for (const auto& sp : convex::sample_support_set(target, t_nodes)) {
    double h = std::clamp(sp.h, target.b, target.c);
    if (std::abs(h - sp.h) > tol) throw DomainError("support intercept outside [b, c]");
    GridPoint p;
    p.gamma.gamma0 = Rational::from_double(h);
    for (double v : sp.v) {
      if (std::abs(v) > target.L + tol) throw DomainError("support slope outside [-L, L]");
      p.gamma.slopes.push_back(Rational::from_double(std::clamp(v, -target.L, target.L)));
      p.values.push_back(std::clamp(v, -target.L, target.L));
    }
    spec.grid.push_back(p);
    spec.members.push_back(std::make_shared<product::ZGamma>(spec.alphabet, p.gamma, options.precision_bits));
  }
  if (spec.grid.empty()) throw EmptySample("support sample is empty");
  return spec;
}

double phi_gamma_at(const PotentialSpec& spec, const product::Word& word, std::size_t center, std::size_t grid_index,
                    std::size_t k, Mode mode) {
  const GridPoint& p = spec.grid.at(grid_index);
  product::Window w = product::j_window(word, center, *spec.members.at(grid_index));
  double v = p.values.at(k);
  if (w.boundary_capped && mode == Mode::Optimistic) return v;
  return v - spec.delta(w.j);
}

double phi_at(const PotentialSpec& spec, const product::Word& word, std::size_t center, Mode mode, std::size_t k) {
  if (spec.grid.empty()) throw EmptySample("potential has an empty gamma grid");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < spec.grid.size(); ++g)
    best = std::max(best, phi_gamma_at(spec, word, center, g, k, mode));
  return best;
}

double cylinder_sum_upper(const PotentialSpec& spec, const product::Word& word, const convex::Vec& t) {
  if (word.empty()) throw DomainError("cylinder_sum_upper needs a non-empty word");
  if (t.size() != spec.value_count()) throw DomainError("t has the wrong number of components");
  double total = 0;
  for (std::size_t i = 0; i < word.size(); ++i)
    for (std::size_t k = 0; k < t.size(); ++k) total += t[k] * phi_at(spec, word, i, Mode::Optimistic, k);
  return total;
}

}  // namespace pforge::potential
