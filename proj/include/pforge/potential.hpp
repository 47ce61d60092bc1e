#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "pforge/convex_model.hpp"
#include "pforge/product_shift.hpp"

namespace pforge::potential {

constexpr std::size_t kInfinity = std::numeric_limits<std::size_t>::max();

/// delta_j = scale * (c + 2L + 14 + 9 ln j) / (j min(alpha, 1)) for j >= 1,
/// delta_0 = delta_1 + 2L, delta_inf = 0. scale = 1 is the unmodified schedule.
class DeltaSchedule {
 public:
  DeltaSchedule(double alpha, double c, double L, double scale = 1.0);
  double operator()(std::size_t j) const;
  double alpha() const { return alpha_; }
  double c() const { return c_; }
  double L() const { return L_; }
  double scale() const { return scale_; }

 private:
  double alpha_, c_, L_, scale_;
};

struct GridPoint {
  product::GammaVector gamma;
  /// Values entering phi_{k,gamma} = value_k - delta: s(gamma0) in the
  /// one-parameter form, the slopes gamma_1..gamma_m in the theorem form.
  std::vector<double> values;
};

struct SpecOptions {
  double eta = 1.0 / 64;
  /// Extra gamma0 values merged into the grid (e.g. "1/3").
  std::vector<Rational> extra;
  /// Replaces the regular grid entirely when set.
  std::optional<std::vector<Rational>> grid_override;
  double delta_scale = 1.0;
  int decorations = 1;
  std::size_t precision_bits = beta::kDefaultPrecisionBits;
};

struct PotentialSpec {
  convex::ConvexTarget target;
  product::ProductAlphabet alphabet;
  std::vector<GridPoint> grid;
  std::vector<std::shared_ptr<product::ZGamma>> members;
  DeltaSchedule delta;
  double eta = 0;
  int decorations = 1;
  std::size_t precision_bits = beta::kDefaultPrecisionBits;

  std::size_t value_count() const { return grid.empty() ? 1 : grid.front().values.size(); }
};

/// gamma0 grid b, b+eta, ..., plus c and any extras, sorted and deduplicated.
std::vector<Rational> gamma_grid(double b, double c, double eta, const std::vector<Rational>& extra);

PotentialSpec one_parameter_spec(const convex::ConvexTarget& target, const SpecOptions& options = {});
/// Theorem form: grid points are support samples (h, v) at the given t-nodes.
PotentialSpec theorem_spec(const convex::ConvexTarget& target, const std::vector<convex::Vec>& t_nodes,
                           const SpecOptions& options = {});

enum class Mode { Optimistic, Pessimistic };

double delta(const DeltaSchedule& schedule, std::size_t j);

/// value_k(gamma) - delta_{j_gamma}; optimistic reading takes delta_inf on a
/// window capped by the word boundary.
double phi_gamma_at(const PotentialSpec& spec, const product::Word& word, std::size_t center,
                    std::size_t grid_index, std::size_t k, Mode mode);
/// Max over the gamma grid of phi_gamma_at.
double phi_at(const PotentialSpec& spec, const product::Word& word, std::size_t center, Mode mode,
              std::size_t k = 0);
/// sum_i sum_k t_k phi_k(i) in the optimistic reading.
double cylinder_sum_upper(const PotentialSpec& spec, const product::Word& word, const convex::Vec& t);

}  // namespace pforge::potential
