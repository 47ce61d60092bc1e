#pragma once

#include <vector>

#include <json.hpp>

#include "pforge/convex_model.hpp"

namespace pforge::targets {

/// Convex target with first-order phase transitions at the points z_j:
/// g(s) = sum_{z_j <= s} alpha / (2^j z_j^2), f(t) = base + integral_0^t g.
struct PhaseTransitionSpec {
  double alpha = 1.0;
  std::vector<double> points;
  double base_constant = 3.0;
};

void validate(const PhaseTransitionSpec& spec);
/// Jump of g at the j-th listed point (1-based j in list order).
double jump_at(const PhaseTransitionSpec& spec, std::size_t index);
double g_of(const PhaseTransitionSpec& spec, double s);
double f_of(const PhaseTransitionSpec& spec, double t);
convex::ConvexTarget as_convex_target(const PhaseTransitionSpec& spec);

PhaseTransitionSpec phase_transition_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PhaseTransitionSpec& spec);

/// Builds a target from {"kind": "closed_form" | "phase_transition" | "support_table", ...}.
convex::ConvexTarget target_from_json(const nlohmann::json& j);
nlohmann::json describe(const convex::ConvexTarget& target);

}  // namespace pforge::targets
