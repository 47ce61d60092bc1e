#include "pforge/targets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pforge/errors.hpp"

namespace pforge::targets {

using nlohmann::json;

void validate(const PhaseTransitionSpec& spec) {
  if (!(spec.alpha > 0)) throw DomainError("phase-transition alpha must be positive");
  for (double z : spec.points)
    if (!(z > spec.alpha)) throw DomainError("phase-transition point " + std::to_string(z) + " not above alpha");
}

double jump_at(const PhaseTransitionSpec& spec, std::size_t index) {
  double z = spec.points.at(index);
  return spec.alpha / (std::ldexp(1.0, static_cast<int>(index + 1)) * z * z);
}

double g_of(const PhaseTransitionSpec& spec, double s) {
  double sum = 0;
  for (std::size_t j = 0; j < spec.points.size(); ++j)
    if (spec.points[j] <= s) sum += jump_at(spec, j);
  return sum;
}

double f_of(const PhaseTransitionSpec& spec, double t) {
  if (!(t > spec.alpha)) throw DomainError("f_of needs t > alpha");
  std::vector<std::size_t> order(spec.points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return spec.points[a] < spec.points[b]; });
  // g is a step function: rectangles between consecutive sorted points
  double area = 0;
  double level = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    double z = spec.points[order[k]];
    if (z > t) break;
    level += jump_at(spec, order[k]);
    double right = (k + 1 < order.size()) ? std::min(spec.points[order[k + 1]], t) : t;
    area += level * (right - z);
  }
  return spec.base_constant + area;
}

convex::ConvexTarget as_convex_target(const PhaseTransitionSpec& spec) {
  validate(spec);
  convex::ConvexTarget t;
  t.arity = 1;
  t.alpha = spec.alpha;
  t.kind = "phase_transition";
  t.name = "phase_transition";
  double slope_sum = 0;
  double moment = 0;
  for (std::size_t j = 0; j < spec.points.size(); ++j) {
    slope_sum += jump_at(spec, j);
    moment += jump_at(spec, j) * spec.points[j];
  }
  // intercepts f(t) - t g(t) = base - sum_{z_j <= t} w_j z_j decrease to this
  t.b = std::max(1.0, spec.base_constant - moment);
  t.c = spec.base_constant;
  t.L = slope_sum;
  t.body = [spec](const convex::Vec& x) { return f_of(spec, x[0]); };
  return t;
}

namespace {

double number(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path + key, std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(path + key, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& path) {
  return j.contains(key) ? number(j, key, path) : fallback;
}

}  // namespace

PhaseTransitionSpec phase_transition_from_json(const json& j) {
  const std::string path = "target.";
  PhaseTransitionSpec s;
  s.alpha = number(j, "alpha", path);
  s.base_constant = number_or(j, "base_constant", 3.0, path);
  if (j.contains("points")) {
    if (!j.at("points").is_array()) throw ConfigError(path + "points", "field 'points' must be an array");
    for (const auto& z : j.at("points")) {
      if (!z.is_number()) throw ConfigError(path + "points", "phase-transition points must be numbers");
      s.points.push_back(z.get<double>());
    }
  }
  try {
    validate(s);
  } catch (const DomainError& e) {
    throw ConfigError(path + "points", e.what());
  }
  return s;
}

json to_json(const PhaseTransitionSpec& spec) {
  return json{{"kind", "phase_transition"}, {"alpha", spec.alpha}, {"points", spec.points},
              {"base_constant", spec.base_constant}};
}

convex::ConvexTarget target_from_json(const json& j) {
  const std::string path = "target.";
  if (!j.is_object()) throw ConfigError("target", "target must be a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw ConfigError(path + "kind", "target needs a string 'kind'");
  std::string kind = j.at("kind").get<std::string>();
  convex::ConvexTarget t;
  if (kind == "phase_transition") {
    t = as_convex_target(phase_transition_from_json(j));
  } else if (kind == "closed_form") {
    std::string name = j.value("name", std::string("demo"));
    if (name == "demo") {
      t = convex::demo_target();
    } else if (name == "linear") {
      t = convex::linear_target(number(j, "h0", path), number(j, "v0", path), number_or(j, "alpha", 1.0, path));
    } else if (name == "max_affine") {
      if (!j.contains("pieces") || !j.at("pieces").is_array())
        throw ConfigError(path + "pieces", "max_affine needs an array 'pieces' of [h, v] pairs");
      std::vector<std::pair<double, double>> pieces;
      for (const auto& p : j.at("pieces")) {
        if (!p.is_array() || p.size() != 2) throw ConfigError(path + "pieces", "each piece must be [h, v]");
        pieces.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
      t = convex::max_affine_target(std::move(pieces), number_or(j, "alpha", 1.0, path));
    } else if (name == "quadratic_ratio") {
      t = convex::quadratic_ratio_target(number_or(j, "alpha", 0.5, path));
    } else {
      throw ConfigError(path + "name", "unknown closed-form target '" + name + "'");
    }
  } else if (kind == "support_table") {
    if (!j.contains("points") || !j.at("points").is_array() || j.at("points").empty())
      throw ConfigError(path + "points", "support_table needs a non-empty array 'points' of [h, v...] rows");
    std::vector<convex::SupportPoint> rows;
    for (const auto& r : j.at("points")) {
      if (!r.is_array() || r.size() < 2) throw ConfigError(path + "points", "each row must be [h, v1, ...]");
      convex::SupportPoint sp;
      sp.h = r[0].get<double>();
      for (std::size_t k = 1; k < r.size(); ++k) sp.v.push_back(r[k].get<double>());
      rows.push_back(std::move(sp));
    }
    try {
      t = convex::support_table_target(std::move(rows), number(j, "alpha", path));
    } catch (const DomainError& e) {
      throw ConfigError(path + "points", e.what());
    }
  } else {
    throw ConfigError(path + "kind", "unknown target kind '" + kind + "'");
  }
  t.alpha = number_or(j, "alpha", t.alpha, path);
  t.b = number_or(j, "b", t.b, path);
  t.c = number_or(j, "c", t.c, path);
  t.L = number_or(j, "L", t.L, path);
  if (!(t.alpha > 0)) throw ConfigError(path + "alpha", "alpha must be positive");
  if (!(t.b >= 0) || !(t.c >= t.b)) throw ConfigError(path + "b", "intercept interval needs 0 <= b <= c");
  if (!(t.L >= 0)) throw ConfigError(path + "L", "L must be non-negative");
  return t;
}

json describe(const convex::ConvexTarget& target) {
  json j{{"kind", target.kind}, {"name", target.name}, {"arity", target.arity}, {"alpha", target.alpha},
         {"b", target.b},       {"c", target.c},       {"tol", target.tol}};
  if (std::isfinite(target.L))
    j["L"] = target.L;
  else
    j["L"] = "inf";
  return j;
}

}  // namespace pforge::targets
