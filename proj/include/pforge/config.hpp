#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pforge/convex_model.hpp"
#include "pforge/potential.hpp"
#include "pforge/pressure.hpp"

namespace pforge::config {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  nlohmann::json target_json;
  convex::ConvexTarget target;
  product::Form form = product::Form::OneParameter;
  potential::SpecOptions options;
  /// t-nodes sampling the support set in the theorem form.
  std::vector<convex::Vec> t_nodes;
  pressure::Budget budget;
  std::uint64_t seed = 1;
  std::string csv_out;
  std::string json_out;
  std::uint64_t hash = 0;
};

/// Parses and validates a config. Errors are ConfigError whose message
/// reads "<source>:<line>: <field>: <reason>".
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

potential::PotentialSpec build_spec(const RunConfig& cfg);

std::uint64_t fnv1a(const std::string& bytes);

struct Manifest {
  std::uint64_t config_hash = 0;
  double grid_spacing = 0.0;
  std::size_t grid_points = 0;
  std::size_t precision_bits = 0;
  std::string version = kVersion;
};

Manifest manifest_for(const RunConfig& cfg, const potential::PotentialSpec& spec);
nlohmann::json to_json(const Manifest& m);

/// Exact shortest round-trip rendering of a double.
std::string format_double(double x);

inline constexpr const char* kPressureColumns =
    "t,n,upper,lower,target,gap,gamma_grid_spacing,pruned_mass_bound";

/// '#'-prefixed manifest lines, the header row, then one line per row.
/// Multi-parameter t is written as t1;t2;...; rows over budget leave upper and gap empty.
void write_pressure_csv(std::ostream& out, const std::vector<pressure::PressureRow>& rows, const Manifest& m);

}  // namespace pforge::config
