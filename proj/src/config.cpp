#include "pforge/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "pforge/errors.hpp"
#include "pforge/targets.hpp"

namespace pforge::config {

using nlohmann::json;

namespace {

std::vector<std::string> split_path(const std::string& field) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : field) {
    if (ch == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

// Line of the deepest key of `field` found in order in the source text.
std::size_t line_of_field(const std::string& text, const std::string& field) {
  std::size_t pos = 0, found = std::string::npos;
  for (const auto& key : split_path(field)) {
    std::size_t p = text.find("\"" + key + "\"", pos);
    if (p == std::string::npos) break;
    found = p;
    pos = p + key.size() + 2;
  }
  return found == std::string::npos ? 1 : line_of_offset(text, found);
}

[[noreturn]] void fail(const std::string& field, const std::string& why) { throw ConfigError(field, why); }

double number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

Rational rational(const json& j, const std::string& field) {
  try {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number()) return Rational::parse(j.dump());
  } catch (const Error& e) {
    fail(field, e.what());
  }
  fail(field, "expected a number or a fraction string");
}

void check_keys(const json& obj, const std::string& prefix, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(prefix, "expected an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) fail(prefix.empty() ? key : prefix + "." + key, "unknown key");
}

RunConfig parse_object(const json& root) {
  RunConfig cfg;
  check_keys(root, "", {"target", "form", "grid", "t_nodes", "decorations", "delta_scale", "precision_bits", "budget",
                        "seed", "output"});
  if (!root.contains("target")) fail("target", "missing required key");
  cfg.target_json = root["target"];
  cfg.target = targets::target_from_json(cfg.target_json);

  std::string form = root.value("form", std::string("one-parameter"));
  if (form == "one-parameter")
    cfg.form = product::Form::OneParameter;
  else if (form == "theorem-1")
    cfg.form = product::Form::Theorem;
  else
    fail("form", "expected \"one-parameter\" or \"theorem-1\"");
  if (cfg.form == product::Form::OneParameter && cfg.target.arity != 1)
    fail("form", "one-parameter form needs a one-parameter target");

  const double b = cfg.target.b, c = cfg.target.c;
  if (root.contains("grid")) {
    const json& g = root["grid"];
    check_keys(g, "grid", {"eta", "extra", "values"});
    if (g.contains("eta")) {
      cfg.options.eta = number(g["eta"], "grid.eta");
      if (!(cfg.options.eta > 0)) fail("grid.eta", "must be positive");
    }
    auto read_list = [&](const char* key) {
      std::string field = std::string("grid.") + key;
      if (!g[key].is_array()) fail(field, "expected an array");
      std::vector<Rational> out;
      for (const auto& x : g[key]) {
        Rational r = rational(x, field);
        if (r < Rational::from_double(b) || r > Rational::from_double(c))
          fail(field, "grid point " + r.str() + " outside [b, c]");
        out.push_back(r);
      }
      return out;
    };
    if (g.contains("extra")) cfg.options.extra = read_list("extra");
    if (g.contains("values")) {
      cfg.options.grid_override = read_list("values");
      if (cfg.options.grid_override->empty()) fail("grid.values", "must not be empty");
    }
  }

  if (root.contains("t_nodes")) {
    if (!root["t_nodes"].is_array()) fail("t_nodes", "expected an array");
    for (const auto& node : root["t_nodes"]) {
      convex::Vec t;
      if (node.is_number())
        t.push_back(node.get<double>());
      else if (node.is_array())
        for (const auto& x : node) t.push_back(number(x, "t_nodes"));
      else
        fail("t_nodes", "expected numbers or arrays");
      if (t.size() != static_cast<std::size_t>(cfg.target.arity)) fail("t_nodes", "node arity differs from the target");
      for (double x : t)
        if (!(x > cfg.target.alpha)) fail("t_nodes", "every node must exceed alpha");
      cfg.t_nodes.push_back(t);
    }
  }
  if (cfg.form == product::Form::Theorem && cfg.t_nodes.empty()) fail("t_nodes", "theorem-1 form needs t_nodes");

  if (root.contains("decorations")) {
    const json& d = root["decorations"];
    if (!d.is_number_integer() || d.get<long long>() < 1) fail("decorations", "expected an integer >= 1");
    cfg.options.decorations = d.get<int>();
  }
  if (root.contains("delta_scale")) {
    cfg.options.delta_scale = number(root["delta_scale"], "delta_scale");
    if (!(cfg.options.delta_scale >= 0)) fail("delta_scale", "must be non-negative");
  }
  if (root.contains("precision_bits")) {
    const json& p = root["precision_bits"];
    if (!p.is_number_integer() || p.get<long long>() < 64) fail("precision_bits", "expected an integer >= 64");
    cfg.options.precision_bits = p.get<std::size_t>();
  }
  if (root.contains("budget")) {
    const json& bj = root["budget"];
    check_keys(bj, "budget", {"max_words", "max_table_bytes", "time_limit_s", "prune_relative"});
    if (bj.contains("max_words")) cfg.budget.max_words = number(bj["max_words"], "budget.max_words");
    if (bj.contains("max_table_bytes"))
      cfg.budget.max_table_bytes = number(bj["max_table_bytes"], "budget.max_table_bytes");
    if (bj.contains("time_limit_s")) cfg.budget.time_limit_s = number(bj["time_limit_s"], "budget.time_limit_s");
    if (bj.contains("prune_relative")) {
      cfg.budget.prune_relative = number(bj["prune_relative"], "budget.prune_relative");
      if (!(cfg.budget.prune_relative > 0 && cfg.budget.prune_relative < 1))
        fail("budget.prune_relative", "must lie in (0, 1)");
    }
    if (!(cfg.budget.max_words > 0)) fail("budget.max_words", "must be positive");
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) fail("seed", "expected a non-negative integer");
    cfg.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("output")) {
    const json& o = root["output"];
    check_keys(o, "output", {"csv", "json"});
    if (o.contains("csv")) cfg.csv_out = o["csv"].get<std::string>();
    if (o.contains("json")) cfg.json_out = o["json"].get<std::string>();
  }
  cfg.hash = fnv1a(root.dump());
  return cfg;
}

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", source + ":" + std::to_string(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1)) +
                              ": invalid JSON: " + e.what());
  }
  try {
    return parse_object(root);
  } catch (const ConfigError& e) {
    std::string field = e.field().empty() ? "<root>" : e.field();
    throw ConfigError(e.field(), source + ":" + std::to_string(line_of_field(text, e.field())) + ": " + field + ": " +
                                     e.what());
  } catch (const json::exception& e) {
    throw ConfigError("", source + ":1: " + e.what());
  } catch (const Error& e) {
    throw ConfigError("", source + ":1: " + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", path + ":0: cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

potential::PotentialSpec build_spec(const RunConfig& cfg) {
  if (cfg.form == product::Form::OneParameter) return potential::one_parameter_spec(cfg.target, cfg.options);
  return potential::theorem_spec(cfg.target, cfg.t_nodes, cfg.options);
}

Manifest manifest_for(const RunConfig& cfg, const potential::PotentialSpec& spec) {
  Manifest m;
  m.config_hash = cfg.hash;
  m.grid_spacing = spec.eta;
  m.grid_points = spec.grid.size();
  m.precision_bits = spec.precision_bits;
  return m;
}

json to_json(const Manifest& m) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(m.config_hash));
  return json{{"version", m.version},
              {"config_hash", hex},
              {"gamma_grid_spacing", m.grid_spacing},
              {"gamma_grid_points", m.grid_points},
              {"precision_bits", m.precision_bits}};
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

void write_pressure_csv(std::ostream& out, const std::vector<pressure::PressureRow>& rows, const Manifest& m) {
  json mj = to_json(m);
  out << "# pressure_forge " << m.version << "\n";
  out << "# config_hash=" << mj["config_hash"].get<std::string>() << "\n";
  out << "# gamma_grid_spacing=" << format_double(m.grid_spacing) << "\n";
  out << "# gamma_grid_points=" << m.grid_points << "\n";
  out << "# precision_bits=" << m.precision_bits << "\n";
  out << kPressureColumns << "\n";
  for (const auto& r : rows) {
    std::string t;
    for (std::size_t k = 0; k < r.t.size(); ++k) t += (k ? ";" : "") + format_double(r.t[k]);
    out << t << ',' << r.n << ',' << (r.budget_exceeded ? "" : format_double(r.upper)) << ','
        << format_double(r.lower) << ',' << format_double(r.target) << ','
        << (r.budget_exceeded ? "" : format_double(r.gap)) << ',' << format_double(r.gamma_grid_spacing) << ','
        << (r.budget_exceeded ? "" : format_double(r.pruned_mass_bound)) << "\n";
  }
}

}  // namespace pforge::config
