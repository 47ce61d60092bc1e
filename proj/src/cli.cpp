#include "pforge/cli.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pforge/beta_shift.hpp"
#include "pforge/config.hpp"
#include "pforge/errors.hpp"
#include "pforge/pinning.hpp"
#include "pforge/potential.hpp"
#include "pforge/pressure.hpp"
#include "pforge/sturmian.hpp"
#include "pforge/targets.hpp"

namespace pforge::cli {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) parts.push_back(cur);
  return parts;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw CLI::ValidationError("not a number: " + s);
  return v;
}

// "1.5,2,3" or, for several parameters, "2:1,3:1".
std::vector<convex::Vec> parse_t_list(const std::string& s) {
  std::vector<convex::Vec> out;
  for (const auto& point : split(s, ',')) {
    convex::Vec t;
    for (const auto& x : split(point, ':')) t.push_back(parse_number(x));
    out.push_back(t);
  }
  if (out.empty()) throw CLI::ValidationError("--t needs at least one value");
  return out;
}

std::vector<std::size_t> parse_n_list(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& x : split(s, ',')) {
    double v = parse_number(x);
    if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v)))
      throw CLI::ValidationError("--n needs positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw CLI::ValidationError("--n needs at least one value");
  return out;
}

std::string digits(const std::vector<int>& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i && w[i] > 9) s += ' ';
    s += std::to_string(w[i]);
  }
  return s;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open output file " + path);
  f << text;
}

struct Options {
  std::string config;
  // betashift
  std::string beta;
  std::size_t n = 0;
  bool count_only = false;
  std::string out_path;
  std::size_t precision_bits = beta::kDefaultPrecisionBits;
  // sturmian
  std::string gamma, a = "0";
  long long start = 0;
  long long weight = -1;
  bool all_slopes = false;
  // potential
  std::string word;
  std::size_t center = 0;
  std::string mode = "optimistic";
  // pins
  std::size_t length = 512, samples = 100;
  std::uint64_t seed = 1;
  bool seed_set = false;
  // pressure / target / convex
  std::string t_list, n_list;
  double lo = 0, hi = 0;
  int cells = 4096;
};

int cmd_betashift(const Options& o, std::ostream& out) {
  beta::BetaLanguage lang(beta::QuadraticNumber::parse(o.beta), o.precision_bits);
  auto res = beta::count_words(lang, o.n, !o.count_only);
  std::ostringstream s;
  if (o.count_only) {
    s << res.count << "\n";
  } else {
    for (const auto& w : res.words) s << digits(std::vector<int>(w.begin(), w.end())) << "\n";
  }
  write_text(o.out_path, s.str(), out);
  return kOk;
}

int cmd_sturmian(const Options& o, std::ostream& out) {
  std::ostringstream s;
  if (o.all_slopes) {
    if (o.weight >= 0) {
      for (const auto& w : sturmian::enumerate_by_weight(static_cast<int>(o.n), o.weight)) s << digits(w) << "\n";
    } else {
      for (const auto& [wt, words] : sturmian::enumerate_binary(static_cast<int>(o.n)))
        for (const auto& w : words) s << digits(w) << "\n";
    }
  } else {
    if (o.gamma.empty()) throw CLI::ValidationError("--gamma is required unless --enumerate-all-slopes is given");
    Rational g = Rational::parse(o.gamma);
    auto w = sturmian::generate_word(g, Rational::parse(o.a), o.start, o.n);
    if (o.weight >= 0) {
      // all length-n factors of slope gamma with the requested weight
      for (const auto& f : sturmian::enumerate_by_weight(static_cast<int>(o.n), o.weight))
        if (sturmian::is_sturmian_word(f, g)) s << digits(f) << "\n";
    } else {
      s << digits(w) << "\n";
    }
  }
  write_text(o.out_path, s.str(), out);
  return kOk;
}

int cmd_potential(const Options& o, std::ostream& out) {
  auto cfg = config::load_config(o.config);
  auto spec = config::build_spec(cfg);
  auto word = spec.alphabet.parse(o.word);
  if (o.center >= word.size()) throw DomainError("--center outside the word");
  potential::Mode mode;
  if (o.mode == "optimistic")
    mode = potential::Mode::Optimistic;
  else if (o.mode == "pessimistic")
    mode = potential::Mode::Pessimistic;
  else
    throw CLI::ValidationError("--mode must be optimistic or pessimistic");
  json j;
  j["manifest"] = config::to_json(config::manifest_for(cfg, spec));
  j["center"] = o.center;
  j["mode"] = o.mode;
  json vals = json::array();
  for (std::size_t k = 0; k < spec.value_count(); ++k) vals.push_back(potential::phi_at(spec, word, o.center, mode, k));
  j["phi"] = vals;
  write_text(o.out_path, j.dump(2) + "\n", out);
  return kOk;
}

int cmd_pins(const Options& o, std::ostream& out) {
  auto cfg = config::load_config(o.config);
  auto spec = config::build_spec(cfg);
  pinning::ZOracle oracle(spec.members);
  std::mt19937_64 rng(o.seed_set ? o.seed : cfg.seed);
  const auto A = static_cast<std::uint64_t>(spec.alphabet.size());
  std::vector<pinning::PinRecord> records;
  for (std::size_t s = 0; s < o.samples; ++s) {
    product::Word w(o.length);
    for (auto& x : w) x = static_cast<int>(rng() % A);
    records.push_back(pinning::greedy_pins(w, oracle));
  }
  auto stats = pinning::partition_stats(records);
  json j;
  j["manifest"] = config::to_json(config::manifest_for(cfg, spec));
  j["seed"] = o.seed_set ? o.seed : cfg.seed;
  j["length"] = o.length;
  j["samples"] = o.samples;
  j["segments"] = stats.segments;
  j["pins"] = stats.pins;
  j["total_length"] = stats.total_length;
  j["mean_return"] = stats.mean_return();
  json q = json::array();
  for (const auto& [len, count] : stats.q_counts) q.push_back({{"j", len}, {"count", count}, {"q", stats.q(len)}});
  j["q"] = q;
  json r = json::array();
  for (const auto& [key, count] : stats.r_counts)
    r.push_back({{"j", key.first}, {"weights", key.second}, {"count", count}, {"r", stats.r(key.first, key.second)}});
  j["r"] = r;
  write_text(o.out_path, j.dump(2) + "\n", out);
  return kOk;
}

int cmd_pressure(const Options& o, std::ostream& out) {
  auto cfg = config::load_config(o.config);
  auto spec = config::build_spec(cfg);
  auto rows = pressure::sandwich(spec, parse_t_list(o.t_list), parse_n_list(o.n_list), cfg.budget);
  std::ostringstream s;
  config::write_pressure_csv(s, rows, config::manifest_for(cfg, spec));
  write_text(o.out_path.empty() ? cfg.csv_out : o.out_path, s.str(), out);
  for (const auto& r : rows)
    if (r.budget_exceeded) throw BudgetExceeded(r.error);
  return kOk;
}

convex::ConvexTarget target_of(const Options& o) { return config::load_config(o.config).target; }

int cmd_target(const Options& o, std::ostream& out) {
  auto target = target_of(o);
  json j;
  j["target"] = targets::describe(target);
  if (!o.t_list.empty()) {
    json rows = json::array();
    for (const auto& t : parse_t_list(o.t_list)) {
      json row{{"t", t}, {"f", convex::eval_target(target, t)}};
      if (target.arity == 1) {
        auto sd = convex::subdifferential_1d(target, t[0]);
        row["subdifferential"] = {sd.lo, sd.hi};
      }
      rows.push_back(row);
    }
    j["values"] = rows;
  }
  if (o.hi > o.lo && target.arity == 1) {
    json kinks = json::array();
    for (const auto& k : convex::kink_scan(target, o.lo, o.hi, o.cells)) kinks.push_back({{"z", k.z}, {"jump", k.jump}});
    j["kinks"] = kinks;
  }
  write_text(o.out_path, j.dump(2) + "\n", out);
  return kOk;
}

int cmd_convex(const Options& o, std::ostream& out) {
  auto target = target_of(o);
  json j;
  if (!o.gamma.empty()) {
    double g = parse_number(o.gamma);
    j["gamma"] = g;
    j["slope"] = convex::slope_function(target, g);
  }
  if (!o.t_list.empty()) {
    json pts = json::array();
    auto ts = parse_t_list(o.t_list);
    auto sample = target.arity == 1 ? convex::sample_support_set(target, [&] {
      std::vector<double> g;
      for (const auto& t : ts) g.push_back(t.at(0));
      return g;
    }())
                                    : convex::sample_support_set(target, ts);
    for (const auto& p : sample) pts.push_back({{"h", p.h}, {"v", p.v}});
    j["support"] = pts;
  }
  write_text(o.out_path, j.dump(2) + "\n", out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"pressure_forge: beta-shifts, Sturmian shifts and pressure sandwiches", "pforge"};
  app.require_subcommand(1);
  Options o;

  auto* bs = app.add_subcommand("betashift", "beta-shift languages");
  bs->require_subcommand(1);
  auto* bs_words = bs->add_subcommand("words", "list or count the admissible words of length n");
  bs_words->add_option("--beta", o.beta, "beta: decimal, p/q, golden, e, exp:x or sqrt:d")->required();
  bs_words->add_option("--n", o.n, "word length")->required()->check(CLI::PositiveNumber);
  bs_words->add_flag("--count-only", o.count_only, "print only the count");
  bs_words->add_option("--out", o.out_path, "output file");
  bs_words->add_option("--precision-bits", o.precision_bits, "bit cap for exact arithmetic");

  auto* st = app.add_subcommand("sturmian", "Sturmian words");
  st->require_subcommand(1);
  auto* st_words = st->add_subcommand("words", "generate or enumerate Sturmian words");
  st_words->add_option("--gamma", o.gamma, "slope (decimal or p/q)");
  st_words->add_option("--n", o.n, "word length")->required()->check(CLI::PositiveNumber);
  st_words->add_option("--a", o.a, "intercept in [0, 1)");
  st_words->add_option("--start", o.start, "first index");
  st_words->add_option("--weight", o.weight, "restrict to this weight");
  st_words->add_flag("--enumerate-all-slopes", o.all_slopes, "all Sturmian words of length n over every slope");
  st_words->add_option("--out", o.out_path, "output file");

  auto* pot = app.add_subcommand("potential", "evaluate the constructed potential");
  pot->require_subcommand(1);
  auto* pot_eval = pot->add_subcommand("eval", "phi at one coordinate of a word");
  pot_eval->add_option("--config", o.config, "run config (JSON)")->required();
  pot_eval->add_option("--word", o.word, "word as (x,y0),(x,y0),...")->required();
  pot_eval->add_option("--center", o.center, "coordinate index")->required();
  pot_eval->add_option("--mode", o.mode, "optimistic or pessimistic");
  pot_eval->add_option("--out", o.out_path, "output file");

  auto* pins = app.add_subcommand("pins", "greedy pinning statistics on random words");
  pins->add_option("--config", o.config, "run config (JSON)")->required();
  pins->add_option("--length", o.length, "word length")->check(CLI::PositiveNumber);
  pins->add_option("--samples", o.samples, "number of words")->check(CLI::PositiveNumber);
  pins->add_option("--seed", o.seed, "random seed (defaults to the config seed)")->each([&](const std::string&) {
    o.seed_set = true;
  });
  pins->add_option("--out", o.out_path, "output JSON file");

  auto* pr = app.add_subcommand("pressure", "pressure approximants");
  pr->require_subcommand(1);
  auto* pr_est = pr->add_subcommand("estimate", "sandwich the pressure against the target");
  pr_est->add_option("--config", o.config, "run config (JSON)")->required();
  pr_est->add_option("--t", o.t_list, "t values, comma separated; ':' joins components")->required();
  pr_est->add_option("--n", o.n_list, "word lengths, comma separated")->required();
  pr_est->add_option("--out", o.out_path, "output CSV file");

  auto* tg = app.add_subcommand("target", "inspect the convex target");
  tg->require_subcommand(1);
  auto* tg_eval = tg->add_subcommand("eval", "values, subdifferentials and kinks");
  tg_eval->add_option("--config", o.config, "run config (JSON)")->required();
  tg_eval->add_option("--t", o.t_list, "t values");
  tg_eval->add_option("--kinks-from", o.lo, "kink scan lower end");
  tg_eval->add_option("--kinks-to", o.hi, "kink scan upper end");
  tg_eval->add_option("--cells", o.cells, "kink scan cells");
  tg_eval->add_option("--out", o.out_path, "output file");

  auto* cv = app.add_subcommand("convex", "support sets and slope function");
  cv->require_subcommand(1);
  auto* cv_sup = cv->add_subcommand("support", "support points and s(gamma)");
  cv_sup->add_option("--config", o.config, "run config (JSON)")->required();
  cv_sup->add_option("--t", o.t_list, "support sample nodes");
  cv_sup->add_option("--gamma", o.gamma, "evaluate the slope function here");
  cv_sup->add_option("--out", o.out_path, "output file");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kConfigError;
  }

  try {
    if (bs->parsed()) return cmd_betashift(o, out);
    if (st->parsed()) return cmd_sturmian(o, out);
    if (pot->parsed()) return cmd_potential(o, out);
    if (pins->parsed()) return cmd_pins(o, out);
    if (pr->parsed()) return cmd_pressure(o, out);
    if (tg->parsed()) return cmd_target(o, out);
    if (cv->parsed()) return cmd_convex(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudgetExceeded;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace pforge::cli
