#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pforge/beta_shift.hpp"
#include "pforge/cli.hpp"
#include "pforge/config.hpp"
#include "pforge/errors.hpp"
#include "pforge/pinning.hpp"
#include "pforge/potential.hpp"
#include "pforge/pressure.hpp"
#include "pforge/sturmian.hpp"

namespace py = pybind11;
using namespace pforge;

namespace {

struct Model {
  config::RunConfig cfg;
  potential::PotentialSpec spec;

  static Model from_path(const std::string& path) {
    auto cfg = config::load_config(path);
    auto spec = config::build_spec(cfg);
    return {std::move(cfg), std::move(spec)};
  }
  static Model from_text(const std::string& text) {
    auto cfg = config::parse_config(text);
    auto spec = config::build_spec(cfg);
    return {std::move(cfg), std::move(spec)};
  }
};

py::dict row_dict(const pressure::PressureRow& r) {
  py::dict d;
  d["t"] = r.t;
  d["n"] = r.n;
  d["upper"] = r.upper;
  d["lower"] = r.lower;
  d["target"] = r.target;
  d["gap"] = r.gap;
  d["gamma_grid_spacing"] = r.gamma_grid_spacing;
  d["pruned_mass_bound"] = r.pruned_mass_bound;
  d["budget_exceeded"] = r.budget_exceeded;
  d["error"] = r.error;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = config::kVersion;
  m.attr("PRESSURE_COLUMNS") = config::kPressureColumns;

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());
  py::register_exception<NotInZ>(m, "NotInZ", base.ptr());

  m.def("beta_count", [](const std::string& beta, std::size_t n) {
    beta::BetaLanguage lang(beta::QuadraticNumber::parse(beta));
    return beta::count_words(lang, n).count;
  }, py::arg("beta"), py::arg("n"));
  m.def("beta_words", [](const std::string& beta, std::size_t n) {
    beta::BetaLanguage lang(beta::QuadraticNumber::parse(beta));
    return beta::count_words(lang, n, true).words;
  }, py::arg("beta"), py::arg("n"));
  m.def("beta_admissible", [](const std::string& beta, const beta::Word& w) {
    return beta::BetaLanguage(beta::QuadraticNumber::parse(beta)).is_admissible(w);
  }, py::arg("beta"), py::arg("word"));

  m.def("sturmian_word", [](const std::string& gamma, const std::string& a, std::int64_t start, std::size_t n) {
    return sturmian::generate_word(Rational::parse(gamma), Rational::parse(a), start, n);
  }, py::arg("gamma"), py::arg("a") = "0", py::arg("start") = 0, py::arg("n"));
  m.def("is_sturmian_word", [](const sturmian::Word& w, const std::string& gamma) {
    return sturmian::is_sturmian_word(w, Rational::parse(gamma));
  }, py::arg("word"), py::arg("gamma"));
  m.def("enumerate_by_weight", &sturmian::enumerate_by_weight, py::arg("j"), py::arg("n"));

  py::class_<Model>(m, "Model")
      .def_static("load", &Model::from_path, py::arg("path"))
      .def_static("parse", &Model::from_text, py::arg("text"))
      .def_property_readonly("grid", [](const Model& s) {
        std::vector<double> g;
        for (const auto& p : s.spec.grid) g.push_back(p.gamma.gamma0.to_double());
        return g;
      })
      .def_property_readonly("alphabet_size", [](const Model& s) { return s.spec.alphabet.size(); })
      .def_property_readonly("config_hash", [](const Model& s) { return s.cfg.hash; })
      .def("target", [](const Model& s, const convex::Vec& t) { return convex::eval_target(s.spec.target, t); })
      .def("slope", [](const Model& s, double gamma) { return convex::slope_function(s.spec.target, gamma); })
      .def("phi", [](const Model& s, const std::string& word, std::size_t center, bool pessimistic) {
        auto w = s.spec.alphabet.parse(word);
        auto mode = pessimistic ? potential::Mode::Pessimistic : potential::Mode::Optimistic;
        return potential::phi_at(s.spec, w, center, mode);
      }, py::arg("word"), py::arg("center"), py::arg("pessimistic") = false)
      .def("lower_pressure", [](const Model& s, const convex::Vec& t) { return pressure::lower_pressure(s.spec, t); })
      .def("upper_pressure", [](const Model& s, const convex::Vec& t, std::size_t n) {
        py::gil_scoped_release release;
        return pressure::upper_pressure(s.spec, t, n, s.cfg.budget).value;
      }, py::arg("t"), py::arg("n"))
      .def("sandwich", [](const Model& s, const std::vector<convex::Vec>& ts, const std::vector<std::size_t>& ns) {
        std::vector<pressure::PressureRow> rows;
        {
          py::gil_scoped_release release;
          rows = pressure::sandwich(s.spec, ts, ns, s.cfg.budget);
        }
        py::list out;
        for (const auto& r : rows) out.append(row_dict(r));
        return out;
      }, py::arg("t"), py::arg("n"))
      .def("pins", [](const Model& s, const std::string& word) {
        pinning::ZOracle z(s.spec.members);
        return greedy_pins(s.spec.alphabet.parse(word), z).pins;
      }, py::arg("word"));

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
