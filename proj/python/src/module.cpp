#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bushy/bigness.hpp"
#include "bushy/forcing.hpp"
#include "bushy/generate.hpp"
#include "bushy/io.hpp"
#include "bushy/refcheck.hpp"
#include "bushy/splitting.hpp"

namespace py = pybind11;
using namespace bushy;

namespace {

py::object fraction(const Rational& q) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(io::format_rational(q));
}

std::vector<std::string> violations(const ValidationReport& r) {
  std::vector<std::string> out;
  for (const auto& v : r.items()) out.push_back(v.what + " at " + v.at.to_string());
  return out;
}

}  // namespace

PYBIND11_MODULE(_bushy, m) {
  m.doc() = "Bushy-tree bigness, forcing and splitting at desk scale";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);

  py::class_<FString>(m, "FString")
      .def(py::init<>())
      .def(py::init([](const std::vector<Symbol>& s) { return FString(s); }))
      .def(py::init([](const std::string& s) { return FString::parse(s); }))
      .def_static("parse", &FString::parse)
      .def("child", &FString::child)
      .def("prefix", &FString::prefix)
      .def("is_prefix_of", &FString::is_prefix_of)
      .def("comparable", &FString::comparable)
      .def("symbols", [](const FString& s) { return std::vector<Symbol>(s.symbols().begin(), s.symbols().end()); })
      .def("__len__", &FString::size)
      .def("__getitem__", [](const FString& s, std::size_t i) {
        if (i >= s.size()) throw py::index_error();
        return s[i];
      })
      .def("__str__", &FString::to_string)
      .def("__repr__", [](const FString& s) { return "FString('" + s.to_string() + "')"; })
      .def("__eq__", [](const FString& a, const FString& b) { return a == b; })
      .def("__lt__", [](const FString& a, const FString& b) { return a < b; })
      .def("__hash__", [](const FString& s) { return std::hash<FString>{}(s); });
  py::implicitly_convertible<py::str, FString>();

  py::class_<BoundedSpace>(m, "BoundedSpace")
      .def(py::init<std::size_t, std::vector<Width>>())
      .def_static("parse", &BoundedSpace::parse)
      .def_static("uniform", &BoundedSpace::uniform)
      .def("depth", &BoundedSpace::depth)
      .def("width", &BoundedSpace::width)
      .def("contains", &BoundedSpace::contains)
      .def("strings", &BoundedSpace::strings)
      .def("__str__", &BoundedSpace::to_string);

  py::class_<WidthSpec>(m, "WidthSpec")
      .def(py::init([](Width w) { return WidthSpec::constant(w); }))
      .def_static("constant", &WidthSpec::constant)
      .def_static("parse", &WidthSpec::parse)
      .def("at", &WidthSpec::at)
      .def("__str__", &WidthSpec::to_string);
  py::implicitly_convertible<Width, WidthSpec>();

  py::class_<StringSet>(m, "StringSet")
      .def_static("explicit", [](const std::set<FString>& e) { return StringSet::explicit_set(e); })
      .def_static("upward_closed", [](const std::set<FString>& e) { return StringSet::upward_closed(e); })
      .def_static("parse", [](const std::string& text) { return io::parse_set(text); })
      .def("contains", &StringSet::contains)
      .def("elements", &StringSet::elements)
      .def("upward", &StringSet::upward)
      .def("__str__", [](const StringSet& s) { return io::format_set(s); });

  py::class_<BushyTree>(m, "BushyTree")
      .def(py::init<FString, std::set<FString>, WidthSpec, bool>(), py::arg("stem"), py::arg("nodes"),
           py::arg("width"), py::arg("exact") = false)
      .def_static("full", &BushyTree::full)
      .def("stem", &BushyTree::stem)
      .def("nodes", &BushyTree::nodes)
      .def("leaves", &BushyTree::leaves)
      .def("width", &BushyTree::width)
      .def("height", &BushyTree::height)
      .def("validate", [](const BushyTree& t) { return violations(validate_tree(t)); })
      .def("__str__", [](const BushyTree& t) { return io::format_tree(t); });

  py::class_<TTFunctional>(m, "Functional")
      .def_static("parse", [](const std::string& text) { return io::parse_functional(text); })
      .def_static("random", [](const BoundedSpace& sp, Symbol arity, std::uint64_t seed, std::size_t step_min,
                               std::size_t step_max) {
        generate::FunctionalParams p;
        p.step_min = step_min;
        p.step_max = step_max;
        return generate::random_functional(sp, arity, seed, p);
      }, py::arg("space"), py::arg("arity") = 2, py::arg("seed") = 0, py::arg("step_min") = 0,
                  py::arg("step_max") = 2)
      .def_static("injective", &generate::injective_functional)
      .def_static("balanced", &generate::balanced_functional)
      .def("at", &TTFunctional::at)
      .def("domain", &TTFunctional::domain)
      .def("__str__", [](const TTFunctional& f) { return io::format_functional(f); });

  m.def("is_big", [](const StringSet& b, const FString& stem, const WidthSpec& w,
                     const std::optional<BoundedSpace>& space) -> std::optional<BushyTree> {
    auto res = bigness::is_big(b, stem, w, space);
    if (!res) return std::nullopt;
    return res->tree;
  }, py::arg("b"), py::arg("stem"), py::arg("width"), py::arg("space") = std::nullopt);
  m.def("k_closure", &bigness::k_closure);
  m.def("is_big_oracle", [](const StringSet& b, const FString& stem, Width n, const BoundedSpace& sp) {
    return refcheck::is_big_oracle(b, stem, n, sp);
  });
  m.def("measure_oracle", [](const std::vector<FString>& cyl, std::size_t depth) {
    return fraction(refcheck::measure_oracle(cyl, depth));
  });

  m.def("force_value", [](const TTFunctional& g, const FString& stem, std::size_t mm, Width k,
                          const std::optional<StringSet>& avoid) -> py::object {
    auto fv = forcing::force_value(g, stem, mm, k, avoid ? *avoid : StringSet::upward_closed({}));
    if (!fv) return py::none();
    return py::make_tuple(fv->value, fv->witness.tree);
  }, py::arg("gamma"), py::arg("stem"), py::arg("m"), py::arg("k") = 2, py::arg("avoid") = std::nullopt);
  m.def("kurtz_run", [](const TTFunctional& g, std::size_t rounds) {
    const auto tr = forcing::kurtz_run(g, rounds);
    py::list rows;
    for (const auto& r : tr.records) {
      py::dict d;
      d["round"] = r.round;
      d["r"] = r.r;
      d["s"] = r.s;
      d["mu"] = fraction(r.mu);
      d["tree"] = r.tree;
      rows.append(d);
    }
    return py::make_tuple(rows, tr.truncated);
  });

  m.def("random_allowance", [](std::uint64_t seed, std::size_t levels) {
    return io::format_allowance(generate::random_allowance(seed, levels));
  }, py::arg("seed"), py::arg("levels") = 4);
  m.def("check_allowance", [](const std::string& text) {
    return violations(splitting::check_allows_splitting(io::parse_allowance(text)));
  });
}
