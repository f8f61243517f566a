#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "valkey/error.hpp"
#include "valkey/json_io.hpp"
#include "valkey/text.hpp"

namespace py = pybind11;
using namespace valkey;

namespace {

PyObject* g_error = nullptr;

Json load(const std::string& text) { return parse_json_text(text); }

Sampler sampler(int degree, int height, int trials, std::uint64_t seed) {
    Sampler s{degree, height, trials, seed};
    s.validate();
    return s;
}

std::string report(const SuiteReport& r) { return dump(to_json(r)); }

/// Runs a named suite on a descriptor; `step` < 0 means every step.
std::string run_suite(const Descriptor& d, const std::string& suite, const Sampler& s, long step, const std::string& q,
                      const std::string& gamma) {
    const MacLaneChain& ch = d.chain;
    auto steps = [&](auto&& one) {
        if (step >= 0) return one(static_cast<std::size_t>(step));
        SuiteReport all = one(0);
        for (std::size_t i = 1; i < ch.size(); ++i) all.absorb(one(i));
        return all;
    };
    if (suite == "axioms") return report(check_axioms(d.valuation, s));
    if (suite == "theorem1") return report(check_theorem1(d.valuation, parse_poly(d.field(), q), parse_value(Json(gamma)), s));
    if (suite == "lemma23") return report(steps([&](std::size_t i) { return check_lemma23(ch, i, s); }));
    if (suite == "graded") return report(steps([&](std::size_t i) { return check_graded(ch, i, s); }));
    if (suite == "complete-set") return report(check_complete_set(ch, s));
    if (suite == "mlv-key") return report(check_mlv_key(d.valuation, parse_poly(d.field(), q), s));
    if (suite == "keys") return report(check_keys(ch, s));
    if (suite == "correspondence") return report(check_correspondence(ch, s));
    throw Error(ErrorKind::InvalidInput, "unknown suite '" + suite + "'");
}

}  // namespace

PYBIND11_MODULE(_valkey, m) {
    m.doc() = "Exact valuations on K[x]";

    g_error = PyErr_NewException("valkey.ValkeyError", PyExc_ValueError, nullptr);
    m.attr("ValkeyError") = py::handle(g_error);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object err = py::reinterpret_steal<py::object>(PyObject_CallFunction(g_error, "s", e.what()));
            err.attr("kind") = py::str(to_string(e.kind()));
            PyErr_SetObject(g_error, err.ptr());
        }
    });

    m.def("parse_poly", [](const std::string& field, const std::string& text) {
        return parse_poly(parse_ground_field(load(field)), text).to_string();
    }, py::arg("field"), py::arg("text"), "Canonical text of a polynomial over a ground field given as JSON.");

    m.def("expand", [](const std::string& field, const std::string& f, const std::string& q) {
        GroundField k = parse_ground_field(load(field));
        std::vector<std::string> parts;
        for (const Poly& p : q_expansion(parse_poly(k, f), parse_poly(k, q)).parts) parts.push_back(p.to_string());
        return parts;
    }, py::arg("field"), py::arg("f"), py::arg("q"));

    py::class_<Descriptor>(m, "Descriptor")
        .def_static("from_json", [](const std::string& text) { return parse_descriptor(load(text)); })
        .def("to_json", [](const Descriptor& d) { return dump(to_json(d)); })
        .def_property_readonly("size", [](const Descriptor& d) { return d.chain.size(); })
        .def("key", [](const Descriptor& d, std::size_t i) { return d.chain.key(i).to_string(); })
        .def("eval", [](const Descriptor& d, const std::string& f) {
            return eval(d.valuation, parse_poly(d.field(), f)).to_string();
        })
        .def("epsilon", [](const Descriptor& d, const std::string& f) {
            return dump(to_json(epsilon(d.valuation, parse_poly(d.field(), f))));
        })
        .def("equivalent", [](const Descriptor& d, const std::string& f, const std::string& g) {
            return equivalent(d.valuation, parse_poly(d.field(), f), parse_poly(d.field(), g));
        })
        .def("initial_form", [](const Descriptor& d, const std::string& key, const std::string& f) {
            return dump(to_json(initial_form(d.valuation, parse_poly(d.field(), key), parse_poly(d.field(), f))));
        })
        .def("check_key", [](const Descriptor& d, std::size_t i) { return dump(to_json(abstract_key_check(d.chain, i))); })
        .def("check", [](const Descriptor& d, const std::string& suite, int degree, int height, int trials,
                         std::uint64_t seed, long step, const std::string& q, const std::string& gamma) {
            return run_suite(d, suite, sampler(degree, height, trials, seed), step, q, gamma);
        }, py::arg("suite"), py::arg("degree") = 4, py::arg("height") = 3, py::arg("trials") = 1000,
           py::arg("seed") = 1, py::arg("step") = -1, py::arg("q") = "", py::arg("gamma") = "inf");

    py::class_<FamilyPrefix>(m, "Prefix")
        .def_static("from_json", [](const std::string& text) { return parse_prefix(load(text)); })
        .def("to_json", [](const FamilyPrefix& p) { return dump(to_json(p)); })
        .def_property_readonly("size", &FamilyPrefix::size)
        .def("stabilize", [](const FamilyPrefix& p, const std::string& f) {
            return dump(to_json(stabilize(p, parse_poly(p.field(), f))));
        })
        .def("classify", [](const FamilyPrefix& p, const std::string& f) {
            return dump(to_json(classify(p, parse_poly(p.field(), f))));
        })
        .def("limit_check", [](const FamilyPrefix& p, const std::string& key, const std::string& gamma, int degree,
                               int height) {
            Poly q = parse_poly(p.field(), key);
            std::vector<Poly> sample = enumerate_polys(p.field(), std::min(degree, q.degree() - 1), height);
            return dump(to_json(limit_check(p, q, parse_value(Json(gamma)), sample)));
        }, py::arg("key"), py::arg("gamma") = "inf", py::arg("degree") = 3, py::arg("height") = 2)
        .def("check_stabilization", [](const FamilyPrefix& p, std::size_t short_length, int degree, int height,
                                       int trials, std::uint64_t seed) {
            return report(check_stabilization(p, short_length, sampler(degree, height, trials, seed)));
        }, py::arg("short_length") = 5, py::arg("degree") = 3, py::arg("height") = 2, py::arg("trials") = 1000,
           py::arg("seed") = 1);

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"), "Runs the valkey command line in-process; returns (exit code, stdout, stderr).");
}
