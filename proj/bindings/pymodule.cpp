#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "patfree/bench.hpp"
#include "patfree/core.hpp"
#include "patfree/exact_oracle.hpp"
#include "patfree/generators.hpp"
#include "patfree/testers.hpp"

namespace py = pybind11;
using namespace patfree;

namespace {

Sequence make_sequence(const std::vector<double>& values) { return Sequence(values); }

py::object witness_to_py(const std::optional<Witness>& w) {
    if (!w) return py::none();
    return py::make_tuple(py::cast(w->indices), w->pattern.name());
}

}  // namespace

PYBIND11_MODULE(patfree, m) {
    m.doc() = "adaptive one-sided testers for (1,3,2)-pattern freeness";

    py::class_<Sequence>(m, "Sequence")
        .def(py::init(&make_sequence))
        .def("__len__", &Sequence::n)
        .def("at", &Sequence::at)
        .def_property_readonly("values", &Sequence::values);

    py::class_<testers::TesterConfig>(m, "TesterConfig")
        .def(py::init<>())
        .def_readwrite("epsilon", &testers::TesterConfig::epsilon)
        .def_readwrite("c_outer", &testers::TesterConfig::c_outer)
        .def_readwrite("c_sample", &testers::TesterConfig::c_sample)
        .def_readwrite("c_fc", &testers::TesterConfig::c_fc)
        .def_readwrite("c_bs", &testers::TesterConfig::c_bs)
        .def_readwrite("seed", &testers::TesterConfig::seed)
        .def_readwrite("strict_pseudocode", &testers::TesterConfig::strict_pseudocode);

    m.def("find_pattern", [](const Sequence& f, const std::string& pattern) {
        return witness_to_py(exact::find_pattern_exhaustive(f, PatternSpec::from_name(pattern)));
    });

    m.def("distance_bounds", [](const Sequence& f, const std::string& pattern) {
        return exact::distance_bounds(f, PatternSpec::from_name(pattern));
    });

    m.def("exact_distance", [](const Sequence& f, const std::string& pattern) {
        return exact::exact_distance_to_free(f, PatternSpec::from_name(pattern));
    });

    m.def("greedy_disjoint_lr", [](const Sequence& f, const std::string& pattern) {
        return exact::greedy_disjoint_tuples_lr(f, PatternSpec::from_name(pattern)).tuples;
    });

    m.def(
        "test_132",
        [](const Sequence& f, double eps, const testers::TesterConfig& cfg) {
            QueryOracle oracle(f);
            auto rep = testers::test_132(oracle, eps, cfg);
            py::dict d;
            d["verdict"] = rep.verdict == Verdict::reject ? "reject" : "accept";
            d["witness"] = rep.witness ? py::cast(rep.witness->indices) : py::object(py::none());
            d["queries"] = rep.queries;
            d["queries_gap1"] = rep.queries_gap1;
            d["queries_gap2"] = rep.queries_gap2;
            return d;
        },
        py::arg("sequence"), py::arg("eps"), py::arg("config") = testers::TesterConfig{});

    m.def(
        "generate",
        [](const std::string& kind, int n, double eps, std::uint64_t seed) {
            auto rec = bench::make_instance(bench::InstanceSpec{kind, n, eps, ""}, seed);
            py::dict d;
            d["values"] = rec.sequence.values();
            d["certified_far_lower"] = rec.certified_far_lower;
            d["generator"] = rec.generator_name;
            if (rec.planted_family) d["planted_family"] = rec.planted_family->tuples;
            return d;
        },
        py::arg("kind"), py::arg("n"), py::arg("eps") = 0.1, py::arg("seed") = 0);

    m.def("verify_witness", [](const Sequence& f, const std::vector<int>& indices,
                               const std::string& pattern) {
        return Witness{indices, PatternSpec::from_name(pattern)}.valid_for(f);
    });
}
