/* Python bindings: every entry point takes and returns JSON documents as
 * strings; the package wrapper converts them to and from dicts. */

#include "darmon/errors.hpp"
#include "darmon/report.hpp"

#include <pybind11/pybind11.h>

namespace py = pybind11;
using namespace darmon;

namespace {

std::string dumped(std::string const & kind, json body)
{
    return dump_canonical(envelope(kind, std::move(body)));
}

InstanceConfig parsed(std::string const & config)
{
    json j;
    try {
        j = json::parse(config);
    } catch (json::parse_error const & e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

ReciprocityInstance instance_of(InstanceConfig const & cfg)
{
    if (!cfg.ell || !cfg.p)
        throw config_error("reciprocity needs 'ell' and 'p'");
    ReciprocityInstance in;
    in.E = cfg.E;
    in.delta_K = cfg.delta_K;
    in.c = cfg.c;
    in.chi = cfg.chi;
    in.ell = *cfg.ell;
    in.p = *cfg.p;
    in.seed = cfg.seed;
    in.splitting_pairs = cfg.splitting_pairs;
    return in;
}

} // namespace

PYBIND11_MODULE(_darmon, m)
{
    m.doc() = "Darmon points for D = 1: JSON in, JSON out";

    auto base = py::register_exception<darmon_error>(m, "DarmonError");
    py::register_exception<config_error>(m, "ConfigError", base.ptr());
    py::register_exception<precondition_error>(m, "PreconditionError", base.ptr());
    py::register_exception<resource_error>(m, "ResourceError", base.ptr());
    py::register_exception<internal_error>(m, "InternalError", base.ptr());

    m.attr("schema") = report_schema;

    m.def("classgroup", [](long delta_K, long c) {
        return dumped("classgroup", classgroup_report(NarrowClassGroup(QuadOrder(delta_K, c))));
    }, py::arg("delta_K"), py::arg("c") = 1);

    m.def("embeddings", [](long delta_K, long c, long M) {
        return dumped("embeddings", embeddings_report(EmbeddingFamily(QuadOrder(delta_K, c), M)));
    }, py::arg("delta_K"), py::arg("c"), py::arg("M"));

    m.def("lvalue", [](std::string const & config) {
        InstanceConfig cfg = parsed(config);
        return dumped("lvalue", lvalue_report(cfg.E, QuadOrder(cfg.delta_K, cfg.c)));
    }, py::arg("config"));

    m.def("sieve", [](std::string const & config) {
        return dumped("sieve", sieve_report(parsed(config)));
    }, py::arg("config"));

    m.def("reciprocity", [](std::string const & config) {
        ReciprocityReport R;
        {
            py::gil_scoped_release nogil;
            R = reciprocity_check(instance_of(parsed(config)));
        }
        return dumped("reciprocity", reciprocity_report(R));
    }, py::arg("config"));

    m.def("tree", [](long M, long ell, int radius, std::uint64_t perturb) {
        return dumped("tree", tree_report(M, ell, radius, perturb));
    }, py::arg("M"), py::arg("ell"), py::arg("radius") = 2, py::arg("perturb") = 0);
}
