#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "voxsie/presets.hpp"
#include "voxsie/solver.hpp"
#include "voxsie/structure_io.hpp"

namespace py = pybind11;
using namespace voxsie;

namespace {

SolverConfig make_config(double rre, int restart, int max_iterations, const std::string& preconditioner,
                         double tucker_tol, const std::string& cache_dir) {
    SolverConfig c;
    c.rre = rre;
    c.restart = restart;
    c.max_iterations = max_iterations;
    c.preconditioner = parse_preconditioner(preconditioner);
    c.tucker_tol = tucker_tol;
    c.cache_dir = cache_dir;
    return c;
}

py::dict to_dict(const ExtractionResult& r) {
    py::dict d;
    d["conductor_ids"] = r.conductor_ids;
    d["capacitance"] = r.capacitance;
    d["iterations"] = r.telemetry.iterations;
    d["converged"] = r.telemetry.converged;
    d["rre"] = r.telemetry.rre;
    d["panels"] = r.telemetry.panels;
    d["kernel_source"] = r.telemetry.kernel_source;
    d["compression_ratio"] = r.telemetry.compression_ratio;
    d["forward_ffts"] = r.telemetry.forward_ffts;
    d["inverse_ffts"] = r.telemetry.inverse_ffts;
    d["mvms"] = r.telemetry.mvms;
    d["warnings"] = r.telemetry.warnings;
    py::dict stages;
    for (const auto& s : r.telemetry.stages) stages[py::str(s.name)] = s.seconds;
    d["stages"] = stages;
    return d;
}

}  // namespace

PYBIND11_MODULE(_voxsie, m) {
    m.doc() = "voxel capacitance extraction";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

    m.def("preset_names", &preset_names);
    m.def(
        "preset", [](const std::string& name, double dv) { return structure_to_json(make_preset(name, dv)); },
        py::arg("name"), py::arg("voxel_size") = 0.0, "structure JSON for a named preset");
    m.def(
        "extract",
        [](const std::string& structure_json, double rre, int restart, int max_iterations,
           const std::string& preconditioner, double tucker_tol, const std::string& cache_dir) {
            const StructureDescription s = parse_structure(structure_json);
            const SolverConfig cfg = make_config(rre, restart, max_iterations, preconditioner, tucker_tol, cache_dir);
            ExtractionResult r;
            {
                py::gil_scoped_release nogil;
                r = extract_capacitance(s, cfg);
            }
            return to_dict(r);
        },
        py::arg("structure_json"), py::arg("rre") = 1e-4, py::arg("restart") = 35, py::arg("max_iterations") = 1000,
        py::arg("preconditioner") = "hybrid", py::arg("tucker_tol") = 1e-8, py::arg("cache_dir") = "");
    m.def(
        "dense_capacitance",
        [](const std::string& structure_json) { return dense_oracle(parse_structure(structure_json)).capacitance; },
        py::arg("structure_json"), "direct LU solve, small structures only");
    m.def("coated_sphere_capacitance", &coated_sphere_capacitance, py::arg("r_c"), py::arg("r_d"), py::arg("eps_r"));
}
