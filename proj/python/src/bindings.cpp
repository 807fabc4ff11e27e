#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qngc/cli.hpp"
#include "qngc/decoherence.hpp"
#include "qngc/errors.hpp"
#include "qngc/io.hpp"
#include "qngc/thresholds.hpp"

namespace py = pybind11;
using namespace qngc;

namespace {

SearchConfig config_from(const std::string& text) {
    if (text.empty()) return SearchConfig{};
    SearchConfig base;
    io::json j = io::to_json(base);
    j.update(io::json::parse(text));
    return io::search_config_from_json(j);
}

ProbObservable observable_from(const std::string& name, const CoherenceMeasureId& id) {
    if (name == "Pm") return ProbObservable::fock(id.m);
    if (name == "Pn") return ProbObservable::fock(id.n);
    if (name == "Pe") return ProbObservable::error(id.n);
    throw SpecError("unknown observable '" + name + "'");
}

HierarchySpec spec_from(const std::string& kind, int order) {
    HierarchySpec s{parse_kind(kind), order, 0};
    return s;
}

}  // namespace

PYBIND11_MODULE(_qngc, m) {
    m.doc() = "Hierarchical non-Gaussian coherence thresholds";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<TruncationError>(m, "TruncationError", base.ptr());
    py::register_exception<IndexError>(m, "IndexError", base.ptr());
    py::register_exception<GridError>(m, "GridError", base.ptr());
    py::register_exception<SpecError>(m, "SpecError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<EnvelopeError>(m, "EnvelopeError", base.ptr());
    py::register_exception<ModelValidityError>(m, "ModelValidityError", base.ptr());
    py::register_exception<NoDepthError>(m, "NoDepthError", base.ptr());
    py::register_exception<StateError>(m, "StateError", base.ptr());

    m.def("displacement_unitary", [](cplx alpha, int dim_report, int dim_work) {
        return displacement_unitary(alpha, FockSpace(dim_report, dim_work));
    }, py::arg("alpha"), py::arg("dim_report"), py::arg("dim_work"));
    m.def("squeezing_unitary", [](cplx xi, int dim_report, int dim_work) {
        return squeezing_unitary(xi, FockSpace(dim_report, dim_work));
    }, py::arg("xi"), py::arg("dim_report"), py::arg("dim_work"));
    m.def("apply_gaussian", [](cplx xi, cplx alpha, const CVector& psi) {
        const GaussianParams p{xi, alpha};
        const int d = static_cast<int>(psi.size());
        const auto r = apply_gaussian(p, StateVector(psi), FockSpace::verified_for(d, p));
        return r.state.amplitudes();
    }, py::arg("xi"), py::arg("alpha"), py::arg("psi"));

    m.def("coherence_element", [](const CMatrix& rho, int mi, int ni) {
        return coherence_element(DensityMatrix(rho), CoherenceMeasureId(mi, ni));
    }, py::arg("rho"), py::arg("m"), py::arg("n"));
    m.def("coherence_from_scan", [](const std::vector<double>& phases, const std::vector<double>& values) {
        return coherence_from_scan(PhaseScan{phases, values});
    }, py::arg("phases"), py::arg("values"));
    m.def("phase_scan", [](const CMatrix& rho, int mi, int ni, int count) {
        return phase_scan(DensityMatrix(rho), CoherenceMeasureId(mi, ni), uniform_phases(count)).values;
    }, py::arg("rho"), py::arg("m"), py::arg("n"), py::arg("count"));

    m.def("absolute_threshold_json", [](int mi, int ni, const std::string& kind, int order,
                                        const std::string& cfg) {
        const auto r = absolute_threshold(CoherenceMeasureId(mi, ni), spec_from(kind, order), config_from(cfg));
        return io::to_json(r).dump();
    }, py::arg("m"), py::arg("n"), py::arg("kind"), py::arg("order") = 1, py::arg("config") = "");

    m.def("convergence_json", [](int mi, int ni, const std::vector<int>& Ns, int excluded,
                                 const std::string& cfg) {
        io::json out = io::json::array();
        for (const auto& r : convergence_study(CoherenceMeasureId(mi, ni), Ns, excluded, config_from(cfg)))
            out.push_back(io::to_json(r));
        return out.dump();
    }, py::arg("m"), py::arg("n"), py::arg("N_range"), py::arg("excluded"), py::arg("config") = "");

    m.def("relative_curve_json", [](int mi, int ni, const std::string& obs, const std::string& kind, int order,
                                    const std::vector<double>& lambdas, const std::vector<double>& ps,
                                    const std::string& cfg) {
        const CoherenceMeasureId id(mi, ni);
        const auto c = relative_curve_2d(id, observable_from(obs, id), spec_from(kind, order), lambdas, ps,
                                         config_from(cfg));
        return io::to_json(c).dump();
    }, py::arg("m"), py::arg("n"), py::arg("observable"), py::arg("kind"), py::arg("order"),
       py::arg("lambda_grid"), py::arg("p_grid"), py::arg("config") = "");

    m.def("physical_boundary", [](int mi, int ni, const std::string& obs, double p, int dim) {
        const CoherenceMeasureId id(mi, ni);
        return physical_boundary_exact(id, observable_from(obs, id), p, dim);
    }, py::arg("m"), py::arg("n"), py::arg("observable"), py::arg("p"), py::arg("dim_report") = 40);

    m.def("perturbed_state", [](int mi, int ni, double loss, double nbar, int dim) {
        NoisyStateModel model{CoherenceMeasureId(mi, ni), loss, nbar};
        return perturbed_state(model, dim).rho.elements();
    }, py::arg("m"), py::arg("n"), py::arg("loss"), py::arg("nbar"), py::arg("dim_report"));
    m.def("exact_channel", [](const CMatrix& rho, double eta, double nbar_env) {
        return exact_channel(DensityMatrix(rho), eta, nbar_env).elements();
    }, py::arg("rho"), py::arg("eta"), py::arg("nbar_env"));

    m.def("loss_depth", [](int mi, int ni, double threshold) {
        return loss_depth(CoherenceMeasureId(mi, ni), threshold).value;
    }, py::arg("m"), py::arg("n"), py::arg("threshold"));
    m.def("thermal_depth", [](int mi, int ni, double threshold) {
        return thermal_depth(CoherenceMeasureId(mi, ni), threshold).value;
    }, py::arg("m"), py::arg("n"), py::arg("threshold"));

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"));
}
