#include "qngc/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qngc/errors.hpp"

namespace qngc {

CoherenceMeasureId::CoherenceMeasureId(int m_, int n_) : m(m_), n(n_) {
    if (m < 0 || n <= m) throw SpecError("coherence measure needs 0 <= m < n");
}

void CoherenceMeasureId::check(int dim_report) const {
    if (n >= dim_report)
        throw IndexError("coherence index " + std::to_string(n) + " outside dim_report " +
                         std::to_string(dim_report));
}

std::string CoherenceMeasureId::label() const {
    return "C_" + std::to_string(m) + "," + std::to_string(n);
}

std::string ProbObservable::label() const {
    return (kind == Kind::FockProb ? "P" : "Pe") + std::to_string(index);
}

double coherence_element(const DensityMatrix& rho, const CoherenceMeasureId& id) {
    id.check(rho.dim());
    return 2.0 * std::abs(rho(id.m, id.n));
}

double coherence_element(const StateVector& psi, const CoherenceMeasureId& id) {
    id.check(psi.dim());
    return 2.0 * std::abs(psi[id.m] * std::conj(psi[id.n]));
}

PhaseScan phase_scan(const DensityMatrix& rho, const CoherenceMeasureId& id,
                     const std::vector<double>& phases) {
    id.check(rho.dim());
    if (phases.empty()) throw GridError("phase scan needs at least one phase");
    PhaseScan scan;
    scan.phases = phases;
    scan.values.reserve(phases.size());
    const cplx el = rho(id.m, id.n);
    for (double phi : phases) scan.values.push_back(2.0 * (el * std::polar(1.0, phi)).real());
    return scan;
}

std::vector<double> uniform_phases(int count) {
    if (count < 1) throw GridError("phase grid needs at least one point");
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = 2.0 * std::numbers::pi * i / count;
    return out;
}

double coherence_from_scan(const PhaseScan& scan) {
    const auto& p = scan.phases;
    if (p.size() < 8) throw GridError("phase scan needs at least 8 phases");
    if (scan.values.size() != p.size()) throw GridError("phase scan values and phases differ in length");
    const double step = 2.0 * std::numbers::pi / static_cast<double>(p.size());
    std::vector<double> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (std::abs(sorted[i] - sorted[i - 1] - step) > 1e-9)
            throw GridError("phase scan grid is not uniform over [0, 2pi)");
    if (sorted.front() < -1e-12 || sorted.back() >= 2.0 * std::numbers::pi)
        throw GridError("phases must lie in [0, 2pi)");
    const auto [lo, hi] = std::minmax_element(scan.values.begin(), scan.values.end());
    return 0.5 * (*hi - *lo);
}

double scan_error_bound(double coherence, int phases) {
    return coherence * (1.0 - std::cos(std::numbers::pi / phases));
}

double probability(const DensityMatrix& rho, const ProbObservable& obs) {
    if (obs.index < 0 || obs.index >= rho.dim()) throw IndexError("observable index outside the space");
    if (obs.kind == ProbObservable::Kind::FockProb) return rho(obs.index, obs.index).real();
    double s = 0.0;
    for (int k = 0; k <= obs.index; ++k) s += rho(k, k).real();
    return 1.0 - s;
}

double probability(const StateVector& psi, const ProbObservable& obs) {
    if (obs.index < 0 || obs.index >= psi.dim()) throw IndexError("observable index outside the space");
    if (obs.kind == ProbObservable::Kind::FockProb) return std::norm(psi[obs.index]);
    double s = 0.0;
    for (int k = 0; k <= obs.index; ++k) s += std::norm(psi[k]);
    return 1.0 - s;
}

}  // namespace qngc
