#pragma once

#include <string>
#include <vector>

#include "qngc/fock.hpp"

namespace qngc {

// Indices of the coherence C_{m,n}, m < n.
struct CoherenceMeasureId {
    int m = 0;
    int n = 1;

    CoherenceMeasureId() = default;
    CoherenceMeasureId(int m_, int n_);

    // Throws IndexError when n >= dim_report.
    void check(int dim_report) const;
    std::string label() const;

    friend bool operator==(const CoherenceMeasureId&, const CoherenceMeasureId&) = default;
};

struct PhaseScan {
    std::vector<double> phases;
    std::vector<double> values;
};

// Either P_k or P_{e,n} = 1 - sum_{k<=n} P_k.
struct ProbObservable {
    enum class Kind { FockProb, ErrorProb };
    Kind kind = Kind::FockProb;
    int index = 0;

    static ProbObservable fock(int k) { return {Kind::FockProb, k}; }
    static ProbObservable error(int n) { return {Kind::ErrorProb, n}; }

    // Largest Fock index the observable touches.
    int reach() const { return index; }
    std::string label() const;

    friend bool operator==(const ProbObservable&, const ProbObservable&) = default;
};

double coherence_element(const DensityMatrix& rho, const CoherenceMeasureId& id);
double coherence_element(const StateVector& psi, const CoherenceMeasureId& id);

// values[i] = 2 Re(rho_mn e^{i phi_i})
PhaseScan phase_scan(const DensityMatrix& rho, const CoherenceMeasureId& id,
                     const std::vector<double>& phases);

// G phases k 2pi/G.
std::vector<double> uniform_phases(int count);

// Half the span of the scan. Needs at least 8 uniformly spaced phases.
double coherence_from_scan(const PhaseScan& scan);

// Worst-case grid error of coherence_from_scan for G phases.
double scan_error_bound(double coherence, int phases);

double probability(const DensityMatrix& rho, const ProbObservable& obs);
double probability(const StateVector& psi, const ProbObservable& obs);

}  // namespace qngc
