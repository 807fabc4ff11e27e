#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qngc/fock.hpp"
#include "qngc/hierarchy.hpp"
#include "qngc/measures.hpp"

namespace qngc {

struct LambdaTerm {
    ProbObservable obs;
    double weight = 0.0;
};

// Maximized quantity C_{m,n} + sum_i lambda_i P_i over free states.
struct ObjectiveSpec {
    CoherenceMeasureId id;
    std::vector<LambdaTerm> lambda_terms;

    ObjectiveSpec() = default;
    // Zero weights are dropped; nonfinite weights throw SpecError.
    explicit ObjectiveSpec(CoherenceMeasureId id_, std::vector<LambdaTerm> terms = {});

    bool lambda_free() const { return lambda_terms.empty(); }
    // Largest Fock index the measure or an observable touches.
    int reach() const;
};

struct SearchConfig {
    int starts = 8;
    int screen_samples = 0;  // 0 selects max(128, 16 starts)
    std::uint64_t seed = 20240917;
    double xi_max = 1.0;
    double alpha_max = 3.0;
    int phi_grid = 64;
    double tolerance = 1e-10;
    int validation_samples = 2000;
    int dim_report = 40;
    bool strict_sweep = false;
    bool complex_search = false;
    int threads = 1;
    int max_evaluations = 3000;  // per local search

    void validate() const;
    int effective_screen() const;
};

struct InnerResult {
    double value = 0.0;
    double phi = 0.0;
    CVector coeffs;  // unit vector over the subspace indices
};

// P_V U^dag M U P_V restricted to the subspace, U = S(xi) D(alpha) and
// M = X_{m,n}(phi) + sum lambda_i Pi_i.
CMatrix compressed_operator(const GaussianParams& params, double phi, const ObjectiveSpec& objective,
                            const CoreSubspace& sub, int dim_report);

InnerResult inner_max(const GaussianParams& params, const ObjectiveSpec& objective,
                      const CoreSubspace& sub, int dim_report, int phi_grid = 64,
                      double tolerance = 1e-10);

// Exact P_V U^dag |i> for each requested Fock index i; column r belongs to rows[r].
CMatrix projected_rows(const GaussianParams& params, const std::vector<int>& rows,
                       const CoreSubspace& sub, int dim_report);

// Probability of obs in the free state S(xi)D(alpha) sum_j c_j |sub_j>.
double free_state_probability(const GaussianParams& params, const CVector& coeffs,
                              const CoreSubspace& sub, const ProbObservable& obs, int dim_report);

// A start point offered to every family subspace that contains `subspace`.
struct WarmSeed {
    CoreSubspace subspace;
    GaussianParams params;
};

struct SearchDiagnostics {
    int starts = 0;
    int best_start = 0;
    double top5_spread = 0.0;
    double validation_margin = 0.0;
    int validation_samples = 0;
    bool complex_search = false;
    bool sentinel = false;
    int subspaces_total = 0;
    int subspaces_evaluated = 0;
    long long evaluations = 0;
    std::vector<double> subspace_values;          // per evaluated subspace
    std::vector<GaussianParams> subspace_argmax;  // per evaluated subspace
    std::vector<std::string> warnings;
};

struct ThresholdResult {
    double value = 0.0;
    GaussianParams params;
    double phi = 0.0;
    CoreSubspace subspace;
    CVector coeffs;
    SearchDiagnostics diagnostics;
};

// Evaluates a fixed number of leading subspaces (no early stop) when
// subspace_limit > 0.
struct OuterOptions {
    std::vector<WarmSeed> warm;
    int subspace_limit = 0;
    bool validate = true;
};

ThresholdResult outer_maximize(const ObjectiveSpec& objective, const HierarchySpec& spec,
                               const SearchConfig& cfg, const OuterOptions& options = {});

// Splitmix64 step, used to derive independent per-subspace streams.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace qngc
