#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qngc/gauss_opt.hpp"

namespace qngc {

// In-memory threshold cache with an optional on-disk record directory.
// Safe for concurrent readers and writers.
class ThresholdCache {
public:
    ThresholdCache() = default;
    explicit ThresholdCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    std::optional<ThresholdResult> get(const std::string& key) const;
    void put(const std::string& key, const ThresholdResult& result);

    const std::filesystem::path& dir() const { return dir_; }
    std::size_t memory_size() const;

private:
    std::filesystem::path dir_;
    mutable std::mutex mu_;
    mutable std::map<std::string, ThresholdResult> memory_;
};

// Canonical cache key text for an absolute threshold request.
std::string threshold_key(const CoherenceMeasureId& id, const HierarchySpec& spec,
                          const SearchConfig& cfg, const std::vector<WarmSeed>& warm);

// Threshold of C_{m,n} alone against the core family. Unbeatable orders
// return the sentinel value 1 without searching.
ThresholdResult absolute_threshold(const CoherenceMeasureId& id, const HierarchySpec& spec,
                                   const SearchConfig& cfg, ThresholdCache* cache = nullptr,
                                   const std::vector<WarmSeed>& warm = {});

struct TableRow {
    int order = 1;
    ThresholdResult result;
};

// One threshold per order, warm-started from the previous order so the
// table is nondecreasing.
std::vector<TableRow> threshold_table(const CoherenceMeasureId& id, HierarchyKind kind,
                                      const std::vector<int>& orders, const SearchConfig& cfg,
                                      ThresholdCache* cache = nullptr);

struct ConvergenceRow {
    int N = 0;
    int excluded = 0;
    double one_minus_T = 1.0;
    ThresholdResult result;
};

std::vector<ConvergenceRow> convergence_study(const CoherenceMeasureId& id,
                                              const std::vector<int>& N_range, int excluded,
                                              const SearchConfig& cfg,
                                              ThresholdCache* cache = nullptr);

// 61 log-spaced magnitudes per sign over [lo, hi] plus 0, ascending.
std::vector<double> default_lambda_grid(int per_sign = 61, double lo = 1e-3, double hi = 1e3);
std::vector<double> linear_grid(double lo, double hi, int count);

struct CurvePoint {
    double p = 0.0;
    double c = 0.0;           // clipped to [0, 1]
    double raw = 0.0;         // unclipped envelope value
    int lambda_index = 0;     // active lambda
    double boundary = 0.0;    // physical boundary on the same lambda grid
};

struct CriterionCurve {
    CoherenceMeasureId id;
    HierarchySpec hierarchy;
    ProbObservable observable;
    std::vector<double> lambda_grid;
    std::vector<double> f_values;                         // F(lambda)
    std::vector<std::vector<double>> subspace_values;     // [lambda][subspace]
    std::vector<CurvePoint> points;
    double absolute = 0.0;    // F(0)
    double touching_p = 0.0;  // observable value at the lambda = 0 maximizer
    int refinement_rounds = 0;
    double last_shift = 0.0;  // largest point move in the last refinement
    int polish_rounds = 0;
    std::vector<std::string> warnings;

    // min over the grid of F(lambda) - lambda P, clipped to [0, 1].
    double evaluate(double p) const;
};

struct SurfacePoint {
    double pn = 0.0;
    double pe = 0.0;
    double c = 0.0;
    double raw = 0.0;
    int lambda1_index = 0;
    int subspace = 0;          // index of the active core subspace
    bool crossing = false;     // two subspaces tie at the optimum
    double boundary = 0.0;     // physical boundary on the same lambda grids
};

struct CriterionSurface {
    CoherenceMeasureId id;
    HierarchySpec hierarchy;
    ProbObservable obs_n;
    ProbObservable obs_e;
    std::vector<double> lambda1_grid;
    std::vector<double> lambda2_grid;
    // ftilde[k][i1][i2]: per-subspace maximum of C + l1 Pn + l2 Pe.
    std::vector<std::vector<std::vector<double>>> ftilde;
    std::vector<SurfacePoint> points;
    CriterionCurve curve_n;
    CriterionCurve curve_e;
    std::vector<std::string> warnings;

    // Appendix-B order: min_l1 [ max_k min_l2 (F_k - l2 Pe) - l1 Pn ].
    SurfacePoint evaluate(double pn, double pe) const;
};

struct EnvelopeOptions {
    double refine_tolerance = 1e-3;
    int max_rounds = 8;
    double convexity_tolerance = 1e-7;
    int polish_rounds = 3;
};

CriterionCurve relative_curve_2d(const CoherenceMeasureId& id, const ProbObservable& observable,
                                 const HierarchySpec& spec, const std::vector<double>& lambda_grid,
                                 const std::vector<double>& p_grid, const SearchConfig& cfg,
                                 const EnvelopeOptions& env = {});

CriterionSurface relative_surface_3d(const CoherenceMeasureId& id, const HierarchySpec& spec,
                                     const std::vector<double>& lambda1_grid,
                                     const std::vector<double>& lambda2_grid,
                                     const std::vector<double>& pn_grid,
                                     const std::vector<double>& pe_grid, const SearchConfig& cfg,
                                     const EnvelopeOptions& env = {},
                                     const ProbObservable* obs_n = nullptr,
                                     const ProbObservable* obs_e = nullptr);

// Largest value of C + sum lambda_i P_i over all states of the reporting space.
double physical_f(const CoherenceMeasureId& id, const std::vector<LambdaTerm>& terms, int dim_report);

// Exact physical boundary: convex minimization over lambda.
double physical_boundary_exact(const CoherenceMeasureId& id, const ProbObservable& obs, double p,
                               int dim_report);
double physical_boundary_exact(const CoherenceMeasureId& id, const ProbObservable& obs_n, double pn,
                               const ProbObservable& obs_e, double pe, int dim_report);

// Envelope of all physical states on a given lambda grid (the construction
// used for criterion curves). An empty grid selects the exact boundary.
CriterionCurve physical_boundary(const CoherenceMeasureId& id, const ProbObservable& observable,
                                 const std::vector<double>& p_grid, int dim_report,
                                 const std::vector<double>& lambda_grid = {});

}  // namespace qngc
