#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "qngc/errors.hpp"
#include "qngc/thresholds.hpp"

namespace qngc {

namespace {

// Memoized F at lambda vectors. Every evaluation covers the same leading
// core subspaces, so per-subspace maxima line up across the grid.
class LambdaOracle {
public:
    struct Entry {
        double value = 0.0;
        std::vector<double> sub;
        std::vector<GaussianParams> arg;
    };

    LambdaOracle(const CoherenceMeasureId& id, const HierarchySpec& spec,
                 std::vector<ProbObservable> obs, const SearchConfig& cfg)
        : id_(id), spec_(spec), obs_(std::move(obs)), cfg_(cfg),
          family_(core_subspaces(spec, id, cfg.dim_report)) {
        absolute_ = outer_maximize(ObjectiveSpec(id), spec, cfg);
        const int total = static_cast<int>(family_.subspaces.size());
        count_ = cfg.strict_sweep ? total
                                  : std::min(total, absolute_.diagnostics.subspaces_evaluated + 3);
    }

    const ThresholdResult& absolute() const { return absolute_; }
    const CoreFamily& family() const { return family_; }
    int count() const { return count_; }
    const std::vector<ProbObservable>& observables() const { return obs_; }

    const Entry& at(const std::vector<double>& lam) {
        auto it = memo_.find(lam);
        if (it != memo_.end()) return it->second;
        std::vector<WarmSeed> warm = {WarmSeed{absolute_.subspace, absolute_.params}};
        if (const Entry* near = nearest(lam)) append_seeds(warm, *near);
        Entry e = run(lam, warm);
        order_.push_back(lam);
        return memo_.emplace(lam, std::move(e)).first->second;
    }

    // Re-searches lam with seeds from the given neighbors; keeps the better
    // value per subspace. Returns true when anything improved.
    bool polish(const std::vector<double>& lam, const std::vector<std::vector<double>>& neighbors) {
        Entry& cur = memo_.at(lam);
        std::vector<WarmSeed> warm = {WarmSeed{absolute_.subspace, absolute_.params}};
        append_seeds(warm, cur);
        for (const auto& nb : neighbors) {
            auto it = memo_.find(nb);
            if (it != memo_.end()) append_seeds(warm, it->second);
        }
        const Entry fresh = run(lam, warm);
        bool improved = false;
        for (std::size_t k = 0; k < cur.sub.size(); ++k)
            if (fresh.sub[k] > cur.sub[k]) {
                cur.sub[k] = fresh.sub[k];
                cur.arg[k] = fresh.arg[k];
                improved = true;
            }
        cur.value = *std::max_element(cur.sub.begin(), cur.sub.end());
        return improved;
    }

private:
    static double warp(double x) { return std::asinh(x * 1e3); }

    const Entry* nearest(const std::vector<double>& lam) const {
        const Entry* best = nullptr;
        double bd = 0.0;
        for (const auto& key : order_) {
            double d = 0.0;
            for (std::size_t i = 0; i < lam.size(); ++i) d = std::max(d, std::abs(warp(lam[i]) - warp(key[i])));
            if (!best || d < bd) {
                best = &memo_.at(key);
                bd = d;
            }
        }
        return best;
    }

    void append_seeds(std::vector<WarmSeed>& warm, const Entry& e) const {
        for (std::size_t k = 0; k < e.arg.size(); ++k) warm.push_back(WarmSeed{family_.subspaces[k], e.arg[k]});
    }

    Entry run(const std::vector<double>& lam, const std::vector<WarmSeed>& warm) const {
        std::vector<LambdaTerm> terms;
        for (std::size_t i = 0; i < obs_.size(); ++i) terms.push_back({obs_[i], lam[i]});
        OuterOptions opt;
        opt.warm = warm;
        opt.subspace_limit = count_;
        const ThresholdResult r = outer_maximize(ObjectiveSpec(id_, terms), spec_, cfg_, opt);
        Entry e;
        e.sub = r.diagnostics.subspace_values;
        e.arg = r.diagnostics.subspace_argmax;
        e.value = *std::max_element(e.sub.begin(), e.sub.end());
        return e;
    }

    CoherenceMeasureId id_;
    HierarchySpec spec_;
    std::vector<ProbObservable> obs_;
    SearchConfig cfg_;
    CoreFamily family_;
    ThresholdResult absolute_;
    int count_ = 0;
    std::map<std::vector<double>, Entry> memo_;
    std::vector<std::vector<double>> order_;
};

std::vector<double> sorted_grid(std::vector<double> g) {
    g.push_back(0.0);
    for (double v : g)
        if (!std::isfinite(v)) throw SpecError("lambda grid entries must be finite");
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

// Evaluation order: outward from zero so each point warm-starts from a neighbor.
std::vector<std::size_t> outward(const std::vector<double>& g) {
    std::vector<std::size_t> idx(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (std::abs(g[a]) != std::abs(g[b])) return std::abs(g[a]) < std::abs(g[b]);
        return g[a] > g[b];
    });
    return idx;
}

double midpoint(double a, double b) {
    if (a > 0.0 && b > 0.0) return std::sqrt(a * b);
    if (a < 0.0 && b < 0.0) return -std::sqrt(a * b);
    return 0.5 * (a + b);
}

std::vector<double> slot_vector(std::size_t dims, std::size_t slot, double v) {
    std::vector<double> lam(dims, 0.0);
    lam[slot] = v;
    return lam;
}

double physical_on_grid(const CoherenceMeasureId& id, const ProbObservable& obs, const std::vector<double>& grid,
                        double p, int dim_report) {
    double best = std::numeric_limits<double>::infinity();
    for (double l : grid) best = std::min(best, physical_f(id, {{obs, l}}, dim_report) - l * p);
    return std::clamp(best, 0.0, 1.0);
}

void fill_points(CriterionCurve& c, const std::vector<double>& p_grid, int dim_report) {
    c.points.clear();
    for (double p : p_grid) {
        CurvePoint pt;
        pt.p = p;
        pt.raw = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < c.lambda_grid.size(); ++i) {
            const double v = c.f_values[i] - c.lambda_grid[i] * p;
            if (v < pt.raw) {
                pt.raw = v;
                pt.lambda_index = static_cast<int>(i);
            }
        }
        pt.c = std::clamp(pt.raw, 0.0, 1.0);
        pt.boundary = physical_on_grid(c.id, c.observable, c.lambda_grid, p, dim_report);
        c.points.push_back(pt);
    }
}

// Indices i whose F lies above the chord of its neighbors.
std::vector<std::size_t> convexity_violations(const std::vector<double>& g, const std::vector<double>& f,
                                              double tol) {
    std::vector<std::size_t> bad;
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        const double t = (g[i] - g[i - 1]) / (g[i + 1] - g[i - 1]);
        const double chord = (1.0 - t) * f[i - 1] + t * f[i + 1];
        if (f[i] > chord + tol * (1.0 + std::abs(f[i]))) bad.push_back(i);
    }
    return bad;
}

void read_values(CriterionCurve& c, LambdaOracle& o, std::size_t slot) {
    const std::size_t dims = o.observables().size();
    c.f_values.clear();
    c.subspace_values.clear();
    for (double l : c.lambda_grid) {
        const auto& e = o.at(slot_vector(dims, slot, l));
        c.f_values.push_back(e.value);
        c.subspace_values.push_back(e.sub);
    }
    const auto zero = std::find(c.lambda_grid.begin(), c.lambda_grid.end(), 0.0) - c.lambda_grid.begin();
    c.absolute = c.f_values[zero];
}

void enforce_convexity(CriterionCurve& c, LambdaOracle& o, std::size_t slot, const EnvelopeOptions& env) {
    const std::size_t dims = o.observables().size();
    for (int round = 0;; ++round) {
        read_values(c, o, slot);
        const auto bad = convexity_violations(c.lambda_grid, c.f_values, env.convexity_tolerance);
        if (bad.empty()) return;
        if (round >= env.polish_rounds) {
            std::ostringstream os;
            os << "F(lambda) is not convex at lambda = " << c.lambda_grid[bad.front()] << " after "
               << env.polish_rounds << " polish rounds";
            throw EnvelopeError(os.str());
        }
        ++c.polish_rounds;
        for (std::size_t i : bad) {
            const auto here = slot_vector(dims, slot, c.lambda_grid[i]);
            for (std::size_t j : {i - 1, i + 1}) {
                std::vector<std::vector<double>> nbs = {here};
                if (j > 0) nbs.push_back(slot_vector(dims, slot, c.lambda_grid[j - 1]));
                if (j + 1 < c.lambda_grid.size()) nbs.push_back(slot_vector(dims, slot, c.lambda_grid[j + 1]));
                o.polish(slot_vector(dims, slot, c.lambda_grid[j]), nbs);
            }
        }
    }
}

CriterionCurve build_curve(LambdaOracle& o, std::size_t slot, const std::vector<double>& lambda_grid,
                           const std::vector<double>& p_grid, const SearchConfig& cfg,
                           const EnvelopeOptions& env, const CoherenceMeasureId& id, const HierarchySpec& spec) {
    for (double p : p_grid)
        if (!(p >= 0.0 && p <= 1.0)) throw SpecError("probability grid entries must lie in [0, 1]");
    if (p_grid.empty()) throw SpecError("probability grid is empty");
    CriterionCurve c;
    c.id = id;
    c.hierarchy = spec;
    c.observable = o.observables()[slot];
    c.lambda_grid = sorted_grid(lambda_grid);
    bool has_neg = false, has_pos = false;
    for (double l : c.lambda_grid) {
        has_neg |= l < 0.0;
        has_pos |= l > 0.0;
    }
    if (!has_neg || !has_pos) throw SpecError("lambda grid must span negative and positive values");
    const std::size_t dims = o.observables().size();
    for (std::size_t i : outward(c.lambda_grid)) o.at(slot_vector(dims, slot, c.lambda_grid[i]));

    std::vector<double> prev;
    for (int round = 0;; ++round) {
        enforce_convexity(c, o, slot, env);
        fill_points(c, p_grid, cfg.dim_report);
        if (round > 0) {
            double shift = 0.0;
            for (std::size_t i = 0; i < prev.size(); ++i) shift = std::max(shift, std::abs(prev[i] - c.points[i].raw));
            c.last_shift = shift;
            if (shift <= env.refine_tolerance) break;
        }
        if (round >= env.max_rounds) {
            c.warnings.push_back("lambda refinement stopped before reaching the tolerance");
            break;
        }
        prev.clear();
        for (const auto& pt : c.points) prev.push_back(pt.raw);
        std::vector<double> extra;
        for (const auto& pt : c.points) {
            const std::size_t i = pt.lambda_index;
            for (std::size_t j : {i - 1, i + 1}) {
                if (i == 0 && j > i + 1) continue;
                if (j >= c.lambda_grid.size()) continue;
                const double a = c.lambda_grid[std::min(i, j)], b = c.lambda_grid[std::max(i, j)];
                if (b - a > 1e-9 * (1.0 + std::abs(a) + std::abs(b))) extra.push_back(midpoint(a, b));
            }
        }
        std::sort(extra.begin(), extra.end());
        extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
        std::vector<double> fresh;
        for (double v : extra)
            if (!std::binary_search(c.lambda_grid.begin(), c.lambda_grid.end(), v)) fresh.push_back(v);
        if (fresh.empty()) break;
        for (std::size_t i : outward(fresh)) o.at(slot_vector(dims, slot, fresh[i]));
        c.lambda_grid.insert(c.lambda_grid.end(), fresh.begin(), fresh.end());
        std::sort(c.lambda_grid.begin(), c.lambda_grid.end());
        c.refinement_rounds = round + 1;
    }
    const auto& abs = o.absolute();
    c.touching_p = free_state_probability(abs.params, abs.coeffs, abs.subspace, c.observable, cfg.dim_report);
    return c;
}

}  // namespace

double CriterionCurve::evaluate(double p) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) best = std::min(best, f_values[i] - lambda_grid[i] * p);
    return std::clamp(best, 0.0, 1.0);
}

CriterionCurve relative_curve_2d(const CoherenceMeasureId& id, const ProbObservable& observable,
                                 const HierarchySpec& spec, const std::vector<double>& lambda_grid,
                                 const std::vector<double>& p_grid, const SearchConfig& cfg,
                                 const EnvelopeOptions& env) {
    cfg.validate();
    LambdaOracle o(id, spec, {observable}, cfg);
    return build_curve(o, 0, lambda_grid, p_grid, cfg, env, id, spec);
}

SurfacePoint CriterionSurface::evaluate(double pn, double pe) const {
    SurfacePoint best;
    best.pn = pn;
    best.pe = pe;
    best.raw = std::numeric_limits<double>::infinity();
    const std::size_t K = ftilde.size();
    for (std::size_t i1 = 0; i1 < lambda1_grid.size(); ++i1) {
        double h = -std::numeric_limits<double>::infinity(), second = h;
        int arg = 0;
        for (std::size_t k = 0; k < K; ++k) {
            double hk = std::numeric_limits<double>::infinity();
            for (std::size_t i2 = 0; i2 < lambda2_grid.size(); ++i2)
                hk = std::min(hk, ftilde[k][i1][i2] - lambda2_grid[i2] * pe);
            if (hk > h) {
                second = h;
                h = hk;
                arg = static_cast<int>(k);
            } else {
                second = std::max(second, hk);
            }
        }
        const double v = h - lambda1_grid[i1] * pn;
        if (v < best.raw) {
            best.raw = v;
            best.lambda1_index = static_cast<int>(i1);
            best.subspace = arg;
            best.crossing = K > 1 && h - second < 1e-6;
        }
    }
    best.c = std::clamp(best.raw, 0.0, 1.0);
    return best;
}

CriterionSurface relative_surface_3d(const CoherenceMeasureId& id, const HierarchySpec& spec,
                                     const std::vector<double>& lambda1_grid,
                                     const std::vector<double>& lambda2_grid,
                                     const std::vector<double>& pn_grid,
                                     const std::vector<double>& pe_grid, const SearchConfig& cfg,
                                     const EnvelopeOptions& env, const ProbObservable* obs_n,
                                     const ProbObservable* obs_e) {
    cfg.validate();
    CriterionSurface s;
    s.id = id;
    s.hierarchy = spec;
    s.obs_n = obs_n ? *obs_n : ProbObservable::fock(id.n);
    s.obs_e = obs_e ? *obs_e : ProbObservable::error(id.n);
    LambdaOracle o(id, spec, {s.obs_n, s.obs_e}, cfg);
    s.curve_n = build_curve(o, 0, lambda1_grid, pn_grid, cfg, env, id, spec);
    s.curve_e = build_curve(o, 1, lambda2_grid, pe_grid, cfg, env, id, spec);
    s.lambda1_grid = s.curve_n.lambda_grid;
    s.lambda2_grid = s.curve_e.lambda_grid;

    const auto o1 = outward(s.lambda1_grid), o2 = outward(s.lambda2_grid);
    const std::size_t K = o.count();
    s.ftilde.assign(K, std::vector<std::vector<double>>(s.lambda1_grid.size(),
                                                        std::vector<double>(s.lambda2_grid.size())));
    for (std::size_t i1 : o1)
        for (std::size_t i2 : o2) {
            const auto& e = o.at({s.lambda1_grid[i1], s.lambda2_grid[i2]});
            for (std::size_t k = 0; k < K; ++k) s.ftilde[k][i1][i2] = e.sub[k];
        }
    // Late polishing may have raised shared entries; refresh both curves.
    for (auto* c : {&s.curve_n, &s.curve_e}) {
        const std::size_t slot = c == &s.curve_n ? 0 : 1;
        read_values(*c, o, slot);
        if (!convexity_violations(c->lambda_grid, c->f_values, env.convexity_tolerance).empty())
            s.warnings.push_back("curve lost convexity after surface evaluation");
        fill_points(*c, slot == 0 ? pn_grid : pe_grid, cfg.dim_report);
    }
    for (std::size_t i1 = 0; i1 < s.lambda1_grid.size(); ++i1)
        for (std::size_t i2 = 0; i2 < s.lambda2_grid.size(); ++i2) {
            const auto& e = o.at({s.lambda1_grid[i1], s.lambda2_grid[i2]});
            for (std::size_t k = 0; k < K; ++k) s.ftilde[k][i1][i2] = e.sub[k];
        }

    for (double pe : pe_grid)
        for (double pn : pn_grid) {
            SurfacePoint pt = s.evaluate(pn, pe);
            double b = std::numeric_limits<double>::infinity();
            for (double l1 : s.lambda1_grid)
                for (double l2 : s.lambda2_grid)
                    b = std::min(b, physical_f(id, {{s.obs_n, l1}, {s.obs_e, l2}}, cfg.dim_report) - l1 * pn - l2 * pe);
            pt.boundary = std::clamp(b, 0.0, 1.0);
            s.points.push_back(pt);
        }
    return s;
}

double physical_f(const CoherenceMeasureId& id, const std::vector<LambdaTerm>& terms, int dim_report) {
    id.check(dim_report);
    std::vector<double> d(dim_report, 0.0);
    for (const auto& t : terms) {
        if (t.obs.index >= dim_report) throw IndexError("observable index outside dim_report");
        if (t.obs.kind == ProbObservable::Kind::FockProb) {
            d[t.obs.index] += t.weight;
        } else {
            for (int k = t.obs.index + 1; k < dim_report; ++k) d[k] += t.weight;
        }
    }
    const double dm = d[id.m], dn = d[id.n];
    double best = 0.5 * (dm + dn) + std::sqrt(0.25 * (dm - dn) * (dm - dn) + 1.0);
    for (int k = 0; k < dim_report; ++k)
        if (k != id.m && k != id.n) best = std::max(best, d[k]);
    return best;
}

namespace {

template <class F>
double golden_min(F&& f, double lo, double hi, int iters) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++i) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = f(x2);
        }
    }
    return std::min({f1, f2, f(0.5 * (lo + hi))});
}

constexpr double kLambdaSpan = 1e6;

}  // namespace

double physical_boundary_exact(const CoherenceMeasureId& id, const ProbObservable& obs, double p, int dim_report) {
    auto g = [&](double l) { return physical_f(id, {{obs, l}}, dim_report) - l * p; };
    const double v = std::min(golden_min(g, -kLambdaSpan, kLambdaSpan, 400), g(0.0));
    return std::clamp(v, 0.0, 1.0);
}

double physical_boundary_exact(const CoherenceMeasureId& id, const ProbObservable& obs_n, double pn,
                               const ProbObservable& obs_e, double pe, int dim_report) {
    auto inner = [&](double l1) {
        auto g = [&](double l2) {
            return physical_f(id, {{obs_n, l1}, {obs_e, l2}}, dim_report) - l1 * pn - l2 * pe;
        };
        return std::min(golden_min(g, -kLambdaSpan, kLambdaSpan, 300), g(0.0));
    };
    const double v = std::min(golden_min(inner, -kLambdaSpan, kLambdaSpan, 300), inner(0.0));
    return std::clamp(v, 0.0, 1.0);
}

CriterionCurve physical_boundary(const CoherenceMeasureId& id, const ProbObservable& observable,
                                 const std::vector<double>& p_grid, int dim_report,
                                 const std::vector<double>& lambda_grid) {
    CriterionCurve c;
    c.id = id;
    c.observable = observable;
    c.hierarchy = HierarchySpec::fock_family();
    c.warnings.push_back("physical boundary: all states of the reporting space");
    if (!lambda_grid.empty()) {
        c.lambda_grid = sorted_grid(lambda_grid);
        for (double l : c.lambda_grid) c.f_values.push_back(physical_f(id, {{observable, l}}, dim_report));
        c.absolute = physical_f(id, {}, dim_report);
        fill_points(c, p_grid, dim_report);
        for (auto& pt : c.points) pt.c = pt.boundary;
        return c;
    }
    c.absolute = 1.0;
    for (double p : p_grid) {
        CurvePoint pt;
        pt.p = p;
        pt.c = pt.raw = pt.boundary = physical_boundary_exact(id, observable, p, dim_report);
        c.points.push_back(pt);
    }
    return c;
}

}  // namespace qngc
