#include "qngc/gauss_opt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "qngc/errors.hpp"

namespace qngc {

ObjectiveSpec::ObjectiveSpec(CoherenceMeasureId id_, std::vector<LambdaTerm> terms) : id(id_) {
    for (const auto& t : terms) {
        if (!std::isfinite(t.weight)) throw SpecError("lambda weight must be finite");
        if (t.obs.index < 0) throw SpecError("observable index must be nonnegative");
        if (t.weight != 0.0) lambda_terms.push_back(t);
    }
}

int ObjectiveSpec::reach() const {
    int r = id.n;
    for (const auto& t : lambda_terms) r = std::max(r, t.obs.reach());
    return r;
}

void SearchConfig::validate() const {
    if (starts < 1) throw SpecError("starts must be at least 1");
    if (!(tolerance > 0.0)) throw SpecError("tolerance must be positive");
    if (!(xi_max > 0.0) || !(alpha_max > 0.0)) throw SpecError("parameter bounds must be positive");
    if (phi_grid < 8) throw SpecError("phi grid needs at least 8 points");
    if (validation_samples < 0) throw SpecError("validation_samples must be nonnegative");
    if (dim_report < 2) throw SpecError("dim_report must be at least 2");
    if (threads < 1) throw SpecError("threads must be at least 1");
    if (screen_samples < 0) throw SpecError("screen_samples must be nonnegative");
    if (max_evaluations < 10) throw SpecError("max_evaluations too small");
}

int SearchConfig::effective_screen() const {
    return screen_samples > 0 ? screen_samples : std::max(128, 16 * starts);
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

constexpr double kLeakTolerance = 1e-12;
constexpr int kMaxWork = 8192;

double uniform01(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

}  // namespace

CMatrix projected_rows(const GaussianParams& params, const std::vector<int>& rows,
                       const CoreSubspace& sub, int dim_report) {
    if (rows.empty() || sub.empty()) throw SpecError("projection needs rows and a subspace");
    const int maxrow = *std::max_element(rows.begin(), rows.end());
    const int maxcol = *std::max_element(sub.begin(), sub.end());
    int K = sized_work_dim(dim_report, std::abs(params.xi), std::abs(params.alpha));
    K = std::max({K, maxrow + 1, maxcol + 1});
    for (;;) {
        const CMatrix d = displacement_elements(params.alpha, K, maxcol + 1);
        const CMatrix s = squeezing_elements(-params.xi, K, maxrow + 1);
        double leak = 0.0;
        for (int j : sub) leak = std::max(leak, 1.0 - d.col(j).squaredNorm());
        for (int i : rows) leak = std::max(leak, 1.0 - s.col(i).squaredNorm());
        if (leak <= kLeakTolerance) {
            CMatrix w(sub.size(), rows.size());
            for (std::size_t jj = 0; jj < sub.size(); ++jj)
                for (std::size_t r = 0; r < rows.size(); ++r)
                    w(jj, r) = d.col(sub[jj]).dot(s.col(rows[r]));
            return w;
        }
        if (K >= kMaxWork) {
            std::ostringstream os;
            os << "Gaussian matrix elements leak " << leak << " beyond dim_work " << K;
            throw TruncationError(os.str());
        }
        K = std::min(2 * K, kMaxWork);
    }
}

namespace {

// Which projected rows an objective needs and where they sit.
struct Layout {
    std::vector<int> rows;
    int col_m = 0;
    int col_n = 0;
    struct Term {
        std::vector<int> cols;
        double weight;
        bool complement;  // I - sum |w><w| instead of sum |w><w|
    };
    std::vector<Term> terms;
};

Layout make_layout(const ObjectiveSpec& obj) {
    Layout lay;
    std::vector<int> rows = {obj.id.m, obj.id.n};
    for (const auto& t : obj.lambda_terms) {
        if (t.obs.kind == ProbObservable::Kind::FockProb) {
            rows.push_back(t.obs.index);
        } else {
            for (int k = 0; k <= t.obs.index; ++k) rows.push_back(k);
        }
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    lay.rows = rows;
    auto col = [&](int i) {
        return static_cast<int>(std::lower_bound(rows.begin(), rows.end(), i) - rows.begin());
    };
    lay.col_m = col(obj.id.m);
    lay.col_n = col(obj.id.n);
    for (const auto& t : obj.lambda_terms) {
        Layout::Term term{{}, t.weight, t.obs.kind == ProbObservable::Kind::ErrorProb};
        if (term.complement) {
            for (int k = 0; k <= t.obs.index; ++k) term.cols.push_back(col(k));
        } else {
            term.cols.push_back(col(t.obs.index));
        }
        lay.terms.push_back(term);
    }
    return lay;
}

CMatrix lambda_part(const CMatrix& w, const Layout& lay) {
    const Eigen::Index d = w.rows();
    CMatrix b = CMatrix::Zero(d, d);
    for (const auto& t : lay.terms) {
        CMatrix q = CMatrix::Zero(d, d);
        for (int c : t.cols) q += w.col(c) * w.col(c).adjoint();
        if (t.complement) q = CMatrix::Identity(d, d) - q;
        b += t.weight * q;
    }
    return b;
}

CMatrix assemble(const CMatrix& w, const Layout& lay, const CMatrix& base, double phi) {
    const CVector a = w.col(lay.col_m);
    const CVector b = w.col(lay.col_n);
    const CMatrix c = std::polar(1.0, phi) * (a * b.adjoint());
    return c + c.adjoint() + base;
}

double top_eigenvalue(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(m.rows() - 1);
}

InnerResult inner_from(const CMatrix& w, const Layout& lay, int phi_grid, double tol) {
    const CVector a = w.col(lay.col_m);
    const CVector b = w.col(lay.col_n);
    const Eigen::Index d = w.rows();
    InnerResult out;
    if (lay.terms.empty()) {
        const double na = a.norm(), nb = b.norm();
        const cplx ov = b.dot(a);
        out.value = na * nb + std::abs(ov);
        out.phi = std::abs(ov) > 0.0 ? -std::arg(ov) : 0.0;
        if (na > 0.0 && nb > 0.0) {
            CVector v = std::polar(1.0, out.phi) * a / na + b / nb;
            out.coeffs = v / v.norm();
        } else {
            out.coeffs = CVector::Unit(d, 0);
        }
        return out;
    }
    const CMatrix base = lambda_part(w, lay);
    if (d == 1) {
        const cplx ab = a[0] * std::conj(b[0]);
        out.value = 2.0 * std::abs(ab) + base(0, 0).real();
        out.phi = std::abs(ab) > 0.0 ? -std::arg(ab) : 0.0;
        out.coeffs = CVector::Ones(1);
        return out;
    }
    auto f = [&](double phi) { return top_eigenvalue(assemble(w, lay, base, phi)); };
    const double step = 2.0 * std::numbers::pi / phi_grid;
    double best = -std::numeric_limits<double>::infinity();
    double best_phi = 0.0;
    for (int g = 0; g < phi_grid; ++g) {
        const double v = f(g * step);
        if (v > best) {
            best = v;
            best_phi = g * step;
        }
    }
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = best_phi - step, hi = best_phi + step;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tol) {
        if (f1 >= f2) {
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
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm > best) {
        best = fm;
        best_phi = mid;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(assemble(w, lay, base, best_phi));
    out.value = es.eigenvalues()(d - 1);
    out.phi = std::remainder(best_phi, 2.0 * std::numbers::pi);
    out.coeffs = es.eigenvectors().col(d - 1);
    return out;
}

void check_inputs(const ObjectiveSpec& objective, const CoreSubspace& sub, int dim_report) {
    objective.id.check(dim_report);
    if (objective.reach() >= dim_report) throw IndexError("observable index outside dim_report");
    if (sub.empty()) throw SpecError("core subspace is empty");
    for (int i : sub)
        if (i < 0 || i >= dim_report) throw IndexError("core subspace index outside dim_report");
}

}  // namespace

CMatrix compressed_operator(const GaussianParams& params, double phi, const ObjectiveSpec& objective,
                            const CoreSubspace& sub, int dim_report) {
    check_inputs(objective, sub, dim_report);
    const Layout lay = make_layout(objective);
    const CMatrix w = projected_rows(params, lay.rows, sub, dim_report);
    return assemble(w, lay, lambda_part(w, lay), phi);
}

InnerResult inner_max(const GaussianParams& params, const ObjectiveSpec& objective,
                      const CoreSubspace& sub, int dim_report, int phi_grid, double tolerance) {
    check_inputs(objective, sub, dim_report);
    const Layout lay = make_layout(objective);
    const CMatrix w = projected_rows(params, lay.rows, sub, dim_report);
    return inner_from(w, lay, phi_grid, tolerance);
}

double free_state_probability(const GaussianParams& params, const CVector& coeffs,
                              const CoreSubspace& sub, const ProbObservable& obs, int dim_report) {
    std::vector<int> rows;
    if (obs.kind == ProbObservable::Kind::FockProb) {
        rows.push_back(obs.index);
    } else {
        for (int k = 0; k <= obs.index; ++k) rows.push_back(k);
    }
    const CMatrix w = projected_rows(params, rows, sub, dim_report);
    const CVector c = coeffs / coeffs.norm();
    double s = 0.0;
    for (Eigen::Index r = 0; r < w.cols(); ++r) s += std::norm(w.col(r).dot(c));
    return obs.kind == ProbObservable::Kind::FockProb ? s : 1.0 - s;
}

namespace {

struct Box {
    double xi_max;
    double alpha_max;
    bool complex;

    int dim() const { return complex ? 4 : 2; }

    GaussianParams params(const std::vector<double>& x) const {
        if (!complex) {
            return {cplx(std::clamp(x[0], -xi_max, xi_max), 0.0),
                    cplx(std::clamp(x[1], -alpha_max, alpha_max), 0.0)};
        }
        cplx xi(x[0], x[1]), al(x[2], x[3]);
        if (std::abs(xi) > xi_max) xi *= xi_max / std::abs(xi);
        if (std::abs(al) > alpha_max) al *= alpha_max / std::abs(al);
        return {xi, al};
    }

    std::vector<double> coords(const GaussianParams& p) const {
        if (!complex) return {p.xi.real(), p.alpha.real()};
        return {p.xi.real(), p.xi.imag(), p.alpha.real(), p.alpha.imag()};
    }

    std::vector<double> widths() const {
        if (!complex) return {2 * xi_max, 2 * alpha_max};
        return {2 * xi_max, 2 * xi_max, 2 * alpha_max, 2 * alpha_max};
    }

    std::vector<double> sample(std::uint64_t& st) const {
        if (!complex) {
            return {xi_max * (2 * uniform01(st) - 1), alpha_max * (2 * uniform01(st) - 1)};
        }
        const cplx xi = std::polar(xi_max * std::sqrt(uniform01(st)), 2 * std::numbers::pi * uniform01(st));
        const cplx al =
            std::polar(alpha_max * std::sqrt(uniform01(st)), 2 * std::numbers::pi * uniform01(st));
        return {xi.real(), xi.imag(), al.real(), al.imag()};
    }
};

struct Objective {
    const Layout& lay;
    const CoreSubspace& sub;
    int dim_report;
    int phi_grid;
    double tol;
    long long evals = 0;

    InnerResult full(const GaussianParams& p) {
        ++evals;
        return inner_from(projected_rows(p, lay.rows, sub, dim_report), lay, phi_grid, tol);
    }
    double operator()(const GaussianParams& p) { return full(p).value; }
};

struct LocalMax {
    double value;
    std::vector<double> x;
};

LocalMax nelder_mead(Objective& f, const Box& box, std::vector<double> x0, double rel_step,
                     double tol, int max_evals) {
    const int n = box.dim();
    const auto w = box.widths();
    std::vector<std::vector<double>> simplex(n + 1, x0);
    for (int i = 0; i < n; ++i) simplex[i + 1][i] += rel_step * w[i];
    std::vector<double> val(n + 1);
    auto eval = [&](const std::vector<double>& x) { return f(box.params(x)); };
    for (int i = 0; i <= n; ++i) val[i] = eval(simplex[i]);
    int used = n + 1;
    std::vector<int> order(n + 1);
    while (used < max_evals) {
        for (int i = 0; i <= n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return val[a] > val[b]; });
        const int best = order[0], worst = order[n], second = order[n - 1];
        double diam = 0.0;
        for (int i = 0; i <= n; ++i)
            for (int k = 0; k < n; ++k)
                diam = std::max(diam, std::abs(simplex[i][k] - simplex[best][k]) / w[k]);
        if (val[best] - val[worst] <= tol * (1.0 + std::abs(val[best])) && diam < 1e-7) break;
        if (diam < 1e-13) break;
        std::vector<double> c(n, 0.0);
        for (int i = 0; i <= n; ++i)
            if (i != worst)
                for (int k = 0; k < n; ++k) c[k] += simplex[i][k] / n;
        auto along = [&](double t) {
            std::vector<double> x(n);
            for (int k = 0; k < n; ++k) x[k] = c[k] + t * (simplex[worst][k] - c[k]);
            return x;
        };
        const auto xr = along(-1.0);
        const double fr = eval(xr);
        ++used;
        if (fr > val[best]) {
            const auto xe = along(-2.0);
            const double fe = eval(xe);
            ++used;
            if (fe > fr) {
                simplex[worst] = xe;
                val[worst] = fe;
            } else {
                simplex[worst] = xr;
                val[worst] = fr;
            }
            continue;
        }
        if (fr > val[second]) {
            simplex[worst] = xr;
            val[worst] = fr;
            continue;
        }
        const bool outside = fr > val[worst];
        const auto xc = along(outside ? -0.5 : 0.5);
        const double fc = eval(xc);
        ++used;
        if (fc > (outside ? fr : val[worst])) {
            simplex[worst] = xc;
            val[worst] = fc;
            continue;
        }
        for (int i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (int k = 0; k < n; ++k) simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
            val[i] = eval(simplex[i]);
            ++used;
        }
    }
    const int best = static_cast<int>(std::max_element(val.begin(), val.end()) - val.begin());
    // Report the clamped point so it reproduces the value.
    return {val[best], box.coords(box.params(simplex[best]))};
}

struct SubspaceOutcome {
    double value = -std::numeric_limits<double>::infinity();
    GaussianParams params;
    int best_start = 0;
    int starts = 0;
    std::vector<double> local_values;
    long long evals = 0;
};

std::uint64_t subspace_stream(std::uint64_t seed, const CoreSubspace& sub, bool complex) {
    std::uint64_t st = seed ^ (complex ? 0xC0FFEE123ULL : 0x0ULL);
    splitmix64(st);
    for (int i : sub) {
        st ^= static_cast<std::uint64_t>(i + 1) * 0x9E3779B97F4A7C15ULL;
        splitmix64(st);
    }
    return st;
}

SubspaceOutcome search_subspace(const Layout& lay, const CoreSubspace& sub, const SearchConfig& cfg,
                                bool complex, const std::vector<WarmSeed>& warm) {
    const Box box{cfg.xi_max, cfg.alpha_max, complex};
    Objective f{lay, sub, cfg.dim_report, cfg.phi_grid, cfg.tolerance};
    std::uint64_t st = subspace_stream(cfg.seed, sub, complex);

    std::vector<std::vector<double>> starts;
    std::vector<double> steps;
    for (const auto& ws : warm) {
        if (!ws.subspace.empty() && !is_subset(ws.subspace, sub)) continue;
        starts.push_back(box.coords(box.params(box.coords(ws.params))));
        steps.push_back(0.03);
    }
    const int n_screen = cfg.effective_screen();
    std::vector<std::vector<double>> pts(n_screen);
    std::vector<double> vals(n_screen);
    for (int i = 0; i < n_screen; ++i) {
        pts[i] = box.sample(st);
        vals[i] = f(box.params(pts[i]));
    }
    std::vector<int> idx(n_screen);
    for (int i = 0; i < n_screen; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] > vals[b]; });
    const auto w = box.widths();
    std::vector<std::vector<double>> picked;
    for (int i : idx) {
        if (static_cast<int>(picked.size()) >= cfg.starts) break;
        bool far = true;
        for (const auto& p : picked) {
            double d = 0.0;
            for (std::size_t k = 0; k < p.size(); ++k) d = std::max(d, std::abs(p[k] - pts[i][k]) / w[k]);
            if (d < 0.04) far = false;
        }
        if (far) picked.push_back(pts[i]);
    }
    for (auto& p : picked) {
        starts.push_back(p);
        steps.push_back(0.06);
    }

    SubspaceOutcome out;
    out.starts = static_cast<int>(starts.size());
    for (std::size_t s = 0; s < starts.size(); ++s) {
        LocalMax lm = nelder_mead(f, box, starts[s], steps[s], cfg.tolerance, cfg.max_evaluations);
        for (int r = 0; r < 2; ++r) {
            LocalMax again = nelder_mead(f, box, lm.x, 0.01, cfg.tolerance, cfg.max_evaluations);
            const bool better = again.value > lm.value + cfg.tolerance;
            if (again.value > lm.value) lm = again;
            if (!better) break;
        }
        out.local_values.push_back(lm.value);
        if (lm.value > out.value) {
            out.value = lm.value;
            out.params = box.params(lm.x);
            out.best_start = static_cast<int>(s);
        }
    }
    out.evals = f.evals;
    return out;
}

// Runs fn(i) for every i in [begin, end) on up to `threads` workers.
template <class Fn>
void parallel_for(int begin, int end, int threads, Fn&& fn) {
    const int n = end - begin;
    if (n <= 0) return;
    if (threads <= 1 || n == 1) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }
    std::atomic<int> next{begin};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    const int workers = std::min(threads, n);
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= end) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

ThresholdResult run_search(const ObjectiveSpec& objective, const CoreFamily& fam,
                           const SearchConfig& cfg, bool complex, const OuterOptions& opt) {
    const Layout lay = make_layout(objective);
    const int total = static_cast<int>(fam.subspaces.size());
    const bool fixed = opt.subspace_limit > 0;
    const int limit = fixed ? std::min(opt.subspace_limit, total) : total;
    std::vector<SubspaceOutcome> outs(limit);

    int done = 0;
    int stop = limit;
    int decreases = 0;
    const int batch = std::max(1, cfg.threads);
    const int prefix = std::min<int>(static_cast<int>(fam.sweep_begin), limit);
    while (done < stop) {
        const int hi = done < prefix ? prefix : std::min(stop, done + batch);
        parallel_for(done, hi, cfg.threads, [&](int i) {
            outs[i] = search_subspace(lay, fam.subspaces[i], cfg, complex, opt.warm);
        });
        for (int i = done; i < hi; ++i) {
            if (fixed || cfg.strict_sweep || i < prefix) continue;
            if (i > prefix && outs[i].value < outs[i - 1].value) {
                if (++decreases >= 5) {
                    stop = i + 1;
                    break;
                }
            } else {
                decreases = 0;
            }
        }
        done = hi;
    }

    ThresholdResult res;
    auto& diag = res.diagnostics;
    diag.subspaces_total = total;
    diag.subspaces_evaluated = stop;
    diag.complex_search = complex;
    int best = 0;
    std::vector<double> locals;
    for (int i = 0; i < stop; ++i) {
        diag.subspace_values.push_back(outs[i].value);
        diag.subspace_argmax.push_back(outs[i].params);
        diag.evaluations += outs[i].evals;
        locals.insert(locals.end(), outs[i].local_values.begin(), outs[i].local_values.end());
        if (outs[i].value > outs[best].value) best = i;
    }
    std::sort(locals.begin(), locals.end(), std::greater<>());
    if (!locals.empty()) diag.top5_spread = locals.front() - locals[std::min<std::size_t>(4, locals.size() - 1)];
    diag.starts = outs[best].starts;
    diag.best_start = outs[best].best_start;

    res.subspace = fam.subspaces[best];
    res.params = outs[best].params;
    Objective f{lay, res.subspace, cfg.dim_report, cfg.phi_grid, cfg.tolerance};
    const InnerResult inner = f.full(res.params);
    res.value = inner.value;
    res.phi = inner.phi;
    res.coeffs = inner.coeffs;
    diag.warnings = fam.warnings;
    return res;
}

double validate(ThresholdResult& res, const ObjectiveSpec& objective, const CoreFamily& fam,
                const SearchConfig& cfg, const std::vector<WarmSeed>& warm) {
    const Layout lay = make_layout(objective);
    const Box box{cfg.xi_max, cfg.alpha_max, true};
    std::uint64_t st = cfg.seed ^ 0xA5A5F00DBEEF1234ULL;
    splitmix64(st);
    const int n_sub = res.diagnostics.subspaces_evaluated;
    double worst = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < cfg.validation_samples; ++s) {
        const auto& sub = fam.subspaces[s % n_sub];
        const auto x = box.sample(st);
        Objective f{lay, sub, cfg.dim_report, cfg.phi_grid, cfg.tolerance};
        worst = std::max(worst, f(box.params(x)));
    }
    // Warm seeds are known free states and count as validation points.
    for (const auto& ws : warm) {
        for (int i = 0; i < n_sub; ++i) {
            const auto& sub = fam.subspaces[i];
            if (!ws.subspace.empty() && !is_subset(ws.subspace, sub)) continue;
            Objective f{lay, sub, cfg.dim_report, cfg.phi_grid, cfg.tolerance};
            worst = std::max(worst, f(ws.params));
            break;
        }
    }
    res.diagnostics.validation_samples = cfg.validation_samples;
    res.diagnostics.validation_margin = res.value - worst;
    return res.diagnostics.validation_margin;
}

}  // namespace

ThresholdResult outer_maximize(const ObjectiveSpec& objective, const HierarchySpec& spec,
                               const SearchConfig& cfg, const OuterOptions& options) {
    cfg.validate();
    objective.id.check(cfg.dim_report);
    if (objective.reach() >= cfg.dim_report) throw IndexError("observable index outside dim_report");
    const CoreFamily fam = core_subspaces(spec, objective.id, cfg.dim_report);

    ThresholdResult res = run_search(objective, fam, cfg, cfg.complex_search, options);
    if (!options.validate || cfg.validation_samples == 0) return res;
    if (validate(res, objective, fam, cfg, options.warm) >= -cfg.tolerance) return res;
    if (!cfg.complex_search) {
        const double margin = res.diagnostics.validation_margin;
        res = run_search(objective, fam, cfg, true, options);
        std::ostringstream os;
        os << "real-parameter search failed validation (margin " << margin
           << "); recomputed with complex search";
        res.diagnostics.warnings.push_back(os.str());
        if (validate(res, objective, fam, cfg, options.warm) >= -cfg.tolerance) return res;
    }
    std::ostringstream os;
    os << "validation sample exceeds optimized maximum by " << -res.diagnostics.validation_margin
       << " for " << objective.id.label() << " with " << spec.label();
    throw ValidationError(os.str());
}

}  // namespace qngc
