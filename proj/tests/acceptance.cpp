// Acceptance suite: one PASS/FAIL line per criterion item.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "qngc/decoherence.hpp"
#include "qngc/io.hpp"
#include "qngc/thresholds.hpp"

using namespace qngc;

namespace {

constexpr double kAnchorTol = 0.01;
constexpr double kDepthRatio = 7.0;
constexpr double kDepthRatioTol = 0.25;
constexpr double kConvergenceFactor = 2.0;
constexpr double kEigenTol = 1e-9;
constexpr double kSampleSlack = 1e-12;
constexpr double kEnvelopeSlack = 1e-9;
constexpr double kTouchTol = 1e-3;
constexpr double kShrinkRatio = 3.5;
constexpr double kCutoffTol = 0.005;
constexpr int kDimReport = 40;
constexpr int kDimLarge = 60;

int g_pass = 0;
int g_fail = 0;

void report(const std::string& id, bool ok, const std::string& detail) {
    std::printf("%s %-8s %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    std::fflush(stdout);
    (ok ? g_pass : g_fail)++;
}

void info(const std::string& id, const std::string& detail) {
    std::printf("INFO %-8s %s\n", id.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

SearchConfig config(int dim) {
    SearchConfig cfg;
    cfg.dim_report = dim;
    return cfg;
}

// Every anchor number, keyed by name, so the cutoff check can recompute them.
struct Numbers {
    std::map<std::string, double> v;
    std::vector<std::pair<CoherenceMeasureId, ThresholdResult>> argmax;
};

Numbers anchor_numbers(int dim) {
    const SearchConfig cfg = config(dim);
    ThresholdCache cache;
    Numbers out;
    auto abs = [&](CoherenceMeasureId id, HierarchySpec spec) {
        const auto r = absolute_threshold(id, spec, cfg, &cache);
        out.argmax.emplace_back(id, r);
        return r.value;
    };
    for (int n = 1; n <= 4; ++n) {
        out.v["t_0" + std::to_string(n)] = abs({0, n}, HierarchySpec::fock_family());
        out.v["tg_0" + std::to_string(n)] = abs({0, n}, HierarchySpec::gaussian_vacuum());
    }
    const auto n04 = threshold_table({0, 4}, HierarchyKind::NHierarchy, {1, 2, 3, 4}, cfg, &cache);
    const auto l04 = threshold_table({0, 4}, HierarchyKind::LHierarchy, {1, 2, 3, 4}, cfg, &cache);
    for (const auto* t : {&n04, &l04})
        for (const auto& row : *t) out.argmax.emplace_back(CoherenceMeasureId(0, 4), row.result);
    out.v["N2_04"] = n04[1].result.value;
    out.v["N4_04"] = n04[3].result.value;
    out.v["L2_04"] = l04[1].result.value;
    out.v["L4_04"] = l04[3].result.value;
    const auto l34 = threshold_table({3, 4}, HierarchyKind::LHierarchy, {1}, cfg, &cache);
    const auto n34 = threshold_table({3, 4}, HierarchyKind::NHierarchy, {1, 2, 3, 4}, cfg, &cache);
    out.v["L1_34"] = l34[0].result.value;
    out.v["N4_34"] = n34[3].result.value;
    out.v["C01"] = abs({0, 1}, HierarchySpec::fock_family());
    const auto n12 = threshold_table({1, 2}, HierarchyKind::NHierarchy, {1, 2}, cfg, &cache);
    out.v["N1_12"] = n12[0].result.value;
    out.v["N2_12"] = n12[1].result.value;
    out.v["L1_12"] = abs({1, 2}, HierarchySpec::l_hierarchy(1));

    std::vector<int> Ns;
    for (int N = 5; N <= 20; ++N) Ns.push_back(N);
    const auto conv = convergence_study({0, 8}, Ns, 0, cfg, &cache);
    for (const auto& r : conv) out.v["conv_" + std::to_string(r.N)] = r.one_minus_T;

    const CoherenceMeasureId c34(3, 4);
    out.v["loss_L1"] = loss_depth(c34, out.v["L1_34"]).value;
    out.v["loss_N4"] = loss_depth(c34, out.v["N4_34"]).value;
    out.v["thermal_L1"] = thermal_depth(c34, out.v["L1_34"]).value;
    out.v["thermal_N4"] = thermal_depth(c34, out.v["N4_34"]).value;
    return out;
}

void check_anchor(const std::string& id, const std::string& label, double value, double target) {
    report(id, std::abs(value - target) <= kAnchorTol,
           label + fmt(" = %.6f (target %.2f", value, target) + fmt(" +/- %.2f)", kAnchorTol));
}

void ac1(Numbers& a) {
    const double target[] = {0.93, 0.71, 0.63, 0.55};
    for (int n = 1; n <= 4; ++n)
        check_anchor("AC1." + std::to_string(n), "t_0," + std::to_string(n) + " fock", a.v["t_0" + std::to_string(n)],
                     target[n - 1]);
}

void ac2(Numbers& a) {
    const double target[] = {0.93, 0.71, 0.50, 0.46};
    for (int n = 1; n <= 4; ++n)
        check_anchor("AC2." + std::to_string(n), "tilde t_0," + std::to_string(n) + " gauss",
                     a.v["tg_0" + std::to_string(n)], target[n - 1]);
    bool ordered = true;
    for (int n = 1; n <= 4; ++n)
        ordered &= a.v["t_0" + std::to_string(n)] >= a.v["tg_0" + std::to_string(n)] - 1e-9;
    const double gap3 = a.v["t_03"] - a.v["tg_03"], gap4 = a.v["t_04"] - a.v["tg_04"];
    report("AC2.5", ordered && gap3 > 1e-3 && gap4 > 1e-3,
           fmt("t >= tilde t for n=1..4, strict gaps at n=3,4: %.6f, %.6f", gap3, gap4));
}

void ac3(Numbers& a) {
    check_anchor("AC3.1", "T_0,4 N2", a.v["N2_04"], 0.55);
    check_anchor("AC3.2", "T_0,4 L2", a.v["L2_04"], 0.62);
    check_anchor("AC3.3", "T_0,4 N4", a.v["N4_04"], 0.80);
    check_anchor("AC3.4", "T_0,4 L4", a.v["L4_04"], 0.80);
    report("AC3.5", std::abs(a.v["N4_04"] - a.v["L4_04"]) <= kAnchorTol,
           fmt("T_0,4 N4 - L4 = %.2e (within %.2f)", a.v["N4_04"] - a.v["L4_04"], kAnchorTol));
    check_anchor("AC3.6", "T_3,4 L1", a.v["L1_34"], 0.80);
    check_anchor("AC3.7", "T_3,4 N4 (highest beatable N order)", a.v["N4_34"], 0.96);
}

void ac4(Numbers& a) {
    check_anchor("AC4.1", "C_0,1 absolute", a.v["C01"], 0.93);
    check_anchor("AC4.2", "T_1,2 N1", a.v["N1_12"], 0.84);
    check_anchor("AC4.3", "T_1,2 N2", a.v["N2_12"], 0.96);
    const CoherenceMeasureId c12(1, 2);
    const bool only_first = beatable(HierarchySpec::l_hierarchy(1), c12) &&
                            !beatable(HierarchySpec::l_hierarchy(2), c12) && a.v["L1_12"] < 1.0;
    const auto sentinel = absolute_threshold(c12, HierarchySpec::l_hierarchy(2), config(kDimReport));
    report("AC4.4", only_first && sentinel.value == 1.0 && sentinel.diagnostics.sentinel,
           fmt("L-hierarchy for C_1,2: order 1 = %.6f, order 2 sentinel %.1f", a.v["L1_12"], sentinel.value));
    check_anchor("AC4.5", "T_1,2 L1", a.v["L1_12"], 0.84);
}

void ac5(Numbers& a) {
    const double v10 = a.v["conv_10"];
    report("AC5.1", std::abs(v10 - 0.264) <= kAnchorTol,
           fmt("1 - T_0,8 (N=10, exclude 0) = %.6f (target 0.264 +/- %.2f)", v10, kAnchorTol));
    SearchConfig real = config(kDimReport);
    OuterOptions no_validation;
    no_validation.validate = false;
    const auto r = outer_maximize(ObjectiveSpec(CoherenceMeasureId(0, 8)), HierarchySpec::missing_one(10, 0), real,
                                  no_validation);
    info("AC5.1", fmt("real-parameter search alone gives 1 - T = %.6f; complex parameters reach T = %.6f", 1 - r.value,
                      1 - v10));
    const double v20 = a.v["conv_20"];
    report("AC5.2", v20 >= 2e-4 / kConvergenceFactor && v20 <= 2e-4 * kConvergenceFactor,
           fmt("1 - T_0,8 (N=20, exclude 0) = %.3e (target 2e-4 within factor %.0f)", v20, kConvergenceFactor));
    bool mono = true;
    for (int N = 6; N <= 20; ++N)
        mono &= a.v["conv_" + std::to_string(N)] <= a.v["conv_" + std::to_string(N - 1)] + 1e-12;
    report("AC5.3", mono, fmt("1 - T nonincreasing over N = 5..20 (from %.4f to %.2e)", a.v["conv_5"], v20));
}

void ac6(Numbers& a) {
    const double rl = a.v["loss_L1"] / a.v["loss_N4"];
    const double rt = a.v["thermal_L1"] / a.v["thermal_N4"];
    auto ok = [](double r) { return std::abs(r - kDepthRatio) <= kDepthRatioTol * kDepthRatio; };
    report("AC6.1", ok(rl), fmt("C_3,4 loss depth L1/N4 = %.4f / %.4f = %.3f", a.v["loss_L1"], a.v["loss_N4"], rl));
    report("AC6.2", ok(rt),
           fmt("C_3,4 thermal depth L1/N4 = %.4f / %.4f = %.3f", a.v["thermal_L1"], a.v["thermal_N4"], rt));
}

CVector random_unit(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    CVector v(n);
    for (int i = 0; i < n; ++i) v[i] = cplx(g(rng), g(rng));
    return v / v.norm();
}

void ac7_sampling() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int dim = 30;
    double worst = -1e300;
    int bad = 0;
    for (int inst = 0; inst < 100; ++inst) {
        const int n = 1 + static_cast<int>(rng() % 5);
        const int m = static_cast<int>(rng() % n);
        const CoherenceMeasureId id(m, n);
        const GaussianParams p{cplx(0.4 * u(rng), 0.4 * u(rng)), cplx(1.5 * u(rng), 1.5 * u(rng))};
        CoreSubspace sub;
        for (int k = 0; k < 7; ++k)
            if (rng() % 2) sub.push_back(k);
        if (sub.empty()) sub.push_back(static_cast<int>(rng() % 7));
        std::vector<LambdaTerm> terms;
        if (inst % 3 == 1) terms.push_back({ProbObservable::fock(n), 0.8 * u(rng)});
        if (inst % 3 == 2) terms.push_back({ProbObservable::error(n), 0.8 * u(rng)});
        const ObjectiveSpec obj(id, terms);
        const double best = inner_max(p, obj, sub, dim).value;
        std::vector<int> rows;
        for (int k = 0; k <= n; ++k) rows.push_back(k);
        const CMatrix w = projected_rows(p, rows, sub, dim);
        for (int s = 0; s < 10000; ++s) {
            const CVector c = random_unit(rng, static_cast<int>(sub.size()));
            CVector amp(n + 1);
            for (int k = 0; k <= n; ++k) amp[k] = w.col(k).dot(c);
            double v = 2 * std::abs(amp[m] * std::conj(amp[n]));
            for (const auto& t : terms) {
                if (t.obs.kind == ProbObservable::Kind::FockProb) {
                    v += t.weight * std::norm(amp[n]);
                } else {
                    v += t.weight * (1.0 - amp.squaredNorm());
                }
            }
            if (v > best + kSampleSlack) ++bad;
            worst = std::max(worst, v - best);
        }
    }
    report("AC7.1", bad == 0,
           fmt("inner maximum dominates 1e4 samples on 100 instances (largest sample excess %.2e, violations %.0f)",
               worst, static_cast<double>(bad)));
}

double phi_max_eigen(const GaussianParams& p, const ObjectiveSpec& obj, const CoreSubspace& sub, int dim) {
    auto f = [&](double phi) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(compressed_operator(p, phi, obj, sub, dim), Eigen::EigenvaluesOnly);
        return es.eigenvalues().maxCoeff();
    };
    const int grid = 720;
    double best = -1e300, best_phi = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double phi = 2 * std::numbers::pi * i / grid;
        const double v = f(phi);
        if (v > best) {
            best = v;
            best_phi = phi;
        }
    }
    const double g = (std::sqrt(5.0) - 1) / 2;
    double a = best_phi - 2 * std::numbers::pi / grid, b = best_phi + 2 * std::numbers::pi / grid;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-12) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return std::max({best, fc, fd});
}

void ac7_closed_form() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
        const int n = 1 + static_cast<int>(rng() % 5);
        const int m = static_cast<int>(rng() % n);
        const GaussianParams p{cplx(0.4 * u(rng), 0.4 * u(rng)), cplx(1.5 * u(rng), 1.5 * u(rng))};
        CoreSubspace sub;
        for (int k = 0; k < 6; ++k)
            if (rng() % 2) sub.push_back(k);
        if (sub.empty()) sub.push_back(0);
        const ObjectiveSpec obj(CoherenceMeasureId(m, n));
        worst = std::max(worst, std::abs(inner_max(p, obj, sub, 24).value - phi_max_eigen(p, obj, sub, 24)));
    }
    report("AC7.2", worst <= kEigenTol,
           fmt("lambda-free closed form vs eigensolve over phase: max diff %.2e (tol %.0e)", worst, kEigenTol));
}

struct CurveCase {
    std::string label;
    CoherenceMeasureId id;
    HierarchySpec spec;
    ProbObservable obs;
};

SearchConfig envelope_config() {
    SearchConfig cfg = config(kDimReport);
    cfg.validation_samples = 500;
    return cfg;
}

EnvelopeOptions envelope_options() {
    EnvelopeOptions env;
    env.refine_tolerance = 5e-3;
    env.max_rounds = 4;
    return env;
}

void ac7_curves() {
    const auto lgrid = default_lambda_grid(5, 1e-2, 1e2);
    const auto pgrid = linear_grid(0.0, 1.0, 21);
    const SearchConfig cfg = envelope_config();
    const std::vector<CurveCase> cases = {
        {"C_0,1 fock vs P_1", {0, 1}, HierarchySpec::fock_family(), ProbObservable::fock(1)},
        {"C_0,1 fock vs P_e,1", {0, 1}, HierarchySpec::fock_family(), ProbObservable::error(1)},
        {"C_1,2 N1 vs P_2", {1, 2}, HierarchySpec::n_hierarchy(1), ProbObservable::fock(2)},
        {"C_1,2 N2 vs P_e,2", {1, 2}, HierarchySpec::n_hierarchy(2), ProbObservable::error(2)},
    };
    bool concave = true, below_abs = true, below_phys = true, touches = true;
    std::string detail;
    for (const auto& cc : cases) {
        const auto c = relative_curve_2d(cc.id, cc.obs, cc.spec, lgrid, pgrid, cfg, envelope_options());
        double worst_conc = -1e300, worst_abs = -1e300, worst_phys = -1e300;
        for (std::size_t i = 0; i < c.points.size(); ++i) {
            const auto& pt = c.points[i];
            worst_abs = std::max(worst_abs, pt.c - c.absolute);
            worst_phys = std::max(worst_phys, pt.c - pt.boundary);
            if (i > 0 && i + 1 < c.points.size())
                worst_conc = std::max(worst_conc, c.points[i - 1].c + c.points[i + 1].c - 2 * pt.c);
        }
        const double touch = std::abs(c.evaluate(c.touching_p) - c.absolute);
        concave &= worst_conc <= kEnvelopeSlack;
        below_abs &= worst_abs <= kEnvelopeSlack;
        below_phys &= worst_phys <= kEnvelopeSlack;
        touches &= touch <= kTouchTol;
        info("AC7.3", cc.label + fmt(": absolute %.6f, touching P %.4f", c.absolute, c.touching_p) +
                          fmt(", touch gap %.2e, lambda points %.0f", touch, static_cast<double>(c.lambda_grid.size())));
    }
    report("AC7.3a", concave, "relative curves are concave in P");
    report("AC7.3b", below_abs, "relative curves lie at or below their absolute threshold");
    report("AC7.3c", below_phys, "relative curves lie at or below the physical boundary");
    report("AC7.3d", touches, fmt("relative curves touch the absolute threshold at the free-state P (tol %.0e)", kTouchTol));
}

void ac7_surface() {
    const auto lgrid = default_lambda_grid(4, 1e-2, 1e2);
    const SearchConfig cfg = envelope_config();
    const CoherenceMeasureId c01(0, 1);
    EnvelopeOptions env = envelope_options();
    env.max_rounds = 1;
    const auto s = relative_surface_3d(c01, HierarchySpec::fock_family(), lgrid, lgrid, linear_grid(0.1, 0.7, 4),
                                       {0.0, 0.02, 0.05}, cfg, env);
    double worst = -1e300;
    for (const auto& pt : s.points) {
        worst = std::max(worst, pt.c - s.curve_n.evaluate(pt.pn));
        worst = std::max(worst, pt.c - s.curve_e.evaluate(pt.pe));
    }
    report("AC7.4", worst <= kEnvelopeSlack,
           fmt("C_0,1 surface at or below both matching curves (largest excess %.2e)", worst));
    const auto corner = s.evaluate(s.curve_n.touching_p, s.curve_e.touching_p);
    info("AC7.4", fmt("surface at the free-state (P_1, P_e,1) = (%.4f, %.4f) is %.6f", s.curve_n.touching_p,
                      s.curve_e.touching_p, corner.c));
}

void ac7_shrink() {
    const std::vector<CoherenceMeasureId> ids = {{0, 1}, {1, 2}, {3, 4}};
    double worst_ratio = 1e300, worst_coh = 1e300;
    for (const auto& id : ids) {
        const int dim = id.n + 8;
        CVector v = CVector::Zero(dim);
        v[id.m] = v[id.n] = 1.0;
        const DensityMatrix rho0 = DensityMatrix::pure(StateVector(v));
        auto errs = [&](double eps) {
            const auto model = perturbed_state(NoisyStateModel{id, eps, eps}, dim).rho;
            const auto exact = model_channel(rho0, eps, eps);
            const double max_el = (model.elements() - exact.elements()).cwiseAbs().maxCoeff();
            const double coh = std::abs(model(id.m, id.n) - exact(id.m, id.n));
            return std::make_pair(max_el, coh);
        };
        const auto [e1, c1] = errs(0.02);
        const auto [e2, c2] = errs(0.01);
        worst_ratio = std::min(worst_ratio, e1 / e2);
        worst_coh = std::min(worst_coh, c1 / c2);
        info("AC7.5", id.label() + fmt(": max element error %.3e -> %.3e, coherence element ratio %.2f", e1, e2, c1 / c2));
    }
    report("AC7.5", worst_ratio >= kShrinkRatio,
           fmt("max element error ratio under eps -> eps/2 is %.3f (need >= %.1f)", worst_ratio, kShrinkRatio));
    info("AC7.5", fmt("coherence element alone shrinks by %.3f under eps -> eps/2", worst_coh));
}

// Coherence of a reported argmax free state, rebuilt from dense unitaries.
// exp(c a^dag^p - c* a^p) v by short Taylor steps in a K-dimensional space.
CVector propagate(const CVector& v, cplx c, int p) {
    const int K = static_cast<int>(v.size());
    auto gen = [&](const CVector& x) {
        CVector y = CVector::Zero(K);
        for (int k = 0; k < K; ++k) {
            double up = 1.0, down = 1.0;
            for (int j = 0; j < p; ++j) {
                up *= k - j > 0 ? std::sqrt(static_cast<double>(k - j)) : 0.0;
                down *= std::sqrt(static_cast<double>(k + 1 + j));
            }
            if (k >= p) y[k] += c * up * x[k - p];
            if (k + p < K) y[k] -= std::conj(c) * down * x[k + p];
        }
        return y;
    };
    const double bound = 2.0 * std::abs(c) * std::pow(static_cast<double>(K), 0.5 * p);
    const int steps = std::max(1, static_cast<int>(std::ceil(2.0 * bound)));
    CVector out = v;
    for (int s = 0; s < steps; ++s) {
        CVector term = out, acc = out;
        for (int n = 1; n < 200 && term.norm() > 1e-18; ++n) {
            term = gen(term) / static_cast<double>(n * steps);
            acc += term;
        }
        out = acc;
    }
    return out;
}

// Free state rebuilt by direct propagation, independent of the exact-element route.
double propagated_coherence(const CoherenceMeasureId& id, const ThresholdResult& r, double& tail40,
                            double& tail60) {
    for (int K = 4 * kDimLarge;; K *= 2) {
        CVector core = CVector::Zero(K);
        for (std::size_t j = 0; j < r.subspace.size(); ++j) core[r.subspace[j]] = r.coeffs[j];
        const CVector out = propagate(propagate(core, r.params.alpha, 1), r.params.xi, 2);
        if (out.tail(K / 4).squaredNorm() > 1e-14 && K < 1920) continue;
        tail40 = std::max(tail40, out.tail(K - kDimReport).squaredNorm());
        tail60 = std::max(tail60, out.tail(K - kDimLarge).squaredNorm());
        return 2 * std::abs(out[id.m] * std::conj(out[id.n]));
    }
}

void ac7_cutoff(Numbers& base) {
    Numbers large = anchor_numbers(kDimLarge);
    double worst = 0.0;
    std::string where = "none";
    for (const auto& [k, v] : base.v) {
        const double d = std::abs(large.v.at(k) - v);
        if (d > worst) {
            worst = d;
            where = k;
        }
    }
    double rebuilt_dev = 0.0, tail40 = 0.0, tail60 = 0.0;
    int rebuilt = 0;
    for (const auto& [id, r] : base.argmax) {
        if (r.diagnostics.sentinel) continue;
        rebuilt_dev = std::max(rebuilt_dev, std::abs(propagated_coherence(id, r, tail40, tail60) - r.value));
        ++rebuilt;
    }
    report("AC7.6", worst < kCutoffTol && rebuilt_dev < kCutoffTol,
           fmt("anchor numbers stable from dim %.0f to %.0f", kDimReport, kDimLarge) +
               fmt(": largest change %.2e", worst) + " (" + where + ")" +
               fmt("; %.0f argmax states rebuilt by direct propagation, largest deviation %.2e",
                   static_cast<double>(rebuilt), rebuilt_dev) +
               fmt(", largest population beyond dim %.0f", kDimReport) + fmt(" %.1e", tail40) +
               fmt(" and beyond dim %.0f", kDimLarge) + fmt(" %.1e", tail60));
}

void ac7_determinism() {
    SearchConfig cfg = config(kDimReport);
    auto table = [&](int threads) {
        cfg.threads = threads;
        std::string out;
        for (const auto& r : threshold_table({0, 4}, HierarchyKind::NHierarchy, {1, 2, 3, 4}, cfg))
            out += io::to_json(r.result).dump();
        return out;
    };
    const std::string a = table(1), b = table(1), c = table(4);
    SearchConfig ecfg = envelope_config();
    auto curve = [&](int threads) {
        ecfg.threads = threads;
        return io::to_json(relative_curve_2d({0, 1}, ProbObservable::fock(1), HierarchySpec::fock_family(),
                                             default_lambda_grid(3, 1e-1, 1e1), linear_grid(0, 1, 5), ecfg,
                                             envelope_options()))
            .dump();
    };
    const std::string ca = curve(1), cb = curve(4);
    report("AC7.7", a == b && a == c && ca == cb,
           "seeded runs byte-identical: repeated table, 4-thread table, 4-thread curve");
}

template <class F>
void timed(const char* name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        f();
    } catch (const std::exception& e) {
        report(name, false, std::string("raised: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "[%s took %.1f s]\n", name, s);
}

}  // namespace

int main() {
    Numbers a;
    timed("anchors", [&] { a = anchor_numbers(kDimReport); });
    timed("AC1", [&] { ac1(a); });
    timed("AC2", [&] { ac2(a); });
    timed("AC3", [&] { ac3(a); });
    timed("AC4", [&] { ac4(a); });
    timed("AC5", [&] { ac5(a); });
    timed("AC6", [&] { ac6(a); });
    timed("AC7.1", ac7_sampling);
    timed("AC7.2", ac7_closed_form);
    timed("AC7.3", ac7_curves);
    timed("AC7.4", ac7_surface);
    timed("AC7.5", ac7_shrink);
    timed("AC7.6", [&] { ac7_cutoff(a); });
    timed("AC7.7", ac7_determinism);
    std::printf("SUMMARY %d passed, %d failed\n", g_pass, g_fail);
    return g_fail == 0 ? 0 : 1;
}
