#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "qngc/errors.hpp"
#include "qngc/gauss_opt.hpp"

using namespace qngc;

namespace {

SearchConfig fast_config() {
    SearchConfig cfg;
    cfg.dim_report = 24;
    cfg.starts = 4;
    cfg.validation_samples = 300;
    return cfg;
}

double top_eigenvalue(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double phi_max_eigen(const GaussianParams& p, const ObjectiveSpec& obj, const CoreSubspace& sub, int dim) {
    auto f = [&](double phi) { return top_eigenvalue(compressed_operator(p, phi, obj, sub, dim)); };
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

CVector random_unit(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    CVector v(n);
    for (int i = 0; i < n; ++i) v[i] = cplx(g(rng), g(rng));
    return v / v.norm();
}

}  // namespace

TEST_CASE("compressed operator at identity parameters") {
    const ObjectiveSpec obj(CoherenceMeasureId(1, 3));
    const CMatrix x = compressed_operator(GaussianParams{}, 0.0, obj, {1, 3}, 10);
    CMatrix expected(2, 2);
    expected << 0, 1, 1, 0;
    CHECK((x - expected).norm() < 1e-14);
    CHECK(compressed_operator(GaussianParams{}, 0.0, obj, {0, 2, 4}, 10).norm() < 1e-14);
}

TEST_CASE("inner maximum at identity parameters") {
    const ObjectiveSpec obj(CoherenceMeasureId(0, 2));
    const auto r = inner_max(GaussianParams{}, obj, {0, 1, 2}, 10);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(std::abs(r.coeffs[0]) - std::sqrt(0.5)) < 1e-9);
    CHECK(std::abs(r.coeffs[1]) < 1e-9);
    CHECK(std::abs(std::abs(r.coeffs[2]) - std::sqrt(0.5)) < 1e-9);
    CHECK(std::abs(inner_max(GaussianParams{}, obj, {1}, 10).value) < 1e-14);
}

TEST_CASE("closed form equals eigensolve maximized over phase") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::vector<CoreSubspace> subs = {{0, 1}, {1, 2, 3}, {2}, {0, 1, 2, 3}};
    for (int t = 0; t < 12; ++t) {
        const GaussianParams p{cplx(0.5 * u(rng), 0.5 * u(rng)), cplx(1.5 * u(rng), 1.5 * u(rng))};
        const ObjectiveSpec obj(CoherenceMeasureId(0, 3));
        const auto& sub = subs[t % subs.size()];
        const double closed = inner_max(p, obj, sub, 20).value;
        CHECK(std::abs(closed - phi_max_eigen(p, obj, sub, 20)) < 1e-9);
    }
}

TEST_CASE("inner maximum dominates random core vectors") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int dim = 20;
    for (int t = 0; t < 10; ++t) {
        const GaussianParams p{cplx(0.4 * u(rng), 0.4 * u(rng)), cplx(1.5 * u(rng), 1.5 * u(rng))};
        const CoherenceMeasureId id(t % 2, 2 + t % 3);
        const double lam = t < 5 ? 0.0 : 0.7 * u(rng);
        std::vector<LambdaTerm> terms;
        if (lam != 0.0) terms.push_back({ProbObservable::fock(id.n), lam});
        const ObjectiveSpec obj(id, terms);
        const CoreSubspace sub = t % 3 == 0 ? CoreSubspace{0, 1, 2} : CoreSubspace{1, 2};
        const double best = inner_max(p, obj, sub, dim).value;
        const CMatrix w = projected_rows(p, {id.m, id.n}, sub, dim);
        double sampled = -1e300;
        for (int s = 0; s < 10000; ++s) {
            const CVector c = random_unit(rng, static_cast<int>(sub.size()));
            const cplx am = w.col(0).dot(c), an = w.col(1).dot(c);
            sampled = std::max(sampled, 2 * std::abs(am * std::conj(an)) + lam * std::norm(an));
        }
        CHECK(sampled <= best + 1e-12);
        CHECK(best - sampled < 0.05);
    }
}

TEST_CASE("free-state probability agrees with the optimizer coefficients") {
    const GaussianParams p{cplx(0.2, 0.0), cplx(0.8, 0.0)};
    const ObjectiveSpec obj(CoherenceMeasureId(0, 2), {{ProbObservable::fock(2), 0.3}});
    const CoreSubspace sub{0, 1};
    const auto r = inner_max(p, obj, sub, 20);
    const CMatrix w = projected_rows(p, {0, 2}, sub, 20);
    const cplx a0 = w.col(0).dot(r.coeffs), a2 = w.col(1).dot(r.coeffs);
    CHECK(std::abs(2 * std::abs(a0 * std::conj(a2)) + 0.3 * std::norm(a2) - r.value) < 1e-9);
    CHECK(std::abs(free_state_probability(p, r.coeffs, sub, ProbObservable::fock(2), 20) - std::norm(a2)) < 1e-12);
    const double pe = free_state_probability(p, r.coeffs, sub, ProbObservable::error(2), 20);
    double low = 0.0;
    for (int k = 0; k <= 2; ++k) low += free_state_probability(p, r.coeffs, sub, ProbObservable::fock(k), 20);
    CHECK(std::abs(pe - (1.0 - low)) < 1e-12);
}

TEST_CASE("objective and config validation") {
    CHECK_THROWS_AS(ObjectiveSpec(CoherenceMeasureId(0, 1), {{ProbObservable::fock(1), NAN}}), SpecError);
    CHECK(ObjectiveSpec(CoherenceMeasureId(0, 1), {{ProbObservable::fock(1), 0.0}}).lambda_free());
    SearchConfig bad;
    bad.starts = 0;
    CHECK_THROWS_AS(bad.validate(), SpecError);
    SearchConfig small = fast_config();
    small.dim_report = 3;
    CHECK_THROWS_AS(outer_maximize(ObjectiveSpec(CoherenceMeasureId(0, 4)), HierarchySpec::fock_family(), small),
                    IndexError);
}

TEST_CASE("anchor thresholds") {
    const SearchConfig cfg = fast_config();
    const auto c01 = outer_maximize(ObjectiveSpec(CoherenceMeasureId(0, 1)), HierarchySpec::fock_family(), cfg);
    CHECK(std::abs(c01.value - 0.93) <= 0.01);
    CHECK(c01.diagnostics.validation_margin >= -cfg.tolerance);
    const auto c03 =
        outer_maximize(ObjectiveSpec(CoherenceMeasureId(0, 3)), HierarchySpec::gaussian_vacuum(), cfg);
    CHECK(std::abs(c03.value - 0.50) <= 0.01);
    const auto c04 = outer_maximize(ObjectiveSpec(CoherenceMeasureId(0, 4)), HierarchySpec::n_hierarchy(2), cfg);
    CHECK(std::abs(c04.value - 0.55) <= 0.01);
}

TEST_CASE("search is deterministic across thread counts") {
    SearchConfig cfg = fast_config();
    const ObjectiveSpec obj(CoherenceMeasureId(0, 2));
    const auto a = outer_maximize(obj, HierarchySpec::l_hierarchy(1), cfg);
    const auto b = outer_maximize(obj, HierarchySpec::l_hierarchy(1), cfg);
    cfg.threads = 3;
    const auto c = outer_maximize(obj, HierarchySpec::l_hierarchy(1), cfg);
    for (const auto* r : {&b, &c}) {
        CHECK(r->value == a.value);
        CHECK(r->params == a.params);
        CHECK(r->subspace == a.subspace);
        CHECK(r->diagnostics.validation_margin == a.diagnostics.validation_margin);
    }
}

TEST_CASE("splitmix64 streams differ") {
    std::uint64_t s1 = 1, s2 = 2;
    CHECK(splitmix64(s1) != splitmix64(s2));
}
