#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "qngc/errors.hpp"
#include "qngc/measures.hpp"

using namespace qngc;

namespace {

DensityMatrix superposition(int m, int n, int dim) {
    CVector v = CVector::Zero(dim);
    v[m] = v[n] = 1.0;
    return DensityMatrix::pure(StateVector(v));
}

DensityMatrix coherent(cplx alpha, int dim) {
    CVector v(dim);
    for (int k = 0; k < dim; ++k) v[k] = std::pow(alpha, k) / std::sqrt(std::tgamma(k + 1.0));
    return DensityMatrix::pure(StateVector(v));
}

DensityMatrix random_state(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g;
    CMatrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = cplx(g(rng), g(rng));
    CMatrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    rho = (rho + rho.adjoint()).eval() / 2.0;
    return DensityMatrix(rho);
}

}  // namespace

TEST_CASE("measure ids") {
    CHECK_THROWS_AS(CoherenceMeasureId(2, 1), SpecError);
    CHECK_THROWS_AS(CoherenceMeasureId(-1, 1), SpecError);
    CHECK_THROWS_AS(CoherenceMeasureId(0, 5).check(5), IndexError);
    CHECK(CoherenceMeasureId(1, 3).label() == "C_1,3");
}

TEST_CASE("coherence element") {
    CHECK(coherence_element(superposition(0, 1, 4), {0, 1}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(coherence_element(DensityMatrix::pure(StateVector::fock(5, 3)), {2, 3}) == 0.0);
    CHECK(coherence_element(coherent(1.0, 40), {0, 1}) == doctest::Approx(2 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(std::abs(coherence_element(coherent(1.0, 40), {0, 1}) - 0.735759) < 1e-6);
}

TEST_CASE("coherence is invariant under phase rotation") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
    for (int t = 0; t < 20; ++t) {
        const DensityMatrix rho = random_state(rng, 6);
        const double theta = u(rng);
        CVector ph(6);
        for (int k = 0; k < 6; ++k) ph[k] = std::polar(1.0, theta * k);
        CMatrix rotated = ph.asDiagonal() * rho.elements() * ph.conjugate().asDiagonal();
        rotated = (rotated + rotated.adjoint()).eval() / 2.0;
        const DensityMatrix r(rotated);
        for (int m = 0; m < 6; ++m)
            for (int n = m + 1; n < 6; ++n)
                CHECK(std::abs(coherence_element(r, {m, n}) - coherence_element(rho, {m, n})) < 1e-12);
    }
}

TEST_CASE("phase scan") {
    const auto one = phase_scan(superposition(0, 1, 3), {0, 1}, {0.0});
    CHECK(one.values[0] == doctest::Approx(1.0));
    const auto zero = phase_scan(DensityMatrix::pure(StateVector::fock(4, 2)), {0, 2}, uniform_phases(8));
    for (double v : zero.values) CHECK(v == 0.0);

    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
        const DensityMatrix rho = random_state(rng, 5);
        const auto scan = phase_scan(rho, {1, 3}, uniform_phases(32));
        const cplx r = rho(1, 3);
        for (std::size_t i = 0; i < scan.phases.size(); ++i) {
            const double amp = 2 * std::abs(r) * std::cos(scan.phases[i] + std::arg(r));
            CHECK(std::abs(scan.values[i] - amp) < 1e-13);
        }
    }
}

TEST_CASE("coherence from a scan") {
    const double c64 = coherence_from_scan(phase_scan(superposition(0, 1, 3), {0, 1}, uniform_phases(64)));
    CHECK(std::abs(c64 - 1.0) <= 1.3e-3);
    CHECK(coherence_from_scan(phase_scan(DensityMatrix::pure(StateVector::fock(3, 1)), {0, 1},
                                         uniform_phases(16))) == 0.0);
    const double c256 = coherence_from_scan(phase_scan(coherent(1.0, 40), {0, 1}, uniform_phases(256)));
    CHECK(std::abs(c256 - 0.735759) < 6e-5);

    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        const DensityMatrix rho = random_state(rng, 4);
        for (int g : {8, 13, 64}) {
            const double exact = coherence_element(rho, {0, 2});
            const double est = coherence_from_scan(phase_scan(rho, {0, 2}, uniform_phases(g)));
            CHECK(est <= exact + 1e-13);
            CHECK(exact - est <= scan_error_bound(exact, g) + 1e-13);
        }
    }
}

TEST_CASE("scan grid validation") {
    const DensityMatrix rho = superposition(0, 1, 2);
    CHECK_THROWS_AS(coherence_from_scan(phase_scan(rho, {0, 1}, uniform_phases(4))), GridError);
    auto phases = uniform_phases(8);
    phases[3] += 0.01;
    CHECK_THROWS_AS(coherence_from_scan(phase_scan(rho, {0, 1}, phases)), GridError);
    auto shifted = uniform_phases(8);
    for (auto& p : shifted) p += 7.0;
    CHECK_THROWS_AS(coherence_from_scan(phase_scan(rho, {0, 1}, shifted)), GridError);
}

TEST_CASE("probabilities") {
    const DensityMatrix one = DensityMatrix::pure(StateVector::fock(4, 1));
    CHECK(probability(one, ProbObservable::fock(1)) == doctest::Approx(1.0));
    CHECK(std::abs(probability(one, ProbObservable::error(1))) < 1e-15);
    CHECK(probability(coherent(1.0, 40), ProbObservable::error(1)) ==
          doctest::Approx(1 - 2 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(ProbObservable::error(2).label() != ProbObservable::fock(2).label());
}
