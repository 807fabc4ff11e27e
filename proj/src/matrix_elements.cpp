#include <algorithm>
#include <cmath>

#include "qngc/errors.hpp"
#include "qngc/fock.hpp"

namespace qngc {

// Entries along each diagonal offset d = k - j >= 0 follow a three-term
// recurrence in j of normalized associated Laguerre polynomials, which
// stays stable far into the tail. Entries above the diagonal come from
// <k|D(alpha)|j> = (-1)^(j-k) conj(<j|D(alpha)|k>).
CMatrix displacement_elements(cplx alpha, int rows, int cols) {
    if (rows < 1 || cols < 1) throw SpecError("matrix element block must be nonempty");
    const int n = std::max(rows, cols);
    const double x = std::norm(alpha);
    CMatrix lower = CMatrix::Zero(n, cols);  // (k, j) with k >= j
    cplx c = std::exp(-0.5 * x);
    for (int d = 0; d < n; ++d) {
        const int jmax = std::min(cols, n - d);
        double hm2 = 0.0, hm1 = 1.0;
        for (int j = 0; j < jmax; ++j) {
            double h;
            if (j == 0) {
                h = 1.0;
            } else if (j == 1) {
                h = (1.0 + d - x) / std::sqrt(1.0 + d);
            } else {
                const double jj = j;
                h = ((2.0 * jj - 1.0 + d - x) * hm1 -
                     std::sqrt((jj - 1.0) * (jj - 1.0 + d)) * hm2) /
                    std::sqrt(jj * (jj + d));
            }
            lower(j + d, j) = c * h;
            hm2 = hm1;
            hm1 = h;
        }
        c *= alpha / std::sqrt(static_cast<double>(d + 1));
    }
    CMatrix out(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int k = 0; k < rows; ++k) {
            if (k >= j) {
                out(k, j) = lower(k, j);
            } else {
                const double sign = ((j - k) % 2 == 0) ? 1.0 : -1.0;
                out(k, j) = sign * std::conj(lower(j, k));
            }
        }
    return out;
}

// Row 0 is closed form; the rest follows from the column-shift recurrence
// obtained by conjugating a with S(xi).
CMatrix squeezing_elements(cplx xi, int rows, int cols) {
    if (rows < 1 || cols < 1) throw SpecError("matrix element block must be nonempty");
    const cplx zeta = -2.0 * xi;
    const double r = std::abs(zeta);
    const double theta = r > 0.0 ? std::arg(zeta) : 0.0;
    const double mu = std::cosh(r);
    const cplx nu = std::polar(std::sinh(r), theta);
    const cplx t = std::polar(std::tanh(r), -theta);

    CMatrix m = CMatrix::Zero(rows, cols);
    cplx c = 1.0 / std::sqrt(mu);
    for (int p = 0; 2 * p < cols; ++p) {
        m(0, 2 * p) = c;
        c *= t * std::sqrt((2.0 * p + 1.0) / (2.0 * p + 2.0));
    }
    for (int j = 0; j < cols; ++j) {
        const double sj = std::sqrt(static_cast<double>(j));
        for (int k = 0; k + 1 < rows; ++k) {
            const cplx prev = j > 0 ? m(k, j - 1) : cplx(0.0);
            const cplx below = k > 0 ? m(k - 1, j) : cplx(0.0);
            m(k + 1, j) = (sj * prev - nu * std::sqrt(static_cast<double>(k)) * below) /
                          (mu * std::sqrt(static_cast<double>(k + 1)));
        }
    }
    return m;
}

}  // namespace qngc
