#include "qngc/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "qngc/errors.hpp"

namespace qngc {

int sized_work_dim(int dim_report, double xi_abs, double alpha_abs) {
    const double sh = std::sinh(2.0 * xi_abs);
    const double spread = 16.0 * (alpha_abs * alpha_abs + sh * sh);
    const int grown = dim_report + static_cast<int>(std::ceil(spread));
    return std::max(4 * dim_report, grown);
}

FockSpace::FockSpace(int dim_report, int dim_work, double truncation_tolerance)
    : dim_report_(dim_report), dim_work_(dim_work), tolerance_(truncation_tolerance) {
    if (dim_report < 2) throw SpecError("dim_report must be at least 2");
    if (dim_work < dim_report) throw SpecError("dim_work must not be smaller than dim_report");
    if (!(truncation_tolerance > 0.0)) throw SpecError("truncation tolerance must be positive");
}

FockSpace FockSpace::sized_for(int dim_report, double xi_abs, double alpha_abs,
                               double truncation_tolerance) {
    return FockSpace(dim_report, sized_work_dim(dim_report, xi_abs, alpha_abs),
                     truncation_tolerance);
}

FockSpace FockSpace::sized_for(int dim_report, const GaussianParams& params,
                               double truncation_tolerance) {
    return sized_for(dim_report, std::abs(params.xi), std::abs(params.alpha),
                     truncation_tolerance);
}

FockSpace FockSpace::verified_for(int dim_report, const GaussianParams& params,
                                  double truncation_tolerance, int max_work) {
    FockSpace sp = sized_for(dim_report, params, truncation_tolerance);
    for (;;) {
        const double d = std::max(displacement_block(params.alpha, sp).defect,
                                  squeezing_block(params.xi, sp).defect);
        if (d <= truncation_tolerance) return sp;
        if (2 * sp.dim_work() > max_work) {
            std::ostringstream os;
            os << "no dim_work up to " << max_work << " meets tolerance (defect " << d << ")";
            throw TruncationError(os.str());
        }
        sp = FockSpace(dim_report, 2 * sp.dim_work(), truncation_tolerance);
    }
}

StateVector::StateVector(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    const double norm = amplitudes_.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw StateError("state vector has zero or invalid norm");
    amplitudes_ /= norm;
}

StateVector StateVector::fock(int dim, int k) {
    if (k < 0 || k >= dim) throw IndexError("Fock index outside the space");
    CVector v = CVector::Zero(dim);
    v[k] = 1.0;
    return StateVector(v);
}

DensityMatrix::DensityMatrix(CMatrix elements) : DensityMatrix(std::move(elements), Tolerances{}) {}

DensityMatrix::DensityMatrix(CMatrix elements, const Tolerances& tol)
    : elements_(std::move(elements)) {
    if (elements_.rows() != elements_.cols() || elements_.rows() < 1)
        throw StateError("density matrix must be square and nonempty");
    const double herm = (elements_ - elements_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol.hermitian) {
        std::ostringstream os;
        os << "density matrix not Hermitian (deviation " << herm << ")";
        throw StateError(os.str());
    }
    const cplx tr = elements_.trace();
    if (std::abs(tr - 1.0) > tol.trace) {
        std::ostringstream os;
        os << "density matrix trace " << tr.real() << " differs from 1";
        throw StateError(os.str());
    }
    CMatrix h = 0.5 * (elements_ + elements_.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol.eigenvalue) {
        std::ostringstream os;
        os << "density matrix has negative eigenvalue " << es.eigenvalues().minCoeff();
        throw StateError(os.str());
    }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    CMatrix rho = psi.amplitudes() * psi.amplitudes().adjoint();
    return DensityMatrix(rho);
}

CMatrix annihilation_matrix(const FockSpace& space) {
    const int d = space.dim_work();
    CMatrix a = CMatrix::Zero(d, d);
    for (int k = 1; k < d; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

namespace {

int guard_dim(const FockSpace& space) {
    return space.dim_work() + std::max(24, space.dim_work() / 2);
}

CMatrix ladder(int d) {
    CMatrix a = CMatrix::Zero(d, d);
    for (int k = 1; k < d; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

UnitaryBlock block_of(const CMatrix& generator, const FockSpace& space) {
    const CMatrix full = generator.exp();
    UnitaryBlock out;
    out.matrix = full.topLeftCorner(space.dim_work(), space.dim_report());
    out.defect = unitarity_defect(out.matrix);
    return out;
}

void require_within(const UnitaryBlock& b, const FockSpace& space, const char* what) {
    if (b.defect > space.truncation_tolerance()) {
        std::ostringstream os;
        os << what << " unitarity defect " << b.defect << " exceeds tolerance "
           << space.truncation_tolerance() << " at dim_work " << space.dim_work();
        throw TruncationError(os.str());
    }
}

}  // namespace

UnitaryBlock displacement_block(cplx alpha, const FockSpace& space) {
    const CMatrix a = ladder(guard_dim(space));
    const CMatrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
    return block_of(gen, space);
}

UnitaryBlock squeezing_block(cplx xi, const FockSpace& space) {
    const CMatrix a = ladder(guard_dim(space));
    const CMatrix ad = a.adjoint();
    const CMatrix gen = xi * (ad * ad) - std::conj(xi) * (a * a);
    return block_of(gen, space);
}

CMatrix displacement_unitary(cplx alpha, const FockSpace& space) {
    UnitaryBlock b = displacement_block(alpha, space);
    require_within(b, space, "displacement");
    return std::move(b.matrix);
}

CMatrix squeezing_unitary(cplx xi, const FockSpace& space) {
    UnitaryBlock b = squeezing_block(xi, space);
    require_within(b, space, "squeezing");
    return std::move(b.matrix);
}

double unitarity_defect(const CMatrix& u) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < u.cols(); ++j)
        worst = std::max(worst, std::abs(1.0 - u.col(j).squaredNorm()));
    return worst;
}

namespace {

GaussianAction finish(const CVector& out, const FockSpace& space) {
    const int dr = space.dim_report();
    CVector kept = out.head(dr);
    const double loss = 1.0 - kept.squaredNorm();
    if (loss > space.truncation_tolerance()) {
        std::ostringstream os;
        os << "Gaussian action leaks population " << loss << " beyond dim_report " << dr;
        throw TruncationError(os.str());
    }
    return GaussianAction{StateVector(kept), std::max(loss, 0.0)};
}

CVector embed(const StateVector& psi, const FockSpace& space) {
    if (psi.dim() != space.dim_report()) throw StateError("state dimension differs from dim_report");
    return psi.amplitudes();
}

}  // namespace

GaussianAction apply_gaussian(const GaussianParams& params, const StateVector& psi,
                              const FockSpace& space) {
    const CVector in = embed(psi, space);
    const FockSpace wide(space.dim_work(), space.dim_work(), space.truncation_tolerance());
    const CMatrix d = displacement_block(params.alpha, space).matrix;
    const CMatrix s = squeezing_block(params.xi, wide).matrix;
    return finish(s * (d * in), space);
}

GaussianAction apply_gaussian_inverse(const GaussianParams& params, const StateVector& psi,
                                      const FockSpace& space) {
    const CVector in = embed(psi, space);
    const FockSpace wide(space.dim_work(), space.dim_work(), space.truncation_tolerance());
    const CMatrix s = squeezing_block(-params.xi, space).matrix;
    const CMatrix d = displacement_block(-params.alpha, wide).matrix;
    return finish(d * (s * in), space);
}

}  // namespace qngc
