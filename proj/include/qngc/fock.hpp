#pragma once

#include <complex>
#include <span>
#include <Eigen/Dense>

namespace qngc {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Parameters of the free Gaussian unitary S(xi) D(alpha), with
// S(xi) = exp[xi a^dag^2 - xi^* a^2] and D(alpha) = exp[alpha a^dag - alpha^* a].
// The squeezing generator carries no factor 1/2, so the usual squeeze
// amplitude is r = 2|xi|.
struct GaussianParams {
    cplx xi{0.0, 0.0};
    cplx alpha{0.0, 0.0};

    friend bool operator==(const GaussianParams&, const GaussianParams&) = default;
};

inline constexpr double kDefaultTruncationTolerance = 1e-10;

// Working dimension needed so that S(xi)D(alpha) applied to the first
// dim_report Fock states stays inside the truncated space.
int sized_work_dim(int dim_report, double xi_abs, double alpha_abs);

// A truncated single-mode Fock space. dim_report is what callers see,
// dim_work is what Gaussian unitaries are built in.
class FockSpace {
public:
    FockSpace(int dim_report, int dim_work,
              double truncation_tolerance = kDefaultTruncationTolerance);

    // Applies the sizing rule for the given parameter magnitudes.
    static FockSpace sized_for(int dim_report, double xi_abs, double alpha_abs,
                               double truncation_tolerance = kDefaultTruncationTolerance);
    static FockSpace sized_for(int dim_report, const GaussianParams& params,
                               double truncation_tolerance = kDefaultTruncationTolerance);

    // Starts from the sizing rule and doubles dim_work until both Gaussian
    // blocks pass the unitarity check; throws TruncationError past max_work.
    static FockSpace verified_for(int dim_report, const GaussianParams& params,
                                  double truncation_tolerance = kDefaultTruncationTolerance,
                                  int max_work = 2048);

    int dim_report() const { return dim_report_; }
    int dim_work() const { return dim_work_; }
    double truncation_tolerance() const { return tolerance_; }

private:
    int dim_report_;
    int dim_work_;
    double tolerance_;
};

class StateVector {
public:
    // Normalizes the amplitudes; throws StateError for a zero vector.
    explicit StateVector(CVector amplitudes);

    static StateVector fock(int dim, int k);

    const CVector& amplitudes() const { return amplitudes_; }
    int dim() const { return static_cast<int>(amplitudes_.size()); }
    cplx operator[](int k) const { return amplitudes_[k]; }

private:
    CVector amplitudes_;
};

// Hermitian, unit trace, positive semidefinite. Construction validates.
class DensityMatrix {
public:
    struct Tolerances {
        double hermitian = 1e-12;
        double trace = 1e-10;
        double eigenvalue = 1e-10;
    };

    explicit DensityMatrix(CMatrix elements);
    DensityMatrix(CMatrix elements, const Tolerances& tol);

    static DensityMatrix pure(const StateVector& psi);

    const CMatrix& elements() const { return elements_; }
    int dim() const { return static_cast<int>(elements_.rows()); }
    cplx operator()(int m, int n) const { return elements_(m, n); }

private:
    CMatrix elements_;
};

// Ladder operator at dim_work: entries <k-1|a|k> = sqrt(k).
CMatrix annihilation_matrix(const FockSpace& space);

// Column block of a Gaussian unitary together with its truncation defect.
struct UnitaryBlock {
    CMatrix matrix;  // dim_work rows, dim_report columns
    double defect = 0.0;
};

// Builds exp(generator) on a guard-extended space and keeps the first
// dim_work rows of the first dim_report columns. The defect is the
// population those columns leak past dim_work.
UnitaryBlock displacement_block(cplx alpha, const FockSpace& space);
UnitaryBlock squeezing_block(cplx xi, const FockSpace& space);

// Same as the *_block functions but throw TruncationError when the defect
// exceeds the space tolerance.
CMatrix displacement_unitary(cplx alpha, const FockSpace& space);
CMatrix squeezing_unitary(cplx xi, const FockSpace& space);

// max over columns of |1 - ||column||^2|
double unitarity_defect(const CMatrix& u);

struct GaussianAction {
    StateVector state;
    double norm_loss = 0.0;  // population lost when truncating to dim_report
};

// S(xi) D(alpha) |psi>, truncated to dim_report and renormalized.
GaussianAction apply_gaussian(const GaussianParams& params, const StateVector& psi,
                              const FockSpace& space);

// D(-alpha) S(-xi) |psi>, the inverse of apply_gaussian.
GaussianAction apply_gaussian_inverse(const GaussianParams& params, const StateVector& psi,
                                      const FockSpace& space);

// Exact (untruncated) Fock matrix elements from three-term recurrences.
// Entry (k, j) is <k|D(alpha)|j> or <k|S(xi)|j> for k < rows, j < cols.
CMatrix displacement_elements(cplx alpha, int rows, int cols);
CMatrix squeezing_elements(cplx xi, int rows, int cols);

}  // namespace qngc
