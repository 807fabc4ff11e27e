#include "qngc/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qngc/errors.hpp"

namespace qngc {

std::string depth_kind_name(DepthKind k) { return k == DepthKind::Loss ? "loss" : "thermal"; }

PerturbedState perturbed_state(const NoisyStateModel& model, int dim_report) {
    const auto& id = model.id;
    if (dim_report < id.n + 2) throw SpecError("dim_report must exceed n + 1 for the thermal term");
    if (model.loss < 0.0 || model.loss >= 1.0) throw ModelValidityError("loss must lie in [0, 1)");
    if (model.nbar < 0.0) throw ModelValidityError("nbar must be nonnegative");
    if (!model.perturbative_valid() && !model.override_validity) {
        std::ostringstream os;
        os << "perturbative model outside validity (loss " << model.loss << ", nbar " << model.nbar << ")";
        throw ModelValidityError(os.str());
    }
    const int d = dim_report;
    CVector psi = CVector::Zero(d);
    psi[id.m] = psi[id.n] = 1.0 / std::sqrt(2.0);
    const CMatrix rho0 = psi * psi.adjoint();
    CMatrix a = CMatrix::Zero(d, d);
    for (int k = 1; k < d; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    const CMatrix ad = a.adjoint();
    CMatrix num = ad * a;
    num.diagonal().array() += 0.5;
    const CMatrix lowered = a * rho0 * ad;
    CMatrix out = rho0 + model.loss_coefficient() * lowered;
    out += model.nbar * (lowered + ad * rho0 * a - (num * rho0 + rho0 * num));
    out = 0.5 * (out + out.adjoint()).eval();

    Eigen::SelfAdjointEigenSolver<CMatrix> es(out);
    Eigen::VectorXd ev = es.eigenvalues();
    double clipped = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev[i] < -1e-12) {
            clipped += -ev[i];
            ev[i] = 0.0;
        }
    if (clipped > 0.0) out = es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    out /= out.trace().real();
    out = 0.5 * (out + out.adjoint()).eval();
    return PerturbedState{DensityMatrix(out), clipped};
}

namespace {

double log_binom(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

DensityMatrix loss_amplifier_channel(const DensityMatrix& rho, double tau, double gain) {
    if (!(tau > 0.0) || tau > 1.0) throw SpecError("loss transmission must lie in (0, 1]");
    if (!(gain >= 1.0)) throw SpecError("amplifier gain must be at least 1");
    const int d = rho.dim();
    const CMatrix& r = rho.elements();

    // Pure loss keeps the support inside d.
    CMatrix lossy = CMatrix::Zero(d, d);
    if (tau == 1.0) {
        lossy = r;
    } else {
        for (int k = 0; k < d; ++k) {
            CMatrix A = CMatrix::Zero(d, d);
            for (int n = k; n < d; ++n)
                A(n - k, n) = std::exp(0.5 * (log_binom(n, k) + (n - k) * std::log(tau) + k * std::log1p(-tau)));
            lossy += A * r * A.adjoint();
        }
    }
    if (gain == 1.0) return DensityMatrix(0.5 * (lossy + lossy.adjoint()), {1e-12, 1e-10, 1e-10});

    // The amplifier raises photon numbers; collect Kraus terms on a grown
    // space until their residual weight is negligible, then check what
    // escaped the reporting space.
    const double g = 1.0 / gain;
    const double up = 1.0 - g;
    int width = d + 8;
    for (;;) {
        CMatrix acc = CMatrix::Zero(width, width);
        double weight = 0.0;
        int k = 0;
        for (; k + d <= width; ++k) {
            CMatrix B = CMatrix::Zero(width, d);
            for (int n = 0; n < d; ++n)
                B(n + k, n) = std::exp(0.5 * (log_binom(n + k, n) + (n + 1) * std::log(g) + k * std::log(up)));
            const CMatrix term = B * lossy * B.adjoint();
            acc += term;
            weight += term.trace().real();
            if (1.0 - weight < 1e-14) break;
        }
        if (1.0 - weight < 1e-14) {
            const double escaped = 1.0 - acc.topLeftCorner(d, d).trace().real();
            if (escaped > 1e-10) {
                std::ostringstream os;
                os << "channel output leaks " << escaped << " beyond dimension " << d;
                throw TruncationError(os.str());
            }
            CMatrix out = acc.topLeftCorner(d, d);
            out = 0.5 * (out + out.adjoint()).eval();
            return DensityMatrix(out, {1e-12, 1e-10, 1e-10});
        }
        if (width > 4096) throw TruncationError("amplifier Kraus sum does not converge");
        width *= 2;
    }
}

DensityMatrix exact_channel(const DensityMatrix& rho, double eta, double nbar_env) {
    if (!(eta > 0.0) || eta > 1.0) throw SpecError("eta must lie in (0, 1]");
    if (nbar_env < 0.0) throw SpecError("nbar_env must be nonnegative");
    const double gain = 1.0 + (1.0 - eta) * nbar_env;
    return loss_amplifier_channel(rho, eta / gain, gain);
}

DensityMatrix model_channel(const DensityMatrix& rho, double loss, double nbar) {
    const double gain = 1.0 + nbar;
    return loss_amplifier_channel(rho, (1.0 - loss) / gain, gain);
}

double model_coherence(const CoherenceMeasureId& id, double loss, double nbar, const DepthOptions& opt) {
    NoisyStateModel m{id, loss, nbar, opt.reading, true};
    const int d = opt.dim_report > 0 ? opt.dim_report : id.n + 4;
    return coherence_element(perturbed_state(m, d).rho, id);
}

namespace {

template <class F>
DepthResult bisect_depth(DepthKind kind, double threshold, F&& coherence, double hi_cap,
                         double validity, double bracket) {
    if (!(threshold > 0.0)) throw SpecError("threshold must be positive");
    if (threshold >= 1.0 || coherence(0.0) <= threshold) {
        std::ostringstream os;
        os << "noiseless state does not beat threshold " << threshold;
        throw NoDepthError(os.str());
    }
    double lo = 0.0, hi = std::min(0.01, hi_cap);
    int it = 0;
    while (coherence(hi) > threshold) {
        lo = hi;
        hi = std::min(2.0 * hi, hi_cap);
        if (++it > 60 || (hi == hi_cap && coherence(hi) > threshold))
            throw NoDepthError("threshold is beaten across the whole noise range");
    }
    while (hi - lo > bracket) {
        const double mid = 0.5 * (lo + hi);
        if (coherence(mid) > threshold) lo = mid;
        else hi = mid;
        ++it;
    }
    DepthResult r;
    r.kind = kind;
    r.value = 0.5 * (lo + hi);
    r.threshold = threshold;
    r.iterations = it;
    r.bracket_width = hi - lo;
    r.perturbative_valid = r.value <= validity;
    r.coherence_at_value = coherence(r.value);
    return r;
}

}  // namespace

DepthResult loss_depth(const CoherenceMeasureId& id, double threshold, const DepthOptions& opt) {
    return bisect_depth(
        DepthKind::Loss, threshold, [&](double g) { return model_coherence(id, g, 0.0, opt); },
        1.0 - 1e-9, NoisyStateModel::kMaxLoss, opt.bracket);
}

DepthResult thermal_depth(const CoherenceMeasureId& id, double threshold, const DepthOptions& opt) {
    return bisect_depth(
        DepthKind::Thermal, threshold, [&](double n) { return model_coherence(id, 0.0, n, opt); }, 10.0,
        NoisyStateModel::kMaxNbar, opt.bracket);
}

std::vector<BoundaryPoint> depth_boundary(const CoherenceMeasureId& id, double threshold, int points,
                                          const DepthOptions& opt) {
    if (points < 2) throw SpecError("boundary sweep needs at least two points");
    const DepthResult th = thermal_depth(id, threshold, opt);
    std::vector<BoundaryPoint> out;
    for (int i = 0; i < points; ++i) {
        const double nb = th.value * i / (points - 1);
        BoundaryPoint bp{nb, 0.0};
        auto c = [&](double g) { return model_coherence(id, g, nb, opt); };
        if (c(0.0) > threshold) {
            double lo = 0.0, hi = 1.0 - 1e-9;
            if (c(hi) > threshold) {
                lo = hi;
            } else {
                while (hi - lo > opt.bracket) {
                    const double mid = 0.5 * (lo + hi);
                    if (c(mid) > threshold) lo = mid;
                    else hi = mid;
                }
            }
            bp.loss = 0.5 * (lo + hi);
        }
        out.push_back(bp);
    }
    return out;
}

}  // namespace qngc
