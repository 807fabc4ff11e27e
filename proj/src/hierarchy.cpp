#include "qngc/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qngc/errors.hpp"

namespace qngc {

std::string kind_name(HierarchyKind kind) {
    switch (kind) {
        case HierarchyKind::GaussianVacuum: return "gauss";
        case HierarchyKind::FockFamily: return "fock";
        case HierarchyKind::Stellar: return "stellar";
        case HierarchyKind::NHierarchy: return "N";
        case HierarchyKind::LHierarchy: return "L";
        case HierarchyKind::MissingOne: return "missing";
    }
    return "?";
}

HierarchyKind parse_kind(const std::string& name) {
    if (name == "gauss") return HierarchyKind::GaussianVacuum;
    if (name == "fock") return HierarchyKind::FockFamily;
    if (name == "stellar") return HierarchyKind::Stellar;
    if (name == "N") return HierarchyKind::NHierarchy;
    if (name == "L") return HierarchyKind::LHierarchy;
    if (name == "missing") return HierarchyKind::MissingOne;
    throw SpecError("unknown hierarchy kind '" + name + "'");
}

std::string HierarchySpec::label() const {
    std::string s = kind_name(kind);
    if (kind == HierarchyKind::NHierarchy || kind == HierarchyKind::LHierarchy)
        s += std::to_string(order);
    if (kind == HierarchyKind::MissingOne)
        s += "(" + std::to_string(order) + "," + std::to_string(excluded) + ")";
    return s;
}

bool is_subset(const CoreSubspace& inner, const CoreSubspace& outer) {
    return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

bool beatable(const HierarchySpec& spec, const CoherenceMeasureId& id) {
    switch (spec.kind) {
        case HierarchyKind::GaussianVacuum:
        case HierarchyKind::FockFamily:
        case HierarchyKind::Stellar: return true;
        case HierarchyKind::NHierarchy: return spec.order <= id.n;
        case HierarchyKind::LHierarchy: return spec.order <= id.n - id.m;
        case HierarchyKind::MissingOne: return spec.excluded == id.m || spec.excluded == id.n ||
                                               id.n > spec.order;
    }
    return true;
}

CoreFamily core_subspaces(const HierarchySpec& spec, const CoherenceMeasureId& id, int dim_report) {
    if (spec.order < 1) throw SpecError("hierarchy order must be at least 1");
    id.check(dim_report);
    CoreFamily fam;
    auto span = [](int lo, int hi) {
        CoreSubspace s;
        for (int i = lo; i < hi; ++i) s.push_back(i);
        return s;
    };
    switch (spec.kind) {
        case HierarchyKind::GaussianVacuum:
            fam.subspaces = {{0}};
            break;
        case HierarchyKind::FockFamily:
            for (int j = 0; j < dim_report; ++j) fam.subspaces.push_back({j});
            break;
        case HierarchyKind::Stellar:
            fam.subspaces = {span(0, id.n)};
            break;
        case HierarchyKind::NHierarchy:
            if (spec.order > dim_report) throw SpecError("N-hierarchy order exceeds dim_report");
            fam.subspaces.push_back(span(0, spec.order));
            fam.sweep_begin = 1;
            for (int j = 0; j < dim_report; ++j) fam.subspaces.push_back({j});
            break;
        case HierarchyKind::LHierarchy:
            if (spec.order > dim_report) throw SpecError("L-hierarchy order exceeds dim_report");
            for (int s = 0; s + spec.order <= dim_report; ++s)
                fam.subspaces.push_back(span(s, s + spec.order));
            break;
        case HierarchyKind::MissingOne: {
            if (spec.order >= dim_report) throw SpecError("missing-one cutoff must be below dim_report");
            if (spec.excluded < 0 || spec.excluded > spec.order)
                throw SpecError("excluded index outside 0..N");
            CoreSubspace s;
            for (int i = 0; i <= spec.order; ++i)
                if (i != spec.excluded) s.push_back(i);
            fam.subspaces = {s};
            break;
        }
    }
    if (!beatable(spec, id))
        fam.warnings.push_back("order " + std::to_string(spec.order) + " of " + kind_name(spec.kind) +
                               " is not beatable for " + id.label());
    return fam;
}

std::vector<std::pair<int, int>> rejected_pairs(const HierarchySpec& spec,
                                                const CoherenceMeasureId& id, int dim_report) {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < dim_report; ++i)
        for (int j = i + 1; j < dim_report; ++j) {
            bool rejected = false;
            switch (spec.kind) {
                case HierarchyKind::GaussianVacuum:
                case HierarchyKind::FockFamily: rejected = true; break;
                case HierarchyKind::Stellar: rejected = j >= id.n; break;
                case HierarchyKind::NHierarchy: rejected = j >= spec.order; break;
                case HierarchyKind::LHierarchy: rejected = j - i >= spec.order; break;
                case HierarchyKind::MissingOne:
                    rejected = i == spec.excluded || j == spec.excluded;
                    break;
            }
            if (rejected) out.emplace_back(i, j);
        }
    return out;
}

bool verify_core_property(const HierarchySpec& spec, const CoherenceMeasureId& id, int dim_report,
                          int samples, std::uint64_t seed) {
    if (samples < 1) throw SpecError("samples must be positive");
    const CoreFamily fam = core_subspaces(spec, id, dim_report);
    const auto pairs = rejected_pairs(spec, id, dim_report);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    for (const auto& sub : fam.subspaces) {
        for (int s = 0; s < samples; ++s) {
            CVector v = CVector::Zero(dim_report);
            for (int i : sub) v[i] = cplx(g(rng), g(rng));
            const StateVector psi(v);
            for (const auto& [i, j] : pairs)
                if (2.0 * std::abs(psi[i] * std::conj(psi[j])) > 1e-12) return false;
        }
    }
    return true;
}

}  // namespace qngc
