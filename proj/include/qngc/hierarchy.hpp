#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qngc/measures.hpp"

namespace qngc {

enum class HierarchyKind { GaussianVacuum, FockFamily, Stellar, NHierarchy, LHierarchy, MissingOne };

struct HierarchySpec {
    HierarchyKind kind = HierarchyKind::FockFamily;
    int order = 1;     // k for N, r for L, N for MissingOne
    int excluded = 0;  // l for MissingOne

    static HierarchySpec gaussian_vacuum() { return {HierarchyKind::GaussianVacuum, 1, 0}; }
    static HierarchySpec fock_family() { return {HierarchyKind::FockFamily, 1, 0}; }
    static HierarchySpec stellar() { return {HierarchyKind::Stellar, 1, 0}; }
    static HierarchySpec n_hierarchy(int k) { return {HierarchyKind::NHierarchy, k, 0}; }
    static HierarchySpec l_hierarchy(int r) { return {HierarchyKind::LHierarchy, r, 0}; }
    static HierarchySpec missing_one(int N, int l) { return {HierarchyKind::MissingOne, N, l}; }

    std::string label() const;

    friend bool operator==(const HierarchySpec&, const HierarchySpec&) = default;
};

std::string kind_name(HierarchyKind kind);
HierarchyKind parse_kind(const std::string& name);

using CoreSubspace = std::vector<int>;

struct CoreFamily {
    std::vector<CoreSubspace> subspaces;
    // Index of the first subspace of the monotone sweep (singletons or
    // windows); the optimizer may cut the sweep short past a decaying tail.
    std::size_t sweep_begin = 0;
    std::vector<std::string> warnings;
};

// False when some core subspace contains both m and n, so the family
// reaches C = 1 and the threshold is the sentinel 1.
bool beatable(const HierarchySpec& spec, const CoherenceMeasureId& id);

CoreFamily core_subspaces(const HierarchySpec& spec, const CoherenceMeasureId& id, int dim_report);

// Draws random unit vectors in each core subspace and checks that every
// coherence C_{i,j} the family rejects vanishes to 1e-12.
bool verify_core_property(const HierarchySpec& spec, const CoherenceMeasureId& id, int dim_report,
                          int samples, std::uint64_t seed);

// Pairs (i, j), i < j < dim_report, whose coherence the core family must null.
std::vector<std::pair<int, int>> rejected_pairs(const HierarchySpec& spec,
                                                const CoherenceMeasureId& id, int dim_report);

bool is_subset(const CoreSubspace& inner, const CoreSubspace& outer);

}  // namespace qngc
