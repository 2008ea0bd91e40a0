#pragma once

#include "clarr/arrangement.hpp"

#include <string>
#include <vector>

namespace clarr {

/// m1 <= m2, m1 + m2 = D1 . D2.
struct SplittingType {
    int m1 = 0, m2 = 0;
    friend bool operator==(const SplittingType&, const SplittingType&) = default;
};

/// F_B(t, q(t)) = c g(t)^2; the lifts of x = q(t) to w^2 = F_B are w = +-sqrt(c) g.
struct CoverRestriction {
    TowerElem c;
    Poly g;
};

/// B must multiply to a quartic and c must be a graph curve; throws
/// "does_not_split" when the restriction is not a square up to a constant.
CoverRestriction cover_restrict(const std::vector<PlaneCurve>& branch, const PlaneCurve& c);

/// Splitting type of (D1, D2; B) from the lifts. Requires both curves to split,
/// D1 cap D2 finite, transverse and off B.
SplittingType splitting_type_geometric(const std::vector<PlaneCurve>& branch, const PlaneCurve& d1,
                                       const PlaneCurve& d2);

/// Same count from the lattice: s_D . s_M and s_D . s_{-M} by the Shioda
/// formula. Refuses pairs that share a fiber component or are not integral.
SplittingType splitting_type_predicted(const EllipticSurface& surface, const MWPoint& pd, const MWPoint& pm);

enum class Dependence { dependent, independent };

std::string dependence_name(Dependence d);

/// Linear dependence of the free parts mod an odd prime p.
Dependence dihedral_dependence_test(const std::vector<LatticeCoord>& points, long p);

struct CertificateConfig {
    bool splitting = true;
    bool dihedral = true;
    long prime = 3;
};

struct InvariantValue {
    std::string kind; // "splitting_type" or "dihedral_dependence"
    int arrangement = 0;
    std::vector<std::string> components; // branch labels, then D1, D2 / point recipes
    std::string value;
    SplittingType splitting;
};

struct Certificate {
    bool combinatorics_isomorphic = false;
    int isomorphisms = 0;
    int isomorphisms_separated = 0;
    std::vector<InvariantValue> invariants;
    std::string verdict; // zariski_pair_certified, indistinguishable_by_these_invariants, combinatorics_differ
};

/// Every combinatorial isomorphism a -> b must be separated by an invariant
/// computed on corresponding decompositions for the pair to be certified.
Certificate zariski_certificate(const Arrangement& a, const Arrangement& b, const CertificateConfig& config = {});

nlohmann::json certificate_to_json(const Certificate& c, const Arrangement& a, const Arrangement& b,
                                   const CertificateConfig& config);

} // namespace clarr
