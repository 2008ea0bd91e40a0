#pragma once

#include "clarr/mw.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace clarr {

/// Projective point [T : X : Z]; the affine chart is t = T/Z, x = X/Z.
using PPoint = std::array<TowerElem, 3>;

/// A smooth line or conic, stored as its affine equation F(t, x) = 0 of total
/// degree 1 or 2. Graph curves x = q(t) keep q.
class PlaneCurve {
public:
    static PlaneCurve graph(std::string label, Poly q);
    /// Normalizes to graph form when F = c (x - q(t)). The optional hint is a
    /// point on the curve used to parametrize conics without a graph form.
    static PlaneCurve general(std::string label, BivarPoly f, std::optional<PPoint> hint = std::nullopt);

    const std::string& label() const { return label_; }
    int degree() const { return degree_; }
    const BivarPoly& affine() const { return f_; }
    const std::optional<Poly>& graph_poly() const { return graph_; }
    const std::optional<PPoint>& hint() const { return hint_; }

    /// Homogeneous value F(T, X, Z).
    TowerElem eval(const PPoint& p) const;
    bool contains(const PPoint& p) const { return eval(p).is_zero(); }
    /// Same zero set (equations proportional).
    bool same_curve(const PlaneCurve& o) const;

    /// Group-law expression or construction the curve came from.
    std::string recipe;

private:
    std::string label_;
    int degree_ = 0;
    BivarPoly f_;
    std::optional<Poly> graph_;
    std::optional<PPoint> hint_;
};

/// Graph curve x = x_P(t) of a section with polynomial x of degree <= 2.
PlaneCurve curve_from_section(const MWPoint& p, const std::string& label);
/// The pencil member c_(lambda', t) = 0; rejects critical lambda'.
PlaneCurve pencil_conic(const TVec& t, const TowerElem& lambda, const std::string& label);

/// phi(s, u) of degree d with components given at u = 1 as polynomials in s,
/// plus the point at u = 0.
struct Parametrization {
    int degree = 0;
    std::array<Poly, 3> affine; // T, X, Z at u = 1
    PPoint at_infinity;         // phi(1, 0)
};

Parametrization parametrize(const PlaneCurve& c);

/// Points of A cap B with one contact order, identified through the values
/// of the separating form W = l1 / l0: chi is monic with the W-values as roots.
struct IntersectionRecord {
    int a = 0, b = 0;
    int multiplicity = 0;
    Poly chi;
    int count() const { return chi.degree(); }
};

struct SingularPoint {
    std::vector<int> branches;               // sorted component indices
    std::vector<std::array<int, 3>> contacts; // (i, j, m), i < j
    std::string type; // node, tacnode, ordinary_triple, higher_contact(k), other
    Poly locus;       // irreducible-over-the-tower factor of W-values
};

struct Combinatorics {
    std::vector<std::string> labels;
    std::vector<int> degrees;
    /// One entry per point (a locus of degree k contributes k entries).
    std::vector<SingularPoint> points;

    std::map<std::string, int> type_counts() const;
};

struct Analysis {
    /// Coefficients of l0 and l1 in (T, X, Z).
    std::array<TowerElem, 3> l0, l1;
    std::vector<IntersectionRecord> records;
    Combinatorics combinatorics;
};

/// Pairwise intersections and singular points of a reduced arrangement of
/// smooth lines and conics; throws on coincident components.
Analysis analyze(const std::vector<PlaneCurve>& components);

inline Combinatorics classify_singularities(const std::vector<PlaneCurve>& components)
{
    return analyze(components).combinatorics;
}

/// Every degree-preserving bijection sigma (a index -> b index) carrying the
/// singular-point data of a onto b.
std::vector<std::vector<int>> isomorphisms(const Combinatorics& a, const Combinatorics& b);
bool combinatorics_isomorphic(const Combinatorics& a, const Combinatorics& b);
/// Relabeled form minimal over all degree-sorting bijections; loci dropped.
Combinatorics canonical_form(const Combinatorics& c);

} // namespace clarr
