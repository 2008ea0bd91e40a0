#include "clarr/invariants.hpp"

#include "clarr/error.hpp"

#include <algorithm>
#include <regex>
#include <set>

namespace clarr {

using nlohmann::json;

CoverRestriction cover_restrict(const std::vector<PlaneCurve>& branch, const PlaneCurve& c)
{
    int deg = 0;
    for (const PlaneCurve& b : branch)
        deg += b.degree();
    if (deg != 4)
        fail_input("bad_branch", "branch curve has degree " + std::to_string(deg) + ", expected 4");
    if (!c.graph_poly())
        fail_input("not_graph", "curve " + c.label() + " has no graph form x = q(t)");
    const Poly& q = *c.graph_poly();
    Poly r(TowerElem(1));
    for (const PlaneCurve& b : branch)
        r *= b.affine().substitute_x(q);
    if (r.is_zero())
        fail_input("component_of_branch", "curve " + c.label() + " is a component of the branch curve");
    auto sq = square_up_to_constant(r);
    if (!sq)
        fail_input("does_not_split", "curve " + c.label() + " does not split: restriction " + r.str() +
                                         " is not a square up to a constant");
    return {sq->c, sq->g};
}

SplittingType splitting_type_geometric(const std::vector<PlaneCurve>& branch, const PlaneCurve& d1,
                                       const PlaneCurve& d2)
{
    CoverRestriction r1 = cover_restrict(branch, d1), r2 = cover_restrict(branch, d2);
    Poly h = *d1.graph_poly() - *d2.graph_poly();
    const int n = d1.degree() * d2.degree();
    if (h.is_zero())
        fail_input("coincident_components", d1.label() + " and " + d2.label() + " coincide");
    if (h.degree() != n)
        fail_input("intersection_at_infinity", d1.label() + " and " + d2.label() + " meet on the line at infinity");
    if (gcd(h, h.derivative()).degree() > 0)
        fail_input("non_transverse", d1.label() + " and " + d2.label() + " are tangent");
    if (gcd(h, r1.g).degree() > 0)
        fail_input("intersection_on_branch", d1.label() + " and " + d2.label() + " meet on the branch curve");
    auto s1 = try_sqrt(r1.c), s2 = try_sqrt(r2.c);
    if (!s1 || !s2)
        fail_input("unsupported_extension", "square root of the restriction constant leaves the tower");
    Poly w = r1.g * *s1 - r2.g * *s2;
    int m = w.is_zero() ? n : gcd(h, w).degree();
    return {std::min(m, n - m), std::max(m, n - m)};
}

SplittingType splitting_type_predicted(const EllipticSurface& surface, const MWPoint& pd, const MWPoint& pm)
{
    if (pd.is_zero() || pm.is_zero())
        fail_input("zero_section", "the zero section has no plane curve");
    ComponentFlags a = surface.flags(pd), b = surface.flags(pm);
    for (std::size_t i = 0; i < a.flags.size(); ++i)
        if (a.flags[i] == FiberFlag::nonidentity && b.flags[i] == FiberFlag::nonidentity)
            fail_input("shared_component", pd.recipe + " and " + pm.recipe + " meet the same component of fiber " +
                                               a.fibers[i]);
    if (surface.zero_intersection(pd) != 0 || surface.zero_intersection(pm) != 0)
        fail_input("not_integral", "sections must be disjoint from the zero section");
    Rat u = surface.section_intersection(pd, pm), v = surface.section_intersection(pd, surface.neg(pm));
    u.canonicalize();
    v.canonicalize();
    if (u.get_den() != 1 || v.get_den() != 1)
        fail_internal("lattice_inconsistent", "non-integral section intersection");
    long x = u.get_num().get_si(), y = v.get_num().get_si();
    return {static_cast<int>(std::min(x, y)), static_cast<int>(std::max(x, y))};
}

std::string dependence_name(Dependence d)
{
    return d == Dependence::dependent ? "dependent" : "independent";
}

Dependence dihedral_dependence_test(const std::vector<LatticeCoord>& points, long p)
{
    bool prime = p >= 3 && p % 2 == 1;
    for (long d = 3; prime && d * d <= p; d += 2)
        prime = p % d != 0;
    if (!prime)
        fail_input("bad_prime", "dependence test needs an odd prime, got " + std::to_string(p));
    std::vector<std::vector<long>> rows;
    std::size_t width = 0;
    for (const LatticeCoord& c : points)
        width = std::max(width, c.free.size());
    for (const LatticeCoord& c : points) {
        std::vector<long> r(width, 0);
        for (std::size_t i = 0; i < c.free.size(); ++i)
            r[i] = ((c.free[i] % p) + p) % p;
        rows.push_back(std::move(r));
    }
    auto inv = [p](long a) {
        long r = 1, e = p - 2;
        for (a %= p; e; e >>= 1, a = a * a % p)
            if (e & 1)
                r = r * a % p;
        return r;
    };
    std::size_t rank = 0;
    for (std::size_t col = 0; col < width && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][col] == 0)
            ++piv;
        if (piv == rows.size())
            continue;
        std::swap(rows[piv], rows[rank]);
        long ip = inv(rows[rank][col]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col] == 0)
                continue;
            long f = rows[r][col] * ip % p;
            for (std::size_t k = 0; k < width; ++k)
                rows[r][k] = ((rows[r][k] - f * rows[rank][k]) % p + p) % p;
        }
        ++rank;
    }
    return rank < points.size() ? Dependence::dependent : Dependence::independent;
}

// Certificates

namespace {

std::vector<int> plinth_indices(const Arrangement& a)
{
    return a.plinth == Plinth::P1 ? std::vector<int>{0, 1, 2} : std::vector<int>{0, 1};
}

std::string joined_labels(const Arrangement& a, const std::vector<int>& idx)
{
    std::string s;
    for (int i : idx)
        s += (s.empty() ? "" : "+") + a.components[i].label();
    return s;
}

// Splitting types per (branch set, pair), cached; nullopt when the
// preconditions fail for that decomposition.
class SplitCache {
public:
    explicit SplitCache(const Arrangement& a) : a_(a) {}

    std::optional<SplittingType> get(std::vector<int> branch, int i, int j)
    {
        std::sort(branch.begin(), branch.end());
        if (i > j)
            std::swap(i, j);
        auto key = std::make_tuple(branch, i, j);
        auto it = cache_.find(key);
        if (it != cache_.end())
            return it->second;
        std::optional<SplittingType> v;
        std::vector<PlaneCurve> b;
        for (int k : branch)
            b.push_back(a_.components[k]);
        try {
            v = splitting_type_geometric(b, a_.components[i], a_.components[j]);
        } catch (const Error& e) {
            if (e.error_class() != ErrorClass::input)
                throw;
        }
        cache_[key] = v;
        return v;
    }

    const auto& entries() const { return cache_; }

private:
    const Arrangement& a_;
    std::map<std::tuple<std::vector<int>, int, int>, std::optional<SplittingType>> cache_;
};

// Mordell-Weil point behind a non-plinth component, if its recipe names one.
std::optional<MWPoint> component_point(const EllipticSurface& s, const PlaneCurve& c)
{
    static const std::regex line_re(R"(^\s*L([1-4])([1-4])\s*$)");
    std::smatch m;
    if (std::regex_match(c.recipe, m, line_re))
        return s.generator("P" + m[1].str() + m[2].str());
    if (c.recipe.empty() || c.recipe.find("pencil") != std::string::npos)
        return std::nullopt;
    try {
        return s.recipe(c.recipe);
    } catch (const Error& e) {
        if (e.error_class() != ErrorClass::input)
            throw;
        return std::nullopt;
    }
}

struct Dihedral {
    std::vector<std::string> points;
    Dependence value;
};

// Only on the conic-conic plinth, where the free parts live in the M2 basis.
std::optional<Dihedral> dihedral_of(const Arrangement& a, long p)
{
    if (!a.params || a.plinth != Plinth::P2)
        return std::nullopt;
    EllipticSurface s(*a.params);
    std::vector<int> pl = plinth_indices(a);
    Dihedral d;
    std::vector<LatticeCoord> coords;
    for (int k = 0; k < static_cast<int>(a.components.size()); ++k) {
        if (std::find(pl.begin(), pl.end(), k) != pl.end())
            continue;
        auto pt = component_point(s, a.components[k]);
        if (!pt || !pt->lattice)
            return std::nullopt;
        if (!s.on_curve(*pt) || !curve_from_section(*pt, "").same_curve(a.components[k]))
            fail_input("recipe_mismatch", "component " + a.components[k].label() + " does not match its recipe");
        coords.push_back(*pt->lattice);
        d.points.push_back(a.components[k].recipe);
    }
    d.value = dihedral_dependence_test(coords, p);
    return d;
}

// Lattice prediction on the plinth decomposition for conic-line pairs; a
// disagreement with the geometric count is an internal inconsistency.
void check_oracle(const Arrangement& a, SplitCache& cache)
{
    if (!a.params)
        return;
    EllipticSurface s(*a.params);
    std::vector<int> pl = plinth_indices(a);
    const int n = static_cast<int>(a.components.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (std::find(pl.begin(), pl.end(), i) != pl.end() || std::find(pl.begin(), pl.end(), j) != pl.end())
                continue;
            if (a.components[i].degree() + a.components[j].degree() != 3)
                continue;
            auto geo = cache.get(pl, i, j);
            auto pi = component_point(s, a.components[i]), pj = component_point(s, a.components[j]);
            if (!geo || !pi || !pj)
                continue;
            std::optional<SplittingType> pred;
            try {
                pred = splitting_type_predicted(s, *pi, *pj);
            } catch (const Error& e) {
                if (e.error_class() != ErrorClass::input)
                    throw;
            }
            if (pred && !(*pred == *geo))
                fail_internal("oracle_disagreement", "lattice and geometric splitting types differ for " +
                                                         a.components[i].label() + ", " +
                                                         a.components[j].label());
        }
}

std::vector<int> image(const std::vector<int>& sigma, const std::vector<int>& idx)
{
    std::vector<int> out;
    for (int i : idx)
        out.push_back(sigma[i]);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> preimage(const std::vector<int>& sigma, const std::vector<int>& idx)
{
    std::vector<int> out;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        if (std::find(idx.begin(), idx.end(), sigma[i]) != idx.end())
            out.push_back(static_cast<int>(i));
    return out;
}

} // namespace

Certificate zariski_certificate(const Arrangement& a, const Arrangement& b, const CertificateConfig& config)
{
    Certificate cert;
    Combinatorics ca = classify_singularities(a.components), cb = classify_singularities(b.components);
    std::vector<std::vector<int>> isos = isomorphisms(ca, cb);
    cert.combinatorics_isomorphic = !isos.empty();
    cert.isomorphisms = static_cast<int>(isos.size());

    SplitCache sa(a), sb(b);
    std::optional<Dihedral> da, db;
    if (config.dihedral) {
        da = dihedral_of(a, config.prime);
        db = dihedral_of(b, config.prime);
    }
    if (config.splitting) {
        check_oracle(a, sa);
        check_oracle(b, sb);
        // Values on the standard decompositions are always reported.
        for (auto [arr, cache] : {std::pair{&a, &sa}, std::pair{&b, &sb}}) {
            std::vector<int> pl = plinth_indices(*arr);
            for (int i = 0; i < static_cast<int>(arr->components.size()); ++i)
                for (int j = i + 1; j < static_cast<int>(arr->components.size()); ++j)
                    if (std::find(pl.begin(), pl.end(), i) == pl.end() &&
                        std::find(pl.begin(), pl.end(), j) == pl.end())
                        cache->get(pl, i, j);
        }
    }

    const std::vector<int> pa = plinth_indices(a), pb = plinth_indices(b);
    for (const std::vector<int>& sigma : isos) {
        bool separated = false;
        if (config.splitting) {
            std::set<std::vector<int>> branches = {pa, preimage(sigma, pb)};
            for (const std::vector<int>& br : branches) {
                const int n = static_cast<int>(a.components.size());
                for (int i = 0; i < n && !separated; ++i)
                    for (int j = i + 1; j < n && !separated; ++j) {
                        if (std::find(br.begin(), br.end(), i) != br.end() ||
                            std::find(br.begin(), br.end(), j) != br.end())
                            continue;
                        auto va = sa.get(br, i, j);
                        if (!va)
                            continue;
                        auto vb = sb.get(image(sigma, br), sigma[i], sigma[j]);
                        separated = vb && !(*va == *vb);
                    }
            }
        }
        if (!separated && da && db && image(sigma, pa) == pb)
            separated = da->value != db->value;
        if (separated)
            ++cert.isomorphisms_separated;
    }

    for (auto [idx, arr, cache] : {std::tuple{1, &a, &sa}, std::tuple{2, &b, &sb}})
        for (const auto& [key, v] : cache->entries()) {
            if (!v)
                continue;
            const auto& [br, i, j] = key;
            InvariantValue iv;
            iv.kind = "splitting_type";
            iv.arrangement = idx;
            iv.components = {joined_labels(*arr, br), arr->components[i].label(), arr->components[j].label()};
            iv.splitting = *v;
            iv.value = "(" + std::to_string(v->m1) + "," + std::to_string(v->m2) + ")";
            cert.invariants.push_back(iv);
        }
    for (auto [idx, d] : {std::pair{1, &da}, std::pair{2, &db}})
        if (*d) {
            InvariantValue iv;
            iv.kind = "dihedral_dependence";
            iv.arrangement = idx;
            iv.components = (*d)->points;
            iv.value = dependence_name((*d)->value);
            cert.invariants.push_back(iv);
        }

    if (isos.empty())
        cert.verdict = "combinatorics_differ";
    else if (cert.isomorphisms_separated == cert.isomorphisms)
        cert.verdict = "zariski_pair_certified";
    else
        cert.verdict = "indistinguishable_by_these_invariants";
    return cert;
}

json certificate_to_json(const Certificate& c, const Arrangement& a, const Arrangement& b,
                         const CertificateConfig& config)
{
    json inputs = json::array();
    for (const Arrangement* arr : {&a, &b}) {
        json comps = json::array();
        for (const PlaneCurve& pc : arr->components)
            comps.push_back({{"label", pc.label()}, {"recipe", pc.recipe}, {"equation", pc.affine().str() + " = 0"}});
        json in = {{"cmb", arr->cmb}, {"plinth", plinth_name(arr->plinth)}, {"components", comps}};
        if (arr->params)
            in["params"] = params_to_json(*arr->params);
        inputs.push_back(in);
    }
    json inv = json::array();
    for (const InvariantValue& v : c.invariants) {
        if (v.kind == "splitting_type")
            inv.push_back({{"kind", v.kind}, {"arrangement", v.arrangement}, {"triple", v.components},
                           {"value", {v.splitting.m1, v.splitting.m2}}});
        else
            inv.push_back({{"kind", v.kind}, {"arrangement", v.arrangement}, {"p", config.prime},
                           {"points", v.components}, {"value", v.value}});
    }
    return {{"format", "clarr-certificate"},
            {"version", 1},
            {"inputs", inputs},
            {"combinatorics_isomorphic", c.combinatorics_isomorphic},
            {"isomorphisms", c.isomorphisms},
            {"isomorphisms_separated", c.isomorphisms_separated},
            {"invariants", inv},
            {"verdict", c.verdict}};
}

} // namespace clarr
