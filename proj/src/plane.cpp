#include "clarr/plane.hpp"

#include "clarr/error.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <tuple>

namespace clarr {

namespace {

// Symmetric matrix of the homogeneous quadratic form of a conic.
using Mat3 = std::array<std::array<TowerElem, 3>, 3>;

Mat3 conic_matrix(const BivarPoly& f)
{
    // F = a T^2 + b T X + c X^2 + d T Z + e X Z + g Z^2
    TowerElem half = TowerElem(Rat(1, 2));
    TowerElem a = f.coeff(2, 0), b = f.coeff(1, 1), c = f.coeff(0, 2), d = f.coeff(1, 0), e = f.coeff(0, 1),
              g = f.coeff(0, 0);
    return {{{a, b * half, d * half}, {b * half, c, e * half}, {d * half, e * half, g}}};
}

TowerElem det3(const Mat3& m)
{
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

template <class V>
V bilinear(const Mat3& q, const std::array<V, 3>& p, const std::array<V, 3>& d)
{
    V out = V(TowerElem(0));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (!q[i][j].is_zero())
                out = out + p[i] * d[j] * q[i][j];
    return out;
}

Poly power(const Poly& p, int n)
{
    return n == 0 ? Poly(TowerElem(1)) : p.pow(n);
}

// F(T, X, Z) with polynomial coordinates.
Poly eval_homogeneous(const PlaneCurve& c, const std::array<Poly, 3>& p)
{
    Poly out;
    for (const auto& [key, coef] : c.affine().terms()) {
        int z = c.degree() - key.first - key.second;
        out = out + power(p[0], key.first) * power(p[1], key.second) * power(p[2], z) * coef;
    }
    return out;
}

std::optional<TowerElem> quadratic_root(const Poly& g, bool allow_extension)
{
    if (g.degree() == 1)
        return -g.coeff(0) / g.coeff(1);
    if (g.degree() != 2)
        return std::nullopt;
    TowerElem disc = g.coeff(1) * g.coeff(1) - 4 * g.coeff(2) * g.coeff(0);
    std::optional<TowerElem> r = allow_extension ? try_sqrt(disc) : sqrt_in_tower(disc);
    if (!r)
        return std::nullopt;
    return (-g.coeff(1) + *r) / (2 * g.coeff(2));
}

PPoint find_point(const PlaneCurve& c)
{
    if (c.hint() && c.contains(*c.hint()))
        return *c.hint();
    const PPoint zo{TowerElem(0), TowerElem(1), TowerElem(0)};
    if (c.contains(zo))
        return zo;
    std::vector<Rat> ks;
    for (int n = 0; n <= 12; ++n) {
        ks.emplace_back(n);
        if (n)
            ks.emplace_back(-n);
    }
    for (int d = 2; d <= 4; ++d)
        for (int n = -3 * d; n <= 3 * d; ++n)
            if (std::gcd(n, d) == 1)
                ks.emplace_back(n, d);
    for (bool extend : {false, true})
        for (const Rat& k : ks) {
            if (auto x = quadratic_root(c.affine().at_t(TowerElem(k)), extend))
                return {TowerElem(k), *x, TowerElem(1)};
            // x = k: swap roles through the coefficients in t.
            std::vector<Poly> cols = c.affine().coefficients_in(false);
            Poly in_t;
            TowerElem xv(k);
            TowerElem pw(1);
            for (const Poly& col : cols) {
                in_t = in_t + col * pw;
                pw *= xv;
            }
            if (auto t = quadratic_root(in_t, extend))
                return {*t, xv, TowerElem(1)};
        }
    fail_internal("no_point", "could not find a point on conic " + c.label());
}

// Monic chi(W) = prod over roots s of f of (W - N(s)/M(s)); nullopt if M
// vanishes at a root of f.
std::optional<Poly> chi_of(const Poly& f, const Poly& m, const Poly& n)
{
    int k = f.degree();
    if (k <= 0)
        return Poly(TowerElem(1));
    if (gcd(m, f).degree() > 0)
        return std::nullopt;
    auto mult_matrix = [&](const Poly& g) {
        std::vector<std::vector<TowerElem>> out(k, std::vector<TowerElem>(k));
        Poly cur = divmod(g, f).second;
        for (int j = 0; j < k; ++j) {
            for (int i = 0; i < k; ++i)
                out[i][j] = cur.coeff(i);
            cur = divmod(cur * Poly::var(), f).second;
        }
        return out;
    };
    auto mm = mult_matrix(m), nn = mult_matrix(n);
    std::vector<std::vector<Poly>> w(k, std::vector<Poly>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            w[i][j] = Poly({-nn[i][j], mm[i][j]});
    return determinant(w).monic();
}

bool squarefree(const Poly& p)
{
    return p.degree() <= 0 || gcd(p, p.derivative()).degree() == 0;
}

Poly linear_factor(const TowerElem& root) { return Poly({-root, TowerElem(1)}); }

// Intersection of a with b seen on a's parametrization.
struct PairView {
    std::vector<SquarefreeFactor> finite;
    int at_infinity = 0;
};

PairView pair_view(const PlaneCurve& a, const Parametrization& pa, const PlaneCurve& b)
{
    Poly r = eval_homogeneous(b, pa.affine);
    if (r.is_zero())
        fail_input("coincident_components", "components " + a.label() + " and " + b.label() + " coincide");
    PairView v;
    v.at_infinity = pa.degree * b.degree() - r.degree();
    for (const SquarefreeFactor& f : squarefree_decomposition(r))
        if (f.factor.degree() > 0)
            v.finite.push_back(f);
    return v;
}

struct Attempt {
    std::array<TowerElem, 3> l0, l1;
};

TowerElem apply(const std::array<TowerElem, 3>& l, const PPoint& p)
{
    return l[0] * p[0] + l[1] * p[1] + l[2] * p[2];
}

Poly apply(const std::array<TowerElem, 3>& l, const std::array<Poly, 3>& p)
{
    return p[0] * l[0] + p[1] * l[1] + p[2] * l[2];
}

// chi per multiplicity for the pair, seen from a; nullopt if l0 vanishes at
// one of the points.
std::optional<std::map<int, Poly>> chis(const PairView& v, const Parametrization& pa, const Attempt& at)
{
    std::map<int, Poly> out;
    Poly m = apply(at.l0, pa.affine), n = apply(at.l1, pa.affine);
    for (const SquarefreeFactor& f : v.finite) {
        auto c = chi_of(f.factor, m, n);
        if (!c)
            return std::nullopt;
        auto [it, fresh] = out.try_emplace(f.multiplicity, *c);
        if (!fresh)
            it->second = it->second * *c;
    }
    if (v.at_infinity > 0) {
        TowerElem d = apply(at.l0, pa.at_infinity);
        if (d.is_zero())
            return std::nullopt;
        Poly lf = linear_factor(apply(at.l1, pa.at_infinity) / d);
        auto [it, fresh] = out.try_emplace(v.at_infinity, lf);
        if (!fresh)
            it->second = it->second * lf;
    }
    return out;
}

std::string point_type(const SingularPoint& p)
{
    if (p.branches.size() == 2) {
        int m = p.contacts.front()[2];
        if (m == 1)
            return "node";
        if (m == 2)
            return "tacnode";
        return "higher_contact(" + std::to_string(m) + ")";
    }
    if (p.branches.size() == 3 &&
        std::all_of(p.contacts.begin(), p.contacts.end(), [](const auto& c) { return c[2] == 1; }))
        return "ordinary_triple";
    return "other";
}

std::optional<Analysis> try_analyze(const std::vector<PlaneCurve>& comps, const std::vector<Parametrization>& params,
                                    const std::vector<std::vector<PairView>>& views, const Attempt& at)
{
    const int n = static_cast<int>(comps.size());
    // W must be defined and injective on the special points of each component.
    for (int a = 0; a < n; ++a) {
        std::vector<Poly> factors;
        bool infinity = false;
        for (int b = 0; b < n; ++b) {
            if (a == b)
                continue;
            for (const SquarefreeFactor& f : views[a][b].finite)
                factors.push_back(f.factor);
            infinity = infinity || views[a][b].at_infinity > 0;
        }
        Poly all(TowerElem(1));
        for (const Poly& p : coprime_basis(factors))
            all = all * p;
        auto c = chi_of(all, apply(at.l0, params[a].affine), apply(at.l1, params[a].affine));
        if (!c || !squarefree(*c))
            return std::nullopt;
        if (infinity) {
            TowerElem d = apply(at.l0, params[a].at_infinity);
            if (d.is_zero() || c->eval(apply(at.l1, params[a].at_infinity) / d).is_zero())
                return std::nullopt;
        }
    }

    Analysis out;
    out.l0 = at.l0;
    out.l1 = at.l1;
    std::vector<Poly> all_chis;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            auto fa = chis(views[a][b], params[a], at);
            auto fb = chis(views[b][a], params[b], at);
            if (!fa || !fb || *fa != *fb)
                return std::nullopt;
            for (const auto& [m, chi] : *fa) {
                out.records.push_back({a, b, m, chi});
                all_chis.push_back(chi);
            }
        }

    Combinatorics& cmb = out.combinatorics;
    for (const PlaneCurve& c : comps) {
        cmb.labels.push_back(c.label());
        cmb.degrees.push_back(c.degree());
    }
    for (const Poly& base : coprime_basis(all_chis)) {
        SingularPoint pt;
        pt.locus = base;
        for (const IntersectionRecord& r : out.records)
            if (divmod(r.chi, base).second.is_zero()) {
                pt.contacts.push_back({r.a, r.b, r.multiplicity});
                pt.branches.push_back(r.a);
                pt.branches.push_back(r.b);
            }
        std::sort(pt.branches.begin(), pt.branches.end());
        pt.branches.erase(std::unique(pt.branches.begin(), pt.branches.end()), pt.branches.end());
        std::sort(pt.contacts.begin(), pt.contacts.end());
        std::size_t k = pt.branches.size();
        // Every pair of branches meets here exactly once.
        if (pt.contacts.size() != k * (k - 1) / 2)
            return std::nullopt;
        for (std::size_t i = 1; i < pt.contacts.size(); ++i)
            if (pt.contacts[i][0] == pt.contacts[i - 1][0] && pt.contacts[i][1] == pt.contacts[i - 1][1])
                return std::nullopt;
        pt.type = point_type(pt);
        for (int c = 0; c < base.degree(); ++c)
            cmb.points.push_back(pt);
    }
    std::stable_sort(cmb.points.begin(), cmb.points.end(), [](const SingularPoint& x, const SingularPoint& y) {
        return std::tie(x.branches, x.contacts, x.type) < std::tie(y.branches, y.contacts, y.type);
    });
    return out;
}

using PointKey = std::tuple<std::vector<int>, std::vector<std::array<int, 3>>, std::string>;

std::vector<PointKey> mapped_keys(const Combinatorics& c, const std::vector<int>& sigma)
{
    std::vector<PointKey> keys;
    for (const SingularPoint& p : c.points) {
        std::vector<int> br;
        for (int b : p.branches)
            br.push_back(sigma[b]);
        std::sort(br.begin(), br.end());
        std::vector<std::array<int, 3>> ct;
        for (const auto& x : p.contacts) {
            int i = sigma[x[0]], j = sigma[x[1]];
            ct.push_back({std::min(i, j), std::max(i, j), x[2]});
        }
        std::sort(ct.begin(), ct.end());
        keys.emplace_back(std::move(br), std::move(ct), p.type);
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

} // namespace

PlaneCurve PlaneCurve::graph(std::string label, Poly q)
{
    if (q.degree() > 2)
        fail_input("bad_curve", "graph curve " + label + " has degree " + std::to_string(q.degree()));
    PlaneCurve c;
    c.label_ = std::move(label);
    c.degree_ = std::max(1, q.degree());
    c.f_ = BivarPoly::x() - BivarPoly::from_poly(q);
    c.graph_ = std::move(q);
    return c;
}

PlaneCurve PlaneCurve::general(std::string label, BivarPoly f, std::optional<PPoint> hint)
{
    int d = f.total_degree();
    if (d < 1 || d > 2)
        fail_input("bad_curve", "curve " + label + " must be a line or a conic");
    TowerElem cx = f.coeff(0, 1);
    if (!cx.is_zero() && f.degree_x() == 1 && f.coeff(1, 1).is_zero()) {
        BivarPoly rest = f - BivarPoly::term(cx, 0, 1);
        Poly q = rest.is_zero() ? Poly() : rest.coefficients_in(true).at(0).scaled(-cx.inverse());
        return graph(std::move(label), std::move(q));
    }
    if (d == 1 && f.coeff(1, 0).is_zero())
        fail_input("bad_curve", "curve " + label + " has no linear part");
    if (d == 2 && det3(conic_matrix(f)).is_zero())
        fail_input("singular_conic", "conic " + label + " is singular");
    PlaneCurve c;
    c.label_ = std::move(label);
    c.degree_ = d;
    c.f_ = std::move(f);
    c.hint_ = std::move(hint);
    return c;
}

TowerElem PlaneCurve::eval(const PPoint& p) const
{
    TowerElem out(0);
    for (const auto& [key, coef] : f_.terms()) {
        TowerElem v = coef;
        for (int i = 0; i < key.first; ++i)
            v *= p[0];
        for (int i = 0; i < key.second; ++i)
            v *= p[1];
        for (int i = 0; i < degree_ - key.first - key.second; ++i)
            v *= p[2];
        out += v;
    }
    return out;
}

bool PlaneCurve::same_curve(const PlaneCurve& o) const
{
    if (degree_ != o.degree_)
        return false;
    const auto& [key, coef] = *f_.terms().begin();
    TowerElem other = o.f_.coeff(key.first, key.second);
    if (other.is_zero())
        return false;
    return f_.scaled(other) == o.f_.scaled(coef);
}

PlaneCurve curve_from_section(const MWPoint& p, const std::string& label)
{
    if (p.is_zero() || !p.x().is_poly() || p.x().num().degree() > 2)
        fail_input("bad_section_curve", "section " + p.recipe + " does not give a line or conic");
    PlaneCurve c = PlaneCurve::graph(label, p.x().as_poly());
    c.recipe = p.recipe;
    return c;
}

PlaneCurve pencil_conic(const TVec& t, const TowerElem& lambda, const std::string& label)
{
    ParamClass cls = classify_params(lambda, t);
    if (cls.kind != ParamCase::M2)
        fail_input("degenerate_lambda", "pencil member at lambda = " + lambda.str() + " is a line pair");
    PlaneCurve c = PlaneCurve::general(label, pencil_poly(lambda, t), PPoint{t[0], t[0] * t[0], TowerElem(1)});
    c.recipe = "pencil(" + lambda.str() + ")";
    return c;
}

Parametrization parametrize(const PlaneCurve& c)
{
    Parametrization p;
    p.degree = c.degree();
    const Poly s = Poly::var();
    const Poly one(TowerElem(1));
    if (c.graph_poly()) {
        const Poly& q = *c.graph_poly();
        p.affine = {s, q.compose(s), one};
        if (c.degree() == 1)
            p.at_infinity = {TowerElem(1), q.coeff(1), TowerElem(0)};
        else
            p.at_infinity = {TowerElem(0), TowerElem(1), TowerElem(0)};
        return p;
    }
    const BivarPoly& f = c.affine();
    if (c.degree() == 1) {
        // a t + g = 0 with no x term
        TowerElem k = -f.coeff(0, 0) / f.coeff(1, 0);
        p.affine = {Poly(k), s, one};
        p.at_infinity = {TowerElem(0), TowerElem(1), TowerElem(0)};
        return p;
    }
    Mat3 q = conic_matrix(f);
    PPoint p0 = find_point(c);
    int keep = p0[2].is_zero() ? (p0[1].is_zero() ? 0 : 1) : 2;
    std::array<int, 2> others{};
    for (int i = 0, j = 0; i < 3; ++i)
        if (i != keep)
            others[j++] = i;
    // D = s e_{others[0]} + u e_{others[1]}; point = Q(D) p0 - 2 B(p0, D) D.
    std::array<Poly, 3> dir, base;
    for (int i = 0; i < 3; ++i) {
        dir[i] = i == others[0] ? s : (i == others[1] ? one : Poly());
        base[i] = Poly(p0[i]);
    }
    Poly qd = bilinear(q, dir, dir), bpd = bilinear(q, base, dir);
    for (int i = 0; i < 3; ++i)
        p.affine[i] = qd * p0[i] - bpd * dir[i] * TowerElem(2);
    PPoint v1{};
    v1[others[0]] = TowerElem(1);
    std::array<TowerElem, 3> v1a{v1[0], v1[1], v1[2]}, p0a{p0[0], p0[1], p0[2]};
    TowerElem qv = bilinear(q, v1a, v1a), bv = bilinear(q, p0a, v1a);
    for (int i = 0; i < 3; ++i)
        p.at_infinity[i] = qv * p0[i] - 2 * bv * v1[i];
    return p;
}

std::map<std::string, int> Combinatorics::type_counts() const
{
    std::map<std::string, int> out;
    for (const SingularPoint& p : points)
        ++out[p.type];
    return out;
}

Analysis analyze(const std::vector<PlaneCurve>& components)
{
    const int n = static_cast<int>(components.size());
    if (n < 1)
        fail_input("empty_arrangement", "arrangement has no components");
    std::vector<Parametrization> params;
    for (const PlaneCurve& c : components)
        params.push_back(parametrize(c));
    std::vector<std::vector<PairView>> views(n, std::vector<PairView>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b)
                views[a][b] = pair_view(components[a], params[a], components[b]);

    std::mt19937 rng(7);
    for (int attempt = 0; attempt < 64; ++attempt) {
        auto small = [&] { return TowerElem(static_cast<long>(rng() % 19) - 9); };
        Attempt at;
        at.l0 = {small(), TowerElem(static_cast<long>(rng() % 9) + 1), TowerElem(1)};
        at.l1 = {TowerElem(1), small(), small()};
        if (auto res = try_analyze(components, params, views, at))
            return *res;
    }
    fail_internal("no_separating_form", "no separating linear form found for the arrangement");
}

std::vector<std::vector<int>> isomorphisms(const Combinatorics& a, const Combinatorics& b)
{
    std::vector<std::vector<int>> out;
    std::size_t n = a.degrees.size();
    if (n != b.degrees.size() || a.points.size() != b.points.size())
        return out;
    std::vector<int> da = a.degrees, db = b.degrees;
    std::sort(da.begin(), da.end());
    std::sort(db.begin(), db.end());
    if (da != db)
        return out;
    std::vector<int> ident(n);
    std::iota(ident.begin(), ident.end(), 0);
    const std::vector<PointKey> target = mapped_keys(b, ident);
    std::vector<int> sigma = ident;
    do {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            ok = a.degrees[i] == b.degrees[sigma[i]];
        if (ok && mapped_keys(a, sigma) == target)
            out.push_back(sigma);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

bool combinatorics_isomorphic(const Combinatorics& a, const Combinatorics& b)
{
    return !isomorphisms(a, b).empty();
}

Combinatorics canonical_form(const Combinatorics& c)
{
    std::size_t n = c.degrees.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::optional<std::vector<PointKey>> best;
    std::vector<int> best_sigma;
    // order[k] is the component placed at position k; conics first.
    std::vector<int> sigma(n);
    do {
        bool sorted = true;
        for (std::size_t k = 1; k < n && sorted; ++k)
            sorted = c.degrees[order[k - 1]] >= c.degrees[order[k]];
        if (!sorted)
            continue;
        for (std::size_t k = 0; k < n; ++k)
            sigma[order[k]] = static_cast<int>(k);
        auto keys = mapped_keys(c, sigma);
        if (!best || keys < *best) {
            best = std::move(keys);
            best_sigma = sigma;
        }
    } while (std::next_permutation(order.begin(), order.end()));

    Combinatorics out;
    out.labels.resize(n);
    out.degrees.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.labels[best_sigma[i]] = c.labels[i];
        out.degrees[best_sigma[i]] = c.degrees[i];
    }
    for (const auto& [br, ct, type] : *best)
        out.points.push_back({br, ct, type, Poly()});
    return out;
}

} // namespace clarr
