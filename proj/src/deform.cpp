#include "clarr/deform.hpp"

#include "clarr/error.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace clarr {

using nlohmann::json;

// Beta family

namespace {

const BivarPoly T = BivarPoly::t(), X = BivarPoly::x();

BivarPoly K(const TowerElem& c) { return BivarPoly(c); }

PlaneCurve family_conic(const std::string& label, const BivarPoly& f)
{
    return PlaneCurve::general(label, f, beta_points()[0]);
}

PlaneCurve family_line(const std::string& label, const TowerElem& a, const TowerElem& b, const TowerElem& c)
{
    return PlaneCurve::general(label, T.scaled(a) + X.scaled(b) + K(c));
}

PlaneCurve co1_curve()
{
    return family_conic("C_o1", T * T + X * X + T * X - K(Rat(27, 4)));
}

} // namespace

std::array<PPoint, 4> beta_points()
{
    const TowerElem h = TowerElem(Rat(3, 2)) * TowerElem::sqrt_of(3), z(0), one(1);
    return {{{h, z, one}, {z, -h, one}, {-h, z, one}, {z, h, one}}};
}

BetaFamily beta_family(const TowerElem& beta)
{
    const TowerElem& b = beta;
    const TowerElem b2 = b * b, b3 = b2 * b, b4 = b3 * b;
    if (((b2 + TowerElem(4) * b + TowerElem(1)) * (b2 - TowerElem(2) * b - TowerElem(2))).is_zero())
        fail_input("beta_conic_equals_co1", "C_o2,beta coincides with C_o1 at beta = " + b.str());
    if (((b2 + b + TowerElem(1)) * (TowerElem(2) * b2 + TowerElem(2) * b - TowerElem(1)) *
         (TowerElem(2) * b + TowerElem(1)))
            .is_zero())
        fail_input("beta_conic_singular", "C_o2,beta is singular at beta = " + b.str());

    BetaFamily f;
    f.co1 = co1_curve();
    const TowerElem a = b4 + TowerElem(2) * b3 + TowerElem(3) * b2 + TowerElem(2) * b + TowerElem(1);
    const TowerElem m = TowerElem(2) * b4 + TowerElem(4) * b3 - TowerElem(6) * b2 - TowerElem(8) * b - TowerElem(1);
    const TowerElem c0 = -TowerElem(27) * b4 - TowerElem(54) * b3 - TowerElem(81) * b2 - TowerElem(54) * b -
                         TowerElem(27);
    f.co2 = family_conic("C_o2", (T * T).scaled(TowerElem(4) * a) + (T * X).scaled(TowerElem(4) * m) +
                                     (X * X).scaled(TowerElem(4) * a) + K(c0));

    const TowerElem u = b2 + TowerElem(2) * b, v = b2 - TowerElem(1),
                    w = TowerElem(3) * b2 + TowerElem(3) * b + TowerElem(3);
    f.bitangents = {family_line("Lb1", u, v, -w), family_line("Lb2", v, u, w), family_line("Lb3", u, v, w),
                    family_line("Lb4", v, u, -w)};
    if ((b * (b - TowerElem(1)) * (b + TowerElem(1)) * (b + TowerElem(2))).is_zero())
        f.warnings.push_back("lines_concurrent: L13 meets two bitangents in one point at beta = " + b.str());
    return f;
}

BetaFamily beta_reference()
{
    BetaFamily f;
    f.co1 = co1_curve();
    f.co2 = family_conic("C_o2", (T * T).scaled(676) + (T * X).scaled(764) + (X * X).scaled(676) - K(4563));
    f.bitangents = {family_line("Lb1", 15, 8, -39), family_line("Lb2", 8, 15, 39), family_line("Lb3", 15, 8, 39),
                    family_line("Lb4", 8, 15, -39)};
    return f;
}

Arrangement beta_arrangement(const TowerElem& beta, int k, int l)
{
    if (k < 1 || k > 4 || l < 1 || l > 4 || k == l)
        fail_input("bad_choice", "bitangent pair must be two distinct indices in 1..4");
    BetaFamily f = beta_family(beta);
    Arrangement a;
    a.cmb = "212";
    a.plinth = Plinth::P2;
    a.components = {f.co1, f.co2, PlaneCurve::graph("L13", Poly()), f.bitangents[k - 1], f.bitangents[l - 1]};
    a.components[2].recipe = "L13";
    a.components[3].recipe = "Lb" + std::to_string(k) + "(beta)";
    a.components[4].recipe = "Lb" + std::to_string(l) + "(beta)";
    return a;
}

// Paths

namespace {

TowerElem lerp(const TowerElem& a, const TowerElem& b, const Rat& u)
{
    return a + TowerElem(u) * (b - a);
}

std::vector<long> atoms_of(long d) { return radicand_atoms(d); }

// Image of e under the automorphism negating sqrt(p) for every atom p in flip.
TowerElem conjugate(const TowerElem& e, const std::set<long>& flip)
{
    const std::vector<long>& rads = e.tower()->radicands();
    std::vector<int> sign(rads.size(), 1);
    for (std::size_t j = 0; j < rads.size(); ++j)
        for (long p : atoms_of(rads[j]))
            if (flip.count(p))
                sign[j] = -sign[j];
    std::vector<Rat> coords = e.coords();
    for (unsigned mask = 0; mask < coords.size(); ++mask) {
        int s = 1;
        for (std::size_t j = 0; j < rads.size(); ++j)
            if (mask >> j & 1u)
                s *= sign[j];
        if (s < 0)
            coords[mask] = -coords[mask];
    }
    return TowerElem(e.tower(), coords);
}

using NumEq = std::vector<std::map<BivarPoly::Key, std::complex<double>>>;

NumEq numeric(const Arrangement& a, const std::set<long>& flip)
{
    NumEq out;
    for (const PlaneCurve& c : a.components) {
        std::map<BivarPoly::Key, std::complex<double>> m;
        for (const auto& [k, v] : c.affine().terms())
            m[k] = conjugate(v, flip).to_complex();
        out.push_back(std::move(m));
    }
    return out;
}

// Projective distance: each equation is scaled so that the coefficient that
// is largest in the reference becomes 1.
double distance(const NumEq& ref, const NumEq& e)
{
    double d = 0;
    for (std::size_t i = 0; i < ref.size() && i < e.size(); ++i) {
        BivarPoly::Key key{};
        double best = -1;
        for (const auto& [k, v] : ref[i])
            if (std::abs(v) > best) {
                best = std::abs(v);
                key = k;
            }
        auto at = [](const std::map<BivarPoly::Key, std::complex<double>>& m, const BivarPoly::Key& k) {
            auto it = m.find(k);
            return it == m.end() ? std::complex<double>(0) : it->second;
        };
        std::complex<double> sr = at(ref[i], key), se = at(e[i], key);
        if (std::abs(se) == 0)
            return INFINITY;
        std::set<BivarPoly::Key> keys;
        for (const auto& kv : ref[i])
            keys.insert(kv.first);
        for (const auto& kv : e[i])
            keys.insert(kv.first);
        for (const BivarPoly::Key& k : keys)
            d += std::abs(at(ref[i], k) / sr - at(e[i], k) / se);
    }
    return d;
}

std::set<long> arrangement_atoms(const Arrangement& a)
{
    std::set<long> out;
    for (const PlaneCurve& c : a.components)
        for (const auto& kv : c.affine().terms())
            for (long d : kv.second.tower()->radicands())
                for (long p : atoms_of(d))
                    out.insert(p);
    return out;
}

// Picks the Galois conjugate of a closest to the previous sample. Returns the
// label and the numeric equations of the chosen conjugate.
std::pair<std::string, NumEq> track_branch(const Arrangement& a, const std::optional<NumEq>& prev)
{
    std::set<long> atoms = arrangement_atoms(a);
    if (!prev || atoms.empty() || atoms.size() > 8)
        return {"n/a", numeric(a, {})};
    std::vector<long> list(atoms.begin(), atoms.end());
    std::vector<std::pair<double, std::set<long>>> scored;
    for (unsigned mask = 0; mask < (1u << list.size()); ++mask) {
        std::set<long> flip;
        for (std::size_t j = 0; j < list.size(); ++j)
            if (mask >> j & 1u)
                flip.insert(list[j]);
        scored.push_back({distance(*prev, numeric(a, flip)), flip});
    }
    const double base = scored[0].first;
    auto best = std::min_element(scored.begin(), scored.end(),
                                 [](const auto& x, const auto& y) { return x.first < y.first; });
    NumEq chosen = numeric(a, best->second);
    // A different conjugate at nearly the same distance makes the choice unreliable.
    for (const auto& [d, flip] : scored) {
        if (flip == best->second || distance(chosen, numeric(a, flip)) < 1e-9)
            continue;
        if (d <= 1.5 * best->first + 1e-12)
            return {"ambiguous", chosen};
    }
    if (best->first < base)
        return {"conjugated", chosen};
    return {"continued", chosen};
}

std::string counts_str(const Combinatorics& c)
{
    std::ostringstream s;
    bool first = true;
    for (const auto& [k, v] : c.type_counts()) {
        s << (first ? "" : ", ") << k << ": " << v;
        first = false;
    }
    return s.str();
}

} // namespace

SampledPath sample_path(const PathSpec& path)
{
    if (path.samples_per_segment < 1)
        fail_input("bad_path", "samples_per_segment must be positive");
    SampledPath out;
    const int n = path.samples_per_segment;
    if (path.beta) {
        if (path.beta_waypoints.empty())
            fail_input("bad_path", "beta path needs at least one waypoint");
        for (std::size_t s = 0; s + 1 < path.beta_waypoints.size(); ++s)
            for (int k = 1; k <= n; ++k) {
                PathPoint p;
                p.segment = static_cast<int>(s);
                p.u = Rat(k, n + 1);
                p.u.canonicalize();
                p.beta = lerp(path.beta_waypoints[s], path.beta_waypoints[s + 1], p.u);
                out.samples.push_back(p);
            }
        return out;
    }

    if (path.waypoints.empty())
        fail_input("bad_path", "path needs at least one waypoint");
    std::vector<ParamCase> kinds;
    for (const SurfaceParams& w : path.waypoints)
        kinds.push_back(require_valid(w));
    for (std::size_t s = 0; s + 1 < kinds.size(); ++s)
        if (kinds[s] != kinds[s + 1] && !path.allow_case_change)
            fail_input("case_change", "waypoints " + std::to_string(s) + " and " + std::to_string(s + 1) +
                                          " lie in different cases; set allow_case_change");

    for (std::size_t s = 0; s + 1 < path.waypoints.size(); ++s) {
        const SurfaceParams &a = path.waypoints[s], &b = path.waypoints[s + 1];
        for (int k = 1; k <= n; ++k) {
            PathPoint p;
            p.segment = static_cast<int>(s);
            p.u = Rat(k, n + 1);
            p.u.canonicalize();
            p.params.lambda = lerp(a.lambda, b.lambda, p.u);
            for (int i = 0; i < 4; ++i)
                p.params.t[i] = lerp(a.t[i], b.t[i], p.u);
            out.samples.push_back(p);
        }
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                TowerElem da = a.t[i] - a.t[j], db = b.t[i] - b.t[j];
                if (da == db)
                    continue;
                TowerElem u = da / (da - db);
                // u must be real: fixed by complex conjugation.
                if (u != conjugate(u, {-1}))
                    continue;
                bool inside;
                if (u.is_rational())
                    inside = u.rational() > 0 && u.rational() < 1;
                else {
                    double r = u.to_complex().real();
                    inside = r > 0 && r < 1;
                }
                if (inside)
                    out.collisions.push_back({static_cast<int>(s), u, i + 1, j + 1});
            }
    }
    return out;
}

DeformationReport check_deformation(const PathSpec& path)
{
    SampledPath sp = sample_path(path);
    DeformationReport r;
    r.collisions = sp.collisions;
    r.beta = path.beta;

    std::vector<PathPoint> points;
    const std::size_t nway = path.beta ? path.beta_waypoints.size() : path.waypoints.size();
    std::size_t next = 0;
    for (std::size_t w = 0; w < nway; ++w) {
        PathPoint p;
        p.waypoint = true;
        p.segment = static_cast<int>(w);
        p.u = 0;
        if (path.beta)
            p.beta = path.beta_waypoints[w];
        else
            p.params = path.waypoints[w];
        points.push_back(p);
        while (next < sp.samples.size() && sp.samples[next].segment == static_cast<int>(w))
            points.push_back(sp.samples[next++]);
    }

    std::string id = path.beta ? "212" : catalog_entry(path.cmb).id;
    r.cmb = id;
    const Combinatorics& golden = golden_combinatorics(id);
    std::vector<ComponentSpec> choices;
    Plinth plinth = Plinth::P1;
    if (!path.beta) {
        const CatalogEntry& e = catalog_entry(id);
        choices = path.choices.empty() ? e.choices : path.choices;
        plinth = e.plinth;
    }

    std::optional<NumEq> prev;
    for (const PathPoint& p : points) {
        SampleResult s;
        s.point = p;
        try {
            Arrangement a = path.beta ? beta_arrangement(p.beta, path.bitangent_pair[0], path.bitangent_pair[1])
                                      : assemble(id, plinth, p.params, choices);
            Combinatorics c = classify_singularities(a.components);
            s.isomorphic = combinatorics_isomorphic(c, golden);
            if (!s.isomorphic) {
                s.degeneracy = "combinatorics_changed";
                s.detail = "singularity types " + counts_str(c) + " against " + counts_str(golden);
            }
            auto [label, eq] = track_branch(a, prev);
            s.branch = label;
            prev = std::move(eq);
        } catch (const Error& e) {
            s.degeneracy = e.kind();
            s.detail = e.what();
            prev.reset();
        }
        if (!s.isomorphic && !r.first_failure)
            r.first_failure = static_cast<int>(r.samples.size());
        r.samples.push_back(std::move(s));
    }
    return r;
}

std::string DeformationReport::summary() const
{
    if (!first_failure)
        return "no degeneration detected at " + std::to_string(samples.size()) + " samples";
    const SampleResult& s = samples[*first_failure];
    return "degeneration at sample " + std::to_string(*first_failure) + " (" + s.degeneracy + "): " + s.detail;
}

// JSON

PathSpec path_from_json(const json& j)
{
    if (!j.is_object())
        fail_input("bad_json", "path spec must be an object");
    PathSpec p;
    try {
        p.samples_per_segment = j.value("samples_per_segment", 1);
        if (j.contains("builtin")) {
            if (j.at("builtin") != "beta_family")
                fail_input("bad_json", "unknown builtin path " + j.at("builtin").dump());
            p.beta = true;
            p.cmb = "212";
            if (j.contains("waypoints")) {
                for (const json& w : j.at("waypoints"))
                    p.beta_waypoints.push_back(elem_from_json(w));
            } else {
                p.beta_waypoints = {elem_from_json(j.at("beta_from")), elem_from_json(j.at("beta_to"))};
            }
            if (j.contains("bitangents")) {
                const json& bt = j.at("bitangents");
                if (!bt.is_array() || bt.size() != 2)
                    fail_input("bad_json", "bitangents must list two indices");
                p.bitangent_pair = {bt[0].get<int>(), bt[1].get<int>()};
            }
            return p;
        }
        p.cmb = j.at("cmb").is_string() ? j.at("cmb").get<std::string>() : j.at("cmb").dump();
        if (j.contains("choices")) {
            const json& c = j.at("choices");
            if (c.is_object()) {
                for (const auto& [label, spec] : c.items())
                    p.choices.push_back({label, spec.get<std::string>()});
            } else {
                p.choices = choices_from_json(c);
            }
        }
        for (const json& w : j.at("waypoints"))
            p.waypoints.push_back(params_from_json(w));
        p.allow_case_change = j.value("allow_case_change", false);
    } catch (const json::exception& e) {
        fail_input("bad_json", std::string("path spec: ") + e.what());
    }
    return p;
}

json path_to_json(const PathSpec& p)
{
    if (p.beta) {
        json w = json::array();
        for (const TowerElem& b : p.beta_waypoints)
            w.push_back(elem_to_json(b));
        return {{"builtin", "beta_family"},
                {"waypoints", w},
                {"samples_per_segment", p.samples_per_segment},
                {"bitangents", {p.bitangent_pair[0], p.bitangent_pair[1]}}};
    }
    json w = json::array();
    for (const SurfaceParams& s : p.waypoints)
        w.push_back(params_to_json(s));
    json out = {{"cmb", p.cmb}, {"waypoints", w}, {"samples_per_segment", p.samples_per_segment}};
    if (!p.choices.empty())
        out["choices"] = choices_to_json(p.choices);
    if (p.allow_case_change)
        out["allow_case_change"] = true;
    return out;
}

json report_to_json(const DeformationReport& r)
{
    json coll = json::array();
    for (const Collision& c : r.collisions)
        coll.push_back({{"segment", c.segment}, {"u", elem_to_json(c.u)}, {"i", c.i}, {"j", c.j}});
    json samples = json::array();
    for (std::size_t k = 0; k < r.samples.size(); ++k) {
        const SampleResult& s = r.samples[k];
        json e = {{"index", k},
                  {"segment", s.point.segment},
                  {"u", s.point.u.get_str()},
                  {"waypoint", s.point.waypoint},
                  {"isomorphic", s.isomorphic},
                  {"branch", s.branch}};
        if (r.beta)
            e["beta"] = elem_to_json(s.point.beta);
        else
            e["params"] = params_to_json(s.point.params);
        if (!s.degeneracy.empty()) {
            e["degeneracy"] = s.degeneracy;
            e["detail"] = s.detail;
        }
        samples.push_back(e);
    }
    return {{"format", "clarr-deformation-report"},
            {"version", 1},
            {"cmb", r.cmb},
            {"path", r.beta ? "beta_family" : "tau"},
            {"accepted", r.accepted()},
            {"summary", r.summary()},
            {"first_failure", r.first_failure ? json(*r.first_failure) : json(nullptr)},
            {"collisions", coll},
            {"samples", samples}};
}

} // namespace clarr
