#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "clarr/arrangement.hpp"
#include "clarr/error.hpp"

#include <algorithm>
#include <random>

using namespace clarr;

namespace {

const Poly t = Poly::var();
const TowerElem s2 = TowerElem::sqrt_of(2), s3 = TowerElem::sqrt_of(3), s5 = TowerElem::sqrt_of(5);
const BivarPoly T = BivarPoly::t(), X = BivarPoly::x();

TVec ints(int a, int b, int c, int d) { return {TowerElem(a), TowerElem(b), TowerElem(c), TowerElem(d)}; }

const TVec a_std = ints(-2, -1, 1, 2);

BivarPoly K(const TowerElem& c) { return BivarPoly(c); }

std::map<std::string, int> counts(const std::vector<PlaneCurve>& comps)
{
    return classify_singularities(comps).type_counts();
}

// Bezout: every pair accounts for deg a * deg b intersections.
bool bezout_exact(const std::vector<PlaneCurve>& comps, const Analysis& an)
{
    const int n = static_cast<int>(comps.size());
    std::vector<std::vector<int>> total(n, std::vector<int>(n, 0));
    for (const IntersectionRecord& r : an.records)
        total[r.a][r.b] += r.multiplicity * r.count();
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (total[a][b] + total[b][a] != comps[a].degree() * comps[b].degree())
                return false;
    return true;
}

PlaneCurve perturbed(const PlaneCurve& c)
{
    PlaneCurve p = PlaneCurve::general(c.label(), c.affine() + K(Rat(1, 7)));
    p.recipe = c.recipe;
    return p;
}

// Point data with labels dropped, for comparing canonical forms.
std::vector<std::tuple<std::vector<int>, std::vector<std::array<int, 3>>, std::string>> shape(const Combinatorics& c)
{
    std::vector<std::tuple<std::vector<int>, std::vector<std::array<int, 3>>, std::string>> out;
    for (const SingularPoint& p : c.points)
        out.emplace_back(p.branches, p.contacts, p.type);
    return out;
}

} // namespace

TEST_CASE("curves from sections")
{
    EllipticSurface m1({TowerElem(0), a_std});
    PlaneCurve l0 = curve_from_section(m1.recipe("P13+P14+P34"), "L0");
    CHECK(l0.degree() == 1);
    CHECK(l0.affine() == X + T.scaled(2 * s2) + K(2));

    // x = 1 at the symmetric points: a horizontal line.
    PlaneCurve l23 = curve_from_section(m1.generator("P23"), "L23");
    CHECK(l23.degree() == 1);
    CHECK(l23.affine() == X - K(1));

    EllipticSurface m2({TowerElem(-10), a_std});
    PlaneCurve d = curve_from_section(m2.recipe("2*P12"), "D24");
    CHECK(d.degree() == 2);
    CHECK(d.affine() == X - T * T.scaled(Rat(1, 10)));

    CHECK_THROWS_AS(curve_from_section(MWPoint(), "O"), Error);
}

TEST_CASE("pencil conics")
{
    PlaneCurve c = pencil_conic(a_std, TowerElem(-10), "C");
    CHECK(c.degree() == 2);
    CHECK_FALSE(c.graph_poly());
    CHECK(c.affine() == X * X + T * T - X.scaled(6) + K(4));
    try {
        pencil_conic(a_std, TowerElem(-8), "C");
        FAIL("critical lambda accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == "degenerate_lambda");
    }

    std::mt19937 rng(11);
    int checked = 0;
    while (checked < 100) {
        TVec tv;
        for (auto& v : tv)
            v = TowerElem(Rat(static_cast<long>(rng() % 41) - 20, static_cast<long>(rng() % 4) + 1));
        TowerElem lam(static_cast<long>(rng() % 61) - 30);
        bool distinct = true;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < i; ++j)
                distinct = distinct && tv[i] != tv[j];
        if (!distinct || classify_params(lam, tv).kind != ParamCase::M2)
            continue;
        PlaneCurve p = pencil_conic(tv, lam, "C");
        for (const TowerElem& ti : tv)
            REQUIRE(p.contains({ti, ti * ti, TowerElem(1)}));
        ++checked;
    }
}

TEST_CASE("pairwise intersections")
{
    PlaneCurve co = PlaneCurve::graph("C_o", t * t);

    SUBCASE("C_o and [2]P13 touch at t = 0 and at z_o")
    {
        EllipticSurface m1({TowerElem(0), a_std});
        PlaneCurve d = curve_from_section(m1.recipe("2*P13"), "D");
        Analysis an = analyze({co, d});
        REQUIRE(an.records.size() == 1);
        CHECK(an.records[0].multiplicity == 2);
        CHECK(an.records[0].count() == 2);
        CHECK(counts({co, d}) == std::map<std::string, int>{{"tacnode", 2}});
    }
    SUBCASE("L12 and L34 meet transversally at p0 = (0, -2)")
    {
        PlaneCurve l12 = PlaneCurve::graph("L12", line_x(a_std, 0, 1));
        PlaneCurve l34 = PlaneCurve::graph("L34", line_x(a_std, 2, 3));
        CHECK(l12.contains({TowerElem(0), TowerElem(-2), TowerElem(1)}));
        CHECK(l34.contains({TowerElem(0), TowerElem(-2), TowerElem(1)}));
        Analysis an = analyze({l12, l34});
        REQUIRE(an.records.size() == 1);
        CHECK(an.records[0].multiplicity == 1);
        CHECK(an.records[0].count() == 1);
    }
    SUBCASE("C_o and C_tau meet in the four base points")
    {
        Analysis an = analyze({co, pencil_conic(a_std, TowerElem(-10), "C")});
        REQUIRE(an.records.size() == 1);
        CHECK(an.records[0].multiplicity == 1);
        CHECK(an.records[0].count() == 4);
    }
    SUBCASE("two generic lines give one node")
    {
        PlaneCurve a = PlaneCurve::graph("A", t * 2 + 1), b = PlaneCurve::graph("B", -t + 5);
        CHECK(counts({a, b}) == std::map<std::string, int>{{"node", 1}});
    }
    SUBCASE("parallel lines meet on the line at infinity")
    {
        PlaneCurve a = PlaneCurve::graph("A", t * 2 + 1), b = PlaneCurve::graph("B", t * 2 - 3);
        CHECK(counts({a, b}) == std::map<std::string, int>{{"node", 1}});
    }
    SUBCASE("vertical and horizontal lines")
    {
        PlaneCurve v = PlaneCurve::general("V", T - K(3)), h = PlaneCurve::general("H", X - K(1));
        CHECK(h.graph_poly());
        CHECK_FALSE(v.graph_poly());
        CHECK(counts({v, h, co}) == std::map<std::string, int>{{"node", 5}});
    }
    SUBCASE("coincident components are rejected")
    {
        PlaneCurve a = PlaneCurve::graph("A", t * 2 + 1);
        PlaneCurve b = PlaneCurve::general("B", (X - T.scaled(2) - K(1)).scaled(3));
        CHECK(a.same_curve(b));
        try {
            analyze({a, b});
            FAIL("coincident pair accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == "coincident_components");
        }
    }
}

TEST_CASE("symmetric [2]P23 meets C_o only at z_o with contact 4")
{
    Arrangement a = assemble("125", Plinth::P1, {TowerElem(0), a_std},
                             {{"D", "2*P23"}, {"L0", "P13+P14+P34"}});
    CHECK(a.components[3].affine() == X - T * T - K(Rat(1, 4)));
    Combinatorics c = classify_singularities(a.components);
    CHECK(c.type_counts().count("higher_contact(4)") == 1);
    CHECK_FALSE(combinatorics_isomorphic(c, golden_combinatorics("125")));
}

TEST_CASE("assembly errors")
{
    auto kind_of = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.kind();
        }
        return std::string("none");
    };
    SurfaceParams m1{TowerElem(0), a_std}, m2{TowerElem(-10), a_std};
    CHECK(kind_of([&] { assemble("111", Plinth::P2, m1, {}); }) == "case_mismatch");
    CHECK(kind_of([&] { assemble("111", Plinth::P1, m1, {{"A", "L12"}, {"B", "L13"}, {"C", "L24"}}); }) ==
          "coincident_components");
    CHECK(kind_of([&] { assemble("221", Plinth::P2, m2, {{"A", "Lb[1]"}, {"D", "pencil(-10)"}}); }) ==
          "coincident_components");
    CHECK(kind_of([&] { assemble("211", Plinth::P2, m2, {{"A", "L13"}, {"B", "L24"}}); }) == "bad_degree");
    CHECK(kind_of([&] { assemble("111", Plinth::P1, {TowerElem(0), ints(1, 1, 2, 3)}, {}); }) ==
          "parameters_outside_M");
    CHECK(kind_of([&] { catalog_entry("126"); }) == "unknown_cmb");
    CHECK(catalog_entry("Cmb123").id == "123");
    CHECK(catalog_entry("cmb_212").id == "212");
}

TEST_CASE("construction examples")
{
    SurfaceParams m1{TowerElem(0), a_std}, m2{TowerElem(-10), a_std};
    Arrangement b1 = assemble("123", Plinth::P1, m1, {{"D", "P13+P14"}, {"M", "P13+P14+P34"}});
    CHECK(b1.components[3].affine() ==
          X + T * T.scaled(12 * s2 - 18) + T.scaled(TowerElem(51) - 36 * s2) + K(24 * s2 - 34));
    CHECK(b1.components[4].affine() == X + T.scaled(2 * s2) + K(2));

    Arrangement b224 = assemble("224", Plinth::P2, m2, {{"D", "2*P12"}, {"M", "L12"}});
    CHECK(b224.components[2].affine() == X - T * T.scaled(Rat(1, 10)));
    CHECK(b224.components[3].affine() == X + T.scaled(3) + K(2));

    Arrangement b122 = assemble("122", Plinth::P1, m1, {{"M", "L14"}, {"D", "P12+P13"}});
    CHECK(b122.components[4].affine() == X - T * T.scaled(3) + K(2));

    // Pencil base points: 4 triple points of C_o, C_tau, D in 221.
    Arrangement b221 = assemble_canonical("221");
    for (const TowerElem& ti : a_std)
        for (const PlaneCurve& c : {b221.components[0], b221.components[1], b221.components[3]})
            CHECK(c.contains({ti, ti * ti, TowerElem(1)}));
}

TEST_CASE("canonical basepoints verify against their golden files")
{
    const std::map<std::string, std::array<int, 3>> expected = {
        // ordinary_triple, tacnode, node
        {"111", {5, 1, 3}}, {"121", {5, 1, 2}}, {"122", {5, 1, 2}}, {"123", {3, 3, 4}}, {"124", {2, 4, 5}},
        {"125", {1, 5, 6}}, {"211", {4, 2, 3}}, {"212", {2, 4, 5}}, {"213", {0, 6, 7}}, {"221", {4, 2, 2}},
        {"222", {4, 2, 2}}, {"223", {2, 4, 4}}, {"224", {2, 4, 4}}, {"225", {0, 6, 6}},
    };
    REQUIRE(catalog().size() == 14);
    for (const CatalogEntry& e : catalog()) {
        CAPTURE(e.id);
        Arrangement a = assemble_canonical(e.id);
        CHECK(a.total_degree() == 7);
        Analysis an = analyze(a.components);
        CHECK(bezout_exact(a.components, an));
        const Combinatorics& golden = golden_combinatorics(e.id);
        CHECK(combinatorics_isomorphic(an.combinatorics, golden));
        auto tc = golden.type_counts();
        const auto& ex = expected.at(e.id);
        CHECK(golden.points.size() == static_cast<std::size_t>(ex[0] + ex[1] + ex[2]));
        CHECK(tc["ordinary_triple"] == ex[0]);
        CHECK(tc["tacnode"] == ex[1]);
        CHECK(tc["node"] == ex[2]);

        // Determinism: bit-identical serializations on a second run.
        Arrangement again = assemble_canonical(e.id);
        CHECK(arrangement_to_json(a).dump() == arrangement_to_json(again).dump());
        CHECK(combinatorics_to_json(canonical_form(an.combinatorics)).dump() ==
              combinatorics_to_json(canonical_form(classify_singularities(again.components))).dump());
    }
}

TEST_CASE("golden files are pairwise non-isomorphic")
{
    for (const CatalogEntry& a : catalog())
        for (const CatalogEntry& b : catalog())
            if (a.id < b.id) {
                CAPTURE(a.id + " vs " + b.id);
                CHECK_FALSE(combinatorics_isomorphic(golden_combinatorics(a.id), golden_combinatorics(b.id)));
            }
}

TEST_CASE("perturbing any single component breaks verification")
{
    for (const CatalogEntry& e : catalog()) {
        Arrangement a = assemble_canonical(e.id);
        for (std::size_t k = 0; k < a.components.size(); ++k) {
            CAPTURE(e.id + " " + a.components[k].label());
            std::vector<PlaneCurve> comps = a.components;
            comps[k] = perturbed(comps[k]);
            CHECK_FALSE(combinatorics_isomorphic(classify_singularities(comps), golden_combinatorics(e.id)));
        }
    }
}

TEST_CASE("isomorphism examples")
{
    SurfaceParams m1{TowerElem(0), a_std};
    Arrangement b1 = assemble("123", Plinth::P1, m1, {{"D", "P13+P14"}, {"M", "P13+P14+P34"}});
    Arrangement b2 = assemble("123", Plinth::P1, m1, {{"D", "P13+P14"}, {"M", "P13-P14+P34"}});
    Combinatorics c1 = classify_singularities(b1.components);
    CHECK(combinatorics_isomorphic(c1, c1));
    CHECK(combinatorics_isomorphic(c1, classify_singularities(b2.components)));
    CHECK_FALSE(combinatorics_isomorphic(golden_combinatorics("123"), golden_combinatorics("124")));

    // Cmb224 B1, B2, B3 share the combinatorics.
    SurfaceParams m2{TowerElem(-10), a_std};
    for (const char* line : {"L12", "L13", "L14"})
        CHECK(combinatorics_isomorphic(
            classify_singularities(assemble("224", Plinth::P2, m2, {{"D", "2*P12"}, {"M", line}}).components),
            golden_combinatorics("224")));
    // Cmb212 B_ij for all six bitangent pairs.
    for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j) {
            std::string bi = "Lb[" + std::to_string(i) + "]", bj = "Lb[" + std::to_string(j) + "]";
            Arrangement b = assemble("212", Plinth::P2, m2, {{"L13", "L13"}, {"Lbi", bi}, {"Lbj", bj}});
            CHECK(combinatorics_isomorphic(classify_singularities(b.components), golden_combinatorics("212")));
        }
}

TEST_CASE("explicit-equation forms match the golden combinatorics")
{
    const BivarPoly co1 = T * T + X * X + T * X - K(Rat(27, 4));
    const TowerElem h = s3 * Rat(3, 2);

    SUBCASE("C_o1 + C_o2 + L13 + L24 + Lb")
    {
        const BivarPoly co2 = T * T + X * X - T * X - K(Rat(27, 4));
        for (const BivarPoly& lb : {T - K(3), T + K(3), X - K(3), X + K(3)}) {
            std::vector<PlaneCurve> comps = {
                PlaneCurve::general("C_o1", co1), PlaneCurve::general("C_o2", co2),
                PlaneCurve::general("L13", T), PlaneCurve::general("L24", X), PlaneCurve::general("Lb", lb)};
            CHECK(comps[0].contains({TowerElem(0), h, TowerElem(1)}));
            CHECK(comps[1].contains({h, TowerElem(0), TowerElem(1)}));
            CHECK(combinatorics_isomorphic(classify_singularities(comps), golden_combinatorics("211")));
        }
    }
    SUBCASE("C_o1 + C_o2 + L13 + two bitangents")
    {
        const BivarPoly co2 = T * T.scaled(676) + T * X.scaled(764) + X * X.scaled(676) - K(4563);
        const std::vector<BivarPoly> lb = {T.scaled(15) + X.scaled(8) - K(39), T.scaled(8) + X.scaled(15) + K(39),
                                           T.scaled(15) + X.scaled(8) + K(39), T.scaled(8) + X.scaled(15) - K(39)};
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                std::vector<PlaneCurve> comps = {
                    PlaneCurve::general("C_o1", co1), PlaneCurve::general("C_o2", co2),
                    PlaneCurve::general("L13", X), PlaneCurve::general("Lbi", lb[i]),
                    PlaneCurve::general("Lbj", lb[j])};
                CHECK(combinatorics_isomorphic(classify_singularities(comps), golden_combinatorics("212")));
            }
    }
    SUBCASE("C_1a + C_2a + D_o + bitangent at a = 2")
    {
        std::vector<PlaneCurve> comps = {
            PlaneCurve::general("C_1a", T * T + X * X.scaled(4) - K(4)),
            PlaneCurve::general("C_2a", T * T.scaled(4) + X * X - K(4)),
            PlaneCurve::general("D_o", T * T + X * X - K(1)), PlaneCurve::graph("M", t + s5)};
        CHECK(combinatorics_isomorphic(classify_singularities(comps), golden_combinatorics("225")));
    }
}

TEST_CASE("relabeling leaves the canonical form unchanged")
{
    std::mt19937 rng(5);
    for (const CatalogEntry& e : catalog()) {
        Arrangement a = assemble_canonical(e.id);
        Combinatorics base = canonical_form(classify_singularities(a.components));
        CHECK(shape(base) == shape(canonical_form(golden_combinatorics(e.id))));
        for (int rep = 0; rep < 8; ++rep) {
            std::vector<PlaneCurve> comps = a.components;
            std::shuffle(comps.begin(), comps.end(), rng);
            Combinatorics c = classify_singularities(comps);
            CHECK(combinatorics_isomorphic(c, golden_combinatorics(e.id)));
            Combinatorics cf = canonical_form(c);
            CHECK(shape(cf) == shape(base));
            CHECK(shape(canonical_form(cf)) == shape(cf));
        }
    }
}

TEST_CASE("Bezout accounting on random arrangements")
{
    std::mt19937 rng(2024);
    auto small = [&](int r) { return TowerElem(static_cast<long>(rng() % (2 * r + 1)) - r); };
    auto random_curve = [&](int idx) -> PlaneCurve {
        std::string label = "c" + std::to_string(idx);
        switch (rng() % 5) {
        case 0:
            return PlaneCurve::graph(label, t * small(4) + small(6));
        case 1:
            return PlaneCurve::graph(label, t * t * (small(3) + (rng() % 2 ? 7 : -7)) + t * small(4) + small(5));
        case 2:
            return PlaneCurve::general(label, T - K(small(6)));
        case 3:
            return PlaneCurve::graph(label, t * (s2 * small(2) + 1) + small(4));
        default: {
            // A conic through the rational point (p, q), usually without a graph form.
            TowerElem p = small(3), q = small(3);
            BivarPoly f = T * T.scaled(small(3) + 5) + T * X.scaled(small(4)) + X * X.scaled(small(3) + 5) +
                          T.scaled(small(5)) + X.scaled(small(5));
            f -= K(f.eval(p, q));
            return PlaneCurve::general(label, f, PPoint{p, q, TowerElem(1)});
        }
        }
    };
    int cases = 0, pairs = 0;
    while (cases < 120) {
        std::vector<PlaneCurve> comps;
        int n = 2 + static_cast<int>(rng() % 3);
        try {
            for (int i = 0; i < n; ++i)
                comps.push_back(random_curve(i));
            Analysis an = analyze(comps);
            CHECK(bezout_exact(comps, an));
            for (const SingularPoint& p : an.combinatorics.points)
                CHECK(p.branches.size() >= 2);
            pairs += n * (n - 1) / 2;
            ++cases;
        } catch (const Error& e) {
            // singular or coincident draws
            REQUIRE(e.error_class() == ErrorClass::input);
        }
    }
    CHECK(pairs >= 100);
}

TEST_CASE("recipe-built components have even contact with the branch quartic")
{
    std::mt19937 rng(3);
    int checked = 0;
    for (int rep = 0; rep < 6; ++rep) {
        TVec tv;
        for (auto& v : tv)
            v = TowerElem(static_cast<long>(rng() % 21) - 10);
        for (const TowerElem& lam : {TowerElem(0), TowerElem(static_cast<long>(rng() % 40) + 3)}) {
            ParamClass cls = classify_params(lam, tv);
            if (cls.kind == ParamCase::degenerate || (lam.is_zero() && cls.kind != ParamCase::M1))
                continue;
            EllipticSurface s({lam, tv});
            BivarPoly quartic = (X - T * T) * pencil_poly(lam, tv);
            for (const TableRow& row : generator_table())
                for (const std::string& alt : row.alternatives) {
                    MWPoint p;
                    try {
                        p = s.recipe(alt);
                    } catch (const Error&) {
                        continue; // names outside this case
                    }
                    if (p.is_zero() || !p.x().is_poly() || p.x().num().degree() > 2)
                        continue;
                    PlaneCurve c = curve_from_section(p, alt);
                    CHECK(square_up_to_constant(quartic.substitute_x(*c.graph_poly())).has_value());
                    ++checked;
                }
        }
    }
    CHECK(checked >= 100);
}

TEST_CASE("JSON round trips")
{
    for (const CatalogEntry& e : catalog()) {
        Arrangement a = assemble_canonical(e.id);
        nlohmann::json j = arrangement_to_json(a);
        Arrangement b = arrangement_from_json(nlohmann::json::parse(j.dump()));
        REQUIRE(b.components.size() == a.components.size());
        for (std::size_t k = 0; k < a.components.size(); ++k) {
            CHECK(b.components[k].affine() == a.components[k].affine());
            CHECK(b.components[k].label() == a.components[k].label());
            CHECK(b.components[k].recipe == a.components[k].recipe);
        }
        CHECK(arrangement_to_json(b).dump() == j.dump());
        CHECK(combinatorics_isomorphic(classify_singularities(b.components), golden_combinatorics(e.id)));

        Combinatorics g = golden_combinatorics(e.id);
        CHECK(combinatorics_to_json(combinatorics_from_json(combinatorics_to_json(g))).dump() ==
              combinatorics_to_json(g).dump());
    }
    CHECK_THROWS_AS(arrangement_from_json(nlohmann::json::parse(R"({"cmb": "111"})")), Error);
    CHECK_THROWS_AS(elem_from_json(nlohmann::json::parse("[1]")), Error);
}

TEST_CASE("SVG output")
{
    Arrangement a = assemble_canonical("212");
    std::string svg = arrangement_svg(a);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("id=\"C_tau\"") != std::string::npos);
    CHECK(svg.find("warning") == std::string::npos);

    Arrangement far = a;
    far.components = {PlaneCurve::graph("high", t * t + 100), PlaneCurve::general("circle", T * T + X * X - K(1))};
    std::string s2v = arrangement_svg(far);
    CHECK(s2v.find("high: no real points in the window") != std::string::npos);
    CHECK(s2v.find("<line x1") != std::string::npos);
}
