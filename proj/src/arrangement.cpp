#include "clarr/arrangement.hpp"

#include "clarr/error.hpp"

#include <regex>

namespace clarr {

using nlohmann::json;

std::string plinth_name(Plinth p)
{
    return p == Plinth::P1 ? "P1" : "P2";
}

Plinth parse_plinth(const std::string& s)
{
    if (s == "P1" || s == "1")
        return Plinth::P1;
    if (s == "P2" || s == "2")
        return Plinth::P2;
    fail_input("bad_plinth", "unknown plinth '" + s + "'");
}

int Arrangement::total_degree() const
{
    int d = 0;
    for (const PlaneCurve& c : components)
        d += c.degree();
    return d;
}

std::vector<PlaneCurve> plinth_curves(Plinth plinth, const SurfaceParams& params)
{
    ParamCase kind = require_valid(params);
    if ((plinth == Plinth::P1) != (kind == ParamCase::M1))
        fail_input("case_mismatch", "plinth " + plinth_name(plinth) + " needs parameters in "
                                        + (plinth == Plinth::P1 ? "M1" : "M2"));
    std::vector<PlaneCurve> out;
    out.push_back(PlaneCurve::graph("C_o", Poly::monomial(TowerElem(1), 2)));
    out.back().recipe = "C_o";
    if (plinth == Plinth::P1) {
        out.push_back(PlaneCurve::graph("L12", line_x(params.t, 0, 1)));
        out.back().recipe = "L12";
        out.push_back(PlaneCurve::graph("L34", line_x(params.t, 2, 3)));
        out.back().recipe = "L34";
    } else {
        PlaneCurve c = pencil_conic(params.t, params.lambda, "C_tau");
        c.recipe = "C_tau";
        out.push_back(std::move(c));
    }
    return out;
}

PlaneCurve build_component(const EllipticSurface& surface, const ComponentSpec& spec)
{
    static const std::regex line_re(R"(^\s*L([1-4])([1-4])\s*$)");
    static const std::regex pencil_re(R"(^\s*pencil\((.*)\)\s*$)");
    const TVec& t = surface.params().t;
    std::smatch m;
    PlaneCurve c;
    if (std::regex_match(spec.spec, m, line_re)) {
        int i = std::stoi(m[1]) - 1, j = std::stoi(m[2]) - 1;
        if (i == j)
            fail_input("bad_choice", "line " + spec.spec + " needs two distinct points");
        c = PlaneCurve::graph(spec.label, line_x(t, i, j));
    } else if (std::regex_match(spec.spec, m, pencil_re)) {
        c = pencil_conic(t, parse_elem(m[1].str()), spec.label);
    } else {
        c = curve_from_section(surface.recipe(spec.spec), spec.label);
    }
    c.recipe = spec.spec;
    return c;
}

Arrangement assemble(const std::string& cmb, Plinth plinth, const SurfaceParams& params,
                     const std::vector<ComponentSpec>& choices)
{
    Arrangement a;
    a.cmb = cmb;
    a.plinth = plinth;
    a.params = params;
    a.components = plinth_curves(plinth, params);
    EllipticSurface surface(params);
    for (const ComponentSpec& s : choices)
        a.components.push_back(build_component(surface, s));
    for (std::size_t i = 0; i < a.components.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (a.components[i].same_curve(a.components[j]))
                fail_input("coincident_components",
                           a.components[i].label() + " coincides with " + a.components[j].label());
    if (a.total_degree() != 7)
        fail_input("bad_degree", "arrangement has total degree " + std::to_string(a.total_degree()));
    return a;
}

// Catalog

namespace {

std::string normalize_id(const std::string& id)
{
    static const std::regex id_re(R"(^\s*(?:[Cc]mb_?)?\{?([12][12][1-5])\}?\s*$)");
    std::smatch m;
    if (!std::regex_match(id, m, id_re))
        fail_input("unknown_cmb", "unknown combinatorics id '" + id + "'");
    return m[1];
}

json parse_embedded(const std::string& name)
{
    std::string_view text = embedded_data(name);
    if (text.empty())
        fail_internal("missing_data", "no embedded data file " + name);
    return json::parse(text);
}

} // namespace

const std::vector<CatalogEntry>& catalog()
{
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> out;
        const json doc = parse_embedded("catalog.json");
        for (const json& e : doc.at("entries")) {
            CatalogEntry c;
            c.id = e.at("id").get<std::string>();
            c.plinth = parse_plinth(e.at("plinth").get<std::string>());
            c.description = e.at("description").get<std::string>();
            c.menu = e.at("menu").get<std::vector<std::string>>();
            c.params = params_from_json(e.at("params"));
            c.choices = choices_from_json(e.at("choices"));
            c.note = e.value("note", "");
            out.push_back(std::move(c));
        }
        return out;
    }();
    return entries;
}

const CatalogEntry& catalog_entry(const std::string& id)
{
    std::string key = normalize_id(id);
    for (const CatalogEntry& e : catalog())
        if (e.id == key)
            return e;
    fail_input("unknown_cmb", "unknown combinatorics id '" + id + "'");
}

Arrangement assemble_canonical(const std::string& id)
{
    const CatalogEntry& e = catalog_entry(id);
    return assemble(e.id, e.plinth, e.params, e.choices);
}

const Combinatorics& golden_combinatorics(const std::string& id)
{
    static const std::map<std::string, Combinatorics> goldens = [] {
        std::map<std::string, Combinatorics> out;
        for (const CatalogEntry& e : catalog())
            if (!embedded_data("golden/" + e.id + ".json").empty())
                out[e.id] = combinatorics_from_json(parse_embedded("golden/" + e.id + ".json"));
        return out;
    }();
    std::string key = catalog_entry(id).id;
    auto it = goldens.find(key);
    if (it == goldens.end())
        fail_internal("missing_golden", "no golden combinatorics for " + key);
    return it->second;
}

// JSON

json elem_to_json(const TowerElem& e)
{
    return e.str();
}

TowerElem elem_from_json(const json& j)
{
    if (j.is_number_integer())
        return TowerElem(j.get<long>());
    if (j.is_string())
        return parse_elem(j.get<std::string>());
    fail_input("bad_json", "expected a tower element literal, got " + j.dump());
}

json params_to_json(const SurfaceParams& p)
{
    json t = json::array();
    for (const TowerElem& v : p.t)
        t.push_back(elem_to_json(v));
    return {{"lambda", elem_to_json(p.lambda)}, {"t", t}};
}

SurfaceParams params_from_json(const json& j)
{
    SurfaceParams p;
    p.lambda = elem_from_json(j.at("lambda"));
    const json& t = j.at("t");
    if (!t.is_array() || t.size() != 4)
        fail_input("bad_json", "params.t must list four values");
    for (std::size_t i = 0; i < 4; ++i)
        p.t[i] = elem_from_json(t[i]);
    return p;
}

json curve_to_json(const PlaneCurve& c)
{
    json terms = json::array();
    for (const auto& [key, coef] : c.affine().terms())
        terms.push_back({{"t", key.first}, {"x", key.second}, {"z", c.degree() - key.first - key.second},
                         {"c", elem_to_json(coef)}});
    json out = {{"label", c.label()}, {"degree", c.degree()}, {"equation", c.affine().str() + " = 0"},
                {"terms", terms}};
    if (!c.recipe.empty())
        out["recipe"] = c.recipe;
    if (c.hint()) {
        json pt = json::array();
        for (const TowerElem& v : *c.hint())
            pt.push_back(elem_to_json(v));
        out["point"] = pt;
    }
    return out;
}

PlaneCurve curve_from_json(const json& j)
{
    std::string label = j.value("label", "");
    int degree = j.value("degree", 0);
    BivarPoly f;
    for (const json& term : j.at("terms")) {
        int dt = term.at("t").get<int>(), dx = term.at("x").get<int>();
        if (dt < 0 || dx < 0 || (degree > 0 && term.value("z", degree - dt - dx) != degree - dt - dx))
            fail_input("bad_json", "inconsistent term degrees in curve " + label);
        f += BivarPoly::term(elem_from_json(term.at("c")), dt, dx);
    }
    if (degree > 0 && f.total_degree() != degree)
        fail_input("bad_json", "curve " + label + " does not have degree " + std::to_string(degree));
    std::optional<PPoint> hint;
    if (j.contains("point")) {
        const json& pt = j.at("point");
        if (!pt.is_array() || pt.size() != 3)
            fail_input("bad_json", "curve point must have three coordinates");
        hint = PPoint{elem_from_json(pt[0]), elem_from_json(pt[1]), elem_from_json(pt[2])};
    }
    PlaneCurve c = PlaneCurve::general(label, f, hint);
    if (c.hint() && !c.contains(*c.hint()))
        fail_input("bad_json", "point given for curve " + label + " is not on it");
    c.recipe = j.value("recipe", "");
    return c;
}

json arrangement_to_json(const Arrangement& a)
{
    json comps = json::array();
    for (const PlaneCurve& c : a.components)
        comps.push_back(curve_to_json(c));
    json out = {{"format", "clarr-arrangement"}, {"version", 1}, {"cmb", a.cmb},
                {"plinth", plinth_name(a.plinth)}};
    if (a.params)
        out["params"] = params_to_json(*a.params);
    out["components"] = comps;
    return out;
}

Arrangement arrangement_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("components"))
        fail_input("bad_json", "arrangement JSON needs a components list");
    Arrangement a;
    a.cmb = j.value("cmb", "");
    if (!a.cmb.empty())
        a.cmb = normalize_id(a.cmb);
    a.plinth = parse_plinth(j.value("plinth", "P1"));
    if (j.contains("params"))
        a.params = params_from_json(j.at("params"));
    for (const json& c : j.at("components"))
        a.components.push_back(curve_from_json(c));
    for (std::size_t i = 0; i < a.components.size(); ++i)
        for (std::size_t k = 0; k < i; ++k)
            if (a.components[i].same_curve(a.components[k]))
                fail_input("coincident_components",
                           a.components[i].label() + " coincides with " + a.components[k].label());
    return a;
}

json combinatorics_to_json(const Combinatorics& c)
{
    json comps = json::array();
    for (std::size_t i = 0; i < c.labels.size(); ++i)
        comps.push_back({{"index", i}, {"label", c.labels[i]}, {"degree", c.degrees[i]}});
    json points = json::array();
    for (const SingularPoint& p : c.points) {
        json contacts = json::array();
        for (const auto& ct : p.contacts)
            contacts.push_back({ct[0], ct[1], ct[2]});
        points.push_back({{"type", p.type}, {"branches", p.branches}, {"contacts", contacts}});
    }
    json counts = json::object();
    for (const auto& [type, n] : c.type_counts())
        counts[type] = n;
    return {{"components", comps}, {"points", points}, {"type_counts", counts}};
}

Combinatorics combinatorics_from_json(const json& j)
{
    Combinatorics c;
    for (const json& comp : j.at("components")) {
        c.labels.push_back(comp.value("label", ""));
        c.degrees.push_back(comp.at("degree").get<int>());
    }
    const int n = static_cast<int>(c.degrees.size());
    for (const json& p : j.at("points")) {
        SingularPoint s;
        s.type = p.at("type").get<std::string>();
        s.branches = p.at("branches").get<std::vector<int>>();
        for (const json& ct : p.at("contacts")) {
            auto v = ct.get<std::vector<int>>();
            if (v.size() != 3)
                fail_input("bad_json", "contact entries are [i, j, m]");
            s.contacts.push_back({v[0], v[1], v[2]});
        }
        for (int b : s.branches)
            if (b < 0 || b >= n)
                fail_input("bad_json", "branch index out of range");
        c.points.push_back(std::move(s));
    }
    return c;
}

json choices_to_json(const std::vector<ComponentSpec>& c)
{
    json out = json::array();
    for (const ComponentSpec& s : c)
        out.push_back({{"label", s.label}, {"spec", s.spec}});
    return out;
}

std::vector<ComponentSpec> choices_from_json(const json& j)
{
    if (!j.is_array())
        fail_input("bad_json", "choices must be a list");
    std::vector<ComponentSpec> out;
    for (const json& e : j) {
        if (e.is_string())
            out.push_back({e.get<std::string>(), e.get<std::string>()});
        else
            out.push_back({e.value("label", e.at("spec").get<std::string>()), e.at("spec").get<std::string>()});
    }
    return out;
}

} // namespace clarr
