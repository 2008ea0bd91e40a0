#pragma once

#include "clarr/plane.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clarr {

enum class Plinth { P1, P2 };

std::string plinth_name(Plinth p);
Plinth parse_plinth(const std::string& s);

/// One non-plinth component: a group-law recipe ("P13+P14", "Lb[2]",
/// "2*P12"), a line "Lij" through p_i and p_j, or "pencil(<lambda'>)".
struct ComponentSpec {
    std::string label;
    std::string spec;
};

/// Plinth components first (C_o, L12, L34 or C_o, C_tau), then the rest.
/// Arrangements read from explicit equations carry no parameters.
struct Arrangement {
    std::string cmb;
    Plinth plinth = Plinth::P1;
    std::optional<SurfaceParams> params;
    std::vector<PlaneCurve> components;
    int total_degree() const;
};

/// Plinth curves for the given parameters; the case must match the plinth.
std::vector<PlaneCurve> plinth_curves(Plinth plinth, const SurfaceParams& params);

PlaneCurve build_component(const EllipticSurface& surface, const ComponentSpec& spec);

/// Total degree 7, all components distinct.
Arrangement assemble(const std::string& cmb, Plinth plinth, const SurfaceParams& params,
                     const std::vector<ComponentSpec>& choices);

struct CatalogEntry {
    std::string id;
    Plinth plinth;
    std::string description;
    /// Alternatives per non-plinth slot, as printed construction lists.
    std::vector<std::string> menu;
    SurfaceParams params;
    std::vector<ComponentSpec> choices;
    std::string note;
};

const std::vector<CatalogEntry>& catalog();
/// Accepts "123", "Cmb123" and "cmb_123"; throws on unknown ids.
const CatalogEntry& catalog_entry(const std::string& id);
Arrangement assemble_canonical(const std::string& id);
/// Frozen canonical combinatorics of the id.
const Combinatorics& golden_combinatorics(const std::string& id);

/// Contents of a file under data/ compiled into the library ("catalog.json",
/// "golden/123.json"); empty when absent.
std::string_view embedded_data(const std::string& name);

// JSON. Tower elements serialize as literal strings such as "-3*sqrt(5)-7";
// readers also accept integers.
nlohmann::json elem_to_json(const TowerElem& e);
TowerElem elem_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const SurfaceParams& p);
SurfaceParams params_from_json(const nlohmann::json& j);
nlohmann::json curve_to_json(const PlaneCurve& c);
PlaneCurve curve_from_json(const nlohmann::json& j);
nlohmann::json arrangement_to_json(const Arrangement& a);
Arrangement arrangement_from_json(const nlohmann::json& j);
nlohmann::json combinatorics_to_json(const Combinatorics& c);
Combinatorics combinatorics_from_json(const nlohmann::json& j);
nlohmann::json choices_to_json(const std::vector<ComponentSpec>& c);
std::vector<ComponentSpec> choices_from_json(const nlohmann::json& j);

struct SvgWindow {
    double tmin = -6, tmax = 6, xmin = -6, xmax = 6;
};

/// Real traces of the components on the window; non-real components and
/// empty traces are annotated in the output.
std::string arrangement_svg(const Arrangement& a, const SvgWindow& w = {});

} // namespace clarr
