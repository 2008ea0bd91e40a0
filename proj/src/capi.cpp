#include "clarr/clarr.h"

#include "clarr/arrangement.hpp"
#include "clarr/deform.hpp"
#include "clarr/error.hpp"
#include "clarr/invariants.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <set>
#include <string>

using nlohmann::json;

struct clarr_arrangement {
    clarr::Arrangement value;
};

namespace {

thread_local std::string last_error;

clarr_status set_error(clarr_status status, const std::string& cls, const std::string& kind,
                       const std::string& message)
{
    last_error = json{{"error", {{"kind", kind}, {"class", cls}, {"message", message}}}}.dump();
    return status;
}

// Runs f, mapping exceptions onto status codes and the thread's last error.
template <class F>
clarr_status guarded(F&& f)
{
    last_error.clear();
    try {
        return f();
    } catch (const clarr::Error& e) {
        if (e.error_class() == clarr::ErrorClass::input)
            return set_error(CLARR_INPUT_ERROR, "input", e.kind(), e.what());
        return set_error(CLARR_INTERNAL_ERROR, "internal", e.kind(), e.what());
    } catch (const json::parse_error& e) {
        return set_error(CLARR_INPUT_ERROR, "input", "json_parse", e.what());
    } catch (const json::exception& e) {
        return set_error(CLARR_INPUT_ERROR, "input", "bad_json", e.what());
    } catch (const std::bad_alloc&) {
        return set_error(CLARR_INTERNAL_ERROR, "internal", "out_of_memory", "allocation failed");
    } catch (const std::exception& e) {
        return set_error(CLARR_INTERNAL_ERROR, "internal", "unexpected", e.what());
    }
}

char* dup_string(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

clarr_status emit(char** out, const std::string& s, clarr_status status = CLARR_OK)
{
    *out = dup_string(s);
    return status;
}

clarr_status null_argument(const char* name)
{
    return set_error(CLARR_INPUT_ERROR, "input", "null_argument", std::string(name) + " is NULL");
}

// Array replaces the canonical choices; an object overrides them by label.
std::vector<clarr::ComponentSpec> merge_choices(const std::vector<clarr::ComponentSpec>& base, const json& j)
{
    if (j.is_array())
        return clarr::choices_from_json(j);
    if (!j.is_object())
        clarr::fail_input("bad_json", "choices must be a list or an object");
    std::vector<clarr::ComponentSpec> out = base;
    for (const auto& [label, spec] : j.items()) {
        bool found = false;
        for (clarr::ComponentSpec& c : out)
            if (c.label == label) {
                c.spec = spec.get<std::string>();
                found = true;
            }
        if (!found)
            clarr::fail_input("unknown_choice_label", "no component labeled '" + label + "' to override");
    }
    return out;
}

json counts_diff(const clarr::Combinatorics& found, const clarr::Combinatorics& expected)
{
    auto f = found.type_counts(), e = expected.type_counts();
    std::set<std::string> types;
    for (const auto& [k, v] : f)
        types.insert(k);
    for (const auto& [k, v] : e)
        types.insert(k);
    json out = json::object();
    for (const std::string& t : types) {
        int a = f.count(t) ? f.at(t) : 0, b = e.count(t) ? e.at(t) : 0;
        if (a != b)
            out[t] = {{"found", a}, {"expected", b}};
    }
    return out;
}

std::vector<int> sorted_degrees(std::vector<int> d)
{
    std::sort(d.begin(), d.end());
    return d;
}

} // namespace

extern "C" {

const char* clarr_version(void) { return "1.0.0"; }

const char* clarr_last_error(void) { return last_error.c_str(); }

void clarr_clear_error(void) { last_error.clear(); }

void clarr_string_free(char* s) { std::free(s); }

clarr_status clarr_catalog_json(char** out)
{
    if (!out)
        return null_argument("out");
    return guarded([&] {
        json entries = json::array();
        for (const clarr::CatalogEntry& e : clarr::catalog()) {
            json j = {{"id", e.id},
                      {"plinth", clarr::plinth_name(e.plinth)},
                      {"description", e.description},
                      {"menu", e.menu},
                      {"params", clarr::params_to_json(e.params)},
                      {"choices", clarr::choices_to_json(e.choices)}};
            if (!e.note.empty())
                j["note"] = e.note;
            entries.push_back(std::move(j));
        }
        return emit(out, json{{"format", "clarr-catalog"}, {"version", 1}, {"entries", entries}}.dump(2));
    });
}

clarr_status clarr_construct(const char* cmb, const char* params_json, const char* choices_json,
                             clarr_arrangement** out)
{
    if (!cmb)
        return null_argument("cmb");
    if (!out)
        return null_argument("out");
    return guarded([&] {
        const clarr::CatalogEntry& e = clarr::catalog_entry(cmb);
        clarr::SurfaceParams params = e.params;
        if (params_json && *params_json)
            params = clarr::params_from_json(json::parse(params_json));
        std::vector<clarr::ComponentSpec> choices = e.choices;
        if (choices_json && *choices_json)
            choices = merge_choices(e.choices, json::parse(choices_json));
        *out = new clarr_arrangement{clarr::assemble(e.id, e.plinth, params, choices)};
        return CLARR_OK;
    });
}

clarr_status clarr_construct_beta(const char* beta, int k, int l, clarr_arrangement** out)
{
    if (!beta)
        return null_argument("beta");
    if (!out)
        return null_argument("out");
    return guarded([&] {
        *out = new clarr_arrangement{clarr::beta_arrangement(clarr::parse_elem(beta), k, l)};
        return CLARR_OK;
    });
}

clarr_status clarr_arrangement_from_json(const char* text, clarr_arrangement** out)
{
    if (!text)
        return null_argument("json");
    if (!out)
        return null_argument("out");
    return guarded([&] {
        *out = new clarr_arrangement{clarr::arrangement_from_json(json::parse(text))};
        return CLARR_OK;
    });
}

void clarr_arrangement_free(clarr_arrangement* a) { delete a; }

clarr_status clarr_arrangement_to_json(const clarr_arrangement* a, char** out)
{
    if (!a)
        return null_argument("arrangement");
    if (!out)
        return null_argument("out");
    return guarded([&] { return emit(out, clarr::arrangement_to_json(a->value).dump(2)); });
}

clarr_status clarr_arrangement_svg(const clarr_arrangement* a, double tmin, double tmax, double xmin, double xmax,
                                   char** out)
{
    if (!a)
        return null_argument("arrangement");
    if (!out)
        return null_argument("out");
    return guarded([&] {
        if (!(tmin < tmax) || !(xmin < xmax))
            clarr::fail_input("bad_window", "window bounds must satisfy min < max");
        return emit(out, clarr::arrangement_svg(a->value, {tmin, tmax, xmin, xmax}));
    });
}

size_t clarr_arrangement_size(const clarr_arrangement* a) { return a ? a->value.components.size() : 0; }

clarr_status clarr_classify(const clarr_arrangement* a, char** out)
{
    if (!a)
        return null_argument("arrangement");
    if (!out)
        return null_argument("out");
    return guarded([&] {
        clarr::Combinatorics c = clarr::classify_singularities(a->value.components);
        return emit(out, clarr::combinatorics_to_json(clarr::canonical_form(c)).dump(2));
    });
}

clarr_status clarr_verify(const clarr_arrangement* a, const char* cmb, char** report)
{
    if (!a)
        return null_argument("arrangement");
    if (!report)
        return null_argument("report");
    return guarded([&] {
        std::string id = cmb && *cmb ? std::string(cmb) : a->value.cmb;
        if (id.empty())
            clarr::fail_input("missing_cmb", "arrangement carries no combinatorics id; pass one explicitly");
        const clarr::CatalogEntry& e = clarr::catalog_entry(id);
        const clarr::Combinatorics& golden = clarr::golden_combinatorics(e.id);
        clarr::Combinatorics found = clarr::classify_singularities(a->value.components);
        bool ok = clarr::combinatorics_isomorphic(found, golden);
        json r = {{"format", "clarr-verify-report"},
                  {"version", 1},
                  {"cmb", e.id},
                  {"isomorphic", ok},
                  {"combinatorics", clarr::combinatorics_to_json(clarr::canonical_form(found))}};
        if (!ok) {
            json diff = {{"type_counts", counts_diff(found, golden)}};
            if (sorted_degrees(found.degrees) != sorted_degrees(golden.degrees))
                diff["degrees"] = {{"found", sorted_degrees(found.degrees)},
                                   {"expected", sorted_degrees(golden.degrees)}};
            r["diff"] = diff;
            r["expected"] = clarr::combinatorics_to_json(golden);
        }
        return emit(report, r.dump(2), ok ? CLARR_OK : CLARR_VERIFY_FAILED);
    });
}

clarr_status clarr_certificate(const clarr_arrangement* a, const clarr_arrangement* b, int splitting, int dihedral,
                               long prime, char** out)
{
    if (!a || !b)
        return null_argument("arrangement");
    if (!out)
        return null_argument("out");
    return guarded([&] {
        clarr::CertificateConfig config{splitting != 0, dihedral != 0, prime};
        if (config.dihedral)
            clarr::dihedral_dependence_test({}, prime); // rejects p that is not an odd prime
        clarr::Certificate c = clarr::zariski_certificate(a->value, b->value, config);
        return emit(out, clarr::certificate_to_json(c, a->value, b->value, config).dump(2));
    });
}

clarr_status clarr_deform(const char* path_json, int samples, char** report)
{
    if (!path_json)
        return null_argument("path");
    if (!report)
        return null_argument("report");
    return guarded([&] {
        clarr::PathSpec path = clarr::path_from_json(json::parse(path_json));
        if (samples > 0)
            path.samples_per_segment = samples;
        clarr::DeformationReport r = clarr::check_deformation(path);
        return emit(report, clarr::report_to_json(r).dump(2), r.accepted() ? CLARR_OK : CLARR_VERIFY_FAILED);
    });
}

clarr_status clarr_parse_elem(const char* literal, char** out)
{
    if (!literal)
        return null_argument("literal");
    if (!out)
        return null_argument("out");
    return guarded([&] { return emit(out, clarr::parse_elem(literal).str()); });
}

} // extern "C"
