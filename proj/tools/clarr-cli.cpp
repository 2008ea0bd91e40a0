#include "clarr/clarr.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

struct CliError {
    int status;
};

using ArrPtr = std::unique_ptr<clarr_arrangement, decltype(&clarr_arrangement_free)>;

ArrPtr adopt(clarr_arrangement* a) { return ArrPtr(a, &clarr_arrangement_free); }

void print_error(int status, const std::string& kind, const std::string& message)
{
    json e = {{"error", {{"kind", kind}, {"class", status == CLARR_INTERNAL_ERROR ? "internal" : "input"},
                         {"message", message}}}};
    std::cerr << e.dump() << "\n";
}

// Throws after reporting the last library error when status is an error.
void check(clarr_status status)
{
    if (status == CLARR_INPUT_ERROR || status == CLARR_INTERNAL_ERROR) {
        std::cerr << clarr_last_error() << "\n";
        throw CliError{status};
    }
}

[[noreturn]] void usage_error(const std::string& kind, const std::string& message)
{
    print_error(CLARR_INPUT_ERROR, kind, message);
    throw CliError{CLARR_INPUT_ERROR};
}

std::string take(char* s)
{
    std::string out = s ? s : "";
    clarr_string_free(s);
    return out;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        usage_error("io_error", "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& out, const std::string& text)
{
    if (out.empty() || out == "-") {
        std::cout << text;
        if (text.empty() || text.back() != '\n')
            std::cout << "\n";
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f)
        usage_error("io_error", "cannot write '" + out + "'");
    f << text;
    if (text.empty() || text.back() != '\n')
        f << "\n";
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(' || c == '[')
            ++depth;
        else if (c == ')' || c == ']')
            --depth;
        if (c == sep && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    for (std::string& p : parts) {
        auto b = p.find_first_not_of(" \t");
        auto e = p.find_last_not_of(" \t");
        p = b == std::string::npos ? "" : p.substr(b, e - b + 1);
    }
    return parts;
}

bool looks_like_json(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    return b != std::string::npos && (s[b] == '{' || s[b] == '[');
}

// "lambda,t1,t2,t3,t4" or a params JSON object.
std::string tau_to_json(const std::string& tau)
{
    if (looks_like_json(tau))
        return tau;
    std::vector<std::string> parts = split(tau, ',');
    if (parts.size() != 5)
        usage_error("bad_tau", "--tau expects lambda,t1,t2,t3,t4");
    return json{{"lambda", parts[0]}, {"t", {parts[1], parts[2], parts[3], parts[4]}}}.dump();
}

// "spec,label=spec,..." or choices JSON.
std::string choices_to_json(const std::string& choices)
{
    if (looks_like_json(choices))
        return choices;
    json out = json::array();
    for (const std::string& item : split(choices, ',')) {
        if (item.empty())
            usage_error("bad_choices", "empty entry in --choices");
        auto eq = item.find('=');
        if (eq == std::string::npos)
            out.push_back({{"label", item}, {"spec", item}});
        else
            out.push_back({{"label", item.substr(0, eq)}, {"spec", item.substr(eq + 1)}});
    }
    return out.dump();
}

// A file path, inline JSON, or a catalog id for its canonical basepoint.
ArrPtr load_arrangement(const std::string& ref)
{
    clarr_arrangement* a = nullptr;
    if (looks_like_json(ref)) {
        check(clarr_arrangement_from_json(ref.c_str(), &a));
    } else if (std::filesystem::exists(ref)) {
        std::string text = read_file(ref);
        check(clarr_arrangement_from_json(text.c_str(), &a));
    } else {
        check(clarr_construct(ref.c_str(), nullptr, nullptr, &a));
    }
    return adopt(a);
}

std::array<double, 4> parse_window(const std::string& w)
{
    std::vector<std::string> parts = split(w, ',');
    if (parts.size() != 4)
        usage_error("bad_window", "--window expects tmin,tmax,xmin,xmax");
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i) {
        try {
            std::size_t used = 0;
            out[i] = std::stod(parts[i], &used);
            if (used != parts[i].size())
                throw std::invalid_argument(parts[i]);
        } catch (const std::exception&) {
            usage_error("bad_window", "'" + parts[i] + "' is not a number");
        }
    }
    return out;
}

std::string svg_of(const clarr_arrangement* a, const std::array<double, 4>& w)
{
    char* s = nullptr;
    check(clarr_arrangement_svg(a, w[0], w[1], w[2], w[3], &s));
    return take(s);
}

std::string json_of(const clarr_arrangement* a)
{
    char* s = nullptr;
    check(clarr_arrangement_to_json(a, &s));
    return take(s);
}

struct Options {
    std::string cmb, tau, choices, format = "json", out, window = "-6,6,-6,6", svg;
    std::string beta, bitangents = "1,3";
    std::string arrangement, second, path;
    long prime = 3;
    int samples = 0;
    bool no_splitting = false, no_dihedral = false;
};

int cmd_catalog(const Options& o)
{
    char* s = nullptr;
    check(clarr_catalog_json(&s));
    json doc = json::parse(take(s));
    if (!o.cmb.empty()) {
        // Validates the id and narrows the listing to it.
        clarr_arrangement* a = nullptr;
        check(clarr_construct(o.cmb.c_str(), nullptr, nullptr, &a));
        std::string id = json::parse(json_of(adopt(a).get())).at("cmb");
        json kept = json::array();
        for (const json& e : doc.at("entries"))
            if (e.at("id") == id)
                kept.push_back(e);
        doc["entries"] = kept;
    }
    if (o.format == "text") {
        std::ostringstream ss;
        for (const json& e : doc.at("entries")) {
            ss << "Cmb" << e.at("id").get<std::string>() << "  " << e.at("plinth").get<std::string>() << "  "
               << e.at("description").get<std::string>() << "\n";
            for (const json& c : e.at("choices"))
                ss << "    " << c.at("label").get<std::string>() << " = " << c.at("spec").get<std::string>() << "\n";
        }
        write_output(o.out, ss.str());
    } else {
        write_output(o.out, doc.dump(2));
    }
    return 0;
}

int cmd_construct(const Options& o)
{
    clarr_arrangement* raw = nullptr;
    if (!o.beta.empty()) {
        if (!o.tau.empty() || !o.choices.empty())
            usage_error("bad_arguments", "--beta does not combine with --tau or --choices");
        std::vector<std::string> kl = split(o.bitangents, ',');
        if (kl.size() != 2 || kl[0].size() != 1 || kl[1].size() != 1)
            usage_error("bad_arguments", "--bitangents expects k,l");
        check(clarr_construct_beta(o.beta.c_str(), kl[0][0] - '0', kl[1][0] - '0', &raw));
    } else {
        if (o.cmb.empty())
            usage_error("bad_arguments", "construct needs --cmb or --beta");
        std::string params = o.tau.empty() ? "" : tau_to_json(o.tau);
        std::string choices = o.choices.empty() ? "" : choices_to_json(o.choices);
        check(clarr_construct(o.cmb.c_str(), params.empty() ? nullptr : params.c_str(),
                              choices.empty() ? nullptr : choices.c_str(), &raw));
    }
    ArrPtr a = adopt(raw);
    if (o.format == "svg") {
        write_output(o.out, svg_of(a.get(), parse_window(o.window)));
        return 0;
    }
    write_output(o.out, json_of(a.get()));
    if (!o.svg.empty())
        write_output(o.svg, svg_of(a.get(), parse_window(o.window)));
    return 0;
}

int cmd_verify(const Options& o)
{
    ArrPtr a = load_arrangement(o.arrangement);
    char* s = nullptr;
    clarr_status st = clarr_verify(a.get(), o.cmb.empty() ? nullptr : o.cmb.c_str(), &s);
    check(st);
    write_output(o.out, take(s));
    return st;
}

int cmd_invariants(const Options& o)
{
    ArrPtr a = load_arrangement(o.arrangement);
    ArrPtr b = load_arrangement(o.second);
    char* s = nullptr;
    check(clarr_certificate(a.get(), b.get(), !o.no_splitting, !o.no_dihedral, o.prime, &s));
    write_output(o.out, take(s));
    return 0;
}

int cmd_deform(const Options& o)
{
    if (o.samples < 0)
        usage_error("bad_samples", "--samples must be positive");
    std::string text = looks_like_json(o.path) ? o.path : read_file(o.path);
    char* s = nullptr;
    clarr_status st = clarr_deform(text.c_str(), o.samples, &s);
    check(st);
    write_output(o.out, take(s));
    return st;
}

int cmd_emit(const Options& o)
{
    ArrPtr a = load_arrangement(o.arrangement);
    if (o.format == "svg")
        write_output(o.out, svg_of(a.get(), parse_window(o.window)));
    else
        write_output(o.out, json_of(a.get()));
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Conic-line arrangements: construction, verification and Zariski pair certificates"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(clarr_version()));
    Options o;

    auto* catalog = app.add_subcommand("catalog", "List the combinatorics ids and their canonical basepoints");
    catalog->add_option("--cmb", o.cmb, "Only this id");
    catalog->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    catalog->add_option("--out", o.out, "Output file (default stdout)");

    auto* construct = app.add_subcommand("construct", "Assemble an arrangement");
    construct->add_option("--cmb", o.cmb, "Combinatorics id, e.g. 123 or Cmb212");
    construct->add_option("--tau", o.tau, "lambda,t1,t2,t3,t4 or params JSON");
    construct->add_option("--choices", o.choices, "spec,label=spec,... or choices JSON");
    construct->add_option("--beta", o.beta, "Member of the beta family of Cmb212 instead of --cmb");
    construct->add_option("--bitangents", o.bitangents, "Bitangent pair k,l for --beta");
    construct->add_option("--format", o.format, "json or svg")->check(CLI::IsMember({"json", "svg"}));
    construct->add_option("--svg", o.svg, "Also write an SVG here");
    construct->add_option("--window", o.window, "SVG window tmin,tmax,xmin,xmax");
    construct->add_option("--out", o.out, "Output file (default stdout)");

    auto* verify = app.add_subcommand("verify", "Compare an arrangement with its golden combinatorics");
    verify->add_option("arrangement", o.arrangement, "Arrangement JSON file or catalog id")->required();
    verify->add_option("--cmb", o.cmb, "Id to compare against (default: the arrangement's own)");
    verify->add_option("--out", o.out, "Output file (default stdout)");

    auto* invariants = app.add_subcommand("invariants", "Certificate for a pair of arrangements");
    invariants->add_option("first", o.arrangement, "Arrangement JSON file or catalog id")->required();
    invariants->add_option("second", o.second, "Arrangement JSON file or catalog id")->required();
    invariants->add_option("--prime", o.prime, "Prime for the dihedral dependence test");
    invariants->add_flag("--no-splitting", o.no_splitting, "Skip splitting types");
    invariants->add_flag("--no-dihedral", o.no_dihedral, "Skip the dihedral dependence test");
    invariants->add_option("--out", o.out, "Output file (default stdout)");

    auto* deform = app.add_subcommand("deform", "Check a deformation path for degenerations");
    deform->add_option("path", o.path, "Path JSON file or inline JSON")->required();
    deform->add_option("--samples", o.samples, "Samples per segment (overrides the path)");
    deform->add_option("--out", o.out, "Output file (default stdout)");

    auto* emit = app.add_subcommand("emit", "Write an arrangement as JSON or SVG");
    emit->add_option("arrangement", o.arrangement, "Arrangement JSON file or catalog id")->required();
    emit->add_option("--format", o.format, "json or svg")->check(CLI::IsMember({"json", "svg"}));
    emit->add_option("--window", o.window, "SVG window tmin,tmax,xmin,xmax");
    emit->add_option("--out", o.out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error(CLARR_INPUT_ERROR, "usage", e.what());
        return CLARR_INPUT_ERROR;
    }

    try {
        if (*catalog)
            return cmd_catalog(o);
        if (*construct)
            return cmd_construct(o);
        if (*verify)
            return cmd_verify(o);
        if (*invariants)
            return cmd_invariants(o);
        if (*deform)
            return cmd_deform(o);
        if (*emit)
            return cmd_emit(o);
    } catch (const CliError& e) {
        return e.status;
    } catch (const json::exception& e) {
        print_error(CLARR_INTERNAL_ERROR, "bad_library_output", e.what());
        return CLARR_INTERNAL_ERROR;
    }
    return CLARR_INTERNAL_ERROR;
}
