#pragma once

#include "clarr/arrangement.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace clarr {

/// C_o1 + C_o2,beta with the four bitangents L_b1..L_b4 of the family
/// through p = (+-3 sqrt(3)/2, 0), (0, +-3 sqrt(3)/2).
struct BetaFamily {
    PlaneCurve co1, co2;
    std::array<PlaneCurve, 4> bitangents;
    /// Set when beta is one of -2, -1, 0, 1: some L13 + L_bi + L_bj are concurrent.
    std::vector<std::string> warnings;
};

/// Throws "beta_conic_equals_co1" on (b^2+4b+1)(b^2-2b-2) = 0 and
/// "beta_conic_singular" on (b^2+b+1)(2b^2+2b-1)(2b+1) = 0.
BetaFamily beta_family(const TowerElem& beta);

/// The four points p1..p4 shared by every member.
std::array<PPoint, 4> beta_points();
/// Fixed members of Ex. 212p: C_o1 + C_o2 and L_b1..L_b4 as printed.
BetaFamily beta_reference();

/// C_o1 + C_o2,beta + L13 + L_bk + L_bl, k and l in 1..4.
Arrangement beta_arrangement(const TowerElem& beta, int k, int l);

struct PathSpec {
    std::string cmb;
    std::vector<ComponentSpec> choices;
    std::vector<SurfaceParams> waypoints;
    int samples_per_segment = 1;
    /// Waypoints may switch between M1 and M2.
    bool allow_case_change = false;

    bool beta = false;
    std::vector<TowerElem> beta_waypoints;
    std::array<int, 2> bitangent_pair = {1, 3};
};

/// t_i(u) = t_j(u) on a segment, with u solved exactly.
struct Collision {
    int segment = 0;
    TowerElem u;
    int i = 0, j = 0;
};

struct PathPoint {
    int segment = 0;
    Rat u;
    bool waypoint = false;
    SurfaceParams params; // unused for the beta family
    TowerElem beta;
};

struct SampledPath {
    std::vector<PathPoint> samples;
    std::vector<Collision> collisions;
};

/// Interior samples u = k/(n+1), k = 1..n, of each segment, interpolated
/// linearly; collisions of the t_i between waypoints are listed.
SampledPath sample_path(const PathSpec& path);

struct SampleResult {
    PathPoint point;
    bool isomorphic = false;
    std::string degeneracy; // empty, or the failing check
    std::string detail;
    /// "continued", "conjugated", "ambiguous" or "n/a".
    std::string branch = "n/a";
};

struct DeformationReport {
    std::string cmb;
    bool beta = false;
    std::vector<SampleResult> samples; // waypoints and interior samples in path order
    std::vector<Collision> collisions;
    std::optional<int> first_failure;
    bool accepted() const { return !first_failure; }
    std::string summary() const;
};

/// Assembles and classifies every waypoint and sample against the golden
/// combinatorics of the path's id. Failures are recorded, not thrown.
DeformationReport check_deformation(const PathSpec& path);

PathSpec path_from_json(const nlohmann::json& j);
nlohmann::json path_to_json(const PathSpec& p);
nlohmann::json report_to_json(const DeformationReport& r);

} // namespace clarr
