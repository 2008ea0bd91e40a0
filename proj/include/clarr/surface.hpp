#pragma once

#include "clarr/poly.hpp"

#include <array>
#include <string>
#include <vector>

namespace clarr {

using TVec = std::array<TowerElem, 4>;

enum class ParamCase { M1, M2, degenerate };

/// tau = (lambda, t1..t4) in the chart C_o: x = t^2, z_o = [0,1,0].
struct SurfaceParams {
    TowerElem lambda;
    TVec t;
};

struct CriticalLambdas {
    TowerElem l1, l2, l3;
};

/// l1 = 0 (L12 + L34), l2 = -(t1-t4)(t2-t3) (L13 + L24),
/// l3 = -(t1-t3)(t2-t4) (L14 + L23).
CriticalLambdas critical_lambdas(const TVec& t);

struct ParamClass {
    ParamCase kind;
    int which = 0; // 2 or 3 when degenerate
};

ParamClass classify_params(const TowerElem& lambda, const TVec& t);
/// classify_params with M1/M2 enforced; throws on repeated t or critical lambda.
ParamCase require_valid(const SurfaceParams& p);

/// x - (ti + tj) t + ti tj, the line through p_i and p_j.
BivarPoly line_through(const TVec& t, int i, int j);
/// x-coordinate (ti + tj) t - ti tj of the line through p_i and p_j.
Poly line_x(const TVec& t, int i, int j);
/// c_tau(t, x) = lambda (x - t^2) + L12 * L34.
BivarPoly pencil_poly(const TowerElem& lambda, const TVec& t);

/// y^2 = x^3 + a2 x^2 + a4 x + a6, coefficients in t.
struct WeierstrassData {
    Poly a2, a4, a6;
    BivarPoly cubic() const;
    TowerElem eval(const TowerElem& t, const TowerElem& x) const;
};

WeierstrassData build_weierstrass(const SurfaceParams& p);

struct Fiber {
    std::string label; // "1".."4", "0" for p_0, "inf"
    bool at_infinity = false;
    TowerElem t;      // unused at infinity
    TowerElem node_x; // unused at infinity (the node there is X = 0)
};

/// Reducible fibers; requires the tangent line Z = 0 to meet C_tau in two
/// distinct points.
std::vector<Fiber> fiber_table(const SurfaceParams& p);

} // namespace clarr
