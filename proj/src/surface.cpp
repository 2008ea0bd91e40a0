#include "clarr/surface.hpp"

#include "clarr/error.hpp"

namespace clarr {

namespace {

void require_distinct(const TVec& t)
{
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (t[i] == t[j])
                fail_input("parameters_outside_M", "parameters outside M: t" + std::to_string(i + 1) +
                                                       " = t" + std::to_string(j + 1));
}

} // namespace

CriticalLambdas critical_lambdas(const TVec& t)
{
    require_distinct(t);
    return {TowerElem(0), -(t[0] - t[3]) * (t[1] - t[2]), -(t[0] - t[2]) * (t[1] - t[3])};
}

ParamClass classify_params(const TowerElem& lambda, const TVec& t)
{
    CriticalLambdas c = critical_lambdas(t);
    if (lambda.is_zero())
        return {ParamCase::M1};
    if (lambda == c.l2)
        return {ParamCase::degenerate, 2};
    if (lambda == c.l3)
        return {ParamCase::degenerate, 3};
    return {ParamCase::M2};
}

ParamCase require_valid(const SurfaceParams& p)
{
    ParamClass c = classify_params(p.lambda, p.t);
    if (c.kind == ParamCase::degenerate)
        fail_input("degenerate_lambda", "lambda equals the critical value lambda" + std::to_string(c.which) +
                                            "; C_tau splits into two lines");
    return c.kind;
}

Poly line_x(const TVec& t, int i, int j)
{
    return Poly({-(t[i] * t[j]), t[i] + t[j]});
}

BivarPoly line_through(const TVec& t, int i, int j)
{
    return BivarPoly::x() - BivarPoly::from_poly(line_x(t, i, j));
}

BivarPoly pencil_poly(const TowerElem& lambda, const TVec& t)
{
    BivarPoly conic = BivarPoly::x() - BivarPoly::t() * BivarPoly::t();
    return conic.scaled(lambda) + line_through(t, 0, 1) * line_through(t, 2, 3);
}

BivarPoly WeierstrassData::cubic() const
{
    BivarPoly x = BivarPoly::x();
    return x * x * x + BivarPoly::from_poly(a2) * x * x + BivarPoly::from_poly(a4) * x + BivarPoly::from_poly(a6);
}

TowerElem WeierstrassData::eval(const TowerElem& t, const TowerElem& x) const
{
    return ((x + a2.eval(t)) * x + a4.eval(t)) * x + a6.eval(t);
}

WeierstrassData build_weierstrass(const SurfaceParams& p)
{
    require_valid(p);
    BivarPoly f = (BivarPoly::x() - BivarPoly::t() * BivarPoly::t()) * pencil_poly(p.lambda, p.t);
    std::vector<Poly> c = f.coefficients_in(true);
    if (c.size() != 4 || c[3] != Poly(TowerElem(1)))
        fail_internal("weierstrass", "f_tau is not a monic cubic in x");
    return {c[2], c[1], c[0]};
}

std::vector<Fiber> fiber_table(const SurfaceParams& p)
{
    ParamCase kind = require_valid(p);
    const TVec& t = p.t;
    // Z = 0 meets C_tau where X^2 - (s12 + s34) T X + (s12 s34 - lambda) T^2 = 0.
    TowerElem s12 = t[0] + t[1], s34 = t[2] + t[3];
    if (((s12 - s34) * (s12 - s34) + 4 * p.lambda).is_zero())
        fail_input("tangent_condition",
                   "the tangent line at z_o meets C_tau in a single point; change coordinates");

    std::vector<Fiber> out;
    for (int i = 0; i < 4; ++i)
        out.push_back({std::to_string(i + 1), false, t[i], t[i] * t[i]});
    if (kind == ParamCase::M1) {
        // p_0 = L12 cap L34
        TowerElem t0 = (t[0] * t[1] - t[2] * t[3]) / (s12 - s34);
        out.push_back({"0", false, t0, s12 * t0 - t[0] * t[1]});
    }
    out.push_back({"inf", true, TowerElem(), TowerElem()});
    return out;
}

} // namespace clarr
