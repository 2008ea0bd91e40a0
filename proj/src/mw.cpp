#include "clarr/mw.hpp"

#include "clarr/error.hpp"

#include <cctype>
#include <regex>

namespace clarr {

LatticeCoord operator+(const LatticeCoord& a, const LatticeCoord& b)
{
    if (a.free.size() != b.free.size())
        fail_internal("lattice_mismatch", "lattice coordinates of different rank");
    LatticeCoord r{a.free, a.torsion ^ b.torsion};
    for (std::size_t i = 0; i < r.free.size(); ++i)
        r.free[i] += b.free[i];
    return r;
}

LatticeCoord operator-(const LatticeCoord& a)
{
    LatticeCoord r = a;
    for (long& v : r.free)
        v = -v;
    return r;
}

LatticeCoord operator*(long k, const LatticeCoord& a)
{
    LatticeCoord r = a;
    for (long& v : r.free)
        v *= k;
    r.torsion = (k % 2 == 0) ? 0u : a.torsion;
    return r;
}

std::string torsion_label(ParamCase kind, unsigned torsion)
{
    if (torsion == 0)
        return "O";
    if (kind == ParamCase::M2)
        return "T";
    static const char* names[] = {"O", "T1", "T2", "T1+T2"};
    return names[torsion & 3u];
}

bool MWPoint::same_point(const MWPoint& o) const
{
    if (zero_ || o.zero_)
        return zero_ == o.zero_;
    return x_ == o.x_ && y_ == o.y_;
}

int ComponentFlags::nonidentity_count() const
{
    int n = 0;
    for (FiberFlag f : flags)
        n += f == FiberFlag::nonidentity;
    return n;
}

const std::vector<TableRow>& generator_table()
{
    static const std::vector<TableRow> rows = {
        {"L0", ParamCase::M1, {"P13+P14+P34", "P13-P14+P34"}},
        {"D(1,1)",
         ParamCase::M1,
         {"P13+P12", "P13-P12", "P13+P34", "P13-P34", "P14+P12", "P14-P12", "P14+P34", "P14-P34"}},
        {"D(1,2)", ParamCase::M1, {"P13+P14", "P13-P14", "P13+P23", "P13-P23"}},
        {"D(1,4)", ParamCase::M1, {"2*P13", "2*P14"}},
        {"Lb", ParamCase::M2, {"P12+P13+P23", "P12+P13-P23", "P12-P13+P23", "P12-P13-P23"}},
        {"D(2,2)",
         ParamCase::M2,
         {"P12+P23", "P12-P23", "P12+P13", "P12-P13", "P13+P23", "P13-P23", "P12+P14", "P12-P14", "P13+P14",
          "P13-P14", "P12+P24", "P12-P24"}},
        {"D(2,4)", ParamCase::M2, {"2*P12", "2*P13", "2*P23"}},
    };
    return rows;
}

std::optional<std::string> resolve_table_ref(const std::string& text, ParamCase kind)
{
    static const std::regex ref(R"(^\s*(L0|Lb|D\(\d,\d\))\s*\[\s*(\d+)\s*\]\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, ref))
        return std::nullopt;
    for (const TableRow& row : generator_table()) {
        if (row.name != m[1].str())
            continue;
        if (row.kind != kind)
            fail_input("recipe_case_mismatch", "row " + row.name + " is not available for this plinth");
        std::size_t idx = std::stoul(m[2].str());
        if (idx < 1 || idx > row.alternatives.size())
            fail_input("bad_recipe", "row " + row.name + " has " + std::to_string(row.alternatives.size()) +
                                         " alternatives, index " + std::to_string(idx) + " requested");
        return row.alternatives[idx - 1];
    }
    fail_input("bad_recipe", "unknown table row " + m[1].str());
}

EllipticSurface::EllipticSurface(SurfaceParams params)
    : params_(std::move(params)), kind_(require_valid(params_)), w_(build_weierstrass(params_)),
      fibers_(fiber_table(params_))
{
    MWPoint pco(RatFunc(Poly::monomial(TowerElem(1), 2)), RatFunc());
    pco.recipe = "PCo";
    gens_["PCo"] = pco;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            std::string name = "P" + std::to_string(i + 1) + std::to_string(j + 1);
            MWPoint p = compute_generator(i, j);
            p.recipe = name;
            gens_[name] = p;
        }
    assign_lattice();
}

MWPoint EllipticSurface::compute_generator(int i, int j) const
{
    Poly x = line_x(params_.t, i, j);
    Poly r = w_.cubic().substitute_x(x);
    if (r.is_zero())
        return MWPoint(RatFunc(x), RatFunc());
    auto sq = square_up_to_constant(r);
    if (!sq)
        fail_internal("not_a_line_point", "f(t, x_P" + std::to_string(i + 1) + std::to_string(j + 1) +
                                              ") is not a square up to a constant");
    auto root = try_sqrt(sq->c);
    if (!root)
        fail_internal("not_a_line_point", "constant " + sq->c.str() + " has no square root in a quadratic extension");
    return MWPoint(RatFunc(x), RatFunc(sq->g.scaled(*root)));
}

LatticeCoord EllipticSurface::basis_vector(int index) const
{
    LatticeCoord v{std::vector<long>(kind_ == ParamCase::M2 ? 3 : 2, 0), 0};
    v.free[index] = 1;
    return v;
}

void EllipticSurface::assign_lattice()
{
    auto set = [&](const std::string& name, LatticeCoord c) { gens_[name].lattice = std::move(c); };
    std::size_t rank = kind_ == ParamCase::M2 ? 3 : 2;
    set("PCo", LatticeCoord{std::vector<long>(rank, 0), 1u});

    // The sign of y on P_kl is fixed by P_kl = P_ij + P_Co for complementary
    // pairs {i,j}, {k,l}.
    auto complement = [&](const std::string& name, const std::string& base) {
        MWPoint sum = add(gens_[base], gens_["PCo"]);
        if (!sum.same_point(gens_[name]) && !neg(sum).same_point(gens_[name]))
            fail_internal("lattice_assignment", name + " is not +-(" + base + " + P_Co)");
        sum.recipe = name;
        gens_[name] = sum;
    };

    if (kind_ == ParamCase::M2) {
        set("P12", basis_vector(0));
        set("P13", basis_vector(1));
        set("P23", basis_vector(2));
        complement("P34", "P12");
        complement("P24", "P13");
        complement("P14", "P23");
    } else {
        set("P13", basis_vector(0));
        set("P14", basis_vector(1));
        set("P12", LatticeCoord{std::vector<long>(rank, 0), 2u});
        complement("P34", "P12");
        complement("P23", "P14");
        complement("P24", "P13");
    }
}

bool EllipticSurface::on_curve(const MWPoint& p) const
{
    if (p.is_zero())
        return true;
    RatFunc x = p.x();
    RatFunc rhs = ((x + RatFunc(w_.a2)) * x + RatFunc(w_.a4)) * x + RatFunc(w_.a6);
    return p.y() * p.y() == rhs;
}

MWPoint EllipticSurface::neg(const MWPoint& p) const
{
    if (p.is_zero())
        return p;
    MWPoint r(p.x(), -p.y());
    if (p.lattice)
        r.lattice = -*p.lattice;
    r.recipe = "-(" + p.recipe + ")";
    return r;
}

MWPoint EllipticSurface::add(const MWPoint& p, const MWPoint& q) const
{
    if (p.is_zero())
        return q;
    if (q.is_zero())
        return p;
    std::optional<LatticeCoord> lat;
    if (p.lattice && q.lattice)
        lat = *p.lattice + *q.lattice;
    std::string recipe = p.recipe + "+" + q.recipe;

    RatFunc slope;
    if (p.x() == q.x()) {
        if (p.y() == -q.y()) {
            MWPoint o;
            o.lattice = lat;
            o.recipe = recipe;
            return o;
        }
        RatFunc x = p.x();
        RatFunc num = RatFunc(Poly(TowerElem(3))) * x * x + RatFunc(w_.a2.scaled(TowerElem(2))) * x + RatFunc(w_.a4);
        slope = num / (RatFunc(Poly(TowerElem(2))) * p.y());
    } else {
        slope = (q.y() - p.y()) / (q.x() - p.x());
    }
    RatFunc x3 = slope * slope - RatFunc(w_.a2) - p.x() - q.x();
    RatFunc y3 = -(p.y() + slope * (x3 - p.x()));
    MWPoint r(x3, y3);
    r.lattice = lat;
    r.recipe = recipe;
    return r;
}

MWPoint EllipticSurface::mul(long k, const MWPoint& p) const
{
    MWPoint base = k < 0 ? neg(p) : p;
    unsigned long n = k < 0 ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
    MWPoint acc;
    if (p.lattice)
        acc.lattice = 0 * *p.lattice;
    while (n) {
        if (n & 1u)
            acc = add(acc, base);
        n >>= 1;
        if (n)
            base = add(base, base);
    }
    acc.recipe = "[" + std::to_string(k) + "]" + p.recipe;
    return acc;
}

MWPoint EllipticSurface::generator(const std::string& name) const
{
    std::string key;
    for (char c : name)
        if (c != '_' && c != '{' && c != '}' && !std::isspace(static_cast<unsigned char>(c)))
            key += c;
    if (key == "O") {
        MWPoint o;
        o.lattice = 0 * *gens_.at("PCo").lattice;
        o.recipe = "O";
        return o;
    }
    if (key == "PCO" || key == "Pco")
        key = "PCo";
    if (key.size() == 3 && key[0] == 'P' && key[1] > key[2])
        std::swap(key[1], key[2]);
    auto it = gens_.find(key);
    if (it == gens_.end())
        fail_input("bad_recipe", "unknown generator '" + name + "'");
    return it->second;
}

MWPoint EllipticSurface::recipe(const std::string& expr) const
{
    if (auto row = resolve_table_ref(expr, kind_)) {
        MWPoint p = recipe(*row);
        p.recipe = expr + " = " + *row;
        return p;
    }
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < expr.size() && std::isspace(static_cast<unsigned char>(expr[pos])))
            ++pos;
    };
    auto integer = [&]() -> long {
        std::size_t start = pos;
        if (pos < expr.size() && (expr[pos] == '-' || expr[pos] == '+'))
            ++pos;
        while (pos < expr.size() && std::isdigit(static_cast<unsigned char>(expr[pos])))
            ++pos;
        std::string s = expr.substr(start, pos - start);
        if (s.empty() || s == "-" || s == "+")
            fail_input("bad_recipe", "expected an integer in '" + expr + "'");
        return std::stol(s);
    };

    MWPoint acc;
    acc.lattice = 0 * *gens_.at("PCo").lattice;
    bool first = true;
    skip();
    if (pos >= expr.size())
        fail_input("bad_recipe", "empty recipe");
    while (pos < expr.size()) {
        long sign = 1;
        skip();
        if (pos < expr.size() && (expr[pos] == '+' || expr[pos] == '-')) {
            sign = expr[pos] == '-' ? -1 : 1;
            ++pos;
        } else if (!first) {
            fail_input("bad_recipe", "expected + or - in '" + expr + "'");
        }
        skip();
        long coef = 1;
        if (pos < expr.size() && expr[pos] == '[') {
            ++pos;
            coef = integer();
            skip();
            if (pos >= expr.size() || expr[pos] != ']')
                fail_input("bad_recipe", "unbalanced [ in '" + expr + "'");
            ++pos;
        } else if (pos < expr.size() && std::isdigit(static_cast<unsigned char>(expr[pos]))) {
            coef = integer();
            skip();
            if (pos >= expr.size() || expr[pos] != '*')
                fail_input("bad_recipe", "expected * after coefficient in '" + expr + "'");
            ++pos;
        }
        skip();
        std::size_t start = pos;
        while (pos < expr.size() && (std::isalnum(static_cast<unsigned char>(expr[pos])) || expr[pos] == '_' ||
                                     expr[pos] == '{' || expr[pos] == '}'))
            ++pos;
        if (start == pos)
            fail_input("bad_recipe", "expected a generator name in '" + expr + "'");
        MWPoint g = generator(expr.substr(start, pos - start));
        acc = add(acc, mul(sign * coef, g));
        first = false;
        skip();
    }
    acc.recipe = expr;
    return acc;
}

ComponentFlags EllipticSurface::flags(const MWPoint& p) const
{
    ComponentFlags out;
    for (const Fiber& f : fibers_) {
        out.fibers.push_back(f.label);
        if (p.is_zero()) {
            out.flags.push_back(FiberFlag::identity);
            continue;
        }
        const RatFunc& x = p.x();
        bool through_node;
        if (f.at_infinity) {
            through_node = x.num().degree() - x.den().degree() <= 1;
        } else {
            TowerElem den = x.den().eval(f.t);
            // A pole of x means the section meets O, on the identity component.
            through_node = !den.is_zero() && x.num().eval(f.t) / den == f.node_x;
        }
        out.flags.push_back(through_node ? FiberFlag::nonidentity : FiberFlag::identity);
    }
    return out;
}

Rat EllipticSurface::height(const LatticeCoord& a, const LatticeCoord& b) const
{
    std::size_t rank = kind_ == ParamCase::M2 ? 3 : 2;
    if (a.free.size() != rank || b.free.size() != rank)
        fail_input("lattice_case_mismatch", "lattice coordinates do not match the surface case");
    Rat h = 0;
    for (std::size_t i = 0; i < rank; ++i)
        h += Rat(a.free[i] * b.free[i], 2);
    h.canonicalize();
    return h;
}

namespace {

Rat shared_contribution(const ComponentFlags& a, const ComponentFlags& b)
{
    Rat s = 0;
    for (std::size_t i = 0; i < a.flags.size(); ++i)
        if (a.flags[i] == FiberFlag::nonidentity && b.flags[i] == FiberFlag::nonidentity)
            s += Rat(1, 2);
    return s;
}

} // namespace

Rat EllipticSurface::zero_intersection(const MWPoint& p) const
{
    if (p.is_zero() || !p.lattice)
        fail_input("missing_lattice", "P.O needs a nonzero point with lattice coordinates");
    ComponentFlags f = flags(p);
    Rat po = (height(*p.lattice, *p.lattice) - 2 + shared_contribution(f, f)) / 2;
    if (po.get_den() != 1 || po < 0)
        fail_internal("lattice_inconsistent", "P.O = " + po.get_str() + " for " + p.recipe);
    return po;
}

Rat EllipticSurface::section_intersection(const MWPoint& p, const MWPoint& q) const
{
    if (p.same_point(q))
        fail_input("same_section", "section intersection needs two distinct sections");
    if (q.is_zero())
        return zero_intersection(p);
    if (p.is_zero())
        return zero_intersection(q);
    if (!p.lattice || !q.lattice)
        fail_input("missing_lattice", "section intersection needs lattice coordinates");
    Rat v = 1 + zero_intersection(p) + zero_intersection(q) - height(*p.lattice, *q.lattice) -
            shared_contribution(flags(p), flags(q));
    v.canonicalize();
    if (v.get_den() != 1 || v < 0)
        fail_internal("lattice_inconsistent",
                      "s_P.s_Q = " + v.get_str() + " for " + p.recipe + " and " + q.recipe);
    return v;
}

int EllipticSurface::section_intersection_geometric(const MWPoint& p, const MWPoint& q) const
{
    if (p.is_zero() || q.is_zero() || !p.x().is_poly() || !p.y().is_poly() || !q.x().is_poly() || !q.y().is_poly())
        fail_input("unsupported_section", "geometric count needs integral sections with polynomial coordinates");
    Poly dx = p.x().as_poly() - q.x().as_poly();
    Poly dy = p.y().as_poly() - q.y().as_poly();
    if (dx.is_zero() && dy.is_zero())
        fail_input("same_section", "section intersection needs two distinct sections");
    int finite = gcd(dx, dy).degree();
    const int none = 1 << 20;
    int ox = dx.is_zero() ? none : dx.reversed(2).low_order();
    int oy = dy.is_zero() ? none : dy.reversed(3).low_order();
    return finite + std::min(ox, oy);
}

} // namespace clarr
