#include "clarr/poly.hpp"

#include "clarr/error.hpp"

#include <algorithm>
#include <sstream>

namespace clarr {

namespace {

// Render c*var^k; empty string when c is zero.
std::string render_term(const TowerElem& c, const std::string& mono, bool first)
{
    std::string s = c.str();
    bool negative = false;
    bool compound = s.find(" + ") != std::string::npos || s.find(" - ") != std::string::npos;
    if (!compound && s[0] == '-') {
        negative = true;
        s = s.substr(1);
    }
    std::string body;
    if (mono.empty())
        body = compound ? "(" + s + ")" : s;
    else if (!compound && s == "1")
        body = mono;
    else
        body = (compound ? "(" + s + ")" : s) + "*" + mono;
    if (first)
        return (negative ? "-" : "") + body;
    return (negative ? " - " : " + ") + body;
}

std::string power(const std::string& var, int k)
{
    if (k == 0)
        return "";
    if (k == 1)
        return var;
    return var + "^" + std::to_string(k);
}

} // namespace

Poly::Poly(TowerElem c)
{
    if (!c.is_zero())
        c_.push_back(std::move(c));
}

Poly::Poly(std::vector<TowerElem> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::monomial(TowerElem c, int deg)
{
    if (c.is_zero())
        return Poly();
    std::vector<TowerElem> v(deg + 1);
    v[deg] = std::move(c);
    return Poly(std::move(v));
}

Poly Poly::linear_root(const TowerElem& root) { return Poly({-root, TowerElem(1)}); }

void Poly::trim()
{
    while (!c_.empty() && c_.back().is_zero())
        c_.pop_back();
}

TowerElem Poly::coeff(int i) const
{
    if (i < 0 || i >= static_cast<int>(c_.size()))
        return TowerElem();
    return c_[i];
}

TowerElem Poly::lc() const { return c_.empty() ? TowerElem() : c_.back(); }

Poly Poly::operator-() const
{
    Poly r = *this;
    for (auto& c : r.c_)
        c = -c;
    return r;
}

Poly& Poly::operator+=(const Poly& o)
{
    if (o.c_.size() > c_.size())
        c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i)
        c_[i] += o.c_[i];
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& o)
{
    if (o.c_.size() > c_.size())
        c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i)
        c_[i] -= o.c_[i];
    trim();
    return *this;
}

Poly& Poly::operator*=(const Poly& o)
{
    if (c_.empty() || o.c_.empty()) {
        c_.clear();
        return *this;
    }
    std::vector<TowerElem> r(c_.size() + o.c_.size() - 1);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero())
            continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j)
            if (!o.c_[j].is_zero())
                r[i + j] += c_[i] * o.c_[j];
    }
    c_ = std::move(r);
    trim();
    return *this;
}

bool operator==(const Poly& a, const Poly& b)
{
    if (a.c_.size() != b.c_.size())
        return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        if (a.c_[i] != b.c_[i])
            return false;
    return true;
}

Poly Poly::scaled(const TowerElem& s) const
{
    Poly r = *this;
    for (auto& c : r.c_)
        c *= s;
    r.trim();
    return r;
}

Poly Poly::monic() const
{
    if (c_.empty())
        return *this;
    TowerElem inv = lc().inverse();
    Poly r = scaled(inv);
    r.c_.back() = TowerElem(1);
    return r;
}

Poly Poly::derivative() const
{
    std::vector<TowerElem> r;
    for (std::size_t i = 1; i < c_.size(); ++i)
        r.push_back(c_[i] * TowerElem(static_cast<long>(i)));
    return Poly(std::move(r));
}

Poly Poly::pow(int n) const
{
    Poly r(TowerElem(1)), b = *this;
    while (n > 0) {
        if (n & 1)
            r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

TowerElem Poly::eval(const TowerElem& v) const
{
    TowerElem acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        acc = acc * v + *it;
    return acc;
}

Poly Poly::compose(const Poly& q) const
{
    Poly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        acc = acc * q + Poly(*it);
    return acc;
}

Poly Poly::reversed(int d) const
{
    if (degree() > d)
        fail_internal("poly_reverse", "reversal degree below polynomial degree");
    std::vector<TowerElem> r(d + 1);
    for (std::size_t i = 0; i < c_.size(); ++i)
        r[d - i] = c_[i];
    return Poly(std::move(r));
}

int Poly::low_order() const
{
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (!c_[i].is_zero())
            return static_cast<int>(i);
    return -1;
}

std::string Poly::str(const std::string& var) const
{
    if (c_.empty())
        return "0";
    std::string out;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        if (c_[k].is_zero())
            continue;
        out += render_term(c_[k], power(var, k), first);
        first = false;
    }
    return out;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b)
{
    if (b.is_zero())
        fail_input("division_by_zero", "polynomial division by zero");
    std::vector<TowerElem> rem = a.coeffs();
    int db = b.degree();
    if (a.degree() < db)
        return {Poly(), a};
    std::vector<TowerElem> quo(a.degree() - db + 1);
    TowerElem inv = b.lc().inverse();
    for (int k = a.degree(); k >= db; --k) {
        if (rem[k].is_zero())
            continue;
        TowerElem q = rem[k] * inv;
        quo[k - db] = q;
        for (int j = 0; j <= db; ++j)
            rem[k - db + j] -= q * b.coeffs()[j];
        rem[k] = TowerElem();
    }
    rem.resize(db);
    return {Poly(std::move(quo)), Poly(std::move(rem))};
}

Poly exact_div(const Poly& a, const Poly& b)
{
    auto [q, r] = divmod(a, b);
    if (!r.is_zero())
        fail_internal("inexact_division", "polynomial division left a remainder");
    return q;
}

Poly gcd(const Poly& a, const Poly& b)
{
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = divmod(x, y).second;
        x = std::move(y);
        y = r.monic();
    }
    return x.monic();
}

ExtGcd ext_gcd(const Poly& a, const Poly& b)
{
    Poly r0 = a, r1 = b;
    Poly s0(TowerElem(1)), s1, t0, t1(TowerElem(1));
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        Poly s2 = s0 - q * s1, t2 = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero())
        return {r0, s0, t0};
    TowerElem inv = r0.lc().inverse();
    return {r0.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
}

std::vector<SquarefreeFactor> squarefree_decomposition(const Poly& p)
{
    if (p.is_zero())
        fail_input("zero_polynomial", "squarefree decomposition of the zero polynomial");
    std::vector<SquarefreeFactor> out;
    Poly f = p.monic();
    if (f.degree() == 0)
        return out;
    Poly df = f.derivative();
    Poly a = gcd(f, df);
    Poly b = exact_div(f, a);
    Poly c = exact_div(df, a);
    Poly d = c - b.derivative();
    for (int i = 1; b.degree() > 0; ++i) {
        Poly g = gcd(b, d);
        if (g.degree() > 0)
            out.push_back({g, i});
        b = exact_div(b, g);
        c = exact_div(d, g);
        d = c - b.derivative();
    }
    return out;
}

std::optional<SquareDecomposition> square_up_to_constant(const Poly& p)
{
    if (p.is_zero())
        fail_input("zero_polynomial", "square test of the zero polynomial");
    Poly g(TowerElem(1));
    for (const auto& f : squarefree_decomposition(p)) {
        if (f.multiplicity % 2)
            return std::nullopt;
        g *= f.factor.pow(f.multiplicity / 2);
    }
    return SquareDecomposition{p.lc(), g};
}

std::vector<Poly> coprime_basis(const std::vector<Poly>& inputs)
{
    std::vector<Poly> basis;
    for (const Poly& in : inputs) {
        if (in.degree() <= 0)
            continue;
        Poly q = in.monic();
        std::vector<Poly> next;
        for (Poly& b : basis) {
            Poly g = gcd(b, q);
            if (g.degree() <= 0) {
                next.push_back(std::move(b));
                continue;
            }
            next.push_back(g);
            Poly rest = exact_div(b, g);
            if (rest.degree() > 0)
                next.push_back(rest.monic());
            q = exact_div(q, g).monic();
        }
        if (q.degree() > 0)
            next.push_back(q);
        basis = std::move(next);
    }
    return basis;
}

int multiplicity(const Poly& p, const Poly& f)
{
    if (p.is_zero())
        fail_internal("multiplicity", "multiplicity in the zero polynomial");
    int m = 0;
    Poly q = p;
    for (;;) {
        auto [quo, rem] = divmod(q, f);
        if (!rem.is_zero())
            return m;
        q = std::move(quo);
        ++m;
    }
}

RatFunc::RatFunc(Poly num, Poly den)
{
    if (den.is_zero())
        fail_input("division_by_zero", "rational function with zero denominator");
    Poly g = gcd(num, den);
    if (g.degree() > 0) {
        num = exact_div(num, g);
        den = exact_div(den, g);
    }
    TowerElem inv = den.lc().inverse();
    num_ = num.scaled(inv);
    den_ = den.monic();
}

const Poly& RatFunc::as_poly() const
{
    if (!is_poly())
        fail_input("not_polynomial", "rational function is not a polynomial: " + str());
    return num_;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b)
{
    if (a.den_ == b.den_)
        return RatFunc(a.num_ + b.num_, a.den_);
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b)
{
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b)
{
    if (b.is_zero())
        fail_input("division_by_zero", "rational function division by zero");
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
}

std::string RatFunc::str(const std::string& var) const
{
    if (is_poly())
        return num_.str(var);
    return "(" + num_.str(var) + ")/(" + den_.str(var) + ")";
}

BivarPoly::BivarPoly(TowerElem c) { put({0, 0}, c); }

BivarPoly BivarPoly::term(TowerElem c, int dt, int dx)
{
    BivarPoly b;
    b.put({dt, dx}, c);
    return b;
}

BivarPoly BivarPoly::from_poly(const Poly& p, bool in_x)
{
    BivarPoly b;
    for (int i = 0; i <= p.degree(); ++i)
        b.put(in_x ? Key{0, i} : Key{i, 0}, p.coeffs()[i]);
    return b;
}

void BivarPoly::put(const Key& k, const TowerElem& v)
{
    if (v.is_zero())
        terms_.erase(k);
    else
        terms_[k] = v;
}

int BivarPoly::degree_t() const
{
    int d = -1;
    for (const auto& [k, v] : terms_)
        d = std::max(d, k.first);
    return d;
}

int BivarPoly::degree_x() const
{
    int d = -1;
    for (const auto& [k, v] : terms_)
        d = std::max(d, k.second);
    return d;
}

int BivarPoly::total_degree() const
{
    int d = -1;
    for (const auto& [k, v] : terms_)
        d = std::max(d, k.first + k.second);
    return d;
}

TowerElem BivarPoly::coeff(int dt, int dx) const
{
    auto it = terms_.find({dt, dx});
    return it == terms_.end() ? TowerElem() : it->second;
}

BivarPoly BivarPoly::operator-() const
{
    BivarPoly r = *this;
    for (auto& [k, v] : r.terms_)
        v = -v;
    return r;
}

BivarPoly& BivarPoly::operator+=(const BivarPoly& o)
{
    for (const auto& [k, v] : o.terms_)
        put(k, coeff(k.first, k.second) + v);
    return *this;
}

BivarPoly& BivarPoly::operator-=(const BivarPoly& o)
{
    for (const auto& [k, v] : o.terms_)
        put(k, coeff(k.first, k.second) - v);
    return *this;
}

BivarPoly& BivarPoly::operator*=(const BivarPoly& o)
{
    std::map<Key, TowerElem> acc;
    for (const auto& [ka, va] : terms_)
        for (const auto& [kb, vb] : o.terms_) {
            Key k{ka.first + kb.first, ka.second + kb.second};
            acc[k] += va * vb;
        }
    terms_.clear();
    for (const auto& [k, v] : acc)
        put(k, v);
    return *this;
}

bool operator==(const BivarPoly& a, const BivarPoly& b)
{
    if (a.terms_.size() != b.terms_.size())
        return false;
    auto ib = b.terms_.begin();
    for (const auto& [k, v] : a.terms_) {
        if (k != ib->first || v != ib->second)
            return false;
        ++ib;
    }
    return true;
}

BivarPoly BivarPoly::scaled(const TowerElem& s) const
{
    BivarPoly r;
    for (const auto& [k, v] : terms_)
        r.put(k, v * s);
    return r;
}

TowerElem BivarPoly::eval(const TowerElem& t, const TowerElem& x) const
{
    TowerElem acc;
    for (const auto& [k, v] : terms_) {
        TowerElem m = v;
        for (int i = 0; i < k.first; ++i)
            m *= t;
        for (int i = 0; i < k.second; ++i)
            m *= x;
        acc += m;
    }
    return acc;
}

std::vector<Poly> BivarPoly::coefficients_in(bool eliminate_x) const
{
    int d = eliminate_x ? degree_x() : degree_t();
    std::vector<std::vector<TowerElem>> raw(std::max(d + 1, 0));
    for (const auto& [k, v] : terms_) {
        int e = eliminate_x ? k.second : k.first;
        int keep = eliminate_x ? k.first : k.second;
        auto& row = raw[e];
        if (static_cast<int>(row.size()) <= keep)
            row.resize(keep + 1);
        row[keep] = v;
    }
    std::vector<Poly> out;
    for (auto& r : raw)
        out.emplace_back(std::move(r));
    return out;
}

Poly BivarPoly::substitute_x(const Poly& q) const
{
    auto cs = coefficients_in(true);
    Poly acc;
    for (auto it = cs.rbegin(); it != cs.rend(); ++it)
        acc = acc * q + *it;
    return acc;
}

Poly BivarPoly::at_t(const TowerElem& value) const
{
    auto cs = coefficients_in(false);
    Poly acc;
    for (auto it = cs.rbegin(); it != cs.rend(); ++it)
        acc = acc.scaled(value) + *it;
    return acc;
}

std::string BivarPoly::str() const
{
    if (terms_.empty())
        return "0";
    std::vector<std::pair<Key, TowerElem>> items(terms_.begin(), terms_.end());
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        int da = a.first.first + a.first.second, db = b.first.first + b.first.second;
        if (da != db)
            return da > db;
        return a.first.second > b.first.second;
    });
    std::string out;
    bool first = true;
    for (const auto& [k, v] : items) {
        std::string mono = power("x", k.second);
        std::string tp = power("t", k.first);
        if (!mono.empty() && !tp.empty())
            mono = tp + "*" + mono;
        else if (mono.empty())
            mono = tp;
        out += render_term(v, mono, first);
        first = false;
    }
    return out;
}

Poly determinant(std::vector<std::vector<Poly>> m)
{
    std::size_t n = m.size();
    if (n == 0)
        return Poly(TowerElem(1));
    Poly prev(TowerElem(1));
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t p = k + 1;
            while (p < n && m[p][k].is_zero())
                ++p;
            if (p == n)
                return Poly();
            std::swap(m[k], m[p]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = exact_div(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
            m[i][k] = Poly();
        }
        prev = m[k][k];
    }
    return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

Poly resultant(const BivarPoly& f, const BivarPoly& g, bool eliminate_x)
{
    if (f.is_zero() || g.is_zero())
        fail_input("zero_polynomial", "resultant of a zero polynomial");
    auto a = f.coefficients_in(eliminate_x);
    auto b = g.coefficients_in(eliminate_x);
    int m = static_cast<int>(a.size()) - 1, n = static_cast<int>(b.size()) - 1;
    if (m == 0 && n == 0)
        return Poly(TowerElem(1));
    if (m == 0)
        return a[0].pow(n);
    if (n == 0)
        return b[0].pow(m);
    int size = m + n;
    std::vector<std::vector<Poly>> s(size, std::vector<Poly>(size));
    for (int r = 0; r < n; ++r)
        for (int j = 0; j <= m; ++j)
            s[r][r + j] = a[m - j];
    for (int r = 0; r < m; ++r)
        for (int j = 0; j <= n; ++j)
            s[n + r][r + j] = b[n - j];
    return determinant(std::move(s));
}

} // namespace clarr
