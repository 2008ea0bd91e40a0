#pragma once

#include "clarr/qtower.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace clarr {

/// Dense univariate polynomial over a tower, lowest degree first.
class Poly {
public:
    Poly() = default;
    Poly(TowerElem c);
    explicit Poly(std::vector<TowerElem> coeffs);

    static Poly monomial(TowerElem c, int deg);
    static Poly var() { return monomial(TowerElem(1), 1); }
    /// (var - root)
    static Poly linear_root(const TowerElem& root);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    const std::vector<TowerElem>& coeffs() const { return c_; }
    TowerElem coeff(int i) const;
    TowerElem lc() const;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
    friend Poly operator*(const TowerElem& s, const Poly& p) { return p.scaled(s); }
    friend Poly operator*(const Poly& p, const TowerElem& s) { return p.scaled(s); }
    friend Poly operator/(const Poly& p, const TowerElem& s) { return p.scaled(s.inverse()); }
    friend Poly operator+(Poly a, const TowerElem& c) { return a += Poly(c); }
    friend Poly operator-(Poly a, const TowerElem& c) { return a -= Poly(c); }
    friend Poly operator+(const TowerElem& c, Poly a) { return a += Poly(c); }
    friend Poly operator-(const TowerElem& c, const Poly& a) { return Poly(c) - a; }
    friend bool operator==(const Poly& a, const Poly& b);
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly scaled(const TowerElem& s) const;
    Poly monic() const;
    Poly derivative() const;
    Poly pow(int n) const;
    TowerElem eval(const TowerElem& v) const;
    /// p(q(var))
    Poly compose(const Poly& q) const;
    /// s^d p(1/s) for d >= degree.
    Poly reversed(int d) const;
    /// Multiplicity of the root 0.
    int low_order() const;

    std::string str(const std::string& var = "t") const;

private:
    void trim();
    std::vector<TowerElem> c_;
};

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
/// Exact quotient; throws if the division leaves a remainder.
Poly exact_div(const Poly& a, const Poly& b);
Poly gcd(const Poly& a, const Poly& b);

struct ExtGcd {
    Poly g, s, t; // s*a + t*b = g
};
ExtGcd ext_gcd(const Poly& a, const Poly& b);

/// p = c * prod f_i^{m_i}, f_i monic squarefree pairwise coprime.
struct SquarefreeFactor {
    Poly factor;
    int multiplicity;
};
std::vector<SquarefreeFactor> squarefree_decomposition(const Poly& p);

/// p = c * g^2 with g monic, when every root has even multiplicity.
struct SquareDecomposition {
    TowerElem c;
    Poly g;
};
std::optional<SquareDecomposition> square_up_to_constant(const Poly& p);

/// Pairwise coprime monic polynomials whose products give every input.
std::vector<Poly> coprime_basis(const std::vector<Poly>& inputs);

/// Multiplicity of the (squarefree) factor f in p.
int multiplicity(const Poly& p, const Poly& f);

/// Reduced fraction with monic denominator.
class RatFunc {
public:
    RatFunc() : num_(), den_(TowerElem(1)) {}
    RatFunc(Poly p) : num_(std::move(p)), den_(TowerElem(1)) {}
    RatFunc(Poly num, Poly den);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_poly() const { return den_.degree() == 0; }
    /// Polynomial value; throws unless is_poly().
    const Poly& as_poly() const;

    RatFunc operator-() const { return RatFunc(-num_, den_, true); }
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
    friend bool operator==(const RatFunc& a, const RatFunc& b)
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    std::string str(const std::string& var = "t") const;

private:
    RatFunc(Poly num, Poly den, bool) : num_(std::move(num)), den_(std::move(den)) {}
    Poly num_, den_;
};

/// Sparse polynomial in (t, x): key (deg_t, deg_x).
class BivarPoly {
public:
    using Key = std::pair<int, int>;

    BivarPoly() = default;
    BivarPoly(TowerElem c);
    static BivarPoly t() { return term(TowerElem(1), 1, 0); }
    static BivarPoly x() { return term(TowerElem(1), 0, 1); }
    static BivarPoly term(TowerElem c, int dt, int dx);
    /// Lift a univariate polynomial in t (or in x when in_x).
    static BivarPoly from_poly(const Poly& p, bool in_x = false);

    const std::map<Key, TowerElem>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree_t() const;
    int degree_x() const;
    int total_degree() const;
    TowerElem coeff(int dt, int dx) const;

    BivarPoly operator-() const;
    BivarPoly& operator+=(const BivarPoly& o);
    BivarPoly& operator-=(const BivarPoly& o);
    BivarPoly& operator*=(const BivarPoly& o);
    friend BivarPoly operator+(BivarPoly a, const BivarPoly& b) { return a += b; }
    friend BivarPoly operator-(BivarPoly a, const BivarPoly& b) { return a -= b; }
    friend BivarPoly operator*(BivarPoly a, const BivarPoly& b) { return a *= b; }
    friend bool operator==(const BivarPoly& a, const BivarPoly& b);
    friend bool operator!=(const BivarPoly& a, const BivarPoly& b) { return !(a == b); }

    BivarPoly scaled(const TowerElem& s) const;
    TowerElem eval(const TowerElem& t, const TowerElem& x) const;
    /// Coefficients as polynomials in the kept variable, indexed by the
    /// power of the eliminated one.
    std::vector<Poly> coefficients_in(bool eliminate_x) const;
    /// F(t, q(t)).
    Poly substitute_x(const Poly& q) const;
    /// F(value, x) as a polynomial in x.
    Poly at_t(const TowerElem& value) const;

    std::string str() const;

private:
    void put(const Key& k, const TowerElem& v);
    std::map<Key, TowerElem> terms_;
};

/// Sylvester resultant eliminating x (or t); the result is a polynomial in
/// the other variable.
Poly resultant(const BivarPoly& f, const BivarPoly& g, bool eliminate_x = true);

/// Determinant of a matrix with polynomial entries (fraction-free Bareiss).
Poly determinant(std::vector<std::vector<Poly>> m);

} // namespace clarr
