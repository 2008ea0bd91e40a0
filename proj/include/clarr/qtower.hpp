#pragma once

#include <complex>
#include <gmpxx.h>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clarr {

using Rat = mpq_class;
using Int = mpz_class;

/// Multiquadratic field Q(sqrt(d_1), ..., sqrt(d_k)).
///
/// Basis element e_S for a subset S (bitmask) is the product of sqrt(d_j) over
/// j in S, with sqrt(d) = i*sqrt(|d|) for negative d. So e_S * e_T equals
/// weight(S & T) * e_{S ^ T}.
class TowerDesc {
public:
    static constexpr int max_radicands = 6;

    TowerDesc() : weights_{Int(1)}, atoms_{{}} {}
    explicit TowerDesc(std::vector<long> radicands);

    const std::vector<long>& radicands() const { return rads_; }
    int size() const { return static_cast<int>(rads_.size()); }
    std::size_t dim() const { return std::size_t(1) << rads_.size(); }

    /// Product of the radicands selected by mask.
    const Int& weight(unsigned mask) const { return weights_[mask]; }

    /// Mask S with prod_{j in S} d_j equal to d modulo rational squares.
    std::optional<unsigned> express(long d) const;

    bool same_as(const TowerDesc& o) const { return rads_ == o.rads_; }

    /// Basis monomial in literal syntax, "" for the unit.
    std::string basis_name(unsigned mask) const;

private:
    std::vector<long> rads_;
    std::vector<Int> weights_;
    std::vector<std::vector<long>> atoms_;
};

using Tower = std::shared_ptr<const TowerDesc>;

const Tower& rational_tower();

/// Squarefree kernel of a nonzero integer, sign kept.
long squarefree_part(const Int& n);
/// Sorted signed prime atoms (-1 first) of a squarefree integer.
std::vector<long> radicand_atoms(long d);

Tower adjoin_sqrt(const Tower& tower, long d);
Tower join(const Tower& a, const Tower& b);
bool is_subtower(const Tower& sub, const Tower& super);

class TowerElem {
public:
    TowerElem();
    TowerElem(long v);
    TowerElem(const Rat& v);
    TowerElem(Tower tower, std::vector<Rat> coords);

    /// sqrt(d) for squarefree d, as a basis element of the minimal tower.
    static TowerElem sqrt_of(long d);
    static TowerElem imag_unit() { return sqrt_of(-1); }

    const Tower& tower() const { return tower_; }
    const std::vector<Rat>& coords() const { return coords_; }

    bool is_zero() const;
    bool is_rational() const;
    /// Rational value; throws unless is_rational().
    Rat rational() const;

    TowerElem operator-() const;
    TowerElem& operator+=(const TowerElem& o);
    TowerElem& operator-=(const TowerElem& o);
    TowerElem& operator*=(const TowerElem& o);
    TowerElem& operator/=(const TowerElem& o);
    TowerElem inverse() const;

    friend TowerElem operator+(TowerElem a, const TowerElem& b) { return a += b; }
    friend TowerElem operator-(TowerElem a, const TowerElem& b) { return a -= b; }
    friend TowerElem operator*(TowerElem a, const TowerElem& b) { return a *= b; }
    friend TowerElem operator/(TowerElem a, const TowerElem& b) { return a /= b; }
    friend bool operator==(const TowerElem& a, const TowerElem& b);
    friend bool operator!=(const TowerElem& a, const TowerElem& b) { return !(a == b); }

    std::complex<double> to_complex() const;

    /// Literal syntax, printed over the prime-atom tower when it fits.
    std::string str() const;
    /// Literal syntax over the element's own tower.
    std::string raw_str() const;

private:
    Tower tower_;
    std::vector<Rat> coords_;
};

/// Re-express a in target; throws if a's tower is not a subtower.
TowerElem embed(const TowerElem& a, const Tower& target);

/// Bring both operands into one tower.
void unify(TowerElem& a, TowerElem& b);

/// Square root inside a's own tower; the root whose first nonzero coordinate
/// is positive.
std::optional<TowerElem> sqrt_in_tower(const TowerElem& a);

/// Square root, extending the tower by one radicand when a is a rational
/// times a square of the tower.
std::optional<TowerElem> try_sqrt(const TowerElem& a);

/// Parse the literal grammar: integers, a/b, sqrt(d), i, + - * / ( ).
TowerElem parse_elem(std::string_view text);

} // namespace clarr
