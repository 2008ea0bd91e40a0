#include "clarr/qtower.hpp"

#include "clarr/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace clarr {

namespace {

using Coords = std::vector<Rat>;

std::vector<long> atom_xor(const std::vector<long>& a, const std::vector<long>& b)
{
    std::vector<long> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool all_zero(const Coords& c, std::size_t from, std::size_t to)
{
    for (std::size_t i = from; i < to; ++i)
        if (sgn(c[i]) != 0)
            return false;
    return true;
}

bool rational_sqrt(const Rat& q, Rat& out)
{
    if (sgn(q) < 0)
        return false;
    if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t()))
        return false;
    Int n, d;
    mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
    out = Rat(n, d);
    out.canonicalize();
    return true;
}

// Field kernels on the leading 2^k coordinates of a tower. Coordinates with
// mask < 2^(k-1) form u, the rest v, so a = u + v*sqrt(d_{k-1}).
struct Kernel {
    const TowerDesc& t;

    Coords mul(int k, const Coords& a, const Coords& b) const
    {
        std::size_t n = std::size_t(1) << k;
        Coords r(n);
        for (unsigned i = 0; i < n; ++i) {
            if (sgn(a[i]) == 0)
                continue;
            for (unsigned j = 0; j < n; ++j) {
                if (sgn(b[j]) == 0)
                    continue;
                r[i ^ j] += a[i] * b[j] * t.weight(i & j);
            }
        }
        return r;
    }

    Coords inv(int k, const Coords& a) const
    {
        if (k == 0) {
            if (sgn(a[0]) == 0)
                fail_input("division_by_zero", "division by zero in tower arithmetic");
            return {Rat(1) / a[0]};
        }
        std::size_t h = std::size_t(1) << (k - 1);
        Coords u(a.begin(), a.begin() + h), v(a.begin() + h, a.begin() + 2 * h);
        if (all_zero(v, 0, h)) {
            Coords r = inv(k - 1, u);
            r.resize(2 * h);
            return r;
        }
        const Int& d = t.weight(h);
        Coords uu = mul(k - 1, u, u), vv = mul(k - 1, v, v);
        Coords norm(h);
        for (std::size_t i = 0; i < h; ++i)
            norm[i] = uu[i] - vv[i] * d;
        Coords ni = inv(k - 1, norm);
        Coords ru = mul(k - 1, u, ni), rv = mul(k - 1, v, ni);
        Coords r(2 * h);
        for (std::size_t i = 0; i < h; ++i) {
            r[i] = ru[i];
            r[i + h] = -rv[i];
        }
        return r;
    }

    std::optional<Coords> sqrt(int k, const Coords& a) const
    {
        if (k == 0) {
            Rat r;
            if (rational_sqrt(a[0], r))
                return Coords{r};
            return std::nullopt;
        }
        std::size_t h = std::size_t(1) << (k - 1);
        Coords u(a.begin(), a.begin() + h), v(a.begin() + h, a.begin() + 2 * h);
        const Int& d = t.weight(h);
        Coords out(2 * h);
        if (all_zero(v, 0, h)) {
            if (auto r = sqrt(k - 1, u)) {
                std::copy(r->begin(), r->end(), out.begin());
                return out;
            }
            Coords ud(h);
            for (std::size_t i = 0; i < h; ++i)
                ud[i] = u[i] / d;
            if (auto r = sqrt(k - 1, ud)) {
                std::copy(r->begin(), r->end(), out.begin() + h);
                return out;
            }
            return std::nullopt;
        }
        Coords uu = mul(k - 1, u, u), vv = mul(k - 1, v, v);
        Coords norm(h);
        for (std::size_t i = 0; i < h; ++i)
            norm[i] = uu[i] - vv[i] * d;
        auto n = sqrt(k - 1, norm);
        if (!n)
            return std::nullopt;
        for (int sign : {1, -1}) {
            Coords x2(h);
            for (std::size_t i = 0; i < h; ++i)
                x2[i] = (u[i] + sign * (*n)[i]) / 2;
            auto x = sqrt(k - 1, x2);
            if (!x || all_zero(*x, 0, h))
                continue;
            Coords twox(h);
            for (std::size_t i = 0; i < h; ++i)
                twox[i] = 2 * (*x)[i];
            Coords y = mul(k - 1, v, inv(k - 1, twox));
            std::copy(x->begin(), x->end(), out.begin());
            std::copy(y.begin(), y.end(), out.begin() + h);
            return out;
        }
        return std::nullopt;
    }
};

void normalize_sign(Coords& c)
{
    for (const auto& v : c) {
        if (sgn(v) == 0)
            continue;
        if (sgn(v) < 0)
            for (auto& w : c)
                w = -w;
        return;
    }
}

std::vector<long> prime_factors(Int n, long limit)
{
    std::vector<long> out;
    n = abs(n);
    for (long p = 2; p <= limit && n > 1; ++p) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) {
            out.push_back(p);
            while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p)))
                n /= p;
        }
    }
    if (n > 1 && n.fits_slong_p())
        out.push_back(n.get_si());
    return out;
}

} // namespace

long squarefree_part(const Int& n)
{
    if (n == 0)
        fail_input("degenerate_radicand", "square root of zero requested");
    Int m = abs(n);
    Int out = 1;
    for (unsigned long p = 2; m > 1; ++p) {
        if (Int(p) * p > m) {
            out *= m;
            break;
        }
        int e = 0;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            m /= p;
            ++e;
        }
        if (e % 2)
            out *= p;
    }
    if (!out.fits_slong_p())
        fail_input("degenerate_radicand", "radicand too large: " + n.get_str());
    return sgn(n) < 0 ? -out.get_si() : out.get_si();
}

std::vector<long> radicand_atoms(long d)
{
    std::vector<long> out;
    if (d < 0) {
        out.push_back(-1);
        d = -d;
    }
    for (long p = 2; p * p <= d; ++p) {
        if (d % p == 0) {
            out.push_back(p);
            d /= p;
        }
    }
    if (d > 1)
        out.push_back(d);
    return out;
}

TowerDesc::TowerDesc(std::vector<long> radicands) : rads_(std::move(radicands))
{
    if (size() > max_radicands)
        fail_input("tower_overflow", "tower dimension exceeds 2^" + std::to_string(max_radicands));
    std::size_t n = dim();
    weights_.assign(n, Int(1));
    atoms_.assign(n, {});
    for (unsigned mask = 1; mask < n; ++mask) {
        int low = __builtin_ctz(mask);
        unsigned rest = mask & (mask - 1);
        weights_[mask] = weights_[rest] * rads_[low];
        atoms_[mask] = atom_xor(atoms_[rest], radicand_atoms(rads_[low]));
        if (atoms_[mask].empty())
            fail_input("degenerate_radicand", "radicands are dependent modulo squares");
    }
}

std::optional<unsigned> TowerDesc::express(long d) const
{
    auto a = radicand_atoms(d);
    for (unsigned mask = 0; mask < dim(); ++mask)
        if (atoms_[mask] == a)
            return mask;
    return std::nullopt;
}

std::string TowerDesc::basis_name(unsigned mask) const
{
    std::string out;
    for (int j = 0; j < size(); ++j) {
        if (!(mask & (1u << j)))
            continue;
        if (!out.empty())
            out += "*";
        out += rads_[j] == -1 ? std::string("i") : "sqrt(" + std::to_string(rads_[j]) + ")";
    }
    return out;
}

const Tower& rational_tower()
{
    static const Tower q = std::make_shared<const TowerDesc>();
    return q;
}

Tower adjoin_sqrt(const Tower& tower, long d)
{
    if (d == 0)
        fail_input("degenerate_radicand", "cannot adjoin sqrt(0)");
    long s = squarefree_part(d);
    if (s == 1)
        fail_input("degenerate_radicand", "sqrt(" + std::to_string(d) + ") is rational");
    if (tower->express(s))
        return tower;
    auto r = tower->radicands();
    r.push_back(s);
    return std::make_shared<const TowerDesc>(std::move(r));
}

Tower join(const Tower& a, const Tower& b)
{
    Tower out = a;
    for (long d : b->radicands())
        out = adjoin_sqrt(out, d);
    return out;
}

bool is_subtower(const Tower& sub, const Tower& super)
{
    for (long d : sub->radicands())
        if (!super->express(d))
            return false;
    return true;
}

TowerElem::TowerElem() : tower_(rational_tower()), coords_{Rat(0)} {}
TowerElem::TowerElem(long v) : tower_(rational_tower()), coords_{Rat(v)} {}
TowerElem::TowerElem(const Rat& v) : tower_(rational_tower()), coords_{v} { coords_[0].canonicalize(); }

TowerElem::TowerElem(Tower tower, std::vector<Rat> coords) : tower_(std::move(tower)), coords_(std::move(coords))
{
    if (coords_.size() != tower_->dim())
        fail_internal("tower_shape", "coordinate count does not match tower dimension");
    for (auto& c : coords_)
        c.canonicalize();
}

TowerElem TowerElem::sqrt_of(long d)
{
    long s = squarefree_part(d);
    Rat scale = Rat(Int(d / s));
    Rat root;
    rational_sqrt(scale, root);
    if (s == 1)
        return TowerElem(root);
    Tower t = adjoin_sqrt(rational_tower(), s);
    return TowerElem(t, {Rat(0), root});
}

bool TowerElem::is_zero() const { return all_zero(coords_, 0, coords_.size()); }
bool TowerElem::is_rational() const { return all_zero(coords_, 1, coords_.size()); }

Rat TowerElem::rational() const
{
    if (!is_rational())
        fail_input("not_rational", "expected a rational value, got " + str());
    return coords_[0];
}

TowerElem TowerElem::operator-() const
{
    TowerElem r = *this;
    for (auto& c : r.coords_)
        c = -c;
    return r;
}

void unify(TowerElem& a, TowerElem& b)
{
    if (a.tower() == b.tower() || a.tower()->same_as(*b.tower()))
        return;
    if (is_subtower(b.tower(), a.tower())) {
        b = embed(b, a.tower());
        return;
    }
    if (is_subtower(a.tower(), b.tower())) {
        a = embed(a, b.tower());
        return;
    }
    Tower j = join(a.tower(), b.tower());
    a = embed(a, j);
    b = embed(b, j);
}

TowerElem& TowerElem::operator+=(const TowerElem& o)
{
    TowerElem b = o;
    unify(*this, b);
    for (std::size_t i = 0; i < coords_.size(); ++i)
        coords_[i] += b.coords_[i];
    return *this;
}

TowerElem& TowerElem::operator-=(const TowerElem& o)
{
    TowerElem b = o;
    unify(*this, b);
    for (std::size_t i = 0; i < coords_.size(); ++i)
        coords_[i] -= b.coords_[i];
    return *this;
}

TowerElem& TowerElem::operator*=(const TowerElem& o)
{
    if (o.is_rational()) {
        const Rat& s = o.coords_[0];
        for (auto& c : coords_)
            c *= s;
        return *this;
    }
    TowerElem b = o;
    unify(*this, b);
    Kernel k{*tower_};
    coords_ = k.mul(tower_->size(), coords_, b.coords_);
    return *this;
}

TowerElem TowerElem::inverse() const
{
    Kernel k{*tower_};
    return TowerElem(tower_, k.inv(tower_->size(), coords_));
}

TowerElem& TowerElem::operator/=(const TowerElem& o)
{
    if (o.is_zero())
        fail_input("division_by_zero", "division by zero in tower arithmetic");
    if (o.is_rational()) {
        const Rat& s = o.coords_[0];
        for (auto& c : coords_)
            c /= s;
        return *this;
    }
    return *this *= o.inverse();
}

bool operator==(const TowerElem& a, const TowerElem& b)
{
    if (a.tower_ == b.tower_ || a.tower_->same_as(*b.tower_))
        return a.coords_ == b.coords_;
    TowerElem x = a, y = b;
    unify(x, y);
    return x.coords_ == y.coords_;
}

TowerElem embed(const TowerElem& a, const Tower& target)
{
    const TowerDesc& src = *a.tower();
    if (a.tower() == target || src.same_as(*target))
        return TowerElem(target, a.coords());
    if (src.size() == 0) {
        std::vector<Rat> c(target->dim());
        c[0] = a.coords()[0];
        return TowerElem(target, std::move(c));
    }
    // Each source radicand sqrt(a_j) becomes c_j * e_{T_j} in the target.
    int k = src.size();
    std::vector<unsigned> tmask(k);
    std::vector<Rat> tcoef(k);
    for (int j = 0; j < k; ++j) {
        long aj = src.radicands()[j];
        auto m = target->express(aj);
        if (!m)
            fail_input("not_subtower", "sqrt(" + std::to_string(aj) + ") is not in the target tower");
        tmask[j] = *m;
        Rat ratio = Rat(Int(aj)) / Rat(target->weight(*m));
        Rat r;
        if (!rational_sqrt(ratio, r))
            fail_internal("embed", "radicand ratio is not a square");
        int negs = 0;
        for (int b = 0; b < target->size(); ++b)
            if ((*m & (1u << b)) && target->radicands()[b] < 0)
                ++negs;
        int flips = aj > 0 ? negs / 2 : (negs - 1) / 2;
        tcoef[j] = (flips % 2) ? -r : r;
    }
    std::vector<Rat> out(target->dim());
    for (unsigned s = 0; s < src.dim(); ++s) {
        if (sgn(a.coords()[s]) == 0)
            continue;
        unsigned mask = 0;
        Rat coef = a.coords()[s];
        for (int j = 0; j < k; ++j) {
            if (!(s & (1u << j)))
                continue;
            coef *= tcoef[j];
            coef *= target->weight(mask & tmask[j]);
            mask ^= tmask[j];
        }
        out[mask] += coef;
    }
    return TowerElem(target, std::move(out));
}

std::optional<TowerElem> sqrt_in_tower(const TowerElem& a)
{
    Kernel k{*a.tower()};
    auto r = k.sqrt(a.tower()->size(), a.coords());
    if (!r)
        return std::nullopt;
    normalize_sign(*r);
    return TowerElem(a.tower(), std::move(*r));
}

std::optional<TowerElem> try_sqrt(const TowerElem& a)
{
    if (auto r = sqrt_in_tower(a))
        return r;
    std::vector<long> candidates;
    if (a.is_rational()) {
        Rat q = a.coords()[0];
        candidates.push_back(squarefree_part(q.get_num() * q.get_den()));
    } else {
        std::vector<long> atoms{-1, 2};
        auto add = [&](long p) {
            if (std::find(atoms.begin(), atoms.end(), p) == atoms.end())
                atoms.push_back(p);
        };
        for (long d : a.tower()->radicands())
            for (long p : radicand_atoms(d))
                add(p);
        for (const auto& c : a.coords()) {
            if (sgn(c) == 0)
                continue;
            for (long p : prime_factors(c.get_num(), 1000))
                add(p);
            for (long p : prime_factors(c.get_den(), 1000))
                add(p);
        }
        if (atoms.size() > 12)
            atoms.resize(12);
        for (unsigned mask = 1; mask < (1u << atoms.size()); ++mask) {
            Int prod = 1;
            for (std::size_t j = 0; j < atoms.size(); ++j)
                if (mask & (1u << j))
                    prod *= atoms[j];
            if (prod.fits_slong_p())
                candidates.push_back(prod.get_si());
        }
        std::stable_sort(candidates.begin(), candidates.end(),
                         [](long x, long y) { return std::labs(x) < std::labs(y); });
    }
    for (long r : candidates) {
        if (r == 1 || a.tower()->express(r))
            continue;
        if (a.tower()->size() >= TowerDesc::max_radicands)
            fail_input("tower_overflow", "tower dimension exceeds 2^" + std::to_string(TowerDesc::max_radicands));
        TowerElem q = a / TowerElem(Rat(r));
        auto s = sqrt_in_tower(q);
        if (!s)
            continue;
        TowerElem root = *s * TowerElem::sqrt_of(r);
        std::vector<Rat> c = root.coords();
        normalize_sign(c);
        return TowerElem(root.tower(), std::move(c));
    }
    return std::nullopt;
}

std::complex<double> TowerElem::to_complex() const
{
    std::complex<double> sum = 0;
    for (unsigned mask = 0; mask < coords_.size(); ++mask) {
        if (sgn(coords_[mask]) == 0)
            continue;
        std::complex<double> term = coords_[mask].get_d();
        for (int j = 0; j < tower_->size(); ++j) {
            if (!(mask & (1u << j)))
                continue;
            long d = tower_->radicands()[j];
            term *= d > 0 ? std::complex<double>(std::sqrt(double(d)), 0)
                          : std::complex<double>(0, std::sqrt(double(-d)));
        }
        sum += term;
    }
    return sum;
}

std::string TowerElem::raw_str() const
{
    std::ostringstream os;
    bool first = true;
    for (unsigned mask = 0; mask < coords_.size(); ++mask) {
        Rat c = coords_[mask];
        if (sgn(c) == 0)
            continue;
        if (!first)
            os << (sgn(c) < 0 ? " - " : " + ");
        else if (sgn(c) < 0)
            os << "-";
        first = false;
        Rat m = abs(c);
        std::string name = tower_->basis_name(mask);
        if (name.empty())
            os << m.get_str();
        else if (m == 1)
            os << name;
        else
            os << m.get_str() << "*" << name;
    }
    if (first)
        os << "0";
    return os.str();
}

std::string TowerElem::str() const
{
    std::vector<long> atoms;
    for (long d : tower_->radicands())
        for (long p : radicand_atoms(d))
            if (std::find(atoms.begin(), atoms.end(), p) == atoms.end())
                atoms.push_back(p);
    bool atomic = std::all_of(tower_->radicands().begin(), tower_->radicands().end(),
                              [](long d) { return radicand_atoms(d).size() == 1; });
    if (atomic || atoms.size() > static_cast<std::size_t>(TowerDesc::max_radicands))
        return raw_str();
    std::sort(atoms.begin(), atoms.end());
    Tower display = std::make_shared<const TowerDesc>(atoms);
    return embed(*this, display).raw_str();
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    TowerElem parse()
    {
        TowerElem v = expr();
        skip();
        if (pos_ != s_.size())
            error("unexpected trailing input");
        return v;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void error(const std::string& msg)
    {
        fail_input("parse_error", "tower literal '" + std::string(s_) + "': " + msg);
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool eat(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    TowerElem expr()
    {
        TowerElem v = term();
        for (;;) {
            if (eat('+'))
                v += term();
            else if (eat('-'))
                v -= term();
            else
                return v;
        }
    }

    TowerElem term()
    {
        TowerElem v = unary();
        for (;;) {
            if (eat('*'))
                v *= unary();
            else if (eat('/'))
                v /= unary();
            else {
                // implicit product such as 2sqrt(3) or 3i
                skip();
                if (pos_ < s_.size() && (s_[pos_] == '(' || s_[pos_] == 's' || s_[pos_] == 'i'))
                    v *= unary();
                else
                    return v;
            }
        }
    }

    TowerElem unary()
    {
        if (eat('-'))
            return -unary();
        if (eat('+'))
            return unary();
        return atom();
    }

    Int integer()
    {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (start == pos_)
            error("expected integer");
        return Int(std::string(s_.substr(start, pos_ - start)));
    }

    TowerElem atom()
    {
        skip();
        if (pos_ >= s_.size())
            error("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            TowerElem v = expr();
            if (!eat(')'))
                error("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return TowerElem(Rat(integer()));
        if (s_.substr(pos_, 4) == "sqrt") {
            pos_ += 4;
            if (!eat('('))
                error("expected '(' after sqrt");
            bool neg = eat('-');
            Int n = integer();
            if (!eat(')'))
                error("expected ')'");
            if (neg)
                n = -n;
            if (n == 0)
                return TowerElem();
            if (!n.fits_slong_p())
                error("radicand too large");
            return TowerElem::sqrt_of(n.get_si());
        }
        if (c == 'i') {
            ++pos_;
            return TowerElem::imag_unit();
        }
        error(std::string("unexpected character '") + c + "'");
    }
};

} // namespace

TowerElem parse_elem(std::string_view text)
{
    return Parser(text).parse();
}

} // namespace clarr
