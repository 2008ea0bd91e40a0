#pragma once

#include "clarr/surface.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace clarr {

/// Coordinates in the declared Mordell-Weil basis.
///
/// M2: free part on (P12, P13, P23), torsion bit 0 is T = P_Co.
/// M1: free part on (P13, P14), torsion bit 0 is T1 = P_Co, bit 1 is T2 = P12.
struct LatticeCoord {
    std::vector<long> free;
    unsigned torsion = 0;

    friend LatticeCoord operator+(const LatticeCoord& a, const LatticeCoord& b);
    friend LatticeCoord operator-(const LatticeCoord& a);
    friend LatticeCoord operator*(long k, const LatticeCoord& a);
    friend bool operator==(const LatticeCoord& a, const LatticeCoord& b) = default;
};

std::string torsion_label(ParamCase kind, unsigned torsion);

class MWPoint {
public:
    MWPoint() = default; // the zero section O
    MWPoint(RatFunc x, RatFunc y) : zero_(false), x_(std::move(x)), y_(std::move(y)) {}

    bool is_zero() const { return zero_; }
    const RatFunc& x() const { return x_; }
    const RatFunc& y() const { return y_; }

    std::optional<LatticeCoord> lattice;
    /// Group-law expression this point was built from.
    std::string recipe;

    /// Same point of E(C(t)); lattice and recipe are ignored.
    bool same_point(const MWPoint& o) const;

private:
    bool zero_ = true;
    RatFunc x_, y_;
};

enum class FiberFlag { identity, nonidentity };

struct ComponentFlags {
    std::vector<std::string> fibers;
    std::vector<FiberFlag> flags;
    int nonidentity_count() const;
};

struct TableRow {
    std::string name;
    ParamCase kind;
    std::vector<std::string> alternatives;
};

/// Rows of the line-point/conic-point table with every sign alternative
/// expanded, "+" before "-".
const std::vector<TableRow>& generator_table();

/// "Lb[2]" style reference into generator_table(), index 1-based. Returns the
/// group-law expression, or nullopt if text is not a row reference.
std::optional<std::string> resolve_table_ref(const std::string& text, ParamCase kind);

/// The rational elliptic surface y^2 = (x - t^2) c_tau(t, x) with its
/// generators and lattice data.
class EllipticSurface {
public:
    explicit EllipticSurface(SurfaceParams params);

    const SurfaceParams& params() const { return params_; }
    ParamCase kind() const { return kind_; }
    const WeierstrassData& weierstrass() const { return w_; }
    const std::vector<Fiber>& fibers() const { return fibers_; }

    bool on_curve(const MWPoint& p) const;

    MWPoint neg(const MWPoint& p) const;
    MWPoint add(const MWPoint& p, const MWPoint& q) const;
    MWPoint mul(long k, const MWPoint& p) const;

    /// "P13", "P_{13}", "PCo" or "O".
    MWPoint generator(const std::string& name) const;
    /// Group-law expression such as "P13+P14+P34", "2*P12", "-P12+P13+P23",
    /// "[2]P13", or a table reference "Lb[1]".
    MWPoint recipe(const std::string& expr) const;

    ComponentFlags flags(const MWPoint& p) const;

    Rat height(const LatticeCoord& a, const LatticeCoord& b) const;
    /// (P.O) from the self-height and the fiber contributions.
    Rat zero_intersection(const MWPoint& p) const;
    /// s_P . s_Q by the Shioda formula with chi = 1.
    Rat section_intersection(const MWPoint& p, const MWPoint& q) const;
    /// Common points of the two sections away from shared fiber nodes:
    /// deg gcd of the coordinate differences plus the order at t = infinity.
    int section_intersection_geometric(const MWPoint& p, const MWPoint& q) const;

private:
    MWPoint compute_generator(int i, int j) const;
    void assign_lattice();
    LatticeCoord basis_vector(int index) const;

    SurfaceParams params_;
    ParamCase kind_;
    WeierstrassData w_;
    std::vector<Fiber> fibers_;
    std::map<std::string, MWPoint> gens_;
};

} // namespace clarr
