#include "clarr/arrangement.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <sstream>

namespace clarr {

namespace {

constexpr int size_px = 600;
constexpr int grid = 240;
const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"};

struct NumCurve {
    std::vector<std::pair<std::pair<int, int>, std::complex<double>>> terms;
    bool real = true;

    double eval(double t, double x) const
    {
        double v = 0;
        for (const auto& [k, c] : terms)
            v += c.real() * std::pow(t, k.first) * std::pow(x, k.second);
        return v;
    }
};

NumCurve numeric(const PlaneCurve& c)
{
    NumCurve n;
    double scale = 0;
    for (const auto& [k, coef] : c.affine().terms()) {
        std::complex<double> v = coef.to_complex();
        n.terms.push_back({k, v});
        scale = std::max(scale, std::abs(v));
    }
    for (const auto& term : n.terms)
        if (std::abs(term.second.imag()) > 1e-12 * scale)
            n.real = false;
    return n;
}

// Durand-Kerner roots of a polynomial with complex coefficients.
std::vector<std::complex<double>> numeric_roots(const Poly& p)
{
    int d = p.degree();
    std::vector<std::complex<double>> c;
    for (const TowerElem& e : p.coeffs())
        c.push_back(e.to_complex());
    std::complex<double> lead = c.back();
    for (auto& v : c)
        v /= lead;
    std::vector<std::complex<double>> z(d);
    for (int i = 0; i < d; ++i)
        z[i] = std::pow(std::complex<double>(0.4, 0.9), i);
    for (int it = 0; it < 500; ++it) {
        double moved = 0;
        for (int i = 0; i < d; ++i) {
            std::complex<double> num = 0, den = 1;
            for (int k = d; k >= 0; --k)
                num = num * z[i] + c[k];
            for (int j = 0; j < d; ++j)
                if (j != i)
                    den *= z[i] - z[j];
            std::complex<double> step = num / den;
            z[i] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-14)
            break;
    }
    return z;
}

bool is_real_form(const std::array<TowerElem, 3>& f)
{
    for (const TowerElem& e : f)
        if (std::abs(e.to_complex().imag()) > 1e-12)
            return false;
    return true;
}

// Tangencies whose points are not real, found through the W-values.
std::vector<std::string> nonreal_tangencies(const Arrangement& a)
{
    std::vector<std::string> out;
    Analysis an;
    try {
        an = analyze(a.components);
    } catch (const std::exception&) {
        return out;
    }
    if (!is_real_form(an.l0) || !is_real_form(an.l1))
        return out;
    for (const IntersectionRecord& r : an.records) {
        if (r.multiplicity < 2 || r.count() < 1)
            continue;
        int nonreal = 0;
        for (const auto& z : numeric_roots(r.chi))
            if (std::abs(z.imag()) > 1e-7 * std::max(1.0, std::abs(z)))
                ++nonreal;
        if (nonreal)
            out.push_back(a.components[r.a].label() + "/" + a.components[r.b].label() + ": " + std::to_string(nonreal)
                          + " non-real point(s) of contact " + std::to_string(r.multiplicity));
    }
    return out;
}

class Canvas {
public:
    explicit Canvas(const SvgWindow& w) : w_(w) {}

    double px(double t) const { return (t - w_.tmin) / (w_.tmax - w_.tmin) * size_px; }
    double py(double x) const { return (w_.xmax - x) / (w_.xmax - w_.xmin) * size_px; }
    bool inside(double t, double x) const
    {
        return t >= w_.tmin && t <= w_.tmax && x >= w_.xmin && x <= w_.xmax;
    }

private:
    SvgWindow w_;
};

// Polyline pieces of x = q(t) clipped to the window.
std::vector<std::vector<std::pair<double, double>>> trace_graph(const NumCurve& n, const SvgWindow& w)
{
    std::vector<std::vector<std::pair<double, double>>> pieces(1);
    const int steps = 800;
    for (int i = 0; i <= steps; ++i) {
        double t = w.tmin + (w.tmax - w.tmin) * i / steps;
        // F = x - q(t), so q(t) = x - F(t, x) at x = 0.
        double x = -n.eval(t, 0);
        if (x >= w.xmin && x <= w.xmax)
            pieces.back().push_back({t, x});
        else if (!pieces.back().empty())
            pieces.emplace_back();
    }
    if (pieces.back().empty())
        pieces.pop_back();
    return pieces;
}

// Marching squares on the zero set of F.
std::vector<std::array<double, 4>> trace_implicit(const NumCurve& n, const SvgWindow& w)
{
    std::vector<std::array<double, 4>> segs;
    double dt = (w.tmax - w.tmin) / grid, dx = (w.xmax - w.xmin) / grid;
    std::vector<double> v((grid + 1) * (grid + 1));
    auto at = [&](int i, int j) -> double& { return v[i * (grid + 1) + j]; };
    for (int i = 0; i <= grid; ++i)
        for (int j = 0; j <= grid; ++j)
            at(i, j) = n.eval(w.tmin + i * dt, w.xmin + j * dx);
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            double t0 = w.tmin + i * dt, x0 = w.xmin + j * dx;
            double c[4] = {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
            double ct[4] = {t0, t0 + dt, t0 + dt, t0}, cx[4] = {x0, x0, x0 + dx, x0 + dx};
            std::vector<std::pair<double, double>> hits;
            for (int e = 0; e < 4; ++e) {
                int f = (e + 1) % 4;
                if ((c[e] < 0) != (c[f] < 0)) {
                    double s = c[e] / (c[e] - c[f]);
                    hits.push_back({ct[e] + s * (ct[f] - ct[e]), cx[e] + s * (cx[f] - cx[e])});
                }
            }
            for (std::size_t k = 0; k + 1 < hits.size(); k += 2)
                segs.push_back({hits[k].first, hits[k].second, hits[k + 1].first, hits[k + 1].second});
        }
    return segs;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char ch : s) {
        if (ch == '<')
            out += "&lt;";
        else if (ch == '>')
            out += "&gt;";
        else if (ch == '&')
            out += "&amp;";
        else
            out += ch;
    }
    return out;
}

} // namespace

std::string arrangement_svg(const Arrangement& a, const SvgWindow& w)
{
    Canvas cv(w);
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_px << "\" height=\"" << size_px + 56
        << "\" viewBox=\"0 0 " << size_px << ' ' << size_px + 56 << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << size_px << "\" height=\"" << size_px
        << "\" fill=\"white\" stroke=\"#999\"/>\n";
    if (w.tmin < 0 && w.tmax > 0)
        out << "<line x1=\"" << cv.px(0) << "\" y1=\"0\" x2=\"" << cv.px(0) << "\" y2=\"" << size_px
            << "\" stroke=\"#ddd\"/>\n";
    if (w.xmin < 0 && w.xmax > 0)
        out << "<line x1=\"0\" y1=\"" << cv.py(0) << "\" x2=\"" << size_px << "\" y2=\"" << cv.py(0)
            << "\" stroke=\"#ddd\"/>\n";

    std::vector<std::string> notes;
    for (std::size_t k = 0; k < a.components.size(); ++k) {
        const PlaneCurve& c = a.components[k];
        const char* color = palette[k % 7];
        NumCurve n = numeric(c);
        out << "<g id=\"" << escape(c.label()) << "\" stroke=\"" << color << "\" fill=\"none\" stroke-width=\"1.5\">\n";
        out << "<title>" << escape(c.label() + ": " + c.affine().str() + " = 0") << "</title>\n";
        bool empty = true;
        if (!n.real) {
            notes.push_back(c.label() + ": non-real equation, not drawn");
        } else if (c.graph_poly()) {
            for (const auto& piece : trace_graph(n, w)) {
                if (piece.size() < 2)
                    continue;
                empty = false;
                out << "<polyline points=\"";
                for (const auto& [t, x] : piece)
                    out << cv.px(t) << ',' << cv.py(x) << ' ';
                out << "\"/>\n";
            }
        } else {
            for (const auto& s : trace_implicit(n, w)) {
                empty = false;
                out << "<line x1=\"" << cv.px(s[0]) << "\" y1=\"" << cv.py(s[1]) << "\" x2=\"" << cv.px(s[2])
                    << "\" y2=\"" << cv.py(s[3]) << "\"/>\n";
            }
        }
        if (n.real && empty)
            notes.push_back(c.label() + ": no real points in the window");
        out << "</g>\n";
    }

    double y = size_px + 14;
    std::ostringstream legend;
    for (std::size_t k = 0; k < a.components.size(); ++k)
        legend << (k ? "  " : "") << a.components[k].label();
    out << "<text x=\"4\" y=\"" << y << "\" font-size=\"11\" font-family=\"monospace\">"
        << escape(legend.str()) << "</text>\n";
    if (!notes.empty()) {
        std::string joined;
        for (const std::string& s : notes)
            joined += (joined.empty() ? "" : "; ") + s;
        out << "<text x=\"4\" y=\"" << y + 16 << "\" font-size=\"11\" font-family=\"monospace\" fill=\"#b00\">"
            << "warning: " << escape(joined) << "</text>\n";
        y += 16;
    }
    std::vector<std::string> hidden = nonreal_tangencies(a);
    if (!hidden.empty()) {
        std::string joined;
        for (const std::string& s : hidden)
            joined += (joined.empty() ? "" : "; ") + s;
        out << "<text x=\"4\" y=\"" << y + 16 << "\" font-size=\"11\" font-family=\"monospace\" fill=\"#555\">"
            << "not shown: " << escape(joined) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace clarr
