#include "chromo/newton.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "chromo/arith.hpp"

namespace chromo {

NewtonPolygon from_slopes(const std::vector<Segment>& pairs)
{
    NewtonPolygon P;
    for (auto s : pairs) {
        if (s.h < 1) throw precondition_error("height must be positive");
        if (s.d < 0 || s.d > s.h) throw precondition_error("need 0 <= d <= h");
        if (s.mult < 1) throw precondition_error("multiplicity must be positive");
        long g = std::gcd(s.d, s.h);
        if (g > 1) {
            P.notes.push_back("(" + std::to_string(s.d) + "," + std::to_string(s.h) + ") read as " + std::to_string(g) +
                              " copies of (" + std::to_string(s.d / g) + "," + std::to_string(s.h / g) + ")");
            s = {s.d / g, s.h / g, s.mult * g};
        }
        P.segs.push_back(s);
    }
    // slope d/h ascending; cross-multiplication keeps it exact
    std::sort(P.segs.begin(), P.segs.end(),
              [](const Segment& a, const Segment& b) { return a.d * b.h < b.d * a.h; });
    std::vector<Segment> merged;
    for (auto& s : P.segs) {
        if (!merged.empty() && merged.back().d == s.d && merged.back().h == s.h) {
            merged.back().mult += s.mult;
        } else {
            merged.push_back(s);
        }
    }
    P.segs = std::move(merged);
    return P;
}

NewtonPolygon parse_slopes(const std::string& s)
{
    std::vector<Segment> pairs;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        long mult = 1;
        auto x = tok.find('x');
        if (x != std::string::npos) {
            mult = std::stol(tok.substr(x + 1));
            tok = tok.substr(0, x);
        }
        auto slash = tok.find('/');
        try {
            if (slash == std::string::npos) {
                pairs.push_back({std::stol(tok), 1, mult});
            } else {
                pairs.push_back({std::stol(tok.substr(0, slash)), std::stol(tok.substr(slash + 1)), mult});
            }
        } catch (const std::logic_error&) {
            throw precondition_error("bad slope token '" + tok + "'");
        }
    }
    return from_slopes(pairs);
}

std::pair<long, long> total(const NewtonPolygon& P)
{
    long h = 0, d = 0;
    for (auto& s : P.segs) {
        h += s.h * s.mult;
        d += s.d * s.mult;
    }
    return {h, d};
}

NewtonPolygon dual(const NewtonPolygon& P)
{
    std::vector<Segment> v;
    for (auto& s : P.segs) v.push_back({s.h - s.d, s.h, s.mult});
    return from_slopes(v);
}

NewtonPolygon direct_sum(const NewtonPolygon& a, const NewtonPolygon& b)
{
    std::vector<Segment> v = a.segs;
    v.insert(v.end(), b.segs.begin(), b.segs.end());
    return from_slopes(v);
}

bool is_polarizable(const NewtonPolygon& P) { return dual(P) == P; }

Rendering render_ascii(const NewtonPolygon& P)
{
    Rendering R;
    long x = 0, y = 0;
    R.breakpoints.push_back({0, 0});
    for (auto& s : P.segs) {
        x += s.h * s.mult;
        y += s.d * s.mult;
        R.breakpoints.push_back({x, y});
    }
    const long H = x, D = y;
    // y(x) on the polygon as a fraction num/den at integer x
    auto on_line = [&](long col, long row) {
        long x0 = 0, y0 = 0;
        for (auto& s : P.segs) {
            long x1 = x0 + s.h * s.mult;
            if (col <= x1) return (row - y0) * s.h == (col - x0) * s.d;
            x0 = x1;
            y0 += s.d * s.mult;
        }
        return col == x0 && row == y0;
    };
    std::ostringstream os;
    for (long row = D; row >= 0; --row) {
        for (long col = 0; col <= H; ++col) {
            bool bp = std::find(R.breakpoints.begin(), R.breakpoints.end(), std::pair<long, long>{col, row}) !=
                      R.breakpoints.end();
            os << (bp ? 'o' : on_line(col, row) ? '*' : '.');
            if (col < H) os << ' ';
        }
        os << '\n';
    }
    R.grid = os.str();
    return R;
}

}  // namespace chromo
