#pragma once

#include <string>
#include <utility>
#include <vector>

namespace chromo {

// simple summand of dimension d, height h, repeated mult times
struct Segment {
    long d = 0, h = 1, mult = 1;
    bool operator==(const Segment&) const = default;
};

struct NewtonPolygon {
    std::vector<Segment> segs;  // coprime (d,h), slopes strictly increasing
    std::vector<std::string> notes;
    bool operator==(const NewtonPolygon& o) const { return segs == o.segs; }
};

NewtonPolygon from_slopes(const std::vector<Segment>& pairs);
// "1/3,1/2,1" or "1/2x3" (mult suffix); a bare integer means slope d/1
NewtonPolygon parse_slopes(const std::string& s);
std::pair<long, long> total(const NewtonPolygon& P);  // (height, dimension)
NewtonPolygon dual(const NewtonPolygon& P);
NewtonPolygon direct_sum(const NewtonPolygon& a, const NewtonPolygon& b);
bool is_polarizable(const NewtonPolygon& P);

struct Rendering {
    std::vector<std::pair<long, long>> breakpoints;  // (height, dimension)
    std::string grid;
};
Rendering render_ascii(const NewtonPolygon& P);

}  // namespace chromo
