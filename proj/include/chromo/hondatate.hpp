#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chromo/arith.hpp"
#include "chromo/newton.hpp"

namespace chromo {

struct Place {
    std::string id;
    long e = 1, f = 1;
};

struct CMPlaceStructure {
    long p = 2;
    std::vector<Place> places;                // places over p
    std::map<std::string, std::string> conj;  // action of c on place ids
    long degree = 0;                          // [M:Q]
    std::vector<std::string> real_places;     // empty for CM fields

    const Place& place(const std::string& id) const;
    // empty when consistent
    std::vector<std::string> check() const;
};

struct PAdicType {
    CMPlaceStructure S;
    std::map<std::string, Rat> eta;
};

struct TypeViolation {
    std::string place;
    std::string what;
};

std::vector<TypeViolation> validate_type(const PAdicType& t);
std::map<std::string, Rat> slopes_of_type(const PAdicType& t);

struct HTInvariants {
    std::map<std::string, Rat> inv;  // inv_x E in [0,1), places over p and real places
    Int m;
    Rat dim;  // d m / 2
};
HTInvariants invariants_and_dimension(const PAdicType& t);

// inv_x D: places over p, real places, and any other listed place
std::map<std::string, Rat> kottwitz_invariants(const PAdicType& t, const std::map<std::string, Rat>& b_inv);

struct Covering {
    std::string below;  // place of the substructure
    long e_rel = 1;     // e_{x'/x}
};

struct MinimalityResult {
    bool descends = false;
    std::map<std::string, Rat> eta_below;  // when it descends
    std::string reason;
};
MinimalityResult minimality_check(const PAdicType& t, const CMPlaceStructure& sub,
                                  const std::map<std::string, Covering>& cover);

struct TypePolygon {
    std::optional<NewtonPolygon> polygon;
    std::string reason;  // set when non-realizable
};
// slopes s_x with heights d_x * m
TypePolygon newton_polygon_of_type(const PAdicType& t);

struct WeilInteger {
    long d = -1;  // squarefree, negative
    Int a, b;     // pi = a + b sqrt(d)
    Int q;
};
struct WeilCheck {
    bool ok = false;
    Int norm;
    std::string reason;
};
WeilCheck verify_weil_integer(const WeilInteger& w);

// the height-n split type (1/n, (n-1)/n) over an imaginary quadratic field
PAdicType split_type(long p, long n);

}  // namespace chromo
