#include <doctest.h>

#include <random>

#include "chromo/hondatate.hpp"

using namespace chromo;

namespace {

PAdicType symmetric_half()
{
    PAdicType t;
    t.S.p = 3;
    t.S.places = {{"w", 1, 1}};
    t.S.conj = {{"w", "w"}};
    t.S.degree = 1;
    t.eta = {{"w", Rat(1, 2)}};
    return t;
}

// a random valid type on 1..3 conj-orbits
PAdicType random_type(std::mt19937& rng)
{
    PAdicType t;
    t.S.p = 5;
    int orbits = 1 + rng() % 3;
    for (int o = 0; o < orbits; ++o) {
        long e = 1 + rng() % 3, f = 1 + rng() % 2;
        std::string a = "x" + std::to_string(o);
        if (rng() % 3 == 0) {
            t.S.places.push_back({a, e, f});
            t.S.conj[a] = a;
            t.eta[a] = Rat(e, 2);
            t.S.degree += e * f;
        } else {
            std::string b = a + "c";
            t.S.places.push_back({a, e, f});
            t.S.places.push_back({b, e, f});
            t.S.conj[a] = b;
            t.S.conj[b] = a;
            long den = 1 + rng() % 6;
            Rat s(long(rng() % (den + 1)), den);
            s.canonicalize();
            t.eta[a] = s * Rat(e);
            t.eta[b] = (1 - s) * Rat(e);
            t.S.degree += 2 * e * f;
        }
    }
    return t;
}

}  // namespace

TEST_CASE("validate_type")
{
    CHECK(validate_type(split_type(5, 3)).empty());
    auto h = split_type(5, 2);
    CHECK(validate_type(h).empty());
    h.eta = {{"u", Rat(1)}, {"uc", Rat(1)}};
    auto v = validate_type(h);
    CHECK(v.size() == 2);
    CHECK(v[0].place == "u");

    auto bad = split_type(5, 2);
    bad.S.degree = 3;
    CHECK(!validate_type(bad).empty());
    bad = split_type(5, 2);
    bad.S.places[1].f = 2;
    bad.S.degree = 3;
    CHECK(!validate_type(bad).empty());
    bad = split_type(5, 2);
    bad.eta["u"] = Rat(-1, 2);
    bad.eta["uc"] = Rat(3, 2);
    CHECK(validate_type(bad).size() == 2);
}

TEST_CASE("slopes")
{
    auto s = slopes_of_type(split_type(7, 5));
    CHECK(s["u"] == Rat(1, 5));
    CHECK(s["uc"] == Rat(4, 5));
    CHECK(slopes_of_type(symmetric_half())["w"] == Rat(1, 2));

    PAdicType ram;
    ram.S.places = {{"r", 2, 1}};
    ram.S.conj = {{"r", "r"}};
    ram.S.degree = 2;
    ram.eta = {{"r", Rat(1)}};
    CHECK(slopes_of_type(ram)["r"] == Rat(1, 2));

    auto ord = split_type(5, 1);
    CHECK(slopes_of_type(ord)["u"] == Rat(1));
    CHECK(slopes_of_type(ord)["uc"] == Rat(0));
    CHECK_THROWS_AS(slopes_of_type(PAdicType{split_type(5, 2).S, {{"u", Rat(1)}, {"uc", Rat(1)}}}), precondition_error);
}

TEST_CASE("split type invariants, n = 2..12")
{
    for (long n = 2; n <= 12; ++n) {
        auto inv = invariants_and_dimension(split_type(5, n));
        CHECK(inv.m == n);
        CHECK(inv.dim == Rat(n));
        CHECK(inv.inv["u"] == Rat(1, n));
        CHECK(inv.inv["uc"] == Rat(n - 1, n));
    }
}

TEST_CASE("other invariants")
{
    auto h = invariants_and_dimension(symmetric_half());
    CHECK(h.m == 2);
    CHECK(h.dim == Rat(1));

    auto o = invariants_and_dimension(split_type(5, 1));
    CHECK(o.m == 1);
    CHECK(o.dim == Rat(1));

    // a real place contributes 1/2
    auto r = split_type(5, 1);
    r.S.real_places = {"inf"};
    auto ri = invariants_and_dimension(r);
    CHECK(ri.m == 2);
    CHECK(ri.inv["inf"] == Rat(1, 2));

    // f enters the invariant: eta = 1/2 on an inert place gives 0
    PAdicType inert;
    inert.S.places = {{"w", 1, 2}};
    inert.S.conj = {{"w", "w"}};
    inert.S.degree = 2;
    inert.eta = {{"w", Rat(1, 2)}};
    CHECK(invariants_and_dimension(inert).m == 1);
}

TEST_CASE("kottwitz")
{
    std::mt19937 rng(7);
    for (int it = 0; it < 200; ++it) {
        auto t = random_type(rng);
        auto plain = invariants_and_dimension(t);
        CHECK(kottwitz_invariants(t, {}) == plain.inv);
        std::map<std::string, Rat> zero;
        for (auto& x : t.S.places) zero[x.id] = 0;
        CHECK(kottwitz_invariants(t, zero) == plain.inv);
    }
    auto t = split_type(5, 4);
    auto k = kottwitz_invariants(t, {{"u", Rat(1, 4)}, {"ell", Rat(1, 2)}});
    CHECK(k["u"] == 0);
    CHECK(k["uc"] == Rat(3, 4));
    CHECK(k["ell"] == Rat(1, 2));
    t.S.real_places = {"inf"};
    CHECK(kottwitz_invariants(t, {{"inf", Rat(1, 2)}})["inf"] == 0);
}

TEST_CASE("minimality")
{
    CMPlaceStructure sub;
    sub.p = 5;
    sub.places = {{"w", 1, 1}};
    sub.conj = {{"w", "w"}};
    sub.degree = 1;
    std::map<std::string, Covering> cov{{"u", {"w", 1}}, {"uc", {"w", 1}}};

    for (long n = 3; n <= 8; ++n) CHECK(!minimality_check(split_type(5, n), sub, cov).descends);
    auto two = minimality_check(split_type(5, 2), sub, cov);
    CHECK(two.descends);
    CHECK(two.eta_below.at("w") == Rat(1, 2));

    // pulled back along a ramified cover: eta' = e * eta
    PAdicType up;
    up.S.places = {{"r", 2, 1}};
    up.S.conj = {{"r", "r"}};
    up.S.degree = 2;
    up.eta = {{"r", Rat(1)}};
    auto d = minimality_check(up, sub, {{"r", {"w", 2}}});
    CHECK(d.descends);
    CHECK(d.eta_below.at("w") == Rat(1, 2));

    CHECK_THROWS_AS(minimality_check(up, sub, {{"r", {"w", 1}}}), precondition_error);
    CHECK_THROWS_AS(minimality_check(split_type(5, 2), sub, {{"u", {"w", 1}}}), precondition_error);
}

TEST_CASE("newton polygon of a type")
{
    auto P = newton_polygon_of_type(split_type(5, 3));
    REQUIRE(P.polygon);
    CHECK(P.polygon->segs == std::vector<Segment>{{1, 3, 1}, {2, 3, 1}});

    std::mt19937 rng(99);
    int realizable = 0;
    for (int it = 0; it < 500; ++it) {
        auto t = random_type(rng);
        auto r = newton_polygon_of_type(t);
        if (!r.polygon) {
            CHECK(!r.reason.empty());
            continue;
        }
        ++realizable;
        CHECK(is_polarizable(*r.polygon));
        auto inv = invariants_and_dimension(t);
        CHECK(Rat(total(*r.polygon).second) == inv.dim);
    }
    CHECK(realizable > 100);
}

TEST_CASE("weil integers")
{
    CHECK(verify_weil_integer({-1, 2, 1, 5}).ok);
    CHECK(verify_weil_integer({-1, 1, 1, 2}).ok);
    auto v = verify_weil_integer({-1, 3, 1, 5});
    CHECK(!v.ok);
    CHECK(v.norm == 10);
    CHECK(verify_weil_integer({-5, 2, 1, 9}).ok);
    CHECK(!verify_weil_integer({-4, 1, 1, 5}).ok);
    CHECK(!verify_weil_integer({3, 1, 1, 5}).ok);
}
