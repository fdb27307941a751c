#include "chromo/hondatate.hpp"

namespace chromo {

const Place& CMPlaceStructure::place(const std::string& id) const
{
    for (auto& x : places) {
        if (x.id == id) return x;
    }
    throw precondition_error("unknown place '" + id + "'");
}

std::vector<std::string> CMPlaceStructure::check() const
{
    std::vector<std::string> bad;
    long sum = 0;
    for (auto& x : places) {
        if (x.e < 1 || x.f < 1) bad.push_back(x.id + ": e and f must be positive");
        sum += x.e * x.f;
        auto it = conj.find(x.id);
        if (it == conj.end()) {
            bad.push_back(x.id + ": no conjugate given");
            continue;
        }
        auto back = conj.find(it->second);
        if (back == conj.end() || back->second != x.id) {
            bad.push_back(x.id + ": conjugation is not an involution");
            continue;
        }
        const Place* y = nullptr;
        for (auto& z : places) {
            if (z.id == it->second) y = &z;
        }
        if (!y) {
            bad.push_back(x.id + ": conjugate is not a place over p");
        } else if (y->e != x.e || y->f != x.f) {
            bad.push_back(x.id + ": conjugation does not preserve (e,f)");
        }
    }
    if (sum != degree) bad.push_back("sum of e_x f_x is " + std::to_string(sum) + ", declared degree " + std::to_string(degree));
    return bad;
}

std::vector<TypeViolation> validate_type(const PAdicType& t)
{
    std::vector<TypeViolation> out;
    for (auto& s : t.S.check()) out.push_back({"", s});
    if (!out.empty()) return out;
    for (auto& x : t.S.places) {
        auto it = t.eta.find(x.id);
        auto jt = t.eta.find(t.S.conj.at(x.id));
        if (it == t.eta.end() || jt == t.eta.end()) {
            out.push_back({x.id, "eta missing"});
            continue;
        }
        Rat s = it->second / Rat(x.e);
        if (s < 0 || s > 1) out.push_back({x.id, "slope eta/e outside [0,1]"});
        if (it->second / Rat(x.e) + jt->second / Rat(x.e) != 1) out.push_back({x.id, "eta_x/e_x + eta_c(x)/e_x != 1"});
    }
    return out;
}

static void require_valid(const PAdicType& t)
{
    auto v = validate_type(t);
    if (!v.empty()) throw precondition_error("invalid p-adic type at '" + v[0].place + "': " + v[0].what);
}

std::map<std::string, Rat> slopes_of_type(const PAdicType& t)
{
    require_valid(t);
    std::map<std::string, Rat> s;
    for (auto& x : t.S.places) {
        Rat r = t.eta.at(x.id) / Rat(x.e);
        r.canonicalize();
        s[x.id] = r;
    }
    return s;
}

HTInvariants invariants_and_dimension(const PAdicType& t)
{
    require_valid(t);
    HTInvariants R;
    R.m = 1;
    for (auto& x : t.S.places) {
        Rat v = frac_part(t.eta.at(x.id) * Rat(x.f));
        R.inv[x.id] = v;
        R.m = lcm(R.m, Int(v.get_den()));
    }
    for (auto& r : t.S.real_places) {
        R.inv[r] = Rat(1, 2);
        R.m = lcm(R.m, Int(2));
    }
    R.dim = Rat(Int(t.S.degree) * R.m, Int(2));
    R.dim.canonicalize();
    return R;
}

std::map<std::string, Rat> kottwitz_invariants(const PAdicType& t, const std::map<std::string, Rat>& b_inv)
{
    require_valid(t);
    auto b = [&](const std::string& id) {
        auto it = b_inv.find(id);
        return it == b_inv.end() ? Rat(0) : it->second;
    };
    std::map<std::string, Rat> out;
    for (auto& x : t.S.places) out[x.id] = frac_part(t.eta.at(x.id) * Rat(x.f) - b(x.id));
    for (auto& r : t.S.real_places) out[r] = frac_part(Rat(1, 2) - b(r));
    for (auto& [id, v] : b_inv) {
        if (!out.count(id)) out[id] = frac_part(-v);
    }
    return out;
}

MinimalityResult minimality_check(const PAdicType& t, const CMPlaceStructure& sub,
                                  const std::map<std::string, Covering>& cover)
{
    require_valid(t);
    auto bad = sub.check();
    if (!bad.empty()) throw precondition_error("substructure: " + bad[0]);
    MinimalityResult R;
    for (auto& x : t.S.places) {
        auto it = cover.find(x.id);
        if (it == cover.end()) throw precondition_error("covering map misses place '" + x.id + "'");
        const Place& y = sub.place(it->second.below);
        if (it->second.e_rel < 1 || x.e != y.e * it->second.e_rel) {
            throw precondition_error("ramification of '" + x.id + "' inconsistent with e_rel");
        }
        if (x.f % y.f) throw precondition_error("residue degree of '" + x.id + "' not a multiple of its image");
        // c commutes with the covering
        auto cx = cover.find(t.S.conj.at(x.id));
        if (cx == cover.end() || cx->second.below != sub.conj.at(y.id)) {
            throw precondition_error("covering does not commute with conjugation at '" + x.id + "'");
        }
        Rat need = t.eta.at(x.id) / Rat(it->second.e_rel);
        need.canonicalize();
        auto [slot, fresh] = R.eta_below.emplace(y.id, need);
        if (!fresh && slot->second != need) {
            R.reason = "places over '" + y.id + "' ask for eta " + rat_str(slot->second) + " and " + rat_str(need);
            R.eta_below.clear();
            return R;
        }
    }
    for (auto& y : sub.places) {
        if (!R.eta_below.count(y.id)) throw precondition_error("place '" + y.id + "' of the substructure is not covered");
    }
    auto v = validate_type({sub, R.eta_below});
    if (!v.empty()) {
        R.reason = "descended eta is not a type: " + v[0].what;
        R.eta_below.clear();
        return R;
    }
    R.descends = true;
    return R;
}

TypePolygon newton_polygon_of_type(const PAdicType& t)
{
    auto inv = invariants_and_dimension(t);
    auto s = slopes_of_type(t);
    std::vector<Segment> segs;
    for (auto& x : t.S.places) {
        Int height = Int(x.e * x.f) * inv.m;
        Int den = s[x.id].get_den();
        if (height % den != 0) {
            return {std::nullopt, "slope " + rat_str(s[x.id]) + " at '" + x.id + "' does not divide height " +
                                      height.get_str() + ": non-realizable at that height"};
        }
        segs.push_back({s[x.id].get_num().get_si(), den.get_si(), Int(height / den).get_si()});
    }
    return {from_slopes(segs), ""};
}

WeilCheck verify_weil_integer(const WeilInteger& w)
{
    WeilCheck c;
    if (w.d >= 0 || squarefree_part(w.d) != w.d) {
        c.reason = "d must be negative and squarefree";
        return c;
    }
    c.norm = w.a * w.a - Int(w.d) * w.b * w.b;
    if (c.norm != w.q) {
        c.reason = "norm " + c.norm.get_str() + " != q";
        return c;
    }
    c.ok = true;
    return c;
}

PAdicType split_type(long p, long n)
{
    PAdicType t;
    t.S.p = p;
    t.S.places = {{"u", 1, 1}, {"uc", 1, 1}};
    t.S.conj = {{"u", "uc"}, {"uc", "u"}};
    t.S.degree = 2;
    t.eta = {{"u", Rat(1, n)}, {"uc", Rat(n - 1, n)}};
    t.eta["u"].canonicalize();
    t.eta["uc"].canonicalize();
    return t;
}

}  // namespace chromo
