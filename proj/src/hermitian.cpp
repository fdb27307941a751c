#include "chromo/hermitian.hpp"

#include <algorithm>
#include <map>

namespace chromo {

QuadImagField::QuadImagField(long d_) : d(d_)
{
    if (d >= 0 || squarefree_part(d) != d) throw precondition_error("d must be a negative squarefree integer");
}

long QuadImagField::disc() const
{
    return mod_norm(d, 4) == 1 ? d : 4 * d;
}

int QuadImagField::splitting(long place) const
{
    if (place == kInfinity) return -1;
    if (place < 2 || !is_prime(place)) throw precondition_error("place must be a prime or 0");
    return kronecker(disc(), place);
}

namespace {

struct Split {
    long v;
    Int u;
};

Split split_off(Int a, long l)
{
    long v = 0;
    while (mpz_divisible_ui_p(a.get_mpz_t(), l)) {
        a /= l;
        ++v;
    }
    return {v, a};
}

// integer representative of the square class
Int square_class_int(const Rat& a)
{
    return Int(a.get_num() * a.get_den());
}

int legendre(const Int& u, long l)
{
    Int m = l;
    return mpz_kronecker(u.get_mpz_t(), m.get_mpz_t());
}

int eps2(const Int& u)
{
    Int r = u % 4;
    if (r < 0) r += 4;
    return r == 3 ? 1 : 0;
}

int omega2(const Int& u)
{
    Int r = u % 8;
    if (r < 0) r += 8;
    return (r == 3 || r == 5) ? 1 : 0;
}

}  // namespace

int hilbert_symbol(const Rat& a, const Rat& b, long place)
{
    if (a == 0 || b == 0) throw precondition_error("Hilbert symbol of zero");
    if (place == kInfinity) return (a < 0 && b < 0) ? -1 : 1;
    if (place < 2 || !is_prime(place)) throw precondition_error("place must be a prime or 0");
    auto [al, u] = split_off(square_class_int(a), place);
    auto [be, v] = split_off(square_class_int(b), place);
    if (place == 2) {
        int e = eps2(u) * eps2(v) + al * omega2(v) + be * omega2(u);
        return (e & 1) ? -1 : 1;
    }
    int s = 1;
    if ((al * be) & 1 && (place % 4) == 3) s = -s;
    if (be & 1) s *= legendre(u, place);
    if (al & 1) s *= legendre(v, place);
    return s;
}

bool is_local_norm(const Rat& a, const QuadImagField& F, long place)
{
    if (a == 0) throw precondition_error("zero is not a norm class");
    if (place != kInfinity && F.is_split(place)) return true;
    return hilbert_symbol(a, Rat(F.d), place) == 1;
}

std::set<long> norm_class_support(const Rat& a, const QuadImagField& F)
{
    if (a == 0) throw precondition_error("zero is not a norm class");
    std::set<long> cand{2};
    for (Int z : {Int(abs(a.get_num())), Int(a.get_den()), Int(-F.disc())}) {
        if (!z.fits_ulong_p()) throw precondition_error("norm_class_support: input too large to factor");
        for (auto q : prime_factors(z.get_ui())) cand.insert(long(q));
    }
    std::set<long> out;
    for (long l : cand) {
        if (!is_local_norm(a, F, l)) out.insert(l);
    }
    if (a < 0) out.insert(kInfinity);
    return out;
}

std::optional<long> find_norm_class_witness(const QuadImagField& F, const std::set<long>& places, long bound)
{
    for (long m = 1; m <= bound; ++m) {
        if (squarefree_part(m) != m) continue;
        for (long a : {m, -m}) {
            if (norm_class_support(Rat(a), F) == places) return a;
        }
    }
    return std::nullopt;
}

FieldElt pairing_translate(const QuadImagField& F, const FieldElt& v, Translate dir)
{
    Rat d(F.d);
    if (dir == Translate::BetaToXi) {
        if (v.x != 0) throw precondition_error("beta must be purely imaginary");
        return {2 * d * v.y, 0};
    }
    if (v.y != 0) throw precondition_error("xi must be totally real");
    Rat y = v.x / (2 * d);
    y.canonicalize();
    return {0, y};
}

std::string to_string(const LocalFormClass& c)
{
    using K = LocalFormClass::Kind;
    std::string pl = c.place == kInfinity ? "inf" : std::to_string(c.place);
    switch (c.kind) {
    case K::Split: return pl + ":split";
    case K::Nonsplit: return pl + ":" + std::to_string(c.cls);
    case K::Signature: return pl + ":(" + std::to_string(c.pos) + "," + std::to_string(c.neg) + ")";
    }
    return pl;
}

LocalFormClass local_class_U(const QuadImagField& F, int n, long place, const std::vector<Rat>& entries)
{
    if (int(entries.size()) != n) throw precondition_error("expected n diagonal entries");
    for (auto& e : entries) {
        if (e == 0) throw precondition_error("degenerate diagonal entry");
    }
    LocalFormClass c;
    c.place = place;
    if (place == kInfinity) {
        c.kind = LocalFormClass::Kind::Signature;
        for (auto& e : entries) (e > 0 ? c.pos : c.neg)++;
        return c;
    }
    if (F.is_split(place)) {
        c.kind = LocalFormClass::Kind::Split;
        return c;
    }
    c.kind = LocalFormClass::Kind::Nonsplit;
    Rat disc = 1;
    for (auto& e : entries) disc *= e;
    c.cls = is_local_norm(disc, F, place) ? 0 : 1;
    return c;
}

void check_spec(const GlobalFormSpec& s)
{
    if (s.n < 1) throw precondition_error("rank must be positive");
    QuadImagField chk(s.F.d);
    std::set<long> seen;
    int inf = 0;
    for (auto& c : s.local) {
        if (!seen.insert(c.place).second) throw precondition_error("place listed twice: " + to_string(c));
        using K = LocalFormClass::Kind;
        if (c.place == kInfinity) {
            ++inf;
            if (c.kind != K::Signature) throw precondition_error("real place needs a signature");
            if (c.pos < 0 || c.neg < 0 || c.pos + c.neg != s.n) throw precondition_error("signature does not add up to n");
            continue;
        }
        bool split = s.F.is_split(c.place);
        if (split && c.kind != K::Split) throw precondition_error("place " + std::to_string(c.place) + " splits in F");
        if (!split && c.kind != K::Nonsplit) throw precondition_error("place " + std::to_string(c.place) + " does not split in F");
        if (c.cls != 0 && c.cls != 1) throw precondition_error("class must lie in Z/2");
    }
    if (inf != 1) throw precondition_error("spec must list the real place");
}

namespace {

const LocalFormClass& real_class(const GlobalFormSpec& s)
{
    for (auto& c : s.local) {
        if (c.place == kInfinity) return c;
    }
    throw precondition_error("spec must list the real place");
}

int finite_sum(const GlobalFormSpec& s)
{
    int sum = 0;
    for (auto& c : s.local) {
        if (c.kind == LocalFormClass::Kind::Nonsplit) sum ^= c.cls;
    }
    return sum;
}

}  // namespace

bool global_exists_U(const GlobalFormSpec& s)
{
    check_spec(s);
    return ((finite_sum(s) + real_class(s).neg) & 1) == 0;
}

GUClassification global_classify_GU(const GlobalFormSpec& s)
{
    check_spec(s);
    GUClassification r;
    auto& inf = real_class(s);
    r.n_odd = s.n & 1;
    r.abs_signature = {std::max(inf.pos, inf.neg), std::min(inf.pos, inf.neg)};
    if (r.n_odd) {
        r.exists = true;
        return r;
    }
    if ((inf.pos - inf.neg) & 1) throw precondition_error("signature parity does not match n");
    r.xi_sum = (finite_sum(s) + inf.pos) & 1;
    r.exists = r.xi_sum == 0;
    // the Z/2 target at ramified places assumes squares are norms and the index is 2
    for (auto& c : s.local) {
        if (c.place == kInfinity || s.F.splitting(c.place) != 0) continue;
        bool found = false;
        for (long a : {-1L, 2L, -2L, 3L, -3L, 5L, -5L, 7L, c.place, -c.place}) {
            if (!is_local_norm(Rat(a), s.F, c.place)) found = true;
        }
        if (!found || !is_local_norm(Rat(c.place * c.place), s.F, c.place)) {
            r.flags.push_back("norm index at " + std::to_string(c.place) + " is not 2");
        }
    }
    return r;
}

bool gu_equivalent(const GlobalFormSpec& a, const GlobalFormSpec& b)
{
    if (a.F.d != b.F.d || a.n != b.n) return false;
    auto ca = global_classify_GU(a), cb = global_classify_GU(b);
    if (!ca.exists || !cb.exists) return false;
    if (ca.abs_signature != cb.abs_signature) return false;
    if (ca.n_odd) return true;
    // n even: the discriminant classes must agree at every nonsplit place
    std::map<long, int> da, db;
    for (auto& c : a.local) {
        if (c.kind == LocalFormClass::Kind::Nonsplit && c.cls) da[c.place] = 1;
    }
    for (auto& c : b.local) {
        if (c.kind == LocalFormClass::Kind::Nonsplit && c.cls) db[c.place] = 1;
    }
    return da == db;
}

}  // namespace chromo
