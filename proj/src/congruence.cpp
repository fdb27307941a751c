#include "chromo/congruence.hpp"

#include <algorithm>
#include <map>

namespace chromo {

int sturm_bound(int t, long l, int m_max)
{
    long w = long(t) + 12L * m_max;
    if (w < 0) w = 0;
    long num = w * (l + 1);
    return int((num + 11) / 12) + 1;
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::WitnessFound: return "witness-found";
    case Verdict::NoWitnessInOldSubspace: return "no-witness-in-old-subspace";
    case Verdict::NoWitnessInSearchedSubspace: return "no-witness-in-searched-subspace";
    default: return "n/a";
    }
}

std::string to_string(WitnessSpace w) { return w == WitnessSpace::Old ? "old" : "extended"; }

std::string to_string(SerreResult r)
{
    switch (r) {
    case SerreResult::Consistent: return "consistent";
    case SerreResult::WeightViolation: return "weight-violation";
    default: return "congruence-violation";
    }
}

namespace {

void check_primes(long p, long l)
{
    if (p <= 3 || !is_prime(p)) throw precondition_error("p must be a prime > 3");
    if (!is_prime(l) || l == p) throw precondition_error("l must be a prime different from p");
}

ResidueMatrix rows_of(const std::vector<QSeries>& v, long p, int k, int n)
{
    ResidueMatrix M(p, k, 0, n);
    for (auto& s : v) M.push_row(s.r);
    return M;
}

QSeries combo(const std::vector<QSeries>& basis, const std::vector<i64>& x, long p, int k, int n)
{
    QSeries s = QSeries::residues(p, k, std::vector<i64>(n, 0));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (x[i]) s = s + basis[i].scale(Rat(x[i]));
    }
    return s;
}

std::vector<QSeries> howell_series(const std::vector<QSeries>& v, long p, int k, int n)
{
    ResidueMatrix H = howell_form(rows_of(v, p, k, n));
    std::vector<QSeries> out;
    for (int i = 0; i < H.rows; ++i) out.push_back(QSeries::residues(p, k, H.row(i)));
    return out;
}

// Weight-w piece of the ring generated by level-1 forms in q and in q^l together with
// F_l = E_2(q) - l E_2(q^l); Howell-reduced at every weight.
std::vector<QSeries> extended_piece(LevelOneMod& L, long l, int w)
{
    const long p = L.p;
    const int k = L.k, n = L.prec;
    QSeries F = (eisenstein2(n) - verschiebung(eisenstein2(n), l).scale(Rat(l))).reduce(p, k);
    std::vector<std::pair<int, QSeries>> gens{
        {2, F},
        {4, L.E4(1)},
        {4, verschiebung(L.E4(1), l)},
        {6, L.E6(1)},
        {6, verschiebung(L.E6(1), l)},
        {12, L.D(1)},
        {12, verschiebung(L.D(1), l)},
    };
    std::map<int, std::vector<QSeries>> S;
    S[0] = {L.E4(0)};
    for (int v = 2; v <= w; v += 2) {
        std::vector<QSeries> cand;
        for (auto& [gw, g] : gens) {
            if (gw > v) continue;
            for (auto& s : S[v - gw]) cand.push_back(g * s);
        }
        S[v] = howell_series(cand, p, k, n);
    }
    return w >= 0 && w % 2 == 0 ? S[w] : std::vector<QSeries>{};
}

struct Setup {
    long p, l;
    int t, k, m, n;
    i64 lt;  // l^t mod p^k
    std::vector<Monomial> mons;
    std::vector<QSeries> top;   // numerators of weight t + 12m
    std::vector<QSeries> low;   // Howell basis of lower-weight numerators (B)
    std::vector<QSeries> wit;   // Howell basis of cleared witness space (B)
    QSeries Dm, VDm;
};

Setup make_setup(long p, long l, int t, int k, int m, int n)
{
    Setup S{p, l, t, k, m, n, 0, {}, {}, {}, {}, {}, {}};
    LevelOneMod L(p, k, n);
    i64 mod = ipow(p, k);
    S.lt = powmod(mod_norm(l, mod), t, mod);
    S.mons = monomials_of_weight(t, m);
    for (auto& mo : S.mons) S.top.push_back(L.numerator(mo, m));
    S.Dm = L.D(m);
    S.VDm = verschiebung(S.Dm, l);
    return S;
}

void add_lower(Setup& S, int J, WitnessSpace space)
{
    LevelOneMod L(S.p, S.k, S.n);
    std::vector<QSeries> low;
    for (auto& mo : monomials_of_weight(S.t - J, S.m)) low.push_back(L.numerator(mo, S.m));
    S.low = howell_series(low, S.p, S.k, S.n);
    std::vector<QSeries> wit;
    if (space == WitnessSpace::Old) {
        for (auto& h : low) {
            wit.push_back(h * S.VDm);
            wit.push_back(verschiebung(h, S.l) * S.Dm);
        }
    } else {
        wit = extended_piece(L, S.l, S.t - J + 24 * S.m);
    }
    S.wit = howell_series(wit, S.p, S.k, S.n);
}

QSeries cond_i(const Setup& S, const QSeries& G) { return G.scale(Rat(mod_norm(S.lt - 1, G.mod))); }

QSeries cond_ii(const Setup& S, const QSeries& G)
{
    return (verschiebung(G, S.l) * S.Dm).scale(Rat(S.lt)) - G * S.VDm;
}

// kernel over the unknowns (x | y | z) of the stacked conditions
ResidueMatrix solve(const Setup& S)
{
    const int nx = int(S.top.size()), ny = int(S.low.size()), nz = int(S.wit.size());
    ResidueMatrix M(S.p, S.k, 2 * S.n, nx + ny + nz);
    for (int i = 0; i < nx; ++i) {
        QSeries a = cond_i(S, S.top[i]), b = cond_ii(S, S.top[i]);
        for (int r = 0; r < S.n; ++r) {
            M.at(r, i) = a.r[r];
            M.at(S.n + r, i) = b.r[r];
        }
    }
    for (int i = 0; i < ny; ++i) {
        for (int r = 0; r < S.n; ++r) M.at(r, nx + i) = mod_norm(-S.low[i].r[r], M.mod);
    }
    for (int i = 0; i < nz; ++i) {
        for (int r = 0; r < S.n; ++r) M.at(S.n + r, nx + ny + i) = mod_norm(-S.wit[i].r[r], M.mod);
    }
    return howell_kernel(M);
}

void fill_group(CongruenceGroup& G, const Setup& S, const ResidueMatrix& K)
{
    const int nx = int(S.top.size()), n = S.n;
    // rows [G(x) | x]
    ResidueMatrix img(S.p, S.k, 0, n + nx);
    for (int i = 0; i < K.rows; ++i) {
        std::vector<i64> x(K.a.begin() + std::size_t(i) * K.cols, K.a.begin() + std::size_t(i) * K.cols + nx);
        QSeries f = combo(S.top, x, S.p, S.k, n);
        std::vector<i64> row = f.r;
        row.insert(row.end(), x.begin(), x.end());
        img.push_row(row);
    }
    ResidueMatrix H = howell_form(img);

    ResidueMatrix lower(S.p, S.k, 0, n);
    for (auto& s : S.low) lower.push_row(s.r);
    G.lower = howell_form(lower);

    ResidueMatrix span = G.lower;
    for (int i = 0; i < H.rows; ++i) {
        std::vector<i64> f(H.a.begin() + std::size_t(i) * H.cols, H.a.begin() + std::size_t(i) * H.cols + n);
        std::vector<i64> x(H.a.begin() + std::size_t(i) * H.cols + n, H.a.begin() + std::size_t(i + 1) * H.cols);
        int ord = order_mod_span(G.lower, f);
        if (ord == 0) continue;
        span.push_row(f);
        G.generators.push_back({x, QSeries::residues(S.p, S.k, f), ord});
        G.exponent_exp = std::max(G.exponent_exp, ord);
    }
    G.span = howell_form(span);
    G.log_order = howell_log_size(G.span) - howell_log_size(G.lower);
}

int work_precision(int t, long l, int m, int prec)
{
    return std::max(prec, sturm_bound(t + 12 * m, l, m));
}

}  // namespace

CongruenceGroup compute_A(long p, long l, int t, int j, int m_max, int prec)
{
    check_primes(p, l);
    if (j < 1) throw precondition_error("j must be positive");
    if (m_max < 0) throw precondition_error("m_max must be nonnegative");
    int need = sturm_bound(t, l, m_max);
    if (prec < need) {
        throw precision_error("prec " + std::to_string(prec) + " below the Sturm bound " + std::to_string(need));
    }
    CongruenceGroup G;
    G.kind = 'A';
    G.p = p;
    G.l = l;
    G.t = t;
    G.j = j;
    G.k = j;
    G.m_max = m_max;
    G.prec = prec;
    G.work_prec = work_precision(t, l, m_max, prec);
    Setup S = make_setup(p, l, t, j, m_max, G.work_prec);
    G.monomials = S.mons;
    G.lower = ResidueMatrix(p, j, 0, S.n);
    G.span = G.lower;
    if (S.top.empty()) return G;
    fill_group(G, S, solve(S));
    return G;
}

CongruenceGroup compute_B(long p, long l, int t, int j, int k, int m_max, int prec, WitnessSpace space)
{
    check_primes(p, l);
    if (k < 1 || j < 1) throw precondition_error("j and k must be positive");
    if (m_max < 0) throw precondition_error("m_max must be nonnegative");
    i64 step = (p - 1) * ipow(p, k - 1);
    if (j % step) {
        throw precondition_error("j = " + std::to_string(j) + " is not divisible by (p-1)p^(k-1) = " +
                                 std::to_string(step));
    }
    int need = sturm_bound(t, l, m_max);
    if (prec < need) {
        throw precision_error("prec " + std::to_string(prec) + " below the Sturm bound " + std::to_string(need));
    }
    CongruenceGroup G;
    G.kind = 'B';
    G.p = p;
    G.l = l;
    G.t = t;
    G.j = j;
    G.k = k;
    G.m_max = m_max;
    G.prec = prec;
    G.space = space;
    G.work_prec = work_precision(t, l, m_max, prec);
    Setup S = make_setup(p, l, t, k, m_max, G.work_prec);
    G.monomials = S.mons;
    G.lower = ResidueMatrix(p, k, 0, S.n);
    G.span = G.lower;
    if (!S.top.empty()) {
        add_lower(S, j, space);
        fill_group(G, S, solve(S));
    }
    if (G.exponent_exp >= k) {
        G.verdict = Verdict::WitnessFound;
    } else {
        G.verdict = space == WitnessSpace::Old ? Verdict::NoWitnessInOldSubspace : Verdict::NoWitnessInSearchedSubspace;
    }
    return G;
}

int member_order(const CongruenceGroup& G, const QSeries& numerator)
{
    QSeries s = numerator.dom == Domain::Rational ? numerator.reduce(G.p, G.k) : numerator;
    if (s.prec() < G.span.cols) throw precision_error("series shorter than the group's working precision");
    std::vector<i64> v(s.r.begin(), s.r.begin() + G.span.cols);
    if (!howell_contains(G.span, v)) return -1;
    return order_mod_span(G.lower, v);
}

bool self_verify(const CongruenceGroup& G, int prec)
{
    if (G.monomials.empty()) return G.generators.empty();
    Setup S = make_setup(G.p, G.l, G.t, G.k, G.m_max, prec);
    if (G.kind == 'B') add_lower(S, G.j, G.space);
    ResidueMatrix low(G.p, G.k, 0, prec), wit(G.p, G.k, 0, prec);
    for (auto& s : S.low) low.push_row(s.r);
    for (auto& s : S.wit) wit.push_row(s.r);
    low = howell_form(low);
    wit = howell_form(wit);
    for (auto& g : G.generators) {
        QSeries f = combo(S.top, g.coords, G.p, G.k, prec);
        QSeries a = cond_i(S, f), b = cond_ii(S, f);
        if (G.kind == 'A') {
            if (!a.is_zero() || !b.is_zero()) return false;
        } else if (!howell_contains(low, a.r) || !howell_contains(wit, b.r)) {
            return false;
        }
    }
    return true;
}

SerreResult serre_congruence_check(const WeightedForm& f1, const WeightedForm& f2, long p, int k)
{
    if (p <= 3 || !is_prime(p)) throw precondition_error("p must be a prime > 3");
    const WeightedForm* a = &f1;
    const WeightedForm* b = &f2;
    if (a->weight > b->weight) std::swap(a, b);
    int n = std::min(a->series.prec(), b->series.prec());
    LevelOneMod L(p, k, n);
    // a/Delta^ma vs b/Delta^mb, compared after clearing both poles
    QSeries A = a->series.reduce(p, k).truncate(n) * L.D(b->pole);
    QSeries B = b->series.reduce(p, k).truncate(n) * L.D(a->pole);
    if (!(A == B)) throw precondition_error("forms are not congruent mod p^k");
    long diff = long(b->weight) - a->weight;
    long step = (p - 1) * ipow(p, k - 1);
    if (diff % step) return SerreResult::WeightViolation;
    QSeries E = eisenstein(int(p - 1), n).reduce(p, k).pow(int(diff / (p - 1)));
    if (!(E * A == B)) return SerreResult::CongruenceViolation;
    return SerreResult::Consistent;
}

}  // namespace chromo
