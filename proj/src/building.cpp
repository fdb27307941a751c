#include "chromo/building.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>

#include "chromo/hermitian.hpp"

namespace chromo {

namespace {

Rat lpow(long l, long e)
{
    Int p;
    mpz_ui_pow_ui(p.get_mpz_t(), l, std::labs(e));
    return e >= 0 ? Rat(p) : Rat(Int(1), p);
}

long vl(const Rat& x, long l)
{
    return val_p(x, l).value;
}

// representative of x mod l^v Z_(l): l^w * (unit residue mod l^(v-w))
Rat canon(const Rat& x, long v, long l)
{
    if (x == 0) return 0;
    long w = vl(x, l);
    if (w >= v) return 0;
    Rat u = x / lpow(l, w);
    Int M;
    mpz_ui_pow_ui(M.get_mpz_t(), l, v - w);
    Int inv;
    Int den = u.get_den();
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), M.get_mpz_t());
    Int r = (Int(u.get_num()) * inv) % M;
    if (r < 0) r += M;
    return Rat(r) * lpow(l, w);
}

using Row = std::vector<Rat>;

void axpy(Row& y, const Rat& a, const Row& x)
{
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (x[i] != 0) y[i] -= a * x[i];
    }
}

Row to_coords(const LocalRing& R, const KVec& v)
{
    Row r;
    for (auto& e : v) {
        r.push_back(e.a);
        if (R.f() == 2) r.push_back(e.b);
    }
    return r;
}

KVec from_coords(const LocalRing& R, const Row& r)
{
    KVec v;
    for (std::size_t i = 0; i < r.size(); i += R.f()) v.push_back({r[i], R.f() == 2 ? r[i + 1] : Rat(0)});
    return v;
}

KVec kscale(const LocalRing& R, const KElt& c, const KVec& v)
{
    KVec out;
    for (auto& e : v) out.push_back(kmul(R, c, e));
    return out;
}

KElt kadd(const KElt& x, const KElt& y)
{
    return {x.a + y.a, x.b + y.b};
}

KElt ksub(const KElt& x, const KElt& y)
{
    return {x.a - y.a, x.b - y.b};
}

bool kzero(const KElt& x)
{
    return x.a == 0 && x.b == 0;
}

Lattice make(const LocalRing& R, int n, std::vector<Row> rows)
{
    Lattice L;
    L.R = R;
    L.n = n;
    L.H = hnf_rows(std::move(rows), n * R.f(), R.l);
    return L;
}

long vol(const Lattice& L)
{
    long s = 0;
    for (int i = 0; i < L.N(); ++i) s += vl(L.H[i][i], L.R.l);
    return s;
}

// l-length of L / pi L
long pi_step(const Lattice& L)
{
    return L.R.ext == Ext::Ramified ? L.n : L.N();
}

std::vector<std::vector<Rat>> inverse(std::vector<std::vector<Rat>> A)
{
    int n = int(A.size());
    std::vector<std::vector<Rat>> I(n, Row(n, 0));
    for (int i = 0; i < n; ++i) I[i][i] = 1;
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (p < n && A[p][c] == 0) ++p;
        if (p == n) throw precondition_error("singular matrix");
        std::swap(A[p], A[c]);
        std::swap(I[p], I[c]);
        Rat piv = A[c][c];
        for (int j = 0; j < n; ++j) {
            A[c][j] /= piv;
            I[c][j] /= piv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || A[r][c] == 0) continue;
            Rat q = A[r][c];
            axpy(A[r], q, A[c]);
            axpy(I[r], q, I[c]);
        }
    }
    return I;
}

}  // namespace

LocalRing make_ring(long l, Ext ext, long d)
{
    if (l < 2 || !is_prime(l)) throw precondition_error("l must be prime");
    LocalRing R{l, ext, d};
    if (ext == Ext::None) {
        R.d = 0;
        return R;
    }
    if (l == 2) throw precondition_error("quadratic extensions are supported only for odd l");
    if (squarefree_part(d) != d || d == 1 || d == 0) throw precondition_error("d must be squarefree and not 1");
    if (ext == Ext::Inert && (d % l == 0 || powmod(mod_norm(d, l), (l - 1) / 2, l) == 1)) {
        throw precondition_error("inert extension needs d a unit non-residue");
    }
    if (ext == Ext::Ramified && d % l != 0) throw precondition_error("ramified extension needs l | d");
    return R;
}

std::string to_string(const LocalRing& R)
{
    std::string s = "Q_" + std::to_string(R.l);
    if (R.ext == Ext::Inert) s += "(sqrt " + std::to_string(R.d) + ", inert)";
    if (R.ext == Ext::Ramified) s += "(sqrt " + std::to_string(R.d) + ", ramified)";
    return s;
}

KElt kmul(const LocalRing& R, const KElt& x, const KElt& y)
{
    return {x.a * y.a + Rat(R.d) * x.b * y.b, x.a * y.b + x.b * y.a};
}

KElt kconj(const KElt& x)
{
    return {x.a, -x.b};
}

KElt kinv(const LocalRing& R, const KElt& x)
{
    Rat nrm = x.a * x.a - Rat(R.d) * x.b * x.b;
    if (nrm == 0) throw precondition_error("division by zero in K");
    return {x.a / nrm, -x.b / nrm};
}

KElt kpi(const LocalRing& R)
{
    if (R.ext == Ext::Ramified) return {0, 1};
    return {R.l, 0};
}

KMat kmat_mul(const LocalRing& R, const KMat& A, const KMat& B)
{
    std::size_t n = A.size(), m = B[0].size(), k = B.size();
    KMat C(n, KVec(m));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            KElt s;
            for (std::size_t t = 0; t < k; ++t) s = kadd(s, kmul(R, A[i][t], B[t][j]));
            C[i][j] = s;
        }
    }
    return C;
}

KMat kmat_identity(int n)
{
    KMat I(n, KVec(n));
    for (int i = 0; i < n; ++i) I[i][i] = {1, 0};
    return I;
}

std::string Lattice::key() const
{
    std::string s;
    for (std::size_t i = 0; i < H.size(); ++i) {
        if (i) s += ";";
        for (std::size_t j = 0; j < H[i].size(); ++j) {
            if (j) s += ",";
            s += rat_str(H[i][j]);
        }
    }
    return s;
}

std::vector<std::vector<Rat>> hnf_rows(std::vector<std::vector<Rat>> rows, int N, long l)
{
    for (auto& r : rows) {
        for (auto& x : r) x.canonicalize();
    }
    int r0 = 0;
    for (int c = 0; c < N; ++c) {
        int best = -1;
        long bv = 0;
        for (int i = r0; i < int(rows.size()); ++i) {
            if (rows[i][c] == 0) continue;
            long v = vl(rows[i][c], l);
            if (best < 0 || v < bv) {
                best = i;
                bv = v;
            }
        }
        if (best < 0) throw precondition_error("generators do not span a full-rank lattice");
        std::swap(rows[best], rows[r0]);
        Rat unit = lpow(l, bv) / rows[r0][c];
        for (auto& x : rows[r0]) x *= unit;
        for (int i = r0 + 1; i < int(rows.size()); ++i) {
            if (rows[i][c] == 0) continue;
            axpy(rows[i], rows[i][c] / rows[r0][c], rows[r0]);
        }
        ++r0;
    }
    rows.resize(N);
    for (int c = 0; c < N; ++c) {
        long v = vl(rows[c][c], l);
        for (int r = 0; r < c; ++r) {
            Rat x = rows[r][c];
            Rat rep = canon(x, v, l);
            if (x != rep) axpy(rows[r], (x - rep) / rows[c][c], rows[c]);
        }
    }
    return rows;
}

Lattice lattice_from_generators(const LocalRing& R, int n, const std::vector<KVec>& gens)
{
    std::vector<Row> rows;
    for (auto& g : gens) {
        if (int(g.size()) != n) throw precondition_error("generator has the wrong length");
        rows.push_back(to_coords(R, g));
        if (R.f() == 2) rows.push_back(to_coords(R, kscale(R, {0, 1}, g)));
    }
    return make(R, n, rows);
}

Lattice standard_lattice(const LocalRing& R, int n)
{
    std::vector<KVec> g;
    for (int i = 0; i < n; ++i) {
        KVec e(n);
        e[i] = {1, 0};
        g.push_back(e);
    }
    return lattice_from_generators(R, n, g);
}

Lattice hnf_normalize(const Lattice& L)
{
    return make(L.R, L.n, L.H);
}

bool contains(const Lattice& big, const Lattice& small)
{
    int N = big.N();
    for (auto& m : small.H) {
        Row x(N);
        for (int c = 0; c < N; ++c) {
            Rat s = m[c];
            for (int r = 0; r < c; ++r) {
                if (x[r] != 0) s -= x[r] * big.H[r][c];
            }
            x[c] = s / big.H[c][c];
            if (x[c] != 0 && vl(x[c], big.R.l) < 0) return false;
        }
    }
    return true;
}

long ell_index(const Lattice& big, const Lattice& small)
{
    return vol(small) - vol(big);
}

long o_length(const Lattice& big, const Lattice& small)
{
    return ell_index(big, small) / big.R.res_deg();
}

std::vector<KVec> row_vectors(const Lattice& L)
{
    std::vector<KVec> out;
    for (auto& r : L.H) out.push_back(from_coords(L.R, r));
    return out;
}

Lattice scale_pi(const Lattice& L, long k)
{
    if (k == 0) return L;
    KElt c = kpi(L.R);
    KElt s{1, 0};
    for (long i = 0; i < std::labs(k); ++i) s = kmul(L.R, s, c);
    if (k < 0) s = kinv(L.R, s);
    std::vector<Row> rows;
    for (auto& v : row_vectors(L)) rows.push_back(to_coords(L.R, kscale(L.R, s, v)));
    return make(L.R, L.n, rows);
}

Lattice lattice_sum(const Lattice& A, const Lattice& B)
{
    auto rows = A.H;
    rows.insert(rows.end(), B.H.begin(), B.H.end());
    return make(A.R, A.n, rows);
}

Lattice apply_matrix(const KMat& g, const Lattice& L)
{
    std::vector<Row> rows;
    for (auto& v : row_vectors(L)) {
        KVec w(L.n);
        for (int i = 0; i < L.n; ++i) {
            for (int j = 0; j < L.n; ++j) w[i] = kadd(w[i], kmul(L.R, g[i][j], v[j]));
        }
        rows.push_back(to_coords(L.R, w));
    }
    return make(L.R, L.n, rows);
}

Lattice class_rep(const Lattice& L)
{
    long m = 0;
    bool first = true;
    for (auto& r : L.H) {
        for (auto& x : r) {
            if (x == 0) continue;
            long v = vl(x, L.R.l);
            if (first || v < m) m = v;
            first = false;
        }
    }
    long per_l = L.R.ext == Ext::Ramified ? 2 : 1;
    Lattice M = scale_pi(L, -m * per_l);
    Lattice S = standard_lattice(L.R, L.n);
    while (contains(S, scale_pi(M, -1))) M = scale_pi(M, -1);
    return M;
}

std::vector<Lattice> sublattices_of_index(const Lattice& L, long s, long budget)
{
    long k = 0, t = s;
    while (t % L.R.l == 0) {
        t /= L.R.l;
        ++k;
    }
    if (t != 1 || s < 1) throw precondition_error("index must be a power of l");
    int N = L.N();
    std::vector<Lattice> out;
    std::set<std::string> seen;
    long visited = 0;
    std::vector<long> e(N, 0);
    auto emit = [&] {
        // entries above the pivot of column j range over [0, l^e_j)
        std::vector<std::pair<int, int>> slots;
        std::vector<long> range;
        for (int j = 0; j < N; ++j) {
            for (int i = 0; i < j; ++i) {
                slots.push_back({i, j});
                range.push_back(ipow(L.R.l, int(e[j])));
            }
        }
        std::vector<long> cur(slots.size(), 0);
        while (true) {
            if (++visited > budget) throw budget_error("sublattice enumeration exceeds the budget");
            std::vector<Row> T(N, Row(N, 0));
            for (int i = 0; i < N; ++i) T[i][i] = lpow(L.R.l, e[i]);
            for (std::size_t q = 0; q < slots.size(); ++q) T[slots[q].first][slots[q].second] = cur[q];
            std::vector<Row> rows(N, Row(N, 0));
            for (int i = 0; i < N; ++i) {
                for (int j = 0; j < N; ++j) {
                    if (T[i][j] == 0) continue;
                    for (int c = 0; c < N; ++c) rows[i][c] += T[i][j] * L.H[j][c];
                }
            }
            Lattice M = make(L.R, L.n, rows);
            bool ok = true;
            if (L.R.f() == 2) {
                KMat m = kmat_identity(L.n);
                for (int i = 0; i < L.n; ++i) m[i][i] = {0, 1};
                ok = contains(M, apply_matrix(m, M));
            }
            if (ok && seen.insert(M.key()).second) out.push_back(M);
            std::size_t q = 0;
            while (q < cur.size() && ++cur[q] == range[q]) cur[q++] = 0;
            if (q == cur.size()) break;
        }
    };
    std::function<void(int, long)> rec = [&](int i, long left) {
        if (i == N - 1) {
            e[i] = left;
            emit();
            return;
        }
        for (long a = 0; a <= left; ++a) {
            e[i] = a;
            rec(i + 1, left - a);
        }
    };
    rec(0, k);
    return out;
}

LatticeChain chamber_from_basis_GL(const LocalRing& R, const std::vector<KVec>& v)
{
    int n = int(v.size());
    KElt pinv = kinv(R, kpi(R));
    LatticeChain C;
    for (int i = 0; i <= n; ++i) {
        std::vector<KVec> g;
        for (int j = 0; j < n; ++j) g.push_back(j < i ? kscale(R, pinv, v[j]) : v[j]);
        C.lattices.push_back(lattice_from_generators(R, n, g));
    }
    for (int i = 0; i < n; ++i) {
        if (C.lattices[i] == C.lattices[i + 1]) throw precondition_error("chamber basis is dependent");
    }
    C.periodic = contains(scale_pi(C.lattices[0], -1), C.lattices[n]);
    return C;
}

Rat non_norm_generator(const LocalRing& R)
{
    if (R.ext == Ext::None) throw precondition_error("norm group needs a quadratic extension");
    if (R.ext == Ext::Inert) return Rat(R.l);
    for (long u = 2;; ++u) {
        if (!is_norm(R, Rat(u))) return Rat(u);
    }
}

bool is_norm(const LocalRing& R, const Rat& x)
{
    if (R.ext == Ext::None) return true;
    return hilbert_symbol(x, Rat(R.d), R.l) == 1;
}

KElt form(const HermitianSpace& H, const KVec& x, const KVec& y)
{
    KElt s;
    for (int i = 0; i < H.n; ++i) {
        if (kzero(x[i])) continue;
        for (int j = 0; j < H.n; ++j) {
            if (kzero(H.gram[i][j]) || kzero(y[j])) continue;
            s = kadd(s, kmul(H.R, kmul(H.R, x[i], H.gram[i][j]), kconj(y[j])));
        }
    }
    return s;
}

HermitianSpace hermitian_space(const LocalRing& R, int n, bool disc_match)
{
    if (R.ext == Ext::None) throw precondition_error("hermitian spaces need a quadratic extension");
    if (n < 1) throw precondition_error("n must be positive");
    HermitianSpace H;
    H.R = R;
    H.n = n;
    H.disc_match = disc_match;
    H.a = non_norm_generator(R);
    H.gram.assign(n, KVec(n));
    int hyp = (n % 2 == 0) ? (disc_match ? n : n - 2) : n - 1;
    for (int i = 0; i < hyp; ++i) H.gram[i][hyp - 1 - i] = {1, 0};
    std::vector<Rat> tail;
    if (n % 2 == 0 && !disc_match) tail = {1, -H.a};
    if (n % 2 == 1) tail = {disc_match ? Rat(1) : H.a};
    long vn = R.ext == Ext::Inert ? 2 : 1;  // v_l N(pi)
    for (std::size_t t = 0; t < tail.size(); ++t) {
        int k = hyp + int(t);
        H.gram[k][k] = {tail[t], 0};
        H.kernel.push_back(k);
        long v = vl(tail[t], R.l);
        // least shift with v + vn * shift >= 0
        long sh = v >= 0 ? -(v / vn) : (-v + vn - 1) / vn;
        H.kernel_shift.push_back(sh);
    }
    H.r = hyp / 2;
    return H;
}

int witt_index(const HermitianSpace& H)
{
    const LocalRing& R = H.R;
    std::vector<KVec> basis;
    for (int i = 0; i < H.n; ++i) {
        KVec e(H.n);
        e[i] = {1, 0};
        basis.push_back(e);
    }
    std::vector<Rat> diag;
    while (!basis.empty()) {
        int pick = -1;
        for (std::size_t i = 0; i < basis.size() && pick < 0; ++i) {
            if (!kzero(form(H, basis[i], basis[i]))) pick = int(i);
        }
        if (pick < 0) {
            // all remaining vectors isotropic: combine a non-orthogonal pair
            for (std::size_t i = 0; i < basis.size() && pick < 0; ++i) {
                for (std::size_t j = i + 1; j < basis.size() && pick < 0; ++j) {
                    if (kzero(form(H, basis[i], basis[j]))) continue;
                    for (KElt t : {KElt{1, 0}, KElt{0, 1}}) {
                        KVec w = basis[i];
                        auto tj = kscale(R, t, basis[j]);
                        for (int c = 0; c < H.n; ++c) w[c] = kadd(w[c], tj[c]);
                        if (!kzero(form(H, w, w))) {
                            basis[i] = w;
                            pick = int(i);
                            break;
                        }
                    }
                }
            }
            if (pick < 0) throw precondition_error("degenerate form");
        }
        KVec v = basis[pick];
        basis.erase(basis.begin() + pick);
        KElt vv = form(H, v, v);
        diag.push_back(vv.a);
        KElt inv = kinv(R, vv);
        for (auto& w : basis) {
            KElt c = kmul(R, form(H, w, v), inv);
            auto cv = kscale(R, c, v);
            for (int k = 0; k < H.n; ++k) w[k] = ksub(w[k], cv[k]);
        }
    }
    Rat det = 1;
    for (auto& c : diag) det *= c;
    int m = int(diag.size()), r = 0;
    while (m >= 3) {
        ++r;
        m -= 2;
        det = -det;
    }
    if (m == 2 && is_norm(R, -det)) ++r;
    return r;
}

Lattice dual_lattice(const Lattice& L, const HermitianSpace& H)
{
    const LocalRing& R = L.R;
    int N = L.N();
    std::vector<Row> fun;
    for (auto& u : row_vectors(L)) {
        // (w,u) = sum_i w_i c_i
        KVec c(L.n);
        for (int i = 0; i < L.n; ++i) {
            for (int j = 0; j < L.n; ++j) c[i] = kadd(c[i], kmul(R, H.gram[i][j], kconj(u[j])));
        }
        Row re, im;
        for (auto& ci : c) {
            if (R.f() == 1) {
                re.push_back(ci.a);
            } else {
                re.push_back(ci.a);
                re.push_back(Rat(R.d) * ci.b);
                im.push_back(ci.b);
                im.push_back(ci.a);
            }
        }
        fun.push_back(re);
        if (R.f() == 2) fun.push_back(im);
    }
    auto B = hnf_rows(fun, N, R.l);
    auto Bi = inverse(B);
    std::vector<Row> rows(N, Row(N));
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) rows[i][j] = Bi[j][i];
    }
    return make(R, L.n, rows);
}

PreferredInfo is_preferred(const Lattice& L, const HermitianSpace& H)
{
    Lattice D = dual_lattice(L, H);
    PreferredInfo p;
    if (contains(D, L) && contains(scale_pi(L, -1), D)) {
        p.preferred = true;
        p.type = o_length(D, L);
    }
    return p;
}

std::optional<Lattice> preferred_in_class(const Lattice& L, const HermitianSpace& H)
{
    Lattice D = dual_lattice(L, H);
    long delta = vol(L) - vol(D), step = pi_step(L);
    // length((pi^j L)^# / pi^j L) = delta + 2 j step must lie in [0, step]
    long num = -delta, den = 2 * step;
    long j = num >= 0 ? (num + den - 1) / den : -((-num) / den);
    for (long c : {j - 1, j, j + 1}) {
        Lattice M = scale_pi(L, c);
        if (is_preferred(M, H).preferred) return M;
    }
    return std::nullopt;
}

Lattice anisotropic_kernel_lattice(const HermitianSpace& H)
{
    std::vector<KVec> g;
    KElt pi = kpi(H.R);
    for (std::size_t t = 0; t < H.kernel.size(); ++t) {
        KElt s{1, 0};
        long sh = H.kernel_shift[t];
        for (long i = 0; i < std::labs(sh); ++i) s = kmul(H.R, s, pi);
        if (sh < 0) s = kinv(H.R, s);
        KVec e(H.kernel.size());
        e[t] = s;
        g.push_back(e);
    }
    if (g.empty()) throw precondition_error("the space has no anisotropic kernel");
    return lattice_from_generators(H.R, int(g.size()), g);
}

std::vector<KVec> standard_hyperbolic_basis(const HermitianSpace& H)
{
    std::vector<KVec> v;
    for (int i = 0; i < 2 * H.r; ++i) {
        KVec e(H.n);
        e[i] = {1, 0};
        v.push_back(e);
    }
    return v;
}

LatticeChain chamber_from_hyperbolic_basis_U(const HermitianSpace& H, const std::vector<KVec>& v)
{
    int r2 = int(v.size());
    if (r2 != 2 * H.r) throw precondition_error("hyperbolic basis must have 2r vectors");
    for (int i = 0; i < r2; ++i) {
        for (int j = 0; j < r2; ++j) {
            KElt want = (i + j == r2 - 1) ? KElt{1, 0} : KElt{0, 0};
            if (!(form(H, v[i], v[j]) == want)) throw precondition_error("basis is not a normalized hyperbolic basis");
        }
        for (int k : H.kernel) {
            KVec e(H.n);
            e[k] = {1, 0};
            if (!kzero(form(H, v[i], e))) throw precondition_error("basis must be orthogonal to the anisotropic kernel");
        }
    }
    std::vector<KVec> X;
    KElt pi = kpi(H.R);
    for (std::size_t t = 0; t < H.kernel.size(); ++t) {
        KElt s{1, 0};
        long sh = H.kernel_shift[t];
        for (long i = 0; i < std::labs(sh); ++i) s = kmul(H.R, s, pi);
        if (sh < 0) s = kinv(H.R, s);
        KVec e(H.n);
        e[H.kernel[t]] = s;
        X.push_back(e);
    }
    LatticeChain C;
    for (int i = 0; i <= H.r; ++i) {
        std::vector<KVec> g = X;
        for (int j = 0; j < r2; ++j) g.push_back(j < H.r - i ? kscale(H.R, pi, v[j]) : v[j]);
        C.lattices.push_back(lattice_from_generators(H.R, H.n, g));
    }
    for (auto& L : C.lattices) {
        if (!is_preferred(L, H).preferred) throw precondition_error("chamber lattice is not preferred");
    }
    C.periodic = contains(scale_pi(C.lattices.front(), -1), C.lattices.back());
    return C;
}

std::optional<Rat> similitude_norm(const KMat& g, const HermitianSpace& H)
{
    // g^* G g = nu G with g acting on column vectors
    std::vector<KVec> cols(H.n, KVec(H.n));
    for (int i = 0; i < H.n; ++i) {
        for (int j = 0; j < H.n; ++j) cols[j][i] = g[i][j];
    }
    std::optional<Rat> nu;
    for (int i = 0; i < H.n; ++i) {
        for (int j = 0; j < H.n; ++j) {
            KElt lhs = form(H, cols[i], cols[j]);
            const KElt& G = H.gram[i][j];
            if (kzero(G)) {
                if (!kzero(lhs)) return std::nullopt;
                continue;
            }
            KElt q = kmul(H.R, lhs, kinv(H.R, G));
            if (q.b != 0) return std::nullopt;
            if (nu && *nu != q.a) return std::nullopt;
            nu = q.a;
        }
    }
    if (!nu || *nu == 0) return std::nullopt;
    return nu;
}

Lattice gu_act(const KMat& g, const Lattice& L, const HermitianSpace& H)
{
    auto nu = similitude_norm(g, H);
    if (!nu) throw precondition_error("g is not a similitude of the form");
    if (!is_preferred(L, H).preferred) throw precondition_error("gu_act needs a preferred lattice");
    // valuation of nu measured in the uniformizer of K
    long k = vl(*nu, H.R.l) * (H.R.ext == Ext::Ramified ? 2 : 1);
    Lattice M = apply_matrix(g, L);
    if (k % 2 != 0) M = dual_lattice(M, H);
    auto P = preferred_in_class(M, H);
    if (!P) throw std::logic_error("gu_act: image class has no preferred lattice");
    return *P;
}

LinkCensus link_census_SL(const LocalRing& R, int n, long budget)
{
    if (R.ext != Ext::None) throw precondition_error("SL census runs over Q_l");
    Lattice L = standard_lattice(R, n);
    Lattice piL = scale_pi(L, 1);
    LinkCensus c;
    c.valence = long(neighbors_SL(L, budget).size());
    std::map<std::string, long> memo;
    std::function<long(const Lattice&)> flags = [&](const Lattice& M) -> long {
        if (M == piL) return 1;
        auto it = memo.find(M.key());
        if (it != memo.end()) return it->second;
        long s = 0;
        for (auto& M2 : sublattices_of_index(M, R.l, budget)) {
            if (contains(M2, piL)) s += flags(M2);
        }
        return memo[M.key()] = s;
    };
    c.chambers = flags(L);
    if (n == 2) {
        c.min_panel = c.valence;
        return c;
    }
    // panels through L: a full flag with one intermediate lattice removed
    c.min_panel = -1;
    std::vector<Lattice> chain{L};
    std::function<void()> walk = [&] {
        const Lattice& top = chain.back();
        if (top == piL) {
            for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
                long fill = 0;
                for (auto& M : sublattices_of_index(chain[i - 1], R.l, budget)) {
                    if (contains(M, chain[i + 1])) ++fill;
                }
                if (c.min_panel < 0 || fill < c.min_panel) c.min_panel = fill;
            }
            return;
        }
        for (auto& M : sublattices_of_index(top, R.l, budget)) {
            if (!contains(M, piL)) continue;
            chain.push_back(M);
            walk();
            chain.pop_back();
        }
    };
    walk();
    return c;
}

int LatticeIntern::id(const Lattice& L)
{
    auto k = L.key();
    {
        std::shared_lock lk(mu_);
        auto it = ids_.find(k);
        if (it != ids_.end()) return it->second;
    }
    std::unique_lock lk(mu_);
    auto [it, fresh] = ids_.emplace(k, int(all_.size()));
    if (fresh) all_.push_back(L);
    return it->second;
}

std::optional<int> LatticeIntern::find(const Lattice& L) const
{
    std::shared_lock lk(mu_);
    auto it = ids_.find(L.key());
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

Lattice LatticeIntern::at(int i) const
{
    std::shared_lock lk(mu_);
    return all_.at(i);
}

std::size_t LatticeIntern::size() const
{
    std::shared_lock lk(mu_);
    return all_.size();
}

std::vector<Lattice> neighbors_SL(const Lattice& L, long budget)
{
    Lattice piL = scale_pi(L, 1);
    std::vector<Lattice> out;
    long top = ell_index(L, piL);
    for (long k = 1; k < top; ++k) {
        for (auto& M : sublattices_of_index(L, ipow(L.R.l, int(k)), budget)) {
            if (contains(M, piL)) out.push_back(class_rep(M));
        }
    }
    return out;
}

namespace {

Ball bfs(const Lattice& centre, int radius, const std::function<std::vector<Lattice>(const Lattice&)>& nbrs)
{
    LatticeIntern in;
    Ball B;
    in.id(centre);
    B.dist.push_back(0);
    std::set<std::pair<int, int>> edges;
    for (std::size_t head = 0; head < in.size(); ++head) {
        int d = B.dist[head];
        if (d == radius) continue;
        for (auto& M : nbrs(in.at(int(head)))) {
            bool fresh = !in.find(M);
            int j = in.id(M);
            if (fresh) B.dist.push_back(d + 1);
            if (int(head) != j) edges.insert({std::min(int(head), j), std::max(int(head), j)});
        }
    }
    for (std::size_t i = 0; i < in.size(); ++i) B.vertices.push_back(in.at(int(i)));
    B.edges.assign(edges.begin(), edges.end());
    return B;
}

}  // namespace

Ball ball_SL(const LocalRing& R, int n, int radius, long budget)
{
    if (R.ext != Ext::None) throw precondition_error("SL ball runs over Q_l");
    return bfs(class_rep(standard_lattice(R, n)), radius, [&](const Lattice& L) { return neighbors_SL(L, budget); });
}

Ball ball_U(const HermitianSpace& H, int radius, long budget)
{
    auto C = chamber_from_hyperbolic_basis_U(H, standard_hyperbolic_basis(H));
    auto nbrs = [&](const Lattice& L) {
        std::vector<Lattice> out;
        Lattice piL = scale_pi(L, 1), up = scale_pi(L, -1);
        long top = ell_index(L, piL);
        for (long k = 1; k < top; ++k) {
            for (auto& M : sublattices_of_index(L, ipow(L.R.l, int(k)), budget)) {
                if (contains(M, piL) && is_preferred(M, H).preferred) out.push_back(M);
            }
            for (auto& M : sublattices_of_index(up, ipow(L.R.l, int(k)), budget)) {
                if (contains(M, L) && is_preferred(M, H).preferred) out.push_back(M);
            }
        }
        return out;
    };
    return bfs(C.lattices.back(), radius, nbrs);
}

std::string to_dot(const Ball& B)
{
    std::ostringstream o;
    o << "graph ball {\n";
    for (std::size_t i = 0; i < B.vertices.size(); ++i) {
        o << "  v" << i << " [label=\"" << B.vertices[i].key() << "\", dist=" << B.dist[i] << "];\n";
    }
    for (auto& [a, b] : B.edges) o << "  v" << a << " -- v" << b << ";\n";
    o << "}\n";
    return o.str();
}

std::vector<SkeletonOrbit> resolution_skeleton(const HermitianSpace& H, int s)
{
    if (s < 0 || s > H.r) throw precondition_error("simplex dimension must lie in [0, r]");
    auto C = chamber_from_hyperbolic_basis_U(H, standard_hyperbolic_basis(H));
    std::vector<long> type;
    for (auto& L : C.lattices) type.push_back(is_preferred(L, H).type);
    std::vector<SkeletonOrbit> out;
    int m = H.r + 1;
    for (int mask = 0; mask < (1 << m); ++mask) {
        if (__builtin_popcount(mask) != s + 1) continue;
        SkeletonOrbit o;
        for (int i = 0; i < m; ++i) {
            if (!(mask >> i & 1)) continue;
            o.faces.push_back(i);
            o.types.push_back(type[i]);
            o.stabilized.push_back(C.lattices[i]);
        }
        out.push_back(o);
    }
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.faces < b.faces; });
    // faces whose type multisets coincide cannot be separated by invariants
    for (auto& a : out) {
        for (auto& b : out) {
            if (&a == &b) continue;
            auto ta = a.types, tb = b.types;
            std::sort(ta.begin(), ta.end());
            std::sort(tb.begin(), tb.end());
            if (ta == tb) a.undecided = true;
        }
    }
    return out;
}

std::vector<IsotropyRow> isotropy_table(const LocalRing& R, int n_max)
{
    std::vector<IsotropyRow> rows;
    for (int n = 1; n <= n_max; ++n) {
        for (bool match : {true, false}) {
            auto H = hermitian_space(R, n, match);
            IsotropyRow row;
            row.n = n;
            row.disc_match = match;
            row.r_table = H.r;
            row.r_computed = witt_index(H);
            if (n % 2) {
                row.label = "(n-1)/2";
            } else {
                row.label = match ? "n/2" : "(n-2)/2";
            }
            row.building_dim = row.r_computed;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace chromo
