#include "chromo/arith.hpp"

#include <algorithm>
#include <numeric>

namespace chromo {

Valuation val_p(const Int& x, long p)
{
    if (x == 0) return Valuation::inf();
    Int y = abs(x);
    Int P = p;
    long v = 0;
    while (mpz_divisible_p(y.get_mpz_t(), P.get_mpz_t())) {
        y /= P;
        ++v;
    }
    return Valuation::of(v);
}

Valuation val_p(const Rat& x, long p)
{
    if (x == 0) return Valuation::inf();
    return Valuation::of(val_p(Int(x.get_num()), p).value - val_p(Int(x.get_den()), p).value);
}

long vp_u64(std::uint64_t x, std::uint64_t p)
{
    long v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

Rat make_rat(const Int& n, const Int& d)
{
    if (d == 0) throw precondition_error("zero denominator");
    Rat r(n, d);
    r.canonicalize();
    return r;
}

Rat parse_rat(const std::string& s)
{
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return make_rat(Int(s));
        return make_rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
        throw precondition_error("not a rational: '" + s + "'");
    }
}

std::string rat_str(const Rat& x)
{
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string rat_frac(const Rat& x)
{
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rat frac_part(const Rat& x)
{
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    Rat r = x - Rat(q);
    r.canonicalize();
    return r;
}

Int lcm(const Int& a, const Int& b)
{
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

static std::uint64_t mulmod_u(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return (unsigned __int128)a * b % m;
}

static std::uint64_t powmod_u(std::uint64_t a, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u(r, a, m);
        a = mulmod_u(a, a, m);
        e >>= 1;
    }
    return r;
}

bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // deterministic base set for 64-bit inputs
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = powmod_u(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u(x, x, n);
            if (x == n - 1) {
                comp = false;
                break;
            }
        }
        if (comp) return false;
    }
    return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0) n /= q;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

long long squarefree_part(long long n)
{
    if (n == 0) return 0;
    long long s = n < 0 ? -1 : 1;
    unsigned long long m = n < 0 ? -(unsigned long long)n : n;
    long long r = 1;
    for (unsigned long long q = 2; q * q <= m; ++q) {
        int e = 0;
        while (m % q == 0) {
            m /= q;
            ++e;
        }
        if (e & 1) r *= q;
    }
    return s * r * (long long)m;
}

i64 gcd64(i64 a, i64 b) { return std::gcd(a, b); }

i64 mod_norm(i64 a, i64 m)
{
    a %= m;
    return a < 0 ? a + m : a;
}

i64 mulmod(i64 a, i64 b, i64 m) { return mod_norm(i64((i128)a * b % m), m); }

i64 invmod(i64 a, i64 m)
{
    if (m == 1) return 0;
    i64 r0 = mod_norm(a, m), r1 = m, u0 = 1, u1 = 0;
    while (r1) {
        i64 q = r0 / r1;
        i64 t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = u0 - q * u1;
        u0 = u1;
        u1 = t;
    }
    if (r0 != 1) throw precondition_error("not a unit mod " + std::to_string(m));
    return mod_norm(u0, m);
}

i64 powmod(i64 a, i64 e, i64 m)
{
    if (e < 0) {
        a = invmod(a, m);
        e = -e;
    }
    return i64(powmod_u(std::uint64_t(mod_norm(a, m)), std::uint64_t(e), std::uint64_t(m)));
}

i64 ipow(i64 b, int e)
{
    i64 r = 1;
    while (e-- > 0) r *= b;
    return r;
}

int kronecker(long long D, long long n)
{
    Int a = long(D), b = long(n);
    return mpz_kronecker(a.get_mpz_t(), b.get_mpz_t());
}

// ---- Z/p^k ----

i64 rat_mod(const Rat& x, i64 mod)
{
    Int m = mod;
    Int n = x.get_num() % m;
    Int d = x.get_den() % m;
    i64 ni = mod_norm(n.get_si(), mod);
    i64 di = mod_norm(d.get_si(), mod);
    return mulmod(ni, invmod(di, mod), mod);
}

ResidueElt residue(const Rat& x, i64 p, int k)
{
    i64 m = ipow(p, k);
    return {m, rat_mod(x, m)};
}

int val_res(i64 x, i64 p, int k)
{
    if (x == 0) return k;
    int v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return std::min(v, k);
}

ResidueMatrix::ResidueMatrix(i64 p_, int k_, int r, int c)
    : p(p_), k(k_), mod(ipow(p_, k_)), rows(r), cols(c), a(std::size_t(r) * c, 0)
{
}

std::vector<i64> ResidueMatrix::row(int i) const
{
    return std::vector<i64>(a.begin() + std::size_t(i) * cols, a.begin() + std::size_t(i + 1) * cols);
}

void ResidueMatrix::push_row(const std::vector<i64>& r)
{
    a.insert(a.end(), r.begin(), r.end());
    ++rows;
}

namespace {

struct Ring {
    i64 p;
    int k;
    i64 mod;
    i64 mul(i64 a, i64 b) const { return i64((i128)a * b % mod); }
    i64 sub(i64 a, i64 b) const
    {
        i64 r = a - b;
        return r < 0 ? r + mod : r;
    }
    // x = p^v * u, returns u^{-1}
    i64 unit_inv(i64 x, int v) const
    {
        i64 u = x;
        for (int i = 0; i < v; ++i) u /= p;
        return invmod(u, mod);
    }
};

void axpy(const Ring& R, std::vector<i64>& y, i64 c, const std::vector<i64>& x, std::size_t from)
{
    if (c == 0) return;
    for (std::size_t j = from; j < y.size(); ++j) {
        if (x[j]) y[j] = R.sub(y[j], R.mul(c, x[j]));
    }
}

bool is_zero(const std::vector<i64>& v)
{
    return std::all_of(v.begin(), v.end(), [](i64 x) { return x == 0; });
}

}  // namespace

ResidueMatrix howell_form(const ResidueMatrix& M)
{
    Ring R{M.p, M.k, M.mod};
    const int n = M.cols;
    std::vector<std::vector<i64>> pool;
    pool.reserve(M.rows);
    for (int i = 0; i < M.rows; ++i) {
        auto r = M.row(i);
        for (auto& x : r) x = mod_norm(x, M.mod);
        if (!is_zero(r)) pool.push_back(std::move(r));
    }

    std::vector<std::vector<i64>> piv;
    std::vector<int> pcol, pexp;
    for (int c = 0; c < n && !pool.empty(); ++c) {
        int best = -1, bv = R.k;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            int v = val_res(pool[i][c], R.p, R.k);
            if (v < bv) {
                bv = v;
                best = int(i);
                if (v == 0) break;
            }
        }
        if (best < 0) continue;
        std::vector<i64> pr = std::move(pool[best]);
        pool.erase(pool.begin() + best);
        i64 u = R.unit_inv(pr[c], bv);
        for (int j = c; j < n; ++j) pr[j] = R.mul(pr[j], u);
        const i64 pe = ipow(R.p, bv);
        std::vector<std::vector<i64>> next;
        next.reserve(pool.size() + 1);
        for (auto& r : pool) {
            if (r[c]) axpy(R, r, r[c] / pe, pr, c);
            if (!is_zero(r)) next.push_back(std::move(r));
        }
        if (bv > 0) {
            // annihilator multiple keeps the Howell property
            std::vector<i64> ann(n, 0);
            i64 f = ipow(R.p, R.k - bv);
            for (int j = c + 1; j < n; ++j) ann[j] = R.mul(pr[j], f);
            if (!is_zero(ann)) next.push_back(std::move(ann));
        }
        pool = std::move(next);
        piv.push_back(std::move(pr));
        pcol.push_back(c);
        pexp.push_back(bv);
    }

    for (std::size_t i = 0; i < piv.size(); ++i) {
        const int c = pcol[i];
        const i64 pe = ipow(R.p, pexp[i]);
        for (std::size_t h = 0; h < i; ++h) {
            i64 q = piv[h][c] / pe;
            if (q) axpy(R, piv[h], q, piv[i], c);
        }
    }

    ResidueMatrix H(M.p, M.k, 0, n);
    for (auto& r : piv) H.push_row(r);
    return H;
}

ResidueMatrix howell_kernel(const ResidueMatrix& M)
{
    const int r = M.rows, n = M.cols;
    ResidueMatrix A(M.p, M.k, n, r + n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < r; ++i) A.at(j, i) = mod_norm(M.at(i, j), M.mod);
        A.at(j, r + j) = 1;
    }
    ResidueMatrix H = howell_form(A);
    ResidueMatrix K(M.p, M.k, 0, n);
    for (int i = 0; i < H.rows; ++i) {
        bool left_zero = true;
        for (int j = 0; j < r && left_zero; ++j) left_zero = H.at(i, j) == 0;
        if (!left_zero) continue;
        std::vector<i64> v(H.a.begin() + std::size_t(i) * H.cols + r, H.a.begin() + std::size_t(i + 1) * H.cols);
        K.push_row(v);
    }
    return K;
}

namespace {
int lead_col(const ResidueMatrix& H, int i)
{
    for (int j = 0; j < H.cols; ++j) {
        if (H.at(i, j)) return j;
    }
    return -1;
}
}  // namespace

std::vector<i64> howell_reduce(const ResidueMatrix& H, std::vector<i64> v)
{
    Ring R{H.p, H.k, H.mod};
    for (auto& x : v) x = mod_norm(x, H.mod);
    for (int i = 0; i < H.rows; ++i) {
        int c = lead_col(H, i);
        i64 pe = H.at(i, c);
        if (v[c] % pe) continue;
        axpy(R, v, v[c] / pe, H.row(i), c);
    }
    return v;
}

bool howell_contains(const ResidueMatrix& H, const std::vector<i64>& v)
{
    return is_zero(howell_reduce(H, v));
}

int vector_order_exp(const std::vector<i64>& v, i64 p, int k)
{
    int mv = k;
    i64 mod = ipow(p, k);
    for (i64 x : v) mv = std::min(mv, val_res(mod_norm(x, mod), p, k));
    return k - mv;
}

int howell_log_size(const ResidueMatrix& H)
{
    int s = 0;
    for (int i = 0; i < H.rows; ++i) {
        int c = lead_col(H, i);
        s += H.k - val_res(H.at(i, c), H.p, H.k);
    }
    return s;
}

int order_mod_span(const ResidueMatrix& H, const std::vector<i64>& v)
{
    std::vector<i64> w = v;
    for (int a = 0; a <= H.k; ++a) {
        if (howell_contains(H, w)) return a;
        for (auto& x : w) x = mulmod(x, H.p, H.mod);
    }
    return H.k;
}

}  // namespace chromo
