#include "chromo/level1.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "chromo/congruence.hpp"

namespace chromo {

namespace {

long floor_mod(long a, long m)
{
    long r = a % m;
    return r < 0 ? r + m : r;
}

// u a + v b = g = gcd(a, b) >= 0
std::tuple<long, long, long> xgcd(long a, long b)
{
    long r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        long q = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
        std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
        std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
    }
    if (r0 < 0) return {-s0, -t0, -r0};
    return {s0, t0, r0};
}

bool squarefree(long n)
{
    n = std::labs(n);
    for (long q = 2; q * q <= n; ++q) {
        if (n % (q * q) == 0) return false;
        if (n % q == 0) n /= q;
    }
    return true;
}

Int pow_int(long b, long e)
{
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(e));
    return r;
}

Int powm(const Int& b, long e, const Int& m)
{
    Int r;
    Int ee(e);
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), ee.get_mpz_t(), m.get_mpz_t());
    return r;
}

// Y > 0 with X largest; otherwise Y = 0, X > 0
const QuadInt* pick_canonical(const std::vector<QuadInt>& xs)
{
    const QuadInt* best = nullptr;
    for (auto& x : xs) {
        if (x.Y > 0 && (!best || best->Y <= 0 || x.X > best->X)) best = &x;
    }
    if (best) return best;
    for (auto& x : xs) {
        if (x.Y == 0 && x.X > 0) return &x;
    }
    return nullptr;
}

long ord_mod(long a, long p)
{
    a = floor_mod(a, p);
    long x = a, k = 1;
    while (x != 1) {
        x = x * a % p;
        ++k;
    }
    return k;
}

}  // namespace

bool BQForm::reduced() const
{
    if (a <= 0 || std::labs(b) > a || a > c) return false;
    if ((std::labs(b) == a || a == c) && b < 0) return false;
    return true;
}

BQForm reduce(BQForm f)
{
    long D = f.disc();
    if (D >= 0 || f.a <= 0) throw precondition_error("form is not positive definite");
    while (true) {
        long m = floor_mod(f.b, 2 * f.a);
        if (m > f.a) m -= 2 * f.a;
        f.b = m;
        f.c = (f.b * f.b - D) / (4 * f.a);
        if (f.a > f.c) {
            std::swap(f.a, f.c);
            f.b = -f.b;
            continue;
        }
        break;
    }
    if ((f.a == f.c || f.b == -f.a) && f.b < 0) f.b = -f.b;
    return f;
}

BQForm compose(const BQForm& f0, const BQForm& g0)
{
    long D = f0.disc();
    if (g0.disc() != D) throw precondition_error("discriminants differ");
    BQForm f = f0, g = g0;
    if (f.a > g.a) std::swap(f, g);
    long s = (f.b + g.b) / 2, n = g.b - s;
    long y1 = 0, d = f.a;
    if (g.a % f.a != 0) {
        auto [u, v, dd] = xgcd(g.a, f.a);
        (void)v;
        y1 = u;
        d = dd;
    }
    long x2 = 0, y2 = -1, d1 = d;
    if (s % d != 0) {
        auto [xx, yy, dd] = xgcd(s, d);
        x2 = xx;
        y2 = -yy;
        d1 = dd;
    }
    long v1 = f.a / d1, v2 = g.a / d1;
    long r = floor_mod(y1 * y2 * n - x2 * g.c, v1);
    BQForm h;
    h.b = g.b + 2 * v2 * r;
    h.a = v1 * v2;
    h.c = (h.b * h.b - D) / (4 * h.a);
    return h;
}

BQForm principal_form(long D)
{
    long b = floor_mod(D, 2);
    return {1, b, (b * b - D) / 4};
}

std::string to_string(const BQForm& f)
{
    return "(" + std::to_string(f.a) + "," + std::to_string(f.b) + "," + std::to_string(f.c) + ")";
}

bool is_fundamental_disc(long D)
{
    if (D >= 0) return false;
    if (floor_mod(D, 4) == 1) return squarefree(D);
    if (floor_mod(D, 4) != 0) return false;
    long m = D / 4;
    long r = floor_mod(m, 4);
    return (r == 2 || r == 3) && squarefree(m);
}

void require_fundamental(long D)
{
    if (D >= 0) throw precondition_error("discriminant must be negative");
    if (is_fundamental_disc(D)) return;
    long s = long(squarefree_part(D));
    long fd = floor_mod(s, 4) == 1 ? s : 4 * s;
    throw precondition_error("D = " + std::to_string(D) + " is not fundamental; the same field has D = " +
                             std::to_string(fd));
}

int ClassGroup::index_of(const BQForm& f) const
{
    auto r = reduce(f);
    auto it = std::lower_bound(forms.begin(), forms.end(), r);
    if (it == forms.end() || !(*it == r)) throw precondition_error("form not in class group: " + to_string(f));
    return int(it - forms.begin());
}

int ClassGroup::inverse(int i) const
{
    auto f = forms[i];
    return index_of({f.a, -f.b, f.c});
}

int ClassGroup::order(int i) const
{
    int k = 1, x = i;
    while (x != 0) {
        x = mul[x][i];
        ++k;
    }
    return k;
}

ClassGroup class_group_of_disc(long D)
{
    require_fundamental(D);
    ClassGroup G;
    G.D = D;
    for (long a = 1; 3 * a * a <= -D; ++a) {
        for (long b = -a + 1; b <= a; ++b) {
            if (floor_mod(b - D, 2) != 0) continue;
            long num = b * b - D;
            if (num % (4 * a) != 0) continue;
            long c = num / (4 * a);
            BQForm f{a, b, c};
            if (f.reduced()) G.forms.push_back(f);
        }
    }
    std::sort(G.forms.begin(), G.forms.end());
    int h = G.h();
    G.mul.assign(h, std::vector<int>(h, 0));
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < h; ++j) G.mul[i][j] = G.index_of(compose(G.forms[i], G.forms[j]));
    }
    return G;
}

ClassGroup class_group(const QuadImagField& F)
{
    return class_group_of_disc(F.disc());
}

Int norm(const QuadInt& x, long D)
{
    return (x.X * x.X - Int(D) * x.Y * x.Y) / 4;
}

std::pair<Rat, Rat> as_ab(const QuadImagField& F, const QuadInt& x)
{
    // sqrt D = 2 sqrt d when D = 4d
    Rat a = make_rat(x.X, 2);
    Rat b = F.disc() == 4 * F.d ? Rat(x.Y) : make_rat(x.Y, 2);
    return {a, b};
}

std::string to_string(const QuadImagField& F, const QuadInt& x)
{
    auto [a, b] = as_ab(F, x);
    std::string root = F.d == -1 ? "i" : "sqrt(" + std::to_string(F.d) + ")";
    if (b == 0) return rat_str(a);
    std::string s = a == 0 ? "" : rat_str(a);
    Rat ab = abs(b);
    std::string coef = ab == 1 ? "" : rat_str(ab);
    if (b < 0) s += "-";
    else if (!s.empty()) s += "+";
    return s + coef + root;
}

std::vector<QuadInt> elements_of_norm(const QuadImagField& F, const Int& N)
{
    long D = F.disc();
    std::vector<QuadInt> out;
    if (N < 0) return out;
    Int four = 4 * N;
    Int ymax = sqrt(four / Int(-D));
    for (Int Y = -ymax; Y <= ymax; ++Y) {
        Int rest = four + Int(D) * Y * Y;
        if (rest < 0) continue;
        Int X = sqrt(rest);
        if (X * X != rest) continue;
        // parity X = DY mod 2
        Int par = X - Int(D) * Y;
        if (mpz_odd_p(par.get_mpz_t())) continue;
        out.push_back({X, Y});
        if (X != 0) out.push_back({Int(-X), Y});
    }
    std::sort(out.begin(), out.end(), [](const QuadInt& u, const QuadInt& v) {
        return u.Y != v.Y ? u.Y < v.Y : u.X < v.X;
    });
    return out;
}

int unit_count(const QuadImagField& F)
{
    if (F.d == -1) return 4;
    if (F.d == -3) return 6;
    return 2;
}

std::vector<PrimeIdeal> primes_over(const QuadImagField& F, long l)
{
    if (l < 2 || !is_prime(std::uint64_t(l))) throw precondition_error("not a prime: " + std::to_string(l));
    long D = F.disc();
    int s = F.splitting(l);
    if (s == -1) return {PrimeIdeal{l, 0, -1}};
    std::vector<PrimeIdeal> out;
    long mod = 4 * l;
    for (long b = -l + 1; b <= l; ++b) {
        if (floor_mod(b - D, 2) != 0) continue;
        if (floor_mod(b * b - D, mod) == 0) out.push_back({l, b, s});
    }
    if ((s == 1 && out.size() != 2) || (s == 0 && out.size() != 1)) {
        throw std::logic_error("prime enumeration failed over " + std::to_string(l));
    }
    return out;
}

PrimeIdeal conjugate(const PrimeIdeal& w)
{
    if (w.split != 1) return w;
    long b = floor_mod(-w.b, 2 * w.l);
    if (b > w.l) b -= 2 * w.l;
    return {w.l, b, w.split};
}

BQForm prime_form(const QuadImagField& F, const PrimeIdeal& w)
{
    long D = F.disc();
    if (w.split == -1) return principal_form(D);
    return {w.l, w.b, (w.b * w.b - D) / (4 * w.l)};
}

std::string to_string(const PrimeIdeal& w)
{
    if (w.split == -1) return "(" + std::to_string(w.l) + ")";
    return "[" + std::to_string(w.l) + "," + std::to_string(w.b) + "]";
}

bool in_prime(const QuadInt& x, const PrimeIdeal& w)
{
    if (w.split == -1) {
        if (x.X % w.l != 0 || x.Y % w.l != 0) return false;
        Int par = Int(x.X / w.l) - Int(x.Y / w.l);
        return w.l != 2 || mpz_even_p(par.get_mpz_t()) != 0;
    }
    Int v = (x.X + x.Y * w.b) / 2;
    return v % w.l == 0;
}

UnitGroupReport unit_group_rank(const QuadImagField& F, const std::vector<PrimeIdeal>& S)
{
    auto G = class_group(F);
    UnitGroupReport rep;
    rep.torsion = unit_count(F);
    rep.rank = int(S.size());
    for (auto& w : S) {
        SUnitWitness sw;
        sw.w = w;
        sw.d = G.order(G.index_of(prime_form(F, w)));
        Int N = 1;
        for (int i = 0; i < sw.d; ++i) N *= w.norm();
        std::vector<QuadInt> cands;
        auto wc = conjugate(w);
        for (auto& x : elements_of_norm(F, N)) {
            if (w.split == 1 && in_prime(x, wc)) continue;
            cands.push_back(x);
        }
        auto k = pick_canonical(cands);
        if (!k) throw std::logic_error("no generator of " + to_string(w) + "^" + std::to_string(sw.d));
        sw.kappa = *k;
        rep.witnesses.push_back(sw);
    }
    return rep;
}

bool in_class_kernel(const ClassGroup& G, const QuadImagField& F, const std::vector<PrimeIdeal>& S,
                     const std::vector<long>& n)
{
    if (n.size() != S.size()) throw precondition_error("exponent vector size mismatch");
    int acc = 0;
    for (std::size_t i = 0; i < S.size(); ++i) {
        int c = G.index_of(prime_form(F, S[i]));
        if (n[i] < 0) c = G.inverse(c);
        for (long k = 0; k < std::labs(n[i]); ++k) acc = G.mul[acc][c];
    }
    return acc == 0;
}

Int sqrt_mod_pk(long d, long p, int K)
{
    long r = -1;
    long dm = floor_mod(d, p);
    if (dm == 0) throw precondition_error("d divisible by p");
    for (long x = 1; x < p; ++x) {
        if (x * x % p == dm) {
            r = x;
            break;
        }
    }
    if (r < 0) throw precondition_error("d is not a square mod p");
    Int mod = pow_int(p, K);
    Int s = r;
    for (int it = 0; it < K; ++it) {
        Int inv;
        Int two_s = 2 * s;
        mpz_invert(inv.get_mpz_t(), two_s.get_mpz_t(), mod.get_mpz_t());
        s = s - (s * s - d) * inv;
        s %= mod;
        if (s < 0) s += mod;
    }
    return s;
}

Int quotient_mod_pk(const QuadImagField& F, const QuadInt& t, long p, int K)
{
    Int mod = pow_int(p, K);
    Int s = sqrt_mod_pk(F.d, p, K);
    if (F.disc() == 4 * F.d) s *= 2;
    Int num = t.X + t.Y * s, den = t.X - t.Y * s;
    den %= mod;
    if (den < 0) den += mod;
    Int inv;
    if (!mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t())) {
        throw precondition_error("t^c is not a p-adic unit");
    }
    Int q = num * inv % mod;
    if (q < 0) q += mod;
    return q;
}

bool is_topological_generator(const Int& q_mod_p2, long p, int units)
{
    i64 m = p * p;
    i64 q = q_mod_p2.get_si();
    if (q % p == 0) return false;
    if (powmod(q, p - 1, m) == 1) return false;
    return std::lcm(ord_mod(q % p, p), long(units)) == p - 1;
}

GeneratorPrime find_generator_prime(const QuadImagField& F, long p, long cap)
{
    if (p == 2) throw precondition_error("p = 2 needs two generating primes; unsupported");
    if (p < 2 || !is_prime(std::uint64_t(p))) throw precondition_error("p must be an odd prime");
    if (F.splitting(p) != 1) throw precondition_error("p = " + std::to_string(p) + " does not split");
    auto G = class_group(F);
    int w = unit_count(F);
    for (long l = 2; l <= cap; ++l) {
        if (l == p || !is_prime(std::uint64_t(l)) || F.splitting(l) != 1) continue;
        auto u = primes_over(F, l).front();
        if (G.index_of(prime_form(F, u)) != 0) continue;
        auto cands = elements_of_norm(F, Int(l));
        auto t = pick_canonical(cands);
        if (!t) throw std::logic_error("principal prime without generator over " + std::to_string(l));
        GeneratorPrime g;
        g.l = l;
        g.t = *t;
        g.q_mod_p2 = quotient_mod_pk(F, g.t, p, 2);
        g.unit_power_test = powmod(g.q_mod_p2.get_si(), w, p * p) != 1;
        if (is_topological_generator(g.q_mod_p2, p, w)) return g;
    }
    throw budget_error("no generating prime l <= " + std::to_string(cap));
}

Decomposition decomposition_count(const QuadImagField& F, long p)
{
    if (p < 2 || !is_prime(std::uint64_t(p))) throw precondition_error("not a prime");
    if (F.splitting(p) != 1) throw precondition_error("p = " + std::to_string(p) + " does not split");
    auto G = class_group(F);
    Decomposition r;
    r.u = primes_over(F, p).front();
    r.f = G.order(G.index_of(prime_form(F, r.u)));
    r.factors = G.h() / r.f;
    return r;
}

JOrderTable j_homotopy_orders(long p, const std::function<Int(int)>& k_mod, const std::string& label,
                              long t_lo, long t_hi)
{
    if (p < 3 || !is_prime(std::uint64_t(p))) throw precondition_error("p must be an odd prime");
    if (k_mod(1) % p == 0) throw precondition_error("generator is divisible by p");
    JOrderTable T;
    T.p = p;
    T.generator = label;
    for (long t = t_lo; t <= t_hi; ++t) {
        if (t % 2 != 0) continue;
        JRow row{t, Valuation::inf()};
        if (t != 0) {
            for (int K = 2;; K *= 2) {
                if (K > 4096) throw precision_error("k^t - 1 vanishes to p^4096");
                Int mod = pow_int(p, K);
                Int v = powm(k_mod(K), t, mod) - 1;
                if (v < 0) v += mod;
                if (v != 0) {
                    row.nu = val_p(v, p);
                    break;
                }
            }
        }
        T.rows.push_back(row);
    }
    return T;
}

JOrderTable j_homotopy_orders(long p, long k, long t_lo, long t_hi)
{
    if (k == 1 || k == -1) {
        JOrderTable T;
        T.p = p;
        T.generator = std::to_string(k);
        for (long t = t_lo; t <= t_hi; ++t) {
            if (t % 2 == 0) T.rows.push_back({t, Valuation::inf()});
        }
        return T;
    }
    auto km = [p, k](int K) {
        Int m = pow_int(p, K);
        Int r = Int(k) % m;
        if (r < 0) r += m;
        return r;
    };
    return j_homotopy_orders(p, km, std::to_string(k), t_lo, t_hi);
}

}  // namespace chromo
