#include "chromo/modforms.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>

namespace chromo {

QSeries QSeries::rational(std::vector<Rat> c)
{
    QSeries s;
    s.dom = Domain::Rational;
    s.q = std::move(c);
    return s;
}

QSeries QSeries::residues(i64 p, int k, std::vector<i64> c)
{
    QSeries s;
    s.dom = Domain::ModPk;
    s.p = p;
    s.k = k;
    s.mod = ipow(p, k);
    for (auto& x : c) x = mod_norm(x, s.mod);
    s.r = std::move(c);
    return s;
}

QSeries QSeries::constant(const Rat& c, int prec)
{
    std::vector<Rat> v(prec, Rat(0));
    if (prec > 0) v[0] = c;
    return rational(std::move(v));
}

QSeries QSeries::truncate(int n) const
{
    QSeries s = *this;
    if (dom == Domain::Rational) {
        if (int(s.q.size()) > n) s.q.resize(n);
    } else if (int(s.r.size()) > n) {
        s.r.resize(n);
    }
    return s;
}

QSeries QSeries::reduce(i64 p_, int k_) const
{
    if (dom == Domain::ModPk) {
        if (p_ != p || k_ > k) throw precondition_error("cannot lift a residue series");
        std::vector<i64> c = r;
        return residues(p_, k_, std::move(c));
    }
    i64 m = ipow(p_, k_);
    std::vector<i64> c(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) c[i] = rat_mod(q[i], m);
    return residues(p_, k_, std::move(c));
}

bool QSeries::is_zero() const
{
    if (dom == Domain::Rational) {
        for (auto& x : q) {
            if (x != 0) return false;
        }
        return true;
    }
    for (auto x : r) {
        if (x) return false;
    }
    return true;
}

static void same_ring(const QSeries& a, const QSeries& b)
{
    if (a.dom != b.dom || a.mod != b.mod) throw precondition_error("series over different coefficient rings");
}

QSeries QSeries::operator+(const QSeries& o) const
{
    same_ring(*this, o);
    int n = std::min(prec(), o.prec());
    QSeries s = truncate(n);
    if (dom == Domain::Rational) {
        for (int i = 0; i < n; ++i) s.q[i] += o.q[i];
    } else {
        for (int i = 0; i < n; ++i) s.r[i] = (s.r[i] + o.r[i]) % mod;
    }
    return s;
}

QSeries QSeries::operator-(const QSeries& o) const
{
    same_ring(*this, o);
    int n = std::min(prec(), o.prec());
    QSeries s = truncate(n);
    if (dom == Domain::Rational) {
        for (int i = 0; i < n; ++i) s.q[i] -= o.q[i];
    } else {
        for (int i = 0; i < n; ++i) s.r[i] = mod_norm(s.r[i] - o.r[i], mod);
    }
    return s;
}

QSeries QSeries::operator*(const QSeries& o) const
{
    same_ring(*this, o);
    int n = std::min(prec(), o.prec());
    QSeries s = truncate(n);
    if (dom == Domain::Rational) {
        std::vector<Rat> c(n, Rat(0));
        for (int i = 0; i < n; ++i) {
            if (q[i] == 0) continue;
            for (int j = 0; i + j < n; ++j) {
                if (o.q[j] != 0) c[i + j] += q[i] * o.q[j];
            }
        }
        s.q = std::move(c);
    } else {
        std::vector<unsigned __int128> acc(n, 0);
        const bool big = mod > (i64(1) << 40);
        for (int i = 0; i < n; ++i) {
            if (!r[i]) continue;
            for (int j = 0; i + j < n; ++j) {
                acc[i + j] += (unsigned __int128)r[i] * o.r[j];
                if (big) acc[i + j] %= (unsigned __int128)mod;
            }
        }
        for (int i = 0; i < n; ++i) s.r[i] = i64(acc[i] % (unsigned __int128)mod);
    }
    return s;
}

QSeries QSeries::scale(const Rat& c) const
{
    QSeries s = *this;
    if (dom == Domain::Rational) {
        for (auto& x : s.q) x *= c;
    } else {
        i64 cm = rat_mod(c, mod);
        for (auto& x : s.r) x = mulmod(x, cm, mod);
    }
    return s;
}

QSeries QSeries::pow(int e) const
{
    if (e < 0) throw precondition_error("negative power of a series");
    QSeries result;
    if (dom == Domain::Rational) {
        result = constant(Rat(1), prec());
    } else {
        std::vector<i64> c(prec(), 0);
        if (!c.empty()) c[0] = 1 % mod;
        result = residues(p, k, std::move(c));
    }
    QSeries b = *this;
    while (e) {
        if (e & 1) result = result * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return result;
}

bool QSeries::operator==(const QSeries& o) const
{
    return dom == o.dom && mod == o.mod && q == o.q && r == o.r;
}

QSeries verschiebung(const QSeries& f, long l)
{
    QSeries s = f;
    int n = f.prec();
    if (f.dom == Domain::Rational) {
        std::vector<Rat> c(n, Rat(0));
        for (long i = 0; i * l < n; ++i) c[i * l] = f.q[i];
        s.q = std::move(c);
    } else {
        std::vector<i64> c(n, 0);
        for (long i = 0; i * l < n; ++i) c[i * l] = f.r[i];
        s.r = std::move(c);
    }
    return s;
}

// ---- Bernoulli numbers and Eisenstein series ----

namespace {

std::shared_mutex bern_mu;
std::vector<Rat> bern_table{Rat(1)};

std::shared_mutex eis_mu;
std::map<int, QSeries> eis_table;
SeriesStore eis_store;

Int binom(int n, int k)
{
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

}  // namespace

Rat bernoulli(int t)
{
    if (t < 0) throw precondition_error("bernoulli index must be nonnegative");
    {
        std::shared_lock lk(bern_mu);
        if (t < int(bern_table.size())) return bern_table[t];
    }
    std::unique_lock lk(bern_mu);
    // sum_{k=0}^{n} C(n+1,k) B_k = 0
    for (int n = int(bern_table.size()); n <= t; ++n) {
        if (n >= 3 && (n & 1)) {
            bern_table.push_back(Rat(0));
            continue;
        }
        Rat s = 0;
        for (int k = 0; k < n; ++k) {
            if (bern_table[k] != 0) s += Rat(binom(n + 1, k)) * bern_table[k];
        }
        Rat b = -s / Rat(n + 1);
        b.canonicalize();
        bern_table.push_back(b);
    }
    return bern_table[t];
}

Int sigma(int k, long n)
{
    if (n < 1) throw precondition_error("sigma needs n >= 1");
    Int s = 0;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        Int a;
        mpz_ui_pow_ui(a.get_mpz_t(), d, k);
        s += a;
        long e = n / d;
        if (e != d) {
            mpz_ui_pow_ui(a.get_mpz_t(), e, k);
            s += a;
        }
    }
    return s;
}

QSeries eisenstein(int t, int prec)
{
    if (t < 4 || (t & 1)) throw precondition_error("eisenstein weight must be even and >= 4");
    {
        std::shared_lock lk(eis_mu);
        auto it = eis_table.find(t);
        if (it != eis_table.end() && it->second.prec() >= prec) return it->second.truncate(prec);
    }
    SeriesStore store;
    {
        std::shared_lock lk(eis_mu);
        store = eis_store;
    }
    std::string id = "eisenstein/" + std::to_string(t);
    std::optional<QSeries> got;
    if (store.load) got = store.load(id, prec);
    QSeries s;
    if (got) {
        s = got->truncate(prec);
    } else {
        Rat c = Rat(-2 * t) / bernoulli(t);
        c.canonicalize();
        std::vector<Rat> v(prec, Rat(0));
        if (prec > 0) v[0] = 1;
        for (int n = 1; n < prec; ++n) v[n] = c * Rat(sigma(t - 1, n));
        s = QSeries::rational(std::move(v));
        if (store.save) store.save(id, s);
    }
    std::unique_lock lk(eis_mu);
    auto& slot = eis_table[t];
    if (slot.prec() < prec) slot = s;
    return s;
}

void set_series_store(SeriesStore s)
{
    std::unique_lock lk(eis_mu);
    eis_store = std::move(s);
    eis_table.clear();
}

QSeries eisenstein2(int prec)
{
    std::vector<Rat> v(prec, Rat(0));
    if (prec > 0) v[0] = 1;
    for (int n = 1; n < prec; ++n) v[n] = Rat(-24 * sigma(1, n));
    return QSeries::rational(std::move(v));
}

QSeries delta(int prec)
{
    QSeries e4 = eisenstein(4, prec), e6 = eisenstein(6, prec);
    return (e4 * e4 * e4 - e6 * e6).scale(Rat(1, 1728));
}

std::vector<Monomial> monomials_of_weight(int t, int m_max)
{
    std::vector<Monomial> out;
    if (t & 1) return out;
    // 4a + 6b + 12c = t with c >= -m_max
    for (int c = -m_max; 12 * c <= t; ++c) {
        int rest = t - 12 * c;
        for (int b = 0; 6 * b <= rest; ++b) {
            int r4 = rest - 6 * b;
            if (r4 % 4 == 0) out.push_back({r4 / 4, b, c});
        }
    }
    return out;
}

MonomialBasis basis_of_weight(int t, int m_max, int prec)
{
    if (prec < 1) throw precondition_error("prec must be >= 1");
    MonomialBasis B;
    B.weight = t;
    B.m_max = m_max;
    B.monomials = monomials_of_weight(t, m_max);
    QSeries e4 = eisenstein(4, prec), e6 = eisenstein(6, prec), d = delta(prec);
    for (auto& m : B.monomials) {
        QSeries s = e4.pow(m.a) * e6.pow(m.b) * d.pow(m.c + m_max);
        B.forms.push_back({t, m_max, s});
    }
    return B;
}

LevelOneMod::LevelOneMod(i64 p_, int k_, int prec_) : p(p_), mod(ipow(p_, k_)), k(k_), prec(prec_)
{
    e4_.push_back(QSeries::constant(Rat(1), prec).reduce(p, k));
    e6_ = e4_;
    d_ = e4_;
    e4_.push_back(eisenstein(4, prec).reduce(p, k));
    e6_.push_back(eisenstein(6, prec).reduce(p, k));
    d_.push_back(delta(prec).reduce(p, k));
}

static const QSeries& power_of(std::vector<QSeries>& cache, int e)
{
    while (int(cache.size()) <= e) cache.push_back(cache.back() * cache[1]);
    return cache[e];
}

const QSeries& LevelOneMod::E4(int a) { return power_of(e4_, a); }
const QSeries& LevelOneMod::E6(int b) { return power_of(e6_, b); }
const QSeries& LevelOneMod::D(int c) { return power_of(d_, c); }

QSeries LevelOneMod::monomial(int a, int b, int c)
{
    if (c < 0) throw precondition_error("negative Delta power has no q-expansion");
    return E4(a) * E6(b) * D(c);
}

}  // namespace chromo
