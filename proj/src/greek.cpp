#include "chromo/greek.hpp"

#include "chromo/modforms.hpp"

namespace chromo {

Int v_degree(long p, int k)
{
    Int pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), p, k);
    return 2 * (pk - 1);
}

Int norm_I(const GreekIndex& idx)
{
    if (int(idx.i.size()) != idx.n + 1) throw precondition_error("index needs n+1 exponents");
    Int s = idx.n;
    for (int k = 1; k <= idx.n - 1; ++k) s += idx.i[k] * v_degree(idx.p, k);
    return s;
}

Int greek_stem(const GreekIndex& idx, long s)
{
    return Int(idx.i[idx.n]) * s * v_degree(idx.p, idx.n) - norm_I(idx);
}

Valuation alpha_max_j(long p, long t)
{
    if (p == 2) throw precondition_error("p = 2 excluded");
    if (t % (p - 1)) return Valuation::of(0);
    long i = t / (p - 1);
    if (i == 0) return Valuation::inf();
    return Valuation::of(val_p(Int(i), p).value + 1);
}

AlphaVerdict alpha_invariant_order(long p, long t, int j)
{
    if (p == 2) throw precondition_error("p = 2 excluded");
    if (j < 1) throw precondition_error("j must be positive");
    auto mx = alpha_max_j(p, t);
    bool ok = mx.infinite || j <= mx.value;
    return {ok, ok ? j : 0};
}

Valuation bernoulli_quotient_denominator_val(long p, int t)
{
    Rat x = bernoulli(t) / Rat(t);
    x.canonicalize();
    return val_p(Int(x.get_den()), p);
}

namespace {

Rat ppow(long p, long e)
{
    Int a;
    mpz_ui_pow_ui(a.get_mpz_t(), p, std::labs(e));
    return e >= 0 ? Rat(a) : Rat(Int(1), a);
}

// p^{nu-m} + p^{nu-m-1} - 1
Rat bracket(long p, long nu, long m) { return ppow(p, nu - m) + ppow(p, nu - m - 1) - 1; }

}  // namespace

BetaVerdict beta_invariant_exists(long p, long i, long j, long k)
{
    if (p <= 3 || !is_prime(p)) throw precondition_error("beta predicate needs a prime p > 3");
    if (i < 1 || j < 1 || k < 1) throw precondition_error("i, j, k must be positive");
    BetaVerdict v;
    v.t = (p * p - 1) * i - (p - 1) * j;
    v.nu = int(val_p(Int(i), p).value);

    if (v.nu == 0) {
        if (j != 1) {
            v.reason = "condition (2): j = 1 required when nu_p(i) = 0";
            return v;
        }
    } else if (Rat(j) > bracket(p, v.nu, 0)) {
        v.reason = "condition (2): j exceeds p^nu + p^(nu-1) - 1";
        return v;
    }

    // m = max{m : bracket(m) >= j}; bracket decreases in m and bracket(nu) < 1
    long m = v.nu;
    while (bracket(p, v.nu, m) < Rat(j)) {
        --m;
        if (m < v.nu - 64) {
            v.reason = "condition (3): no integer m brackets j";
            return v;
        }
    }
    v.m_found = true;
    v.m = m;
    long bound = std::min<long>(val_p(Int(j), p).value + 1, m + 1);
    if (k <= bound) {
        v.exists = true;
        return v;
    }
    v.reason = "condition (3): k > min(nu_p(j)+1, m+1) with m = " + std::to_string(m);
    if (v.nu == 0 && k <= val_p(Int(j), p).value + 1) v.nu_zero_ambiguity = true;
    return v;
}

}  // namespace chromo
