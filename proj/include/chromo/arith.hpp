#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace chromo {

using Int = mpz_class;
using Rat = mpq_class;
using i64 = std::int64_t;
using i128 = __int128;

struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// v_p with a tagged infinity for zero
struct Valuation {
    bool infinite = false;
    long value = 0;

    static Valuation inf() { return {true, 0}; }
    static Valuation of(long v) { return {false, v}; }
    bool operator==(const Valuation&) const = default;
};

Valuation val_p(const Rat& x, long p);
Valuation val_p(const Int& x, long p);
long vp_u64(std::uint64_t x, std::uint64_t p);  // x != 0

Rat make_rat(const Int& n, const Int& d = 1);
Rat parse_rat(const std::string& s);
std::string rat_str(const Rat& x);   // "n" or "n/d"
std::string rat_frac(const Rat& x);  // always "n/d"
Rat frac_part(const Rat& x);         // x mod 1 in [0,1)
Int lcm(const Int& a, const Int& b);

bool is_prime(std::uint64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);
long long squarefree_part(long long n);  // sign kept

i64 gcd64(i64 a, i64 b);
i64 mulmod(i64 a, i64 b, i64 m);
i64 powmod(i64 a, i64 e, i64 m);  // e may be negative if gcd(a,m)=1
i64 invmod(i64 a, i64 m);         // throws if not a unit
i64 mod_norm(i64 a, i64 m);
i64 ipow(i64 b, int e);

// Kronecker symbol (D|n)
int kronecker(long long D, long long n);

// ---- Z/p^k ----

struct ResidueElt {
    i64 modulus;
    i64 value;
};

ResidueElt residue(const Rat& x, i64 p, int k);
i64 rat_mod(const Rat& x, i64 mod);  // denominator must be a unit
int val_res(i64 x, i64 p, int k);    // k for 0

struct ResidueMatrix {
    i64 p = 2;
    int k = 1;
    i64 mod = 2;
    int rows = 0, cols = 0;
    std::vector<i64> a;

    ResidueMatrix() = default;
    ResidueMatrix(i64 p_, int k_, int r, int c);
    i64& at(int i, int j) { return a[std::size_t(i) * cols + j]; }
    i64 at(int i, int j) const { return a[std::size_t(i) * cols + j]; }
    std::vector<i64> row(int i) const;
    void push_row(const std::vector<i64>& r);
};

// Howell form of the row span: echelon, pivots p^e, entries above pivots reduced.
// Zero rows dropped. Pivot columns strictly increase.
ResidueMatrix howell_form(const ResidueMatrix& M);
// rows generate {v : M v = 0}, returned in Howell form
ResidueMatrix howell_kernel(const ResidueMatrix& M);

// reduce v by a Howell basis; result is zero iff v lies in the row span
std::vector<i64> howell_reduce(const ResidueMatrix& H, std::vector<i64> v);
bool howell_contains(const ResidueMatrix& H, const std::vector<i64>& v);
// additive order p^a of v, returned as a
int vector_order_exp(const std::vector<i64>& v, i64 p, int k);
// log_p of the size of the row span of a Howell basis
int howell_log_size(const ResidueMatrix& H);
// smallest a with p^a v in span(H)
int order_mod_span(const ResidueMatrix& H, const std::vector<i64>& v);

}  // namespace chromo
