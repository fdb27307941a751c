#pragma once

#include <functional>
#include <string>
#include <vector>

#include "chromo/arith.hpp"
#include "chromo/hermitian.hpp"

namespace chromo {

// a x^2 + b xy + c y^2, positive definite
struct BQForm {
    long a = 1, b = 0, c = 1;

    long disc() const { return b * b - 4 * a * c; }
    bool reduced() const;
    bool operator==(const BQForm&) const = default;
    auto operator<=>(const BQForm&) const = default;
};
BQForm reduce(BQForm f);
BQForm compose(const BQForm& f, const BQForm& g);  // not reduced
BQForm principal_form(long D);
std::string to_string(const BQForm& f);

bool is_fundamental_disc(long D);
// throws precondition_error naming the fundamental discriminant of the same field
void require_fundamental(long D);

struct ClassGroup {
    long D = -4;
    std::vector<BQForm> forms;          // reduced, sorted; forms[0] principal
    std::vector<std::vector<int>> mul;  // composition table on indices

    int h() const { return int(forms.size()); }
    int index_of(const BQForm& f) const;  // f need not be reduced
    int inverse(int i) const;
    int order(int i) const;
};
ClassGroup class_group(const QuadImagField& F);
ClassGroup class_group_of_disc(long D);

// (X + Y sqrt D)/2 with X = DY mod 2
struct QuadInt {
    Int X, Y;
    bool operator==(const QuadInt&) const = default;
};
Int norm(const QuadInt& x, long D);  // (X^2 - DY^2)/4
// a + b sqrt(d)
std::pair<Rat, Rat> as_ab(const QuadImagField& F, const QuadInt& x);
std::string to_string(const QuadImagField& F, const QuadInt& x);
std::vector<QuadInt> elements_of_norm(const QuadImagField& F, const Int& N);

int unit_count(const QuadImagField& F);

// the ideal l Z + ((-b + sqrt D)/2) Z, or (l) when l is inert (b unused)
struct PrimeIdeal {
    long l = 2;
    long b = 0;
    int split = 1;  // +1, 0 ramified, -1 inert

    Int norm() const { return split == -1 ? Int(l * l) : Int(l); }
    bool operator==(const PrimeIdeal&) const = default;
};
std::vector<PrimeIdeal> primes_over(const QuadImagField& F, long l);
PrimeIdeal conjugate(const PrimeIdeal& w);
BQForm prime_form(const QuadImagField& F, const PrimeIdeal& w);
std::string to_string(const PrimeIdeal& w);
// is x in w (not w^2)
bool in_prime(const QuadInt& x, const PrimeIdeal& w);

struct SUnitWitness {
    PrimeIdeal w;
    int d = 1;  // order of [w] in Cl(F)
    QuadInt kappa;  // (kappa) = w^d
};
struct UnitGroupReport {
    int torsion = 2;
    int rank = 0;
    std::vector<SUnitWitness> witnesses;
};
UnitGroupReport unit_group_rank(const QuadImagField& F, const std::vector<PrimeIdeal>& S);

// does prod w^{n_w} map to the trivial class
bool in_class_kernel(const ClassGroup& G, const QuadImagField& F, const std::vector<PrimeIdeal>& S,
                     const std::vector<long>& n);

// sqrt(d) in Z/p^K, lifted from the least root mod p
Int sqrt_mod_pk(long d, long p, int K);
// t / t^c in Z/p^K
Int quotient_mod_pk(const QuadImagField& F, const QuadInt& t, long p, int K);

struct GeneratorPrime {
    long l = 0;
    QuadInt t;
    Int q_mod_p2;
    bool unit_power_test = false;  // q^{|O^x|} != 1 mod p^2
};
GeneratorPrime find_generator_prime(const QuadImagField& F, long p, long cap = 100000);
bool is_topological_generator(const Int& q_mod_p2, long p, int units);

struct Decomposition {
    PrimeIdeal u;
    int f = 1;
    int factors = 1;
};
Decomposition decomposition_count(const QuadImagField& F, long p);

struct JRow {
    long t = 0;
    Valuation nu;  // order p^nu, infinite when k^t = 1
};
struct JOrderTable {
    long p = 5;
    std::string generator;
    std::vector<JRow> rows;
};
// k_mod(K) returns the generator mod p^K
JOrderTable j_homotopy_orders(long p, const std::function<Int(int)>& k_mod, const std::string& label,
                              long t_lo, long t_hi);
JOrderTable j_homotopy_orders(long p, long k, long t_lo, long t_hi);

}  // namespace chromo
