#pragma once

#include <string>
#include <vector>

#include "chromo/modforms.hpp"

namespace chromo {

struct precision_error : budget_error {
    using budget_error::budget_error;
};

// ceil((t + 12 m)(l+1)/12) + 1
int sturm_bound(int t, long l, int m_max);

enum class WitnessSpace { Old, Extended };
enum class Verdict { NotApplicable, WitnessFound, NoWitnessInOldSubspace, NoWitnessInSearchedSubspace };

std::string to_string(Verdict v);
std::string to_string(WitnessSpace w);

struct CongruenceGenerator {
    std::vector<i64> coords;  // coefficients on the monomials, mod p^k
    QSeries numerator;        // series of sum coords_i * E4^a E6^b Delta^(c+m_max)
    int order_exp = 0;        // additive order p^order_exp (modulo the lower-weight span for B)
};

struct CongruenceGroup {
    char kind = 'A';
    long p = 5, l = 2;
    int t = 0;
    int j = 0;  // A: modulus exponent; B: weight drop
    int k = 0;  // modulus exponent p^k actually used
    int m_max = 0;
    int prec = 0;       // requested
    int work_prec = 0;  // used internally
    std::vector<Monomial> monomials;
    std::vector<CongruenceGenerator> generators;
    int exponent_exp = 0;  // exponent p^exponent_exp
    int log_order = 0;     // |group| = p^log_order
    ResidueMatrix span;    // Howell basis of the image (for B: image plus lower-weight span)
    ResidueMatrix lower;   // B only: Howell basis of the lower-weight span
    Verdict verdict = Verdict::NotApplicable;
    WitnessSpace space = WitnessSpace::Extended;
};

CongruenceGroup compute_A(long p, long l, int t, int j, int m_max, int prec);
CongruenceGroup compute_B(long p, long l, int t, int j, int k, int m_max, int prec,
                          WitnessSpace space = WitnessSpace::Extended);

// order exponent of the class of a numerator series inside the group, -1 if absent
int member_order(const CongruenceGroup& G, const QSeries& numerator);

// re-substitute every generator at the given precision
bool self_verify(const CongruenceGroup& G, int prec);

enum class SerreResult { Consistent, WeightViolation, CongruenceViolation };
std::string to_string(SerreResult r);
SerreResult serre_congruence_check(const WeightedForm& f1, const WeightedForm& f2, long p, int k);

}  // namespace chromo
