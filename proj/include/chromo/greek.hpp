#pragma once

#include <string>
#include <vector>

#include "chromo/arith.hpp"

namespace chromo {

struct GreekIndex {
    long p = 5;
    int n = 1;
    std::vector<long> i;  // i_0 .. i_n
};

Int v_degree(long p, int k);  // |v_k| = 2(p^k - 1)
Int norm_I(const GreekIndex& idx);
Int greek_stem(const GreekIndex& idx, long s);

struct AlphaVerdict {
    bool exists = false;
    int j = 0;  // order p^j when exists
};

AlphaVerdict alpha_invariant_order(long p, long t, int j);
// largest j with x_{i/j} at weight t (0 if none); infinite for t = 0
Valuation alpha_max_j(long p, long t);
// nu_p of the denominator of B_t/t
Valuation bernoulli_quotient_denominator_val(long p, int t);

struct BetaVerdict {
    bool exists = false;
    long t = 0;  // (p^2-1)i - (p-1)j
    int nu = 0;
    bool m_found = false;
    long m = 0;
    bool nu_zero_ambiguity = false;
    std::string reason;
};

BetaVerdict beta_invariant_exists(long p, long i, long j, long k);

}  // namespace chromo
