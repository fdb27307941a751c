#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chromo/arith.hpp"

namespace chromo {

// places of Q: a prime, or 0 for the real place
constexpr long kInfinity = 0;

struct QuadImagField {
    long d = -1;

    QuadImagField() = default;
    explicit QuadImagField(long d_);
    long disc() const;
    // +1 split, -1 inert, 0 ramified; the real place counts as nonsplit
    int splitting(long place) const;
    bool is_split(long place) const { return place != kInfinity && splitting(place) == 1; }
};

int hilbert_symbol(const Rat& a, const Rat& b, long place);

bool is_local_norm(const Rat& a, const QuadImagField& F, long place);

// places where a is not a local norm (finite ones sorted, then 0 if a < 0)
std::set<long> norm_class_support(const Rat& a, const QuadImagField& F);

// smallest squarefree |a| <= bound (positive first) whose non-norm places are exactly `places`
std::optional<long> find_norm_class_witness(const QuadImagField& F, const std::set<long>& places, long bound);

// elements x + y delta in the basis {1, delta}
struct FieldElt {
    Rat x, y;
    bool operator==(const FieldElt&) const = default;
};
enum class Translate { BetaToXi, XiToBeta };
FieldElt pairing_translate(const QuadImagField& F, const FieldElt& v, Translate dir);

struct LocalFormClass {
    enum class Kind { Split, Nonsplit, Signature };
    long place = kInfinity;
    Kind kind = Kind::Signature;
    int cls = 0;       // Nonsplit: element of Z/2
    int pos = 0, neg = 0;  // Signature

    bool operator==(const LocalFormClass&) const = default;
};
std::string to_string(const LocalFormClass& c);

LocalFormClass local_class_U(const QuadImagField& F, int n, long place, const std::vector<Rat>& entries);

struct GlobalFormSpec {
    QuadImagField F;
    int n = 1;
    std::vector<LocalFormClass> local;  // must include the real place
};

// throws precondition_error when malformed
void check_spec(const GlobalFormSpec& s);

bool global_exists_U(const GlobalFormSpec& s);

struct GUClassification {
    bool exists = false;
    bool n_odd = false;
    std::pair<int, int> abs_signature;  // unordered, larger first
    int xi_sum = 0;                      // n even only
    std::vector<std::string> flags;      // ramified places where the norm index check failed
};
GUClassification global_classify_GU(const GlobalFormSpec& s);
bool gu_equivalent(const GlobalFormSpec& a, const GlobalFormSpec& b);

}  // namespace chromo
