#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chromo/arith.hpp"

namespace chromo {

enum class Domain { Rational, ModPk };

// Truncated q-expansion; coefficients 0..prec()-1 are known.
class QSeries {
public:
    Domain dom = Domain::Rational;
    i64 p = 0;
    int k = 0;
    i64 mod = 0;
    std::vector<Rat> q;
    std::vector<i64> r;

    QSeries() = default;
    static QSeries rational(std::vector<Rat> c);
    static QSeries residues(i64 p, int k, std::vector<i64> c);
    static QSeries constant(const Rat& c, int prec);

    int prec() const { return dom == Domain::Rational ? int(q.size()) : int(r.size()); }
    QSeries truncate(int n) const;
    QSeries reduce(i64 p, int k) const;  // Rational -> Z/p^k
    bool is_zero() const;

    QSeries operator+(const QSeries& o) const;
    QSeries operator-(const QSeries& o) const;
    QSeries operator*(const QSeries& o) const;
    QSeries scale(const Rat& c) const;
    QSeries pow(int e) const;
    bool operator==(const QSeries& o) const;
};

QSeries verschiebung(const QSeries& f, long l);

Rat bernoulli(int t);
Int sigma(int k, long n);

// optional persistent backing for eisenstein(); load may return a longer series or nothing
struct SeriesStore {
    std::function<std::optional<QSeries>(const std::string& id, int prec)> load;
    std::function<void(const std::string& id, const QSeries& s)> save;
};
void set_series_store(SeriesStore s);  // also drops the in-memory table

QSeries eisenstein(int t, int prec);  // t even >= 4
QSeries eisenstein2(int prec);        // quasimodular E_2 = 1 - 24 sum sigma_1(n) q^n
QSeries delta(int prec);

struct Monomial {
    int a = 0, b = 0, c = 0;  // E4^a E6^b Delta^c, c may be negative
    bool operator==(const Monomial&) const = default;
};

// f = series / Delta^pole; series is holomorphic of weight weight + 12*pole
struct WeightedForm {
    int weight = 0;
    int pole = 0;
    QSeries series;
};

struct MonomialBasis {
    int weight = 0;
    int m_max = 0;
    std::vector<Monomial> monomials;
    std::vector<WeightedForm> forms;  // all with pole order m_max
};

std::vector<Monomial> monomials_of_weight(int t, int m_max);
MonomialBasis basis_of_weight(int t, int m_max, int prec);

// q-expansions of E4^a E6^b Delta^c (c >= 0) mod p^k with cached powers
class LevelOneMod {
public:
    LevelOneMod(i64 p, int k, int prec);
    const QSeries& E4(int a);
    const QSeries& E6(int b);
    const QSeries& D(int c);
    QSeries monomial(int a, int b, int c);  // c >= 0
    // numerator of monomial m over Delta^m_max
    QSeries numerator(const Monomial& m, int m_max) { return monomial(m.a, m.b, m.c + m_max); }
    i64 p, mod;
    int k, prec;

private:
    std::vector<QSeries> e4_, e6_, d_;
};

}  // namespace chromo
