#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hallab/errors.hpp"
#include "hallab/grading.hpp"
#include "hallab/lpoly.hpp"
#include "hallab/rational.hpp"

namespace hallab {

// Finite Laurent polynomial in q with exact rational coefficients.
// Invariant: no explicit zero coefficients; exponents may be negative.
class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(const Rational& c) {                            // NOLINT(google-explicit-constructor)
        if (!c.is_zero()) c_[0] = c;
    }
    LaurentPoly(long long c) : LaurentPoly(Rational(c)) {}      // NOLINT(google-explicit-constructor)

    static LaurentPoly monomial(std::int64_t exp, const Rational& c) {
        LaurentPoly p;
        if (!c.is_zero()) p.c_[exp] = c;
        return p;
    }

    const std::map<std::int64_t, Rational>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }

    std::int64_t min_exp() const {
        if (is_zero()) throw Error("laurent: min_exp of zero");
        return c_.begin()->first;
    }
    std::int64_t max_exp() const {
        if (is_zero()) throw Error("laurent: max_exp of zero");
        return c_.rbegin()->first;
    }
    Rational coeff(std::int64_t exp) const {
        auto it = c_.find(exp);
        return it == c_.end() ? Rational(0) : it->second;
    }
    void set_coeff(std::int64_t exp, const Rational& c) {
        if (c.is_zero()) c_.erase(exp);
        else c_[exp] = c;
    }

    LaurentPoly operator-() const {
        LaurentPoly r;
        for (auto& [e, c] : c_) r.c_[e] = -c;
        return r;
    }
    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (auto& [e, c] : o.c_) set_coeff(e, coeff(e) + c);
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) {
        for (auto& [e, c] : o.c_) set_coeff(e, coeff(e) - c);
        return *this;
    }
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r;
        for (auto& [ea, ca] : a.c_)
            for (auto& [eb, cb] : b.c_)
                r.set_coeff(ea + eb, r.coeff(ea + eb) + ca * cb);
        return r;
    }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    LaurentPoly scaled(const Rational& s) const {
        LaurentPoly r;
        if (s.is_zero()) return r;
        for (auto& [e, c] : c_) r.c_[e] = c * s;
        return r;
    }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return a.c_ != b.c_; }

    // q -> -q: flips the sign of every odd-exponent coefficient.
    LaurentPoly subst_neg_q() const {
        LaurentPoly r;
        for (auto& [e, c] : c_) r.c_[e] = (e % 2 == 0) ? c : -c;
        return r;
    }
    // q -> 1/q: negates every exponent.
    LaurentPoly subst_inv_q() const {
        LaurentPoly r;
        for (auto& [e, c] : c_) r.c_[-e] = c;
        return r;
    }
    bool palindromic() const { return *this == subst_inv_q(); }

    std::string str() const;

private:
    std::map<std::int64_t, Rational> c_;
};

// Rational function of q presented as a reduced fraction of Laurent
// polynomials. Canonical: no common polynomial factor, no common power of q,
// monic denominator. Equality is structural and therefore exact.
class RatFunQ {
public:
    RatFunQ() = default;
    RatFunQ(const Rational& c) : f_(c) {}                       // NOLINT(google-explicit-constructor)
    RatFunQ(long long c) : f_(Rational(c)) {}                   // NOLINT(google-explicit-constructor)
    RatFunQ(const LaurentPoly& p) : f_(embed(p)) {}             // NOLINT(google-explicit-constructor)
    RatFunQ(const LaurentPoly& num, const LaurentPoly& den);

    static RatFunQ q_power(std::int64_t k) { return RatFunQ(RatFun::l_power(k)); }

    bool is_zero() const { return f_.is_zero(); }
    bool is_laurent_polynomial() const;
    LaurentPoly numer() const { return from_poly(f_.numerator()); }
    LaurentPoly denom() const { return from_poly(f_.denominator()); }

    RatFunQ operator-() const { return RatFunQ(-f_); }
    friend RatFunQ operator+(const RatFunQ& a, const RatFunQ& b) { return RatFunQ(a.f_ + b.f_); }
    friend RatFunQ operator-(const RatFunQ& a, const RatFunQ& b) { return RatFunQ(a.f_ - b.f_); }
    friend RatFunQ operator*(const RatFunQ& a, const RatFunQ& b) { return RatFunQ(a.f_ * b.f_); }
    friend RatFunQ operator/(const RatFunQ& a, const RatFunQ& b) { return RatFunQ(a.f_ / b.f_); }
    RatFunQ& operator+=(const RatFunQ& o) { return *this = *this + o; }
    RatFunQ& operator-=(const RatFunQ& o) { return *this = *this - o; }
    RatFunQ& operator*=(const RatFunQ& o) { return *this = *this * o; }
    RatFunQ& operator/=(const RatFunQ& o) { return *this = *this / o; }

    friend bool operator==(const RatFunQ& a, const RatFunQ& b) { return a.f_ == b.f_; }
    friend bool operator!=(const RatFunQ& a, const RatFunQ& b) { return !(a == b); }

    // q -> 1/q, again in canonical form.
    RatFunQ subst_inv_q() const;

    std::string str() const;

private:
    explicit RatFunQ(RatFun f) : f_(std::move(f)) {}
    static RatFun embed(const LaurentPoly& p);
    static LaurentPoly from_poly(const Poly& p);

    RatFun f_;
};

// Exact check that f(q) == f(1/q) after clearing denominators.
inline bool symmetry_check(const RatFunQ& f) { return f == f.subst_inv_q(); }

// One series column in q whose coefficients are exact on a declared window:
// everything below `lo` is exactly zero, everything above `hi` is unknown.
// hi == nullopt marks an exact column (a genuine Laurent polynomial).
struct TruncatedLaurent {
    LaurentPoly c;                      // support contained in [lo, hi]
    std::int64_t lo = 0;
    std::optional<std::int64_t> hi;

    static TruncatedLaurent exact(const LaurentPoly& p) {
        return {p, p.is_zero() ? 0 : p.min_exp(), std::nullopt};
    }
    static TruncatedLaurent truncation(LaurentPoly p, std::int64_t lo, std::int64_t hi);

    bool is_exact_zero() const { return c.is_zero() && !hi; }
    bool known_at(std::int64_t e) const { return !hi || e <= *hi; }

    // Coefficient lookup; OutOfWindow above the guaranteed truncation.
    Rational coeff(std::int64_t e) const {
        if (!known_at(e))
            throw OutOfWindow("series coefficient beyond the guaranteed truncation");
        return c.coeff(e);
    }

    friend bool operator==(const TruncatedLaurent& a, const TruncatedLaurent& b) {
        return a.c == b.c && a.lo == b.lo && a.hi == b.hi;
    }
    friend bool operator!=(const TruncatedLaurent& a, const TruncatedLaurent& b) {
        return !(a == b);
    }

    std::string str() const;
};

TruncatedLaurent add(const TruncatedLaurent& a, const TruncatedLaurent& b);
TruncatedLaurent scale(const TruncatedLaurent& a, const Rational& s);
TruncatedLaurent mul(const TruncatedLaurent& a, const TruncatedLaurent& b);
TruncatedLaurent subst_neg_q(const TruncatedLaurent& a);
// Quotient f/g of series columns; g must be a power series with a unit
// constant term (NonUnitConstantTerm otherwise).
TruncatedLaurent divide(const TruncatedLaurent& f, const TruncatedLaurent& g);
// exp of a column with strictly positive valuation (declared lo >= 1).
TruncatedLaurent exp_positive(const TruncatedLaurent& z);
// Laurent expansion of a rational function around q = 0, up to q^hi.
TruncatedLaurent taylor(const RatFunQ& f, std::int64_t hi);

// Family of series columns indexed by the effective classes inside a
// componentwise box. The box is closed under splitting a class into two
// effective summands, so column products below carry exact windows.
class DTSeries {
public:
    explicit DTSeries(Beta box);

    const Beta& box_bound() const { return box_; }
    const std::vector<Beta>& classes() const { return classes_; }
    bool contains(const Beta& b) const;

    const TruncatedLaurent& column(const Beta& b) const;
    void set_column(const Beta& b, TruncatedLaurent col);

    DTSeries subst_neg_q() const;

    friend bool operator==(const DTSeries& a, const DTSeries& b) {
        return a.box_ == b.box_ && a.cols_ == b.cols_;
    }
    friend bool operator!=(const DTSeries& a, const DTSeries& b) { return !(a == b); }

private:
    Beta box_;
    std::vector<Beta> classes_;
    std::map<Beta, TruncatedLaurent> cols_;
};

DTSeries add(const DTSeries& a, const DTSeries& b);
DTSeries scale(const DTSeries& a, const Rational& s);
DTSeries mul(const DTSeries& a, const DTSeries& b);

// MacMahon product prod_{k>=1} (1 - q^k)^{-k}, truncated at q^order.
TruncatedLaurent macmahon(std::int64_t order);
// Degree-zero column: MacMahon product at -q raised to the integer chi.
TruncatedLaurent dt_zero(std::int64_t chi, std::int64_t order);

// Per-column division of a sheaf-counting family by its degree-zero column.
DTSeries reduce_dt(const DTSeries& dt, const TruncatedLaurent& dt0);
// Inverse of reduce_dt: per-column product with dt_zero(chi, order).
DTSeries dt_from_pt(const DTSeries& pt, std::int64_t chi, std::int64_t order);

// Closed form of sum_{n>=1} n * a_{n mod period} q^n as a rational function:
//   sum_{k>=0} (r+kd) q^{r+kd} = r q^r / (1-q^d) + d q^{r+d} / (1-q^d)^2.
// When the table is even (values[r] == values[(d-r) mod d]) the result is
// invariant under q -> 1/q; that symmetry is asserted internally.
RatFunQ rational_from_periodic(std::int64_t period, const std::vector<Rational>& values);

// One class's sector of a local-invariant table: n -> values[n mod period].
// Admissible tables are even: values[r] == values[(period - r) mod period].
struct PeriodicTable {
    std::int64_t period = 1;
    std::vector<Rational> values;       // size == period
};
using NTableSpec = std::map<Beta, PeriodicTable>;

// Weighted table family: the column at class b carries
//   sum_{n>=1} n * values[n mod period] q^n, truncated at q^hi.
// SymmetryViolation when a table fails the evenness criterion.
DTSeries n_table_series(const NTableSpec& tables, const Beta& box, std::int64_t hi);

// Exponential of a column family whose q-constant terms vanish identically.
DTSeries exp_dt(const DTSeries& a);

struct TodaColumn {
    LaurentPoly value;      // extracted Laurent-polynomial core
    bool palindromic;       // certificate: value(q) == value(1/q)
};

// Wall-crossing assembly: factors the stable-pair family at -q as
// exp(weighted local table) times per-class Laurent cores, and returns the
// cores with palindromicity certificates. SymmetryViolation when the table
// fails evenness; InsufficientTruncation when a core's support cannot be
// separated from the unknown tail of its guaranteed window.
std::map<Beta, TodaColumn> toda_assemble(const NTableSpec& tables, const DTSeries& pt);

} // namespace hallab
