#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hallab/errors.hpp"
#include "hallab/rational.hpp"

namespace hallab {

// Univariate polynomial in the motivic symbol L, exact rational coefficients.
// Invariant: no explicit zero coefficients, exponents >= 0.
class Poly {
public:
    Poly() = default;
    Poly(const Rational& c) {                                   // NOLINT(google-explicit-constructor)
        if (!c.is_zero()) c_[0] = c;
    }
    Poly(long long c) : Poly(Rational(c)) {}                    // NOLINT(google-explicit-constructor)

    static Poly variable() { return monomial(1, Rational(1)); }

    static Poly monomial(std::int64_t exp, const Rational& c) {
        Poly p;
        if (!c.is_zero()) {
            if (exp < 0) throw Error("poly: negative exponent");
            p.c_[exp] = c;
        }
        return p;
    }

    const std::map<std::int64_t, Rational>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }

    std::int64_t degree() const {
        if (is_zero()) throw Error("poly: degree of zero");
        return c_.rbegin()->first;
    }
    const Rational& leading_coeff() const {
        if (is_zero()) throw Error("poly: leading coeff of zero");
        return c_.rbegin()->second;
    }
    Rational coeff(std::int64_t exp) const {
        auto it = c_.find(exp);
        return it == c_.end() ? Rational(0) : it->second;
    }

    void set_coeff(std::int64_t exp, const Rational& c) {
        if (exp < 0) throw Error("poly: negative exponent");
        if (c.is_zero()) c_.erase(exp);
        else c_[exp] = c;
    }

    Poly operator-() const {
        Poly r;
        for (auto& [e, c] : c_) r.c_[e] = -c;
        return r;
    }
    Poly& operator+=(const Poly& o) {
        for (auto& [e, c] : o.c_) set_coeff(e, coeff(e) + c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (auto& [e, c] : o.c_) set_coeff(e, coeff(e) - c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        for (auto& [ea, ca] : a.c_)
            for (auto& [eb, cb] : b.c_)
                r.set_coeff(ea + eb, r.coeff(ea + eb) + ca * cb);
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly scaled(const Rational& s) const {
        Poly r;
        if (s.is_zero()) return r;
        for (auto& [e, c] : c_) r.c_[e] = c * s;
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return a.c_ != b.c_; }
    friend bool operator<(const Poly& a, const Poly& b) {
        auto key = [](const Poly& p) {
            std::vector<std::pair<std::int64_t, std::string>> k;
            for (auto& [e, c] : p.c_) k.emplace_back(e, c.str());
            return k;
        };
        return key(a) < key(b);
    }

    Rational eval(const Rational& x) const {
        // Horner over the sparse support.
        Rational acc(0);
        std::int64_t last = 0;
        bool first = true;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            if (first) {
                acc = it->second;
                last = it->first;
                first = false;
            } else {
                acc = acc * pow(x, last - it->first) + it->second;
                last = it->first;
            }
        }
        return acc * pow(x, last);
    }

    // Quotient and remainder of Euclidean division.
    static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        if (b.is_zero()) throw Error("poly: division by zero");
        Poly q, r = a;
        const std::int64_t db = b.degree();
        const Rational lb = b.leading_coeff();
        while (!r.is_zero() && r.degree() >= db) {
            const std::int64_t e = r.degree() - db;
            const Rational c = r.leading_coeff() / lb;
            Poly t = monomial(e, c);
            q += t;
            r -= t * b;
        }
        return {q, r};
    }

    // Multiplicity of the root at L = 1 (0 if p(1) != 0). Requires p != 0.
    std::int64_t order_at_one() const {
        if (is_zero()) throw Error("poly: order_at_one of zero");
        Poly p = *this;
        const Poly lm1 = variable() - Poly(1);
        std::int64_t ord = 0;
        while (p.eval(Rational(1)).is_zero()) {
            auto [q, r] = divmod(p, lm1);
            if (!r.is_zero()) throw Error("poly: internal division error");
            p = q;
            ++ord;
        }
        return ord;
    }

    std::string str() const {
        if (is_zero()) return "0";
        std::string s;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            if (!s.empty()) s += " + ";
            if (it->first == 0) s += it->second.str();
            else if (it->second == Rational(1)) s += "L^" + std::to_string(it->first);
            else s += it->second.str() + "*L^" + std::to_string(it->first);
        }
        return s;
    }

private:
    std::map<std::int64_t, Rational> c_;
};

inline Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        auto [q, r] = Poly::divmod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a.scaled(a.leading_coeff().inverse());  // monic normalization
}

// Rational function in L. Canonical form: denominator monic, gcd(num, den)
// = 1, zero is 0/1. Equality is structural.
class RatFun {
public:
    RatFun() : num_(), den_(1) {}
    RatFun(const Rational& c) : num_(c), den_(1) {}             // NOLINT(google-explicit-constructor)
    RatFun(long long c) : num_(Rational(c)), den_(1) {}         // NOLINT(google-explicit-constructor)
    RatFun(const Poly& p) : num_(p), den_(1) {}                 // NOLINT(google-explicit-constructor)
    RatFun(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { reduce(); }

    static RatFun variable() { return RatFun(Poly::variable()); }
    // L^k, any integer k.
    static RatFun l_power(std::int64_t k) {
        if (k >= 0) return RatFun(Poly::monomial(k, Rational(1)));
        return RatFun(Poly(1), Poly::monomial(-k, Rational(1)));
    }

    const Poly& numerator() const { return num_; }
    const Poly& denominator() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_ == Poly(1); }

    RatFun operator-() const { return RatFun(-num_, den_, nullptr); }
    friend RatFun operator+(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator-(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator*(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFun operator/(const RatFun& a, const RatFun& b) {
        if (b.is_zero()) throw Error("ratfun: division by zero");
        return RatFun(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
    RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
    RatFun& operator*=(const RatFun& o) { return *this = *this * o; }
    RatFun& operator/=(const RatFun& o) { return *this = *this / o; }

    RatFun inverse() const {
        if (is_zero()) throw Error("ratfun: inverse of zero");
        return RatFun(den_, num_);
    }

    RatFun scaled(const Rational& s) const { return RatFun(num_.scaled(s), den_, nullptr); }

    friend bool operator==(const RatFun& a, const RatFun& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFun& a, const RatFun& b) { return !(a == b); }
    friend bool operator<(const RatFun& a, const RatFun& b) {
        if (a.num_ != b.num_) return a.num_ < b.num_;
        return a.den_ < b.den_;
    }

    Rational eval_at(const Rational& x) const {
        const Rational d = den_.eval(x);
        if (d.is_zero()) throw PoleAtPoint("ratfun: pole at evaluation point " + x.str());
        return num_.eval(x) / d;
    }

    // (L-1)-adic valuation; std::nullopt for the zero function.
    std::optional<std::int64_t> order_at_one() const {
        if (is_zero()) return std::nullopt;
        return num_.order_at_one() - den_.order_at_one();
    }

    // Value at L = 1 after cancelling matched (L-1) factors.
    // Throws NotRegular when the order at one is negative.
    Rational semiclassical_limit() const {
        if (is_zero()) return Rational(0);
        const Poly lm1 = Poly::variable() - Poly(1);
        Poly n = num_, d = den_;
        std::int64_t on = n.order_at_one(), od = d.order_at_one();
        if (on < od)
            throw NotRegular("ratfun: pole at L = 1 of order " + std::to_string(od - on));
        for (std::int64_t i = 0; i < od; ++i) {
            n = Poly::divmod(n, lm1).first;
            d = Poly::divmod(d, lm1).first;
        }
        if (on > od) return Rational(0);
        return n.eval(Rational(1)) / d.eval(Rational(1));
    }

    std::string str() const {
        if (is_polynomial()) return num_.str();
        return "(" + num_.str() + ") / (" + den_.str() + ")";
    }

private:
    // Trusted constructor: inputs already canonical up to sign bookkeeping.
    RatFun(Poly num, Poly den, std::nullptr_t) : num_(std::move(num)), den_(std::move(den)) {}

    void reduce() {
        if (den_.is_zero()) throw Error("ratfun: zero denominator");
        if (num_.is_zero()) {
            den_ = Poly(1);
            return;
        }
        Poly g = gcd(num_, den_);
        num_ = Poly::divmod(num_, g).first;
        den_ = Poly::divmod(den_, g).first;
        const Rational lc = den_.leading_coeff();
        if (lc != Rational(1)) {
            const Rational inv = lc.inverse();
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    Poly num_, den_;
};

// Lagrange interpolation with a mandatory holdout certificate. Fits the
// unique polynomial of degree <= degree_bound through the first
// degree_bound+1 points, then demands exact agreement on every remaining
// point and on the holdout. HoldoutMismatch signals the sampled quantity is
// not polynomial of the declared degree.
inline Poly interpolate(const std::vector<std::pair<Rational, Rational>>& points,
                        std::size_t degree_bound,
                        const std::pair<Rational, Rational>& holdout) {
    if (points.size() < degree_bound + 1)
        throw ConfigError("interpolate: need at least degree_bound+1 points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].first == holdout.first)
            throw ConfigError("interpolate: holdout point repeats a sample point");
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i].first == points[j].first)
                throw ConfigError("interpolate: repeated sample point");
    }
    const std::size_t m = degree_bound + 1;
    Poly fit;
    for (std::size_t i = 0; i < m; ++i) {
        Poly basis(Rational(1));
        Rational denom(1);
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            basis *= Poly::variable() - Poly(points[j].first);
            denom *= points[i].first - points[j].first;
        }
        fit += basis.scaled(points[i].second / denom);
    }
    for (std::size_t i = m; i < points.size(); ++i)
        if (fit.eval(points[i].first) != points[i].second)
            throw HoldoutMismatch("interpolate: extra sample point at q=" +
                                  points[i].first.str() + " disagrees with fit");
    if (fit.eval(holdout.first) != holdout.second)
        throw HoldoutMismatch("interpolate: holdout at q=" + holdout.first.str() +
                              " disagrees with fit (got " +
                              fit.eval(holdout.first).str() + ", expected " +
                              holdout.second.str() + ")");
    return fit;
}

} // namespace hallab
