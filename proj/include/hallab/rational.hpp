#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "hallab/errors.hpp"

namespace hallab {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational number. Always in canonical form: gcd(num, den) = 1,
// den >= 1. Backed by cpp_rational, which maintains that invariant.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long long n) : v_(n) {}                            // NOLINT(google-explicit-constructor)
    Rational(const BigInt& n) : v_(n) {}                        // NOLINT(google-explicit-constructor)
    Rational(const BigInt& num, const BigInt& den) : v_(canonical(num, den)) {}

    static Rational parse(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(BigInt(s));
        return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    }

    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return denominator() == 1; }
    int sign() const { return v_ < 0 ? -1 : (v_ > 0 ? 1 : 0); }

    Rational operator-() const { return Rational(-v_); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.v_ == 0) throw Error("rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    Rational inverse() const {
        if (v_ == 0) throw Error("rational: inverse of zero");
        return Rational(denominator(), numerator());
    }

    // Canonical serialization: "p" for integers, "p/q" otherwise.
    std::string str() const {
        if (is_integer()) return numerator().str();
        return numerator().str() + "/" + denominator().str();
    }

private:
    explicit Rational(const boost::multiprecision::cpp_rational& v) : v_(v) {}

    // cpp_rational's two-argument constructor demands canonical input
    // (coprime, positive denominator), so reduce here.
    static boost::multiprecision::cpp_rational canonical(BigInt num, BigInt den) {
        if (den == 0) throw Error("rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        BigInt g = boost::multiprecision::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        return boost::multiprecision::cpp_rational(num, den);
    }

    boost::multiprecision::cpp_rational v_;
};

inline Rational pow(const Rational& base, long long e) {
    if (e < 0) return pow(base.inverse(), -e);
    Rational acc(1), b = base;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

} // namespace hallab
