#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hallab/errors.hpp"
#include "hallab/grading.hpp"
#include "hallab/lpoly.hpp"
#include "hallab/rational.hpp"

namespace hallab {

// Additive-module operations a coefficient type must provide. The
// multiplicative structure is NOT here: it lives in BilinearProduct, because
// one coefficient type supports several products (plain monoid, quantum
// torus, Hall convolution).
template <class C>
struct coeff_traits;

template <>
struct coeff_traits<Rational> {
    using ring = Rational;
    static constexpr bool has_l = false;
    static Rational zero() { return Rational(0); }
    static bool is_zero(const Rational& c) { return c.is_zero(); }
    static Rational add(const Rational& a, const Rational& b) { return a + b; }
    static Rational neg(const Rational& a) { return -a; }
    static Rational scale(const Rational& a, const Rational& s) { return a * s; }
    static Rational scale_ring(const Rational& a, const Rational& s) { return a * s; }
    static Rational scale_l(const Rational&, std::int64_t) {
        throw ConfigError("coefficient ring has no L to twist by");
    }
    static std::string str(const Rational& a) { return a.str(); }
};

template <>
struct coeff_traits<RatFun> {
    using ring = RatFun;
    static constexpr bool has_l = true;
    static RatFun zero() { return RatFun(); }
    static bool is_zero(const RatFun& c) { return c.is_zero(); }
    static RatFun add(const RatFun& a, const RatFun& b) { return a + b; }
    static RatFun neg(const RatFun& a) { return -a; }
    static RatFun scale(const RatFun& a, const Rational& s) { return a.scaled(s); }
    static RatFun scale_ring(const RatFun& a, const RatFun& s) { return a * s; }
    static RatFun scale_l(const RatFun& a, std::int64_t k) { return a * RatFun::l_power(k); }
    static std::string str(const RatFun& a) { return a.str(); }
};

// Degree-additive bilinear product on coefficients; realizes the commutative
// monoid algebra, the quantum torus, and Hall convolution behind one
// interface.
template <class C>
struct BilinearProduct {
    virtual ~BilinearProduct() = default;
    virtual C mul(const Degree& d1, const C& c1, const Degree& d2, const C& c2) const = 0;
    // Coefficient of the multiplicative unit at degree zero.
    virtual C unit_coeff() const = 0;
    // Inverse of a degree-zero coefficient; throws NonUnitConstantTerm.
    virtual C invert_unit(const C& c) const = 0;
    virtual bool commutative() const { return false; }
};

// Plain commutative product of the monoid algebra on the degree lattice.
template <class C>
struct MonoidProduct final : BilinearProduct<C> {
    C mul(const Degree&, const C& c1, const Degree&, const C& c2) const override {
        return c1 * c2;
    }
    C unit_coeff() const override { return C(1); }
    C invert_unit(const C& c) const override {
        if (coeff_traits<C>::is_zero(c)) throw NonUnitConstantTerm("zero constant term");
        return c.inverse();
    }
    bool commutative() const override { return true; }
};

// Quantum torus: x^d x^e = L^{s(d,e)} x^{d+e}; s is an integer bilinear form
// pinned empirically per model (zero form = commutative case).
struct QuantumTorusProduct final : BilinearProduct<RatFun> {
    std::function<std::int64_t(const Degree&, const Degree&)> s;

    explicit QuantumTorusProduct(std::function<std::int64_t(const Degree&, const Degree&)> tw)
        : s(std::move(tw)) {}
    static QuantumTorusProduct trivial() {
        return QuantumTorusProduct([](const Degree&, const Degree&) { return std::int64_t(0); });
    }

    RatFun mul(const Degree& d1, const RatFun& c1, const Degree& d2,
               const RatFun& c2) const override {
        RatFun r = c1 * c2;
        std::int64_t e = s(d1, d2);
        if (e != 0) r = r * RatFun::l_power(e);
        return r;
    }
    RatFun unit_coeff() const override { return RatFun(1); }
    RatFun invert_unit(const RatFun& c) const override {
        if (c.is_zero()) throw NonUnitConstantTerm("zero constant term");
        return c.inverse();
    }
    bool commutative() const override { return false; }
};

// An element of the completed graded algebra, known exactly on `window`:
// stored coefficients are authoritative inside the window, unknown outside.
template <class C>
class GradedSeries {
public:
    GradedSeries() = default;
    GradedSeries(std::shared_ptr<const GradingContext> ctx, Window window)
        : ctx_(std::move(ctx)), window_(std::move(window)) {}

    static GradedSeries zero(std::shared_ptr<const GradingContext> ctx, Window w) {
        return GradedSeries(std::move(ctx), std::move(w));
    }
    static GradedSeries unit(std::shared_ptr<const GradingContext> ctx, Window w,
                             const BilinearProduct<C>& p) {
        GradedSeries s(std::move(ctx), std::move(w));
        Degree z{Beta(s.ctx_->rank, 0), 0};
        if (!s.window_.contains(z)) throw ConfigError("unit needs the zero degree in-window");
        s.set(z, p.unit_coeff());
        return s;
    }
    static GradedSeries monomial(std::shared_ptr<const GradingContext> ctx, Window w,
                                 const Degree& d, C c) {
        GradedSeries s(std::move(ctx), std::move(w));
        s.set(d, std::move(c));
        return s;
    }

    const std::shared_ptr<const GradingContext>& context_ptr() const { return ctx_; }
    const GradingContext& context() const { return *ctx_; }
    const Window& window() const { return window_; }
    const std::map<Degree, C>& terms() const { return terms_; }
    Degree zero_degree() const { return Degree{Beta(ctx_->rank, 0), 0}; }

    // Exact coefficient; OutOfWindow distinguishes "unknown" from "zero".
    C component(const Degree& g) const {
        if (!window_.contains(g)) throw OutOfWindow("degree " + g.str() + " outside window");
        auto it = terms_.find(g);
        return it == terms_.end() ? coeff_traits<C>::zero() : it->second;
    }

    void set(const Degree& g, C c) {
        if (!window_.contains(g))
            throw OutOfWindow("cannot store degree " + g.str() + " outside window");
        if (coeff_traits<C>::is_zero(c))
            terms_.erase(g);
        else
            terms_[g] = std::move(c);
    }

    void accumulate(const Degree& g, const C& c) {
        if (coeff_traits<C>::is_zero(c)) return;
        if (!window_.contains(g))
            throw OutOfWindow("cannot accumulate at degree " + g.str() + " outside window");
        auto it = terms_.find(g);
        if (it == terms_.end()) {
            terms_[g] = c;
        } else {
            it->second = coeff_traits<C>::add(it->second, c);
            if (coeff_traits<C>::is_zero(it->second)) terms_.erase(it);
        }
    }

    bool is_zero() const { return terms_.empty(); }

    GradedSeries restricted(const Window& w) const {
        GradedSeries out(ctx_, w);
        for (auto& [g, c] : terms_)
            if (w.contains(g)) out.terms_[g] = c;
        return out;
    }

    GradedSeries scaled(const Rational& s) const {
        GradedSeries out(ctx_, window_);
        if (s.is_zero()) return out;
        for (auto& [g, c] : terms_) out.terms_[g] = coeff_traits<C>::scale(c, s);
        return out;
    }

    // Scalar multiplication by a coefficient-ring element, e.g. (L-1)*a.
    GradedSeries scaled_by(const typename coeff_traits<C>::ring& s) const {
        GradedSeries out(ctx_, window_);
        for (auto& [g, c] : terms_) out.set(g, coeff_traits<C>::scale_ring(c, s));
        return out;
    }

    friend GradedSeries operator+(const GradedSeries& a, const GradedSeries& b) {
        GradedSeries out(a.ctx_, window_intersection(a.window_, b.window_));
        for (auto& [g, c] : a.terms_)
            if (out.window_.contains(g)) out.accumulate(g, c);
        for (auto& [g, c] : b.terms_)
            if (out.window_.contains(g)) out.accumulate(g, c);
        return out;
    }
    friend GradedSeries operator-(const GradedSeries& a, const GradedSeries& b) {
        GradedSeries out(a.ctx_, window_intersection(a.window_, b.window_));
        for (auto& [g, c] : a.terms_)
            if (out.window_.contains(g)) out.accumulate(g, c);
        for (auto& [g, c] : b.terms_)
            if (out.window_.contains(g)) out.accumulate(g, coeff_traits<C>::neg(c));
        return out;
    }
    GradedSeries operator-() const {
        GradedSeries out(ctx_, window_);
        for (auto& [g, c] : terms_) out.terms_[g] = coeff_traits<C>::neg(c);
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto& [g, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += "(" + coeff_traits<C>::str(c) + ")x^" + g.str();
        }
        return s;
    }

private:
    std::shared_ptr<const GradingContext> ctx_;
    Window window_;
    std::map<Degree, C> terms_;
};

// Structural equality of the exact data (same window, same coefficients).
template <class C>
bool operator==(const GradedSeries<C>& a, const GradedSeries<C>& b) {
    if (!(a.window() == b.window())) return false;
    auto eq = [](const C& x, const C& y) {
        return coeff_traits<C>::is_zero(coeff_traits<C>::add(x, coeff_traits<C>::neg(y)));
    };
    for (auto& [g, c] : a.terms()) {
        auto it = b.terms().find(g);
        if (it == b.terms().end() || !eq(c, it->second)) return false;
    }
    for (auto& [g, c] : b.terms())
        if (a.terms().find(g) == a.terms().end()) return false;
    return true;
}
template <class C>
bool operator!=(const GradedSeries<C>& a, const GradedSeries<C>& b) {
    return !(a == b);
}

// Coefficient-wise equality on an explicit comparison window (both series
// must know all of it exactly).
template <class C>
bool equal_on(const GradedSeries<C>& a, const GradedSeries<C>& b, const Window& w) {
    for (const Degree& g : w.degrees()) {
        C d = coeff_traits<C>::add(a.component(g), coeff_traits<C>::neg(b.component(g)));
        if (!coeff_traits<C>::is_zero(d)) return false;
    }
    return true;
}

namespace detail {

// Product with a caller-supplied target window the caller has already proved
// exact (all needed splittings known). Shared core of mul/exp/log/invert.
template <class C>
GradedSeries<C> mul_onto(const GradedSeries<C>& a, const GradedSeries<C>& b,
                         const BilinearProduct<C>& p, const Window& target) {
    GradedSeries<C> out(a.context_ptr(), target);
    for (auto& [g1, c1] : a.terms()) {
        for (auto& [g2, c2] : b.terms()) {
            Degree g = g1 + g2;
            if (!target.contains(g)) continue;
            out.accumulate(g, p.mul(g1, c1, g2, c2));
        }
    }
    return out;
}

} // namespace detail

// Truncated product: exact exactly where every effective splitting is
// covered by both factors' windows.
template <class C>
GradedSeries<C> mul(const GradedSeries<C>& a, const GradedSeries<C>& b,
                    const BilinearProduct<C>& p) {
    if (a.context_ptr().get() != b.context_ptr().get())
        throw ConfigError("mul across different grading contexts");
    return detail::mul_onto(a, b, p, guaranteed_product_window(a.window(), b.window()));
}

// Multiplicative inverse on the saturated window, by degreewise recursion
// g(0) = c0^{-1}, g(g) = -c0^{-1} * sum_{0 != g1 <= g} u(g1) g(g-g1).
template <class C>
GradedSeries<C> invert(const GradedSeries<C>& u, const BilinearProduct<C>& p) {
    Window w = saturated(u.window());
    const Degree z = u.zero_degree();
    C c0 = u.component(z);
    C c0inv = p.invert_unit(c0);

    // Degrees of a saturated window are solved in (sum beta, n) order: every
    // proper splitting part is strictly smaller in that order (beta mass
    // drops, or the beta-0 part spends at least one unit of n).
    std::vector<Degree> order = w.degrees();
    std::stable_sort(order.begin(), order.end(), [](const Degree& x, const Degree& y) {
        std::int64_t bx = 0, by = 0;
        for (auto v : x.beta) bx += v;
        for (auto v : y.beta) by += v;
        if (bx != by) return bx < by;
        if (x.n != y.n) return x.n < y.n;
        return x < y;
    });
    std::map<Degree, C> solved;
    solved[z] = c0inv;
    for (const Degree& g : order) {
        if (g == z) continue;
        C acc = coeff_traits<C>::zero();
        for (auto& [g1, c1] : u.terms()) {
            if (g1 == z) continue;
            Degree g2 = g - g1;
            if (!u.context().is_effective(g2)) continue;
            auto it = solved.find(g2);
            if (it == solved.end())
                throw Error("inverse recursion visited an unsolved degree " + g2.str());
            if (!coeff_traits<C>::is_zero(it->second))
                acc = coeff_traits<C>::add(acc, p.mul(g1, c1, g2, it->second));
        }
        solved[g] = coeff_traits<C>::neg(p.mul(z, c0inv, g, acc));
    }
    GradedSeries<C> out(u.context_ptr(), w);
    for (auto& [g, c] : solved) out.set(g, c);
    return out;
}

// exp of a constant-term-free element; exact on the saturated window.
template <class C>
GradedSeries<C> exp_series(const GradedSeries<C>& a, const BilinearProduct<C>& p) {
    Window w = saturated(a.window());
    const Degree z = a.zero_degree();
    if (!coeff_traits<C>::is_zero(a.component(z)))
        throw BadConstantTerm("exp needs constant term 0");
    GradedSeries<C> ar = a.restricted(w);
    GradedSeries<C> acc = GradedSeries<C>::unit(a.context_ptr(), w, p);
    GradedSeries<C> pw = acc;
    Rational fact(1);
    for (std::int64_t k = 1; !pw.is_zero(); ++k) {
        if (k > 100000) throw Error("exp did not terminate on the window");
        pw = detail::mul_onto(pw, ar, p, w);
        fact = fact * Rational(k);
        acc = acc + pw.scaled(fact.inverse());
    }
    return acc;
}

// log of a unit-constant-term element; exact on the saturated window.
template <class C>
GradedSeries<C> log_series(const GradedSeries<C>& u, const BilinearProduct<C>& p) {
    Window w = saturated(u.window());
    const Degree z = u.zero_degree();
    C c0 = u.component(z);
    C dev = coeff_traits<C>::add(c0, coeff_traits<C>::neg(p.unit_coeff()));
    if (!coeff_traits<C>::is_zero(dev)) throw BadConstantTerm("log needs constant term 1");
    GradedSeries<C> h = u.restricted(w);
    h.set(z, coeff_traits<C>::zero());
    GradedSeries<C> acc = GradedSeries<C>::zero(u.context_ptr(), w);
    GradedSeries<C> pw = GradedSeries<C>::unit(u.context_ptr(), w, p);
    for (std::int64_t k = 1;; ++k) {
        if (k > 100000) throw Error("log did not terminate on the window");
        pw = detail::mul_onto(pw, h, p, w);
        if (pw.is_zero()) break;
        Rational coef = Rational(k % 2 == 1 ? 1 : -1, k);
        acc = acc + pw.scaled(coef);
    }
    return acc;
}

// The graded automorphism a -> L^{chi(gamma)} a (and its integer powers).
template <class C>
GradedSeries<C> twist_chi(const GradedSeries<C>& a, std::int64_t power = 1) {
    GradedSeries<C> out(a.context_ptr(), a.window());
    for (auto& [g, c] : a.terms()) {
        std::int64_t e = power * a.context().chi(g);
        out.set(g, e == 0 ? c : coeff_traits<C>::scale_l(c, e));
    }
    return out;
}

// Semiclassical Poisson bracket {a,b} = (a*b - b*a)/(L-1) evaluated at L=1.
// Inputs must be regular (coefficient order at L=1 >= 0); the commutator must
// be divisible by (L-1).
GradedSeries<Rational> poisson_bracket(const GradedSeries<RatFun>& a,
                                       const GradedSeries<RatFun>& b,
                                       const BilinearProduct<RatFun>& p);

// Semiclassical limit of a regular series: coefficientwise value at L=1.
GradedSeries<Rational> semiclassical(const GradedSeries<RatFun>& a);

// Both computations of the adjoint action of exp(a): conjugation
// exp(a) v exp(a)^{-1} and the series exp(ad_a)(v). They must agree exactly;
// the shared value is returned.
template <class C>
GradedSeries<C> ad_exp(const GradedSeries<C>& a, const GradedSeries<C>& v,
                       const BilinearProduct<C>& p) {
    const Degree z = a.zero_degree();
    if (!coeff_traits<C>::is_zero(a.component(z)))
        throw BadConstantTerm("ad_exp needs constant term 0");
    Window w = window_intersection(saturated(a.window()), saturated(v.window()));
    w = saturated(w);
    GradedSeries<C> ar = a.restricted(w), vr = v.restricted(w);

    GradedSeries<C> e = exp_series(ar, p);
    GradedSeries<C> route1 =
        detail::mul_onto(detail::mul_onto(e, vr, p, w), invert(e, p).restricted(w), p, w);

    GradedSeries<C> acc = vr;
    GradedSeries<C> cur = vr;
    Rational fact(1);
    for (std::int64_t k = 1; !cur.is_zero(); ++k) {
        if (k > 100000) throw Error("ad series did not terminate on the window");
        cur = detail::mul_onto(ar, cur, p, w) - detail::mul_onto(cur, ar, p, w);
        fact = fact * Rational(k);
        acc = acc + cur.scaled(fact.inverse());
    }
    if (!equal_on(route1, acc, w))
        throw Error("adjoint routes disagree: conjugation vs exp(ad) differ in-window");
    return route1;
}

// Stabilized limit of a sequence of series, per degree, at indices supplied
// by an explicit stabilization certificate. When verify_next is set the next
// element is checked to actually agree at the certified degree.
template <class C>
GradedSeries<C> limit(const std::function<GradedSeries<C>(std::size_t)>& producer,
                      const Window& w,
                      const std::function<std::size_t(const Degree&)>& certificate,
                      std::shared_ptr<const GradingContext> ctx, bool verify_next = true) {
    if (!certificate) throw NoCertificate("limit requires a stabilization certificate");
    if (!producer) throw ConfigError("limit requires a producer");
    GradedSeries<C> out(ctx, w);
    std::map<std::size_t, std::vector<Degree>> plan;
    for (const Degree& g : w.degrees()) plan[certificate(g)].push_back(g);
    for (auto& [idx, degs] : plan) {
        GradedSeries<C> s = producer(idx);
        GradedSeries<C> s2 = verify_next ? producer(idx + 1) : GradedSeries<C>();
        for (const Degree& g : degs) {
            C c = s.component(g);
            if (verify_next) {
                C d = coeff_traits<C>::add(s2.component(g), coeff_traits<C>::neg(c));
                if (!coeff_traits<C>::is_zero(d))
                    throw NoCertificate("stabilization certificate violated at " + g.str());
            }
            out.set(g, c);
        }
    }
    return out;
}

// Element of the skew extension A<y>/(y a - a^chi y), normal form with all
// y's on the right: sum_i  components[i] * y^i.
template <class C>
struct SkewElement {
    std::map<std::int64_t, GradedSeries<C>> components;

    static SkewElement from_series(GradedSeries<C> s) {
        SkewElement e;
        if (!s.is_zero()) e.components[0] = std::move(s);
        return e;
    }
    static SkewElement y_power(std::shared_ptr<const GradingContext> ctx, Window w,
                               const BilinearProduct<C>& p, std::int64_t k) {
        if (k < 0) throw ConfigError("negative y-exponent");
        SkewElement e;
        e.components[k] = GradedSeries<C>::unit(std::move(ctx), std::move(w), p);
        return e;
    }
    bool is_zero() const {
        for (auto& [k, s] : components)
            if (!s.is_zero()) return false;
        return true;
    }
};

// Normal-form product: (a y^i)(b y^j) = a * twist^i(b) y^{i+j}.
template <class C>
SkewElement<C> skew_mul(const SkewElement<C>& u, const SkewElement<C>& v,
                        const BilinearProduct<C>& p) {
    SkewElement<C> out;
    for (auto& [i, a] : u.components) {
        for (auto& [j, b] : v.components) {
            GradedSeries<C> t = mul(a, i == 0 ? b : twist_chi(b, i), p);
            auto it = out.components.find(i + j);
            if (it == out.components.end())
                out.components[i + j] = std::move(t);
            else
                it->second = it->second + t;
        }
    }
    for (auto it = out.components.begin(); it != out.components.end();)
        it = it->second.is_zero() ? out.components.erase(it) : std::next(it);
    return out;
}

// Semiclassical bracket on the skew algebra, per y-component.
SkewElement<Rational> skew_poisson_bracket(const SkewElement<RatFun>& a,
                                           const SkewElement<RatFun>& b,
                                           const BilinearProduct<RatFun>& p);

} // namespace hallab
