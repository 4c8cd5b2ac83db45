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
#include "hallab/model.hpp"
#include "hallab/rational.hpp"
#include "hallab/series.hpp"

namespace hallab {

// Finitely supported coefficient table on the iso-classes of one degree.
// GradedSeries<ClassTable<R>> is then an exact Hall-module element: one table
// per degree, no stored zeros.
template <class R>
struct ClassTable {
    std::map<std::string, R> v;
};

template <class R>
struct coeff_traits<ClassTable<R>> {
    using ring = typename coeff_traits<R>::ring;
    static constexpr bool has_l = coeff_traits<R>::has_l;

    static ClassTable<R> zero() { return {}; }
    static bool is_zero(const ClassTable<R>& c) { return c.v.empty(); }

    static ClassTable<R> add(const ClassTable<R>& a, const ClassTable<R>& b) {
        ClassTable<R> out = a;
        for (auto& [k, x] : b.v) {
            auto it = out.v.find(k);
            if (it == out.v.end()) {
                out.v[k] = x;
            } else {
                it->second = coeff_traits<R>::add(it->second, x);
                if (coeff_traits<R>::is_zero(it->second)) out.v.erase(it);
            }
        }
        return out;
    }
    static ClassTable<R> neg(const ClassTable<R>& a) {
        ClassTable<R> out;
        for (auto& [k, x] : a.v) out.v[k] = coeff_traits<R>::neg(x);
        return out;
    }
    static ClassTable<R> scale(const ClassTable<R>& a, const Rational& s) {
        ClassTable<R> out;
        if (s.is_zero()) return out;
        for (auto& [k, x] : a.v) out.v[k] = coeff_traits<R>::scale(x, s);
        return out;
    }
    static ClassTable<R> scale_ring(const ClassTable<R>& a, const ring& s) {
        ClassTable<R> out;
        for (auto& [k, x] : a.v) {
            R y = coeff_traits<R>::scale_ring(x, s);
            if (!coeff_traits<R>::is_zero(y)) out.v[k] = std::move(y);
        }
        return out;
    }
    static ClassTable<R> scale_l(const ClassTable<R>& a, std::int64_t k) {
        ClassTable<R> out;
        for (auto& [lbl, x] : a.v) out.v[lbl] = coeff_traits<R>::scale_l(x, k);
        return out;
    }
    static std::string str(const ClassTable<R>& a) {
        std::string s = "{";
        for (auto& [k, x] : a.v) {
            if (s.size() > 1) s += ", ";
            s += k + ": " + coeff_traits<R>::str(x);
        }
        return s + "}";
    }
};

// Counting data of a finite abelian category with values in the coefficient
// ring R: exact rationals at a fixed q, or rational functions of L after
// interpolation across several q. Mirrors the Model counting surface, with
// every count already converted to R.
template <class R>
class HallSource {
public:
    virtual ~HallSource() = default;

    virtual std::string fingerprint() const = 0;
    virtual const std::shared_ptr<const GradingContext>& context() const = 0;

    virtual std::vector<std::string> classes(const Degree& d) const = 0;
    virtual Degree degree_of(const std::string& label) const = 0;
    virtual std::string zero_label() const = 0;

    using Profile = std::map<std::pair<std::string, std::string>, R>;
    virtual const Profile& filt_profile(const std::string& e) const = 0;
    virtual R aut(const std::string& e) const = 0;

    virtual bool has_framing() const = 0;
    virtual R framed(const std::string& e) const = 0;
    virtual R epi(const std::string& e) const = 0;

    virtual bool has_torsion_cut() const = 0;
    virtual bool in_p(const Degree& d) const = 0;
    // Whether the class has zero torsion part (lies in the torsion-free side).
    virtual bool in_q_class(const std::string& e) const = 0;
    virtual R stable_pair(const std::string& e) const = 0;

    virtual bool is_semistable(const std::string& e) const = 0;
    virtual Slope slope_of(const std::string& e) const = 0;

    virtual bool has_duality() const = 0;
    virtual std::string dual(const std::string& e) const = 0;
    virtual Degree dual_degree(const Degree& d) const = 0;

    virtual std::int64_t euler(const Degree& d, const Degree& e) const = 0;
    virtual bool zero_euler_form() const = 0;

    // q^k (resp. L^k) as an element of R; k may be negative.
    virtual R q_power(std::int64_t k) const = 0;
};

// Exact-rational source backed by one fixed-q model.
std::shared_ptr<const HallSource<Rational>> make_fixed_source(std::shared_ptr<const Model> m);

// Symbolic source for the one-column nilpotent-module category: filtration
// counts are interpolated in L from evaluations at the sample primes and
// certified against the holdout prime; automorphism, framing and epi counts
// use their closed forms. Class labels and degrees do not depend on q.
std::shared_ptr<const HallSource<RatFun>> make_symbolic_jordan_source(
    int bound, std::int64_t max_n,
    const std::vector<std::int64_t>& sample_qs = {2, 3, 5, 7},
    std::int64_t holdout_q = 11);

// An element of the Hall module, stamped with the fingerprint of the source
// it belongs to. Mixing elements of different sources raises ModelMismatch.
template <class R>
struct HallElement {
    std::string fp;
    GradedSeries<ClassTable<R>> s;

    const Window& window() const { return s.window(); }
    bool is_zero() const { return s.is_zero(); }

    // Exact class coefficient; OutOfWindow outside the window.
    R coefficient(const Degree& g, const std::string& label) const {
        ClassTable<R> t = s.component(g);
        auto it = t.v.find(label);
        return it == t.v.end() ? coeff_traits<R>::zero() : it->second;
    }

    HallElement restricted(const Window& w) const { return {fp, s.restricted(w)}; }
    HallElement scaled(const Rational& r) const { return {fp, s.scaled(r)}; }
    HallElement scaled_by(const typename coeff_traits<R>::ring& r) const {
        return {fp, s.scaled_by(r)};
    }
    std::string str() const { return s.str(); }
};

template <class R>
void require_same_source(const HallElement<R>& a, const HallElement<R>& b) {
    if (a.fp != b.fp)
        throw ModelMismatch("hall elements from different sources: " + a.fp + " vs " + b.fp);
}

template <class R>
HallElement<R> operator+(const HallElement<R>& a, const HallElement<R>& b) {
    require_same_source(a, b);
    return {a.fp, a.s + b.s};
}
template <class R>
HallElement<R> operator-(const HallElement<R>& a, const HallElement<R>& b) {
    require_same_source(a, b);
    return {a.fp, a.s - b.s};
}
template <class R>
HallElement<R> operator-(const HallElement<R>& a) {
    return {a.fp, -a.s};
}
template <class R>
bool operator==(const HallElement<R>& a, const HallElement<R>& b) {
    return a.fp == b.fp && a.s == b.s;
}
template <class R>
bool operator!=(const HallElement<R>& a, const HallElement<R>& b) {
    return !(a == b);
}

// Sub-first Hall convolution on class tables:
//   (f*g)(E) = sum over filtrations  filt(E, A, B) * f(A) * g(B),
// the first factor always evaluated on the subobject.
template <class R>
struct HallProduct final : BilinearProduct<ClassTable<R>> {
    const HallSource<R>* src;

    explicit HallProduct(const HallSource<R>* s) : src(s) {}

    ClassTable<R> mul(const Degree& d1, const ClassTable<R>& c1, const Degree& d2,
                      const ClassTable<R>& c2) const override {
        ClassTable<R> out;
        for (const std::string& e : src->classes(d1 + d2)) {
            R acc = coeff_traits<R>::zero();
            for (auto& [key, cnt] : src->filt_profile(e)) {
                if (src->degree_of(key.first) != d1) continue;
                auto ia = c1.v.find(key.first);
                if (ia == c1.v.end()) continue;
                auto ib = c2.v.find(key.second);
                if (ib == c2.v.end()) continue;
                acc = coeff_traits<R>::add(acc, cnt * ia->second * ib->second);
            }
            if (!coeff_traits<R>::is_zero(acc)) out.v[e] = std::move(acc);
        }
        return out;
    }
    ClassTable<R> unit_coeff() const override {
        ClassTable<R> c;
        c.v[src->zero_label()] = R(1);
        return c;
    }
    ClassTable<R> invert_unit(const ClassTable<R>& c) const override {
        auto it = c.v.find(src->zero_label());
        if (it == c.v.end() || c.v.size() != 1)
            throw NonUnitConstantTerm("constant term is not a multiple of the zero class");
        ClassTable<R> out;
        out.v[src->zero_label()] = it->second.inverse();
        return out;
    }
    bool commutative() const override { return false; }
};

// x^d x^e = q^{s(d,e)} x^{d+e} with s the bilinear form given by an integer
// matrix on the beta components; the q-power is taken in R.
template <class R>
struct TwistedTorusProduct final : BilinearProduct<R> {
    const HallSource<R>* src;
    std::vector<std::vector<std::int64_t>> smat;  // rank x rank

    TwistedTorusProduct(const HallSource<R>* s, std::vector<std::vector<std::int64_t>> m)
        : src(s), smat(std::move(m)) {}

    std::int64_t pair(const Degree& d, const Degree& e) const {
        std::int64_t acc = 0;
        for (std::size_t i = 0; i < smat.size(); ++i)
            for (std::size_t j = 0; j < smat.size(); ++j)
                acc += d.beta[i] * smat[i][j] * e.beta[j];
        return acc;
    }
    bool zero_form() const {
        for (auto& row : smat)
            for (auto x : row)
                if (x != 0) return false;
        return true;
    }

    R mul(const Degree& d1, const R& c1, const Degree& d2, const R& c2) const override {
        R r = c1 * c2;
        std::int64_t e = pair(d1, d2);
        if (e != 0) r = r * src->q_power(e);
        return r;
    }
    R unit_coeff() const override { return R(1); }
    R invert_unit(const R& c) const override {
        if (coeff_traits<R>::is_zero(c)) throw NonUnitConstantTerm("zero constant term");
        return c.inverse();
    }
    bool commutative() const override { return zero_form(); }
};

// Sub-window rich enough to separate the candidate torus-twist conventions:
// the unit-box beta columns of w with the point direction capped at 2.
Window twist_probe_window(const Window& w);

// The Hall algebra of one source. Construction runs the integration
// homomorphism battery over the four candidate twist conventions (+/- the
// Euler form, +/- its transpose) on a probe sub-window of `working_window`
// and requires exactly one survivor; ties or failures raise ConfigError.
template <class R>
class HallAlgebra {
public:
    HallAlgebra(std::shared_ptr<const HallSource<R>> src, const Window& working_window);

    const HallSource<R>& source() const { return *src_; }
    const std::shared_ptr<const GradingContext>& context() const { return src_->context(); }
    const std::string& fingerprint() const { return fp_; }

    // Selected quantum-torus twist exponent s(d,e).
    std::int64_t twist_exponent(const Degree& d, const Degree& e) const;
    bool commutative_torus() const;
    const BilinearProduct<R>& torus_product() const { return *torus_; }
    const BilinearProduct<ClassTable<R>>& convolution_product() const { return *conv_; }

    // -- Element constructors (all exact on w; class values from the source).
    HallElement<R> zero(const Window& w) const;
    HallElement<R> unit(const Window& w) const;
    HallElement<R> delta(const Window& w, const std::string& label) const;
    HallElement<R> char_element(const Window& w,
                                const std::function<bool(const std::string&)>& pred) const;
    HallElement<R> one_all(const Window& w) const;
    HallElement<R> one_p(const Window& w) const;
    HallElement<R> one_q(const Window& w) const;
    // Zero class plus the nonzero semistables of slope mu (resp. slope in
    // [lo, hi]); the constant term 1 keeps these log/invert-friendly.
    HallElement<R> one_ss(const Window& w, const Slope& mu) const;
    HallElement<R> one_ss_interval(const Window& w, const Slope& lo, const Slope& hi) const;
    HallElement<R> framed_element(const Window& w,
                                  const std::function<bool(const std::string&)>& pred) const;
    HallElement<R> framed_all(const Window& w) const;
    HallElement<R> framed_p(const Window& w) const;
    HallElement<R> hilbert_element(const Window& w) const;
    HallElement<R> pt_element(const Window& w) const;
    HallElement<R> h_zero(const Window& w) const;

    // -- Algebra operations.
    HallElement<R> convolve(const HallElement<R>& f, const HallElement<R>& g) const;
    HallElement<R> inverse(const HallElement<R>& f) const;
    HallElement<R> log(const HallElement<R>& f) const;
    HallElement<R> exp(const HallElement<R>& f) const;
    // The graded automorphism f -> L^{power*chi(gamma)} f.
    HallElement<R> twist(const HallElement<R>& f, std::int64_t power = 1) const;
    // (Df)(E) = f(dual E); the window must be closed under the dual degree map.
    HallElement<R> dual_pushforward(const HallElement<R>& f) const;

    // The integration map: sum_E f(E)/|Aut E| x^{deg E}, landing in the torus
    // with the selected twist (commutative exactly for zero Euler form).
    GradedSeries<R> integrate(const HallElement<R>& f) const;
    GradedSeries<R> torus_mul(const GradedSeries<R>& a, const GradedSeries<R>& b) const;

    // Slopes of the nonzero degrees of w, strictly descending.
    std::vector<Slope> realized_slopes(const Window& w) const;

private:
    HallElement<R> wrap(GradedSeries<ClassTable<R>> s) const { return {fp_, std::move(s)}; }
    void check(const HallElement<R>& f) const {
        if (f.fp != fp_)
            throw ModelMismatch("hall element from source " + f.fp + " used with " + fp_);
    }
    HallElement<R> build(const Window& w,
                         const std::function<void(const Degree&, const std::string&,
                                                  ClassTable<R>&)>& emit) const;
    GradedSeries<R> integrate_series(const GradedSeries<ClassTable<R>>& s) const;
    void run_battery(const Window& probe);

    std::shared_ptr<const HallSource<R>> src_;
    std::string fp_;
    std::unique_ptr<HallProduct<R>> conv_;
    std::unique_ptr<TwistedTorusProduct<R>> torus_;
};

extern template class HallAlgebra<Rational>;
extern template class HallAlgebra<RatFun>;

// log of a unit-constant-term element together with its (L-1)-rescaling and
// the pole check at L = 1 that makes the no-pole property testable.
struct EpsilonEta {
    HallElement<RatFun> eps;
    HallElement<RatFun> eta;
    // Every stacky measure eta(E)/|Aut E| has order_at_one >= 0.
    bool regular = true;
};

EpsilonEta epsilon_eta_of(const HallAlgebra<RatFun>& alg, const HallElement<RatFun>& one_like);
EpsilonEta epsilon_eta(const HallAlgebra<RatFun>& alg, const Window& w, const Slope& mu);

// Degreewise count extraction: N_gamma = -(semiclassical limit of the
// integral of eta at gamma). Finite support inside eta's window.
using NTable = GradedSeries<Rational>;
NTable n_invariants(const HallAlgebra<RatFun>& alg, const EpsilonEta& ee);

} // namespace hallab
