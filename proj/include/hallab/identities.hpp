#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hallab/grading.hpp"
#include "hallab/hall.hpp"
#include "hallab/series.hpp"

namespace hallab {

// Closed interval of slopes, unbounded on either side when the endpoint is
// absent. lo > hi is the empty interval.
struct SlopeInterval {
    std::optional<Slope> lo;
    std::optional<Slope> hi;

    static SlopeInterval everything() { return {}; }
    static SlopeInterval between(Slope a, Slope b) { return {std::move(a), std::move(b)}; }
    static SlopeInterval at_least(Slope a) { return {std::move(a), std::nullopt}; }
    static SlopeInterval at_most(Slope b) { return {std::nullopt, std::move(b)}; }
    static SlopeInterval nothing() {
        return {Slope::inf(), Slope::finite(Rational(0))};
    }

    bool contains(const Slope& s) const {
        if (lo && s < *lo) return false;
        if (hi && *hi < s) return false;
        return true;
    }
    std::string str() const {
        std::string s = lo ? "[" + lo->str() : "(-inf";
        s += ", ";
        s += hi ? hi->str() + "]" : "+inf)";
        return s;
    }
};

// One graded piece of a verified identity. On failure lhs/rhs hold both
// sides' rendered values at this degree and note names the failing
// sub-check; on success note may carry an auxiliary certificate.
struct DegreeCheck {
    Degree degree;
    bool pass = true;
    std::string note;
    std::string lhs;
    std::string rhs;
};

// Per-degree equality report for one Hall-algebra identity. Self-contained
// for regression diffing: identity name, source fingerprint, rendered
// window, one row per in-window degree, and the first failing degree as
// witness. json() is stable-ordered (sorted keys, schema 1); the wall-clock
// duration is serialized only when requested so reports stay byte-identical
// across runs.
struct VerificationReport {
    std::string identity;
    std::string fingerprint;
    std::string window;
    std::string detail;  // extra parameters, e.g. the slope interval
    std::vector<DegreeCheck> degrees;
    bool pass = true;
    std::optional<Degree> witness;
    double seconds = 0.0;

    std::string str() const;
    std::string json(bool with_timings = false) const;
};

// Rendered window: sorted beta columns with their point ranges.
std::string window_str(const Window& w);

// Per-degree comparison of two precomputed Hall elements (also the failure
// machinery behind every verifier; exposed so deliberate corruptions can be
// reported the same way).
template <class R>
VerificationReport compare_elements(const std::string& identity, const HallAlgebra<R>& alg,
                                    const Window& w, const HallElement<R>& lhs,
                                    const HallElement<R>& rhs);

// Per-degree comparison of two torus series exact on w.
template <class R>
VerificationReport compare_series(const std::string& identity, const std::string& fingerprint,
                                  const Window& w, const GradedSeries<R>& lhs,
                                  const GradedSeries<R>& rhs);

// Characteristic element of the classes all of whose Harder-Narasimhan
// slopes lie in the interval. Computed from subobject/quotient slope bounds
// alone (the maximal destabilizing subobject realizes the largest slope, the
// minimal destabilizing quotient the smallest), independent of any
// convolution.
template <class R>
HallElement<R> hn_interval_element(const HallAlgebra<R>& alg, const Window& w,
                                   const SlopeInterval& I);

// Integral of 1_I^{-1} * 1_I^chi where 1_I is the Harder-Narasimhan interval
// element and the chi-twist scales degree gamma by q^chi(gamma). Computable
// on any model; it is the left side of the twist-ratio identity and is plain
// data when the torus is noncommutative.
template <class R>
GradedSeries<R> twist_ratio_integral(const HallAlgebra<R>& alg, const Window& w,
                                     const SlopeInterval& I);

// 1 = 1_P * 1_Q and, when a framing object exists, O = O_P * O_Q: every
// object has exactly one torsion filtration, and homomorphism counts from a
// projective multiply along it.
template <class R>
VerificationReport verify_torsion_pair(const HallAlgebra<R>& alg, const Window& w);

// O = H * 1: maps from the framing object factor uniquely as an epimorphism
// onto their image followed by the inclusion.
template <class R>
VerificationReport verify_hilbert(const HallAlgebra<R>& alg, const Window& w);

// O_Q = H# * 1_Q: a map from the framing object to a torsion-free target
// factors uniquely through its saturation, with torsion cokernel.
template <class R>
VerificationReport verify_stable_pair(const HallAlgebra<R>& alg, const Window& w);

// 1_SS(I) = product of 1_SS(mu) over the realized slopes mu in I, taken in
// descending order; the left side is the interval element computed from
// slope bounds.
template <class R>
VerificationReport verify_harder_narasimhan(const HallAlgebra<R>& alg, const Window& w,
                                            const SlopeInterval& I);

// H * 1_P = H0 * 1_P * H# per degree, with the intermediate relation
// O_P = H0 * 1_P checked separately and the full-characteristic limit
// 1 = lim over descending slope products certified per degree from the
// finite slope spectrum.
template <class R>
VerificationReport verify_dt_pt(const HallAlgebra<R>& alg, const Window& w);

// For every realized slope mu, eta_mu = (L-1) log 1_SS(mu) is regular: each
// stacky measure eta_mu(E)/|Aut E| has no pole at L = 1.
VerificationReport verify_no_pole(const HallAlgebra<RatFun>& alg, const Window& w);

// Integral of 1_I^{-1} * 1_I^chi equals exp(-sum chi(gamma) N_gamma
// x^gamma) over the in-window degrees with slope in I, N from the
// semiclassical count extraction. Requires a commutative torus.
VerificationReport verify_twist_ratio(const HallAlgebra<RatFun>& alg, const Window& w,
                                      const SlopeInterval& I);

// Conjugation invariance of the integral in the semiclassical limit:
// integral of u^{-1} * H * u equals the integral of H for u = 1_SS(mu) at
// every realized slope. Requires a commutative torus.
VerificationReport verify_conjugation_invariance(const HallAlgebra<RatFun>& alg,
                                                 const Window& w);

} // namespace hallab
