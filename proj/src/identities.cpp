#include "hallab/identities.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <utility>

namespace hallab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string esc(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

template <class C>
bool coeff_equal(const C& a, const C& b) {
    return coeff_traits<C>::is_zero(coeff_traits<C>::add(a, coeff_traits<C>::neg(b)));
}

// Row-per-degree accumulator; the first failing sub-check of a degree is the
// one reported.
struct Rows {
    std::vector<DegreeCheck> rows;
    std::map<Degree, std::size_t> index;

    explicit Rows(const Window& w) {
        for (const Degree& g : w.degrees()) {
            index[g] = rows.size();
            rows.push_back(DegreeCheck{g, true, "", "", ""});
        }
    }
    void fail(const Degree& g, std::string note, std::string lhs, std::string rhs) {
        DegreeCheck& r = rows[index.at(g)];
        if (!r.pass) return;
        r.pass = false;
        r.note = std::move(note);
        r.lhs = std::move(lhs);
        r.rhs = std::move(rhs);
    }
    void annotate(const Degree& g, const std::string& note) {
        DegreeCheck& r = rows[index.at(g)];
        if (r.pass) r.note = note;
    }
};

template <class C>
void compare_into(Rows& rows, const std::string& note, const Window& w,
                  const GradedSeries<C>& lhs, const GradedSeries<C>& rhs) {
    for (const Degree& g : w.degrees()) {
        C a = lhs.component(g);
        C b = rhs.component(g);
        if (!coeff_equal(a, b))
            rows.fail(g, note, coeff_traits<C>::str(a), coeff_traits<C>::str(b));
    }
}

VerificationReport seal(std::string identity, std::string fingerprint, const Window& w,
                        std::string detail, Rows rows, Clock::time_point t0) {
    VerificationReport rep;
    rep.identity = std::move(identity);
    rep.fingerprint = std::move(fingerprint);
    rep.window = window_str(w);
    rep.detail = std::move(detail);
    rep.degrees = std::move(rows.rows);
    for (const DegreeCheck& r : rep.degrees) {
        if (!r.pass) {
            rep.pass = false;
            if (!rep.witness) rep.witness = r.degree;
        }
    }
    rep.seconds = seconds_since(t0);
    return rep;
}

// Convolution is exact per degree only when every splitting of an in-window
// degree stays in-window; boxes and single columns qualify.
void require_closed(const Window& w) {
    if (!(saturated(w) == w))
        throw ConfigError("identity verification needs a multiplication-closed window");
}

template <class R>
void require_context(const HallAlgebra<R>& alg, const Window& w) {
    if (w.context_ptr().get() != alg.context().get())
        throw ModelMismatch("window grading context does not match the source");
}

} // namespace

std::string window_str(const Window& w) {
    std::string s = "{";
    for (const auto& [b, c] : w.columns()) {
        if (s.size() > 1) s += ", ";
        s += "(";
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(b[i]);
        }
        s += "):[" + std::to_string(c.lo) + "," + std::to_string(c.hi) + "]";
    }
    return s + "}";
}

std::string VerificationReport::str() const {
    std::string s = identity;
    if (!detail.empty()) s += " " + detail;
    s += " on " + window + ": ";
    if (pass) return s + "PASS (" + std::to_string(degrees.size()) + " degrees)";
    std::size_t bad = 0;
    const DegreeCheck* first = nullptr;
    for (const DegreeCheck& r : degrees) {
        if (r.pass) continue;
        ++bad;
        if (!first) first = &r;
    }
    s += "FAIL (" + std::to_string(bad) + " of " + std::to_string(degrees.size()) +
         " degrees) at " + first->degree.str();
    if (!first->note.empty()) s += " [" + first->note + "]";
    s += " lhs=" + first->lhs + " rhs=" + first->rhs;
    return s;
}

std::string VerificationReport::json(bool with_timings) const {
    std::string s = "{\"degrees\":[";
    bool comma = false;
    for (const DegreeCheck& r : degrees) {
        if (comma) s += ",";
        comma = true;
        s += "{\"degree\":\"" + esc(r.degree.str()) + "\"";
        if (!r.pass) s += ",\"lhs\":\"" + esc(r.lhs) + "\"";
        if (!r.note.empty()) s += ",\"note\":\"" + esc(r.note) + "\"";
        s += std::string(",\"pass\":") + (r.pass ? "true" : "false");
        if (!r.pass) s += ",\"rhs\":\"" + esc(r.rhs) + "\"";
        s += "}";
    }
    s += "]";
    if (!detail.empty()) s += ",\"detail\":\"" + esc(detail) + "\"";
    s += ",\"fingerprint\":" + fingerprint;
    s += ",\"identity\":\"" + esc(identity) + "\"";
    s += std::string(",\"pass\":") + (pass ? "true" : "false");
    s += ",\"schema\":1";
    if (with_timings) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f", seconds);
        s += ",\"seconds\":";
        s += buf;
    }
    s += ",\"window\":\"" + esc(window) + "\"";
    if (witness) s += ",\"witness\":\"" + esc(witness->str()) + "\"";
    return s + "}";
}

template <class R>
VerificationReport compare_elements(const std::string& identity, const HallAlgebra<R>& alg,
                                    const Window& w, const HallElement<R>& lhs,
                                    const HallElement<R>& rhs) {
    auto t0 = Clock::now();
    require_context(alg, w);
    Rows rows(w);
    compare_into(rows, "", w, lhs.s, rhs.s);
    return seal(identity, alg.fingerprint(), w, "", std::move(rows), t0);
}

template <class R>
VerificationReport compare_series(const std::string& identity, const std::string& fingerprint,
                                  const Window& w, const GradedSeries<R>& lhs,
                                  const GradedSeries<R>& rhs) {
    auto t0 = Clock::now();
    Rows rows(w);
    compare_into(rows, "", w, lhs, rhs);
    return seal(identity, fingerprint, w, "", std::move(rows), t0);
}

template <class R>
HallElement<R> hn_interval_element(const HallAlgebra<R>& alg, const Window& w,
                                   const SlopeInterval& I) {
    const HallSource<R>& src = alg.source();
    const std::string zero = src.zero_label();
    return alg.char_element(w, [&src, zero, I](const std::string& e) {
        if (e == zero) return true;  // no filtration steps at all
        // Largest slope among nonzero subobjects bounds the top filtration
        // step, smallest slope among nonzero quotients the bottom one; the
        // interval is order-convex, so these two bounds decide membership.
        std::optional<Slope> top, bottom;
        for (const auto& [key, cnt] : src.filt_profile(e)) {
            if (coeff_traits<R>::is_zero(cnt)) continue;
            if (key.first != zero) {
                Slope s = src.slope_of(key.first);
                if (!top || *top < s) top = s;
            }
            if (key.second != zero) {
                Slope s = src.slope_of(key.second);
                if (!bottom || s < *bottom) bottom = s;
            }
        }
        if (!top || !bottom) return false;  // unreachable: e is its own sub and quotient
        if (I.hi && *I.hi < *top) return false;
        if (I.lo && *bottom < *I.lo) return false;
        return true;
    });
}

template <class R>
GradedSeries<R> twist_ratio_integral(const HallAlgebra<R>& alg, const Window& w,
                                     const SlopeInterval& I) {
    require_context(alg, w);
    require_closed(w);
    const HallSource<R>& src = alg.source();
    const GradingContext& ctx = *alg.context();
    HallElement<R> u = hn_interval_element(alg, w, I);
    GradedSeries<ClassTable<R>> tws(alg.context(), w);
    for (const auto& [g, tab] : u.s.terms()) {
        const std::int64_t c = ctx.chi(g);
        if (c == 0) {
            tws.set(g, tab);
            continue;
        }
        R qc = src.q_power(c);
        ClassTable<R> scaled;
        for (const auto& [label, v] : tab.v) scaled.v[label] = v * qc;
        tws.set(g, std::move(scaled));
    }
    HallElement<R> uchi{alg.fingerprint(), std::move(tws)};
    return alg.integrate(alg.convolve(alg.inverse(u), uchi));
}

template <class R>
VerificationReport verify_torsion_pair(const HallAlgebra<R>& alg, const Window& w) {
    auto t0 = Clock::now();
    require_context(alg, w);
    require_closed(w);
    const HallSource<R>& src = alg.source();
    if (!src.has_torsion_cut()) throw NoTorsionCut("source declares no torsion decomposition");
    Rows rows(w);
    compare_into(rows, "characteristic-factorization", w, alg.one_all(w).s,
                 alg.convolve(alg.one_p(w), alg.one_q(w)).s);
    if (src.has_framing()) {
        HallElement<R> framed_q =
            alg.framed_element(w, [&src](const std::string& e) { return src.in_q_class(e); });
        compare_into(rows, "framed-factorization", w, alg.framed_all(w).s,
                     alg.convolve(alg.framed_p(w), framed_q).s);
    }
    return seal("torsion-pair-factorization", alg.fingerprint(), w, "", std::move(rows), t0);
}

template <class R>
VerificationReport verify_hilbert(const HallAlgebra<R>& alg, const Window& w) {
    auto t0 = Clock::now();
    require_context(alg, w);
    require_closed(w);
    if (!alg.source().has_framing())
        throw NoFramingObject("source declares no framing object");
    Rows rows(w);
    compare_into(rows, "", w, alg.framed_all(w).s,
                 alg.convolve(alg.hilbert_element(w), alg.one_all(w)).s);
    return seal("hilbert-factorization", alg.fingerprint(), w, "", std::move(rows), t0);
}

template <class R>
VerificationReport verify_stable_pair(const HallAlgebra<R>& alg, const Window& w) {
    auto t0 = Clock::now();
    require_context(alg, w);
    require_closed(w);
    const HallSource<R>& src = alg.source();
    if (!src.has_torsion_cut()) throw NoTorsionCut("source declares no torsion decomposition");
    if (!src.has_framing()) throw NoFramingObject("source declares no framing object");
    Rows rows(w);
    HallElement<R> framed_q =
        alg.framed_element(w, [&src](const std::string& e) { return src.in_q_class(e); });
    compare_into(rows, "", w, framed_q.s,
                 alg.convolve(alg.pt_element(w), alg.one_q(w)).s);
    return seal("stable-pair-factorization", alg.fingerprint(), w, "", std::move(rows), t0);
}

template <class R>
VerificationReport verify_harder_narasimhan(const HallAlgebra<R>& alg, const Window& w,
                                            const SlopeInterval& I) {
    auto t0 = Clock::now();
    require_context(alg, w);
    require_closed(w);
    HallElement<R> prod = alg.unit(w);
    for (const Slope& mu : alg.realized_slopes(w))
        if (I.contains(mu)) prod = alg.convolve(prod, alg.one_ss(w, mu));
    Rows rows(w);
    compare_into(rows, "", w, hn_interval_element(alg, w, I).s, prod.s);
    return seal("harder-narasimhan-factorization", alg.fingerprint(), w, "interval=" + I.str(),
                std::move(rows), t0);
}

template <class R>
VerificationReport verify_dt_pt(const HallAlgebra<R>& alg, const Window& w) {
    auto t0 = Clock::now();
    require_context(alg, w);
    require_closed(w);
    const HallSource<R>& src = alg.source();
    if (!src.has_torsion_cut()) throw NoTorsionCut("source declares no torsion decomposition");
    if (!src.has_framing()) throw NoFramingObject("source declares no framing object");

    const std::shared_ptr<const GradingContext> ctx = alg.context();
    const std::vector<Slope> realized = alg.realized_slopes(w);

    // The descending slope products stabilize to the full characteristic
    // element: at degree g nothing below the slopes of g's sub-degrees can
    // contribute, which gives the per-degree certificate.
    auto producer = [&](std::size_t k) {
        HallElement<R> p = alg.unit(w);
        const std::size_t m = std::min(k, realized.size());
        for (std::size_t i = 0; i < m; ++i) p = alg.convolve(p, alg.one_ss(w, realized[i]));
        return p.s;
    };
    std::map<Degree, std::size_t> cert;
    for (const Degree& g : w.degrees()) {
        std::size_t idx = 0;
        if (!g.is_zero()) {
            for (const auto& [a, b] : decompositions(*ctx, g)) {
                if (a.is_zero()) continue;
                auto it = std::find(realized.begin(), realized.end(), ctx->slope(a));
                std::size_t pos = static_cast<std::size_t>(it - realized.begin()) + 1;
                if (pos > idx) idx = pos;
            }
        }
        cert[g] = idx;
    }
    GradedSeries<ClassTable<R>> lim = limit<ClassTable<R>>(
        producer, w, [&cert](const Degree& g) { return cert.at(g); }, ctx, true);

    Rows rows(w);
    compare_into(rows, "full-characteristic-limit", w, lim, alg.one_all(w).s);
    for (const Degree& g : w.degrees())
        rows.annotate(g, "limit-index=" + std::to_string(cert.at(g)));

    HallElement<R> h0p = alg.convolve(alg.h_zero(w), alg.one_p(w));
    compare_into(rows, "projective-torsion-factorization", w, alg.framed_p(w).s, h0p.s);

    compare_into(rows, "wall-crossing", w,
                 alg.convolve(alg.hilbert_element(w), alg.one_p(w)).s,
                 alg.convolve(h0p, alg.pt_element(w)).s);
    return seal("dt-pt-factorization", alg.fingerprint(), w, "", std::move(rows), t0);
}

VerificationReport verify_no_pole(const HallAlgebra<RatFun>& alg, const Window& w) {
    auto t0 = Clock::now();
    require_context(alg, w);
    require_closed(w);
    const HallSource<RatFun>& src = alg.source();
    Rows rows(w);
    for (const Slope& mu : alg.realized_slopes(w)) {
        EpsilonEta ee = epsilon_eta(alg, w, mu);
        for (const auto& [g, tab] : ee.eta.s.terms()) {
            ClassTable<RatFun> measures;
            bool bad = false;
            for (const auto& [e, v] : tab.v) {
                RatFun m = v / src.aut(e);
                std::optional<std::int64_t> o = m.order_at_one();
                if (o && *o < 0) bad = true;
                measures.v[e] = std::move(m);
            }
            if (bad)
                rows.fail(g, "slope=" + mu.str(),
                          coeff_traits<ClassTable<RatFun>>::str(measures),
                          "every stacky measure regular at L = 1");
        }
    }
    return seal("log-regularity", alg.fingerprint(), w, "", std::move(rows), t0);
}

VerificationReport verify_twist_ratio(const HallAlgebra<RatFun>& alg, const Window& w,
                                      const SlopeInterval& I) {
    auto t0 = Clock::now();
    require_context(alg, w);
    require_closed(w);
    if (!alg.commutative_torus())
        throw NonCommutativeTarget("twist-ratio comparison needs a commutative integration target");
    GradedSeries<RatFun> lhs = twist_ratio_integral(alg, w, I);
    GradedSeries<RatFun> arg(alg.context(), w);
    for (const Slope& mu : alg.realized_slopes(w)) {
        if (!I.contains(mu)) continue;
        NTable n = n_invariants(alg, epsilon_eta(alg, w, mu));
        for (const auto& [g, c] : n.terms()) {
            Rational coeff = Rational(-alg.context()->chi(g)) * c;
            if (coeff.is_zero()) continue;
            arg.set(g, arg.component(g) + RatFun(coeff));
        }
    }
    GradedSeries<RatFun> rhs = exp_series(arg, alg.torus_product());
    Rows rows(w);
    compare_into(rows, "", w, lhs, rhs);
    return seal("twist-ratio-exponential", alg.fingerprint(), w, "interval=" + I.str(),
                std::move(rows), t0);
}

VerificationReport verify_conjugation_invariance(const HallAlgebra<RatFun>& alg,
                                                 const Window& w) {
    auto t0 = Clock::now();
    require_context(alg, w);
    require_closed(w);
    if (!alg.commutative_torus())
        throw NonCommutativeTarget(
            "conjugation invariance of the integral needs a commutative target");
    HallElement<RatFun> f = alg.hilbert_element(w);
    GradedSeries<Rational> base = semiclassical(alg.integrate(f));
    Rows rows(w);
    for (const Slope& mu : alg.realized_slopes(w)) {
        HallElement<RatFun> u = alg.one_ss(w, mu);
        GradedSeries<Rational> conj = semiclassical(
            alg.integrate(alg.convolve(alg.convolve(alg.inverse(u), f), u)));
        compare_into(rows, "slope=" + mu.str(), w, conj, base);
    }
    return seal("integral-conjugation-invariance", alg.fingerprint(), w, "", std::move(rows),
                t0);
}

template VerificationReport compare_elements<Rational>(const std::string&,
                                                       const HallAlgebra<Rational>&,
                                                       const Window&,
                                                       const HallElement<Rational>&,
                                                       const HallElement<Rational>&);
template VerificationReport compare_elements<RatFun>(const std::string&,
                                                     const HallAlgebra<RatFun>&, const Window&,
                                                     const HallElement<RatFun>&,
                                                     const HallElement<RatFun>&);
template VerificationReport compare_series<Rational>(const std::string&, const std::string&,
                                                     const Window&,
                                                     const GradedSeries<Rational>&,
                                                     const GradedSeries<Rational>&);
template VerificationReport compare_series<RatFun>(const std::string&, const std::string&,
                                                   const Window&, const GradedSeries<RatFun>&,
                                                   const GradedSeries<RatFun>&);
template HallElement<Rational> hn_interval_element<Rational>(const HallAlgebra<Rational>&,
                                                             const Window&,
                                                             const SlopeInterval&);
template HallElement<RatFun> hn_interval_element<RatFun>(const HallAlgebra<RatFun>&,
                                                         const Window&, const SlopeInterval&);
template GradedSeries<Rational> twist_ratio_integral<Rational>(const HallAlgebra<Rational>&,
                                                               const Window&,
                                                               const SlopeInterval&);
template GradedSeries<RatFun> twist_ratio_integral<RatFun>(const HallAlgebra<RatFun>&,
                                                           const Window&,
                                                           const SlopeInterval&);
template VerificationReport verify_torsion_pair<Rational>(const HallAlgebra<Rational>&,
                                                          const Window&);
template VerificationReport verify_torsion_pair<RatFun>(const HallAlgebra<RatFun>&,
                                                        const Window&);
template VerificationReport verify_hilbert<Rational>(const HallAlgebra<Rational>&,
                                                     const Window&);
template VerificationReport verify_hilbert<RatFun>(const HallAlgebra<RatFun>&, const Window&);
template VerificationReport verify_stable_pair<Rational>(const HallAlgebra<Rational>&,
                                                         const Window&);
template VerificationReport verify_stable_pair<RatFun>(const HallAlgebra<RatFun>&,
                                                       const Window&);
template VerificationReport verify_harder_narasimhan<Rational>(const HallAlgebra<Rational>&,
                                                               const Window&,
                                                               const SlopeInterval&);
template VerificationReport verify_harder_narasimhan<RatFun>(const HallAlgebra<RatFun>&,
                                                             const Window&,
                                                             const SlopeInterval&);
template VerificationReport verify_dt_pt<Rational>(const HallAlgebra<Rational>&, const Window&);
template VerificationReport verify_dt_pt<RatFun>(const HallAlgebra<RatFun>&, const Window&);

} // namespace hallab
