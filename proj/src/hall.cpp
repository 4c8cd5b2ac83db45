#include "hallab/hall.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hallab {

namespace {

// Exact-rational source: a thin counting adapter over one fixed-q model.
class FixedQSource final : public HallSource<Rational> {
public:
    explicit FixedQSource(std::shared_ptr<const Model> m) : m_(std::move(m)) {
        if (!m_) throw ConfigError("fixed-q source needs a model");
    }

    std::string fingerprint() const override { return m_->fingerprint(); }
    const std::shared_ptr<const GradingContext>& context() const override {
        return m_->context();
    }

    std::vector<std::string> classes(const Degree& d) const override { return m_->classes(d); }
    Degree degree_of(const std::string& label) const override { return m_->degree_of(label); }
    std::string zero_label() const override { return m_->zero_label(); }

    const Profile& filt_profile(const std::string& e) const override {
        auto it = cache_.find(e);
        if (it != cache_.end()) return it->second;
        Profile p;
        for (auto& [key, cnt] : m_->filt_profile(e)) p[key] = Rational(cnt);
        return cache_.emplace(e, std::move(p)).first->second;
    }
    Rational aut(const std::string& e) const override { return Rational(m_->aut(e)); }

    bool has_framing() const override { return m_->has_framing(); }
    Rational framed(const std::string& e) const override { return Rational(m_->framed(e)); }
    Rational epi(const std::string& e) const override { return Rational(m_->epi(e)); }

    bool has_torsion_cut() const override { return m_->has_torsion_cut(); }
    bool in_p(const Degree& d) const override { return m_->in_p(d); }
    bool in_q_class(const std::string& e) const override {
        return m_->torsion_decompose(e).first == m_->zero_label();
    }
    Rational stable_pair(const std::string& e) const override {
        return Rational(m_->stable_pair(e));
    }

    bool is_semistable(const std::string& e) const override { return m_->is_semistable(e); }
    Slope slope_of(const std::string& e) const override { return m_->slope_of(e); }

    bool has_duality() const override { return m_->has_duality(); }
    std::string dual(const std::string& e) const override { return m_->dual(e); }
    Degree dual_degree(const Degree& d) const override { return m_->dual_degree(d); }

    std::int64_t euler(const Degree& d, const Degree& e) const override {
        return m_->euler(d, e);
    }
    bool zero_euler_form() const override { return m_->zero_euler_form(); }

    Rational q_power(std::int64_t k) const override { return pow(Rational(m_->q()), k); }

private:
    std::shared_ptr<const Model> m_;
    mutable std::map<std::string, Profile> cache_;
};

// Symbolic source over the one-column nilpotent-module category. Filtration
// counts are Lagrange-interpolated in L from the sample-prime models, with
// the fit degree bounded by the total dimension of the ambient class and
// exact agreement demanded at the holdout prime. Automorphism, framing, epi
// and stable-pair counts use their closed forms directly, so no interpolation
// degree ever limits them.
class SymbolicJordanSource final : public HallSource<RatFun> {
public:
    SymbolicJordanSource(int bound, std::int64_t max_n, std::vector<std::int64_t> sample_qs,
                         std::int64_t holdout_q)
        : sample_qs_(std::move(sample_qs)), holdout_q_(holdout_q) {
        if (sample_qs_.empty()) throw ConfigError("symbolic source needs sample primes");
        std::set<std::int64_t> seen(sample_qs_.begin(), sample_qs_.end());
        if (seen.size() != sample_qs_.size())
            throw ConfigError("symbolic source: repeated sample prime");
        if (seen.count(holdout_q_))
            throw ConfigError("symbolic source: holdout prime repeats a sample prime");
        for (std::int64_t q : sample_qs_)
            samples_.push_back(make_jordan_model(q, bound, max_n));
        holdout_ = make_jordan_model(holdout_q_, bound, max_n);
        ref_ = samples_.front().get();

        std::ostringstream fp;
        fp << "{\"bound\":" << bound << ",\"holdout\":" << holdout_q_ << ",\"samples\":[";
        for (std::size_t i = 0; i < sample_qs_.size(); ++i)
            fp << (i ? "," : "") << sample_qs_[i];
        fp << "],\"type\":\"jordan-symbolic\"}";
        fp_ = fp.str();
    }

    std::string fingerprint() const override { return fp_; }
    const std::shared_ptr<const GradingContext>& context() const override {
        return ref_->context();
    }

    std::vector<std::string> classes(const Degree& d) const override { return ref_->classes(d); }
    Degree degree_of(const std::string& label) const override { return ref_->degree_of(label); }
    std::string zero_label() const override { return ref_->zero_label(); }

    const Profile& filt_profile(const std::string& e) const override {
        auto hit = cache_.find(e);
        if (hit != cache_.end()) return hit->second;

        // Fit degree bound: the total dimension of e. Filtration counts of
        // the shipped one-column models are polynomial in q of degree at most
        // that; the holdout certificate fails loudly if a table ever is not.
        const std::int64_t fit_bound = ref_->degree_of(e).n;
        if (static_cast<std::int64_t>(sample_qs_.size()) < fit_bound + 1)
            throw ConfigError("class " + e + ": interpolation at degree bound " +
                              std::to_string(fit_bound) + " needs " +
                              std::to_string(fit_bound + 1) + " sample primes, have " +
                              std::to_string(sample_qs_.size()));

        std::set<std::pair<std::string, std::string>> keys;
        for (auto& m : samples_)
            for (auto& [key, cnt] : m->filt_profile(e)) keys.insert(key);
        for (auto& [key, cnt] : holdout_->filt_profile(e)) keys.insert(key);

        Profile p;
        for (auto& key : keys) {
            std::vector<std::pair<Rational, Rational>> pts;
            for (std::size_t i = 0; i < samples_.size(); ++i)
                pts.emplace_back(Rational(sample_qs_[i]), count_of(*samples_[i], e, key));
            Poly fit = interpolate(pts, static_cast<std::size_t>(fit_bound),
                                   {Rational(holdout_q_), count_of(*holdout_, e, key)});
            if (!fit.is_zero()) p[key] = RatFun(fit);
        }
        return cache_.emplace(e, std::move(p)).first->second;
    }

    RatFun aut(const std::string& e) const override {
        AutShape sh = nilpotent_aut_shape(parse_partition(e));
        Poly p = Poly::monomial(sh.pow, Rational(1));
        for (int k : sh.qk_minus_one) p *= Poly::monomial(k, Rational(1)) - Poly(1);
        return RatFun(p);
    }

    bool has_framing() const override { return true; }
    RatFun framed(const std::string& e) const override {
        return RatFun(Poly::monomial(partition_weight(parse_partition(e)), Rational(1)));
    }
    RatFun epi(const std::string& e) const override {
        Partition p = parse_partition(e);
        if (p.empty()) return RatFun(1);
        if (p.size() > 1) return RatFun();  // only cyclic modules are quotients
        return RatFun(Poly::monomial(p[0], Rational(1)) - Poly::monomial(p[0] - 1, Rational(1)));
    }

    bool has_torsion_cut() const override { return ref_->has_torsion_cut(); }
    bool in_p(const Degree& d) const override { return ref_->in_p(d); }
    bool in_q_class(const std::string& e) const override {
        return ref_->torsion_decompose(e).first == ref_->zero_label();
    }
    RatFun stable_pair(const std::string& e) const override {
        return e == ref_->zero_label() ? RatFun(1) : RatFun();
    }

    bool is_semistable(const std::string& e) const override { return ref_->is_semistable(e); }
    Slope slope_of(const std::string& e) const override { return ref_->slope_of(e); }

    bool has_duality() const override { return ref_->has_duality(); }
    std::string dual(const std::string& e) const override { return ref_->dual(e); }
    Degree dual_degree(const Degree& d) const override { return ref_->dual_degree(d); }

    std::int64_t euler(const Degree& d, const Degree& e) const override {
        return ref_->euler(d, e);
    }
    bool zero_euler_form() const override { return ref_->zero_euler_form(); }

    RatFun q_power(std::int64_t k) const override { return RatFun::l_power(k); }

private:
    static Rational count_of(const Model& m, const std::string& e,
                             const std::pair<std::string, std::string>& key) {
        const Model::Profile& p = m.filt_profile(e);
        auto it = p.find(key);
        return it == p.end() ? Rational(0) : Rational(it->second);
    }

    std::vector<std::int64_t> sample_qs_;
    std::int64_t holdout_q_;
    std::vector<std::unique_ptr<Model>> samples_;
    std::unique_ptr<Model> holdout_;
    const Model* ref_ = nullptr;
    std::string fp_;
    mutable std::map<std::string, Profile> cache_;
};

} // namespace

std::shared_ptr<const HallSource<Rational>> make_fixed_source(std::shared_ptr<const Model> m) {
    return std::make_shared<FixedQSource>(std::move(m));
}

std::shared_ptr<const HallSource<RatFun>> make_symbolic_jordan_source(
    int bound, std::int64_t max_n, const std::vector<std::int64_t>& sample_qs,
    std::int64_t holdout_q) {
    return std::make_shared<SymbolicJordanSource>(bound, max_n, sample_qs, holdout_q);
}

Window twist_probe_window(const Window& w) {
    Window probe(w.context_ptr());
    for (auto& [beta, col] : w.columns()) {
        if (!std::all_of(beta.begin(), beta.end(), [](auto b) { return b <= 1; })) continue;
        std::int64_t hi = std::min<std::int64_t>(col.hi, 2);
        if (hi < col.lo) continue;
        probe.add_column(beta, hi, col.lo);
    }
    return probe;
}

template <class R>
HallAlgebra<R>::HallAlgebra(std::shared_ptr<const HallSource<R>> src,
                            const Window& working_window)
    : src_(std::move(src)) {
    if (!src_) throw ConfigError("hall algebra needs a source");
    if (working_window.context_ptr().get() != src_->context().get())
        throw ConfigError("window grading context does not match the source");
    fp_ = src_->fingerprint();
    conv_ = std::make_unique<HallProduct<R>>(src_.get());
    run_battery(twist_probe_window(working_window));
}

// The integration map must be an algebra homomorphism onto the twisted torus
// for exactly one of the sign/side conventions of the Euler form. Every pair
// of class deltas over the probe window votes; distinct candidate forms
// differ at a pair of unit degrees, and each vote is sensitive because the
// split filtration makes the convolution coefficient nonzero.
template <class R>
void HallAlgebra<R>::run_battery(const Window& probe) {
    const GradingContext& ctx = *src_->context();
    const int r = ctx.rank;

    std::vector<std::vector<std::int64_t>> emat(r, std::vector<std::int64_t>(r, 0));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            Beta bi(r, 0), bj(r, 0);
            bi[i] = 1;
            bj[j] = 1;
            emat[i][j] = src_->euler(Degree{bi, 0}, Degree{bj, 0});
        }
    auto transposed = [&](const std::vector<std::vector<std::int64_t>>& m) {
        auto t = m;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) t[i][j] = m[j][i];
        return t;
    };
    auto negated = [](std::vector<std::vector<std::int64_t>> m) {
        for (auto& row : m)
            for (auto& x : row) x = -x;
        return m;
    };
    std::vector<std::vector<std::vector<std::int64_t>>> cands;
    for (auto& c : {emat, negated(emat), transposed(emat), negated(transposed(emat))})
        if (std::find(cands.begin(), cands.end(), c) == cands.end()) cands.push_back(c);

    std::vector<GradedSeries<ClassTable<R>>> deltas;
    for (const Degree& g : probe.degrees())
        for (const std::string& e : src_->classes(g)) {
            ClassTable<R> t;
            t.v[e] = R(1);
            deltas.push_back(
                GradedSeries<ClassTable<R>>::monomial(src_->context(), probe, g, std::move(t)));
        }

    std::vector<std::size_t> passing;
    for (std::size_t ci = 0; ci < cands.size(); ++ci) {
        TwistedTorusProduct<R> tp(src_.get(), cands[ci]);
        bool ok = true;
        for (std::size_t i = 0; i < deltas.size() && ok; ++i)
            for (std::size_t j = 0; j < deltas.size() && ok; ++j) {
                GradedSeries<ClassTable<R>> t = mul(deltas[i], deltas[j], *conv_);
                GradedSeries<R> lhs = integrate_series(t);
                GradedSeries<R> rhs =
                    mul(integrate_series(deltas[i]), integrate_series(deltas[j]), tp);
                if (!equal_on(lhs, rhs, t.window())) ok = false;
            }
        if (ok) passing.push_back(ci);
    }
    if (passing.size() != 1)
        throw ConfigError("torus twist battery: " + std::to_string(passing.size()) + " of " +
                          std::to_string(cands.size()) +
                          " candidate conventions pass on the probe window");
    torus_ = std::make_unique<TwistedTorusProduct<R>>(src_.get(), cands[passing.front()]);
}

template <class R>
std::int64_t HallAlgebra<R>::twist_exponent(const Degree& d, const Degree& e) const {
    return torus_->pair(d, e);
}

template <class R>
bool HallAlgebra<R>::commutative_torus() const {
    return torus_->commutative();
}

template <class R>
HallElement<R> HallAlgebra<R>::build(
    const Window& w,
    const std::function<void(const Degree&, const std::string&, ClassTable<R>&)>& emit) const {
    if (w.context_ptr().get() != src_->context().get())
        throw ConfigError("window grading context does not match the source");
    GradedSeries<ClassTable<R>> s(src_->context(), w);
    for (const Degree& g : w.degrees()) {
        ClassTable<R> tab;
        for (const std::string& e : src_->classes(g)) emit(g, e, tab);
        if (!tab.v.empty()) s.set(g, std::move(tab));
    }
    return wrap(std::move(s));
}

template <class R>
HallElement<R> HallAlgebra<R>::zero(const Window& w) const {
    return wrap(GradedSeries<ClassTable<R>>::zero(src_->context(), w));
}

template <class R>
HallElement<R> HallAlgebra<R>::unit(const Window& w) const {
    return wrap(GradedSeries<ClassTable<R>>::unit(src_->context(), w, *conv_));
}

template <class R>
HallElement<R> HallAlgebra<R>::delta(const Window& w, const std::string& label) const {
    ClassTable<R> t;
    t.v[label] = R(1);
    return wrap(GradedSeries<ClassTable<R>>::monomial(src_->context(), w,
                                                      src_->degree_of(label), std::move(t)));
}

template <class R>
HallElement<R> HallAlgebra<R>::char_element(
    const Window& w, const std::function<bool(const std::string&)>& pred) const {
    return build(w, [&](const Degree&, const std::string& e, ClassTable<R>& tab) {
        if (pred(e)) tab.v[e] = R(1);
    });
}

template <class R>
HallElement<R> HallAlgebra<R>::one_all(const Window& w) const {
    return char_element(w, [](const std::string&) { return true; });
}

template <class R>
HallElement<R> HallAlgebra<R>::one_p(const Window& w) const {
    return build(w, [&](const Degree& g, const std::string& e, ClassTable<R>& tab) {
        if (src_->in_p(g)) tab.v[e] = R(1);
    });
}

template <class R>
HallElement<R> HallAlgebra<R>::one_q(const Window& w) const {
    if (!src_->has_torsion_cut())
        throw NoTorsionCut("source declares no torsion decomposition");
    return build(w, [&](const Degree&, const std::string& e, ClassTable<R>& tab) {
        if (src_->in_q_class(e)) tab.v[e] = R(1);
    });
}

template <class R>
HallElement<R> HallAlgebra<R>::one_ss(const Window& w, const Slope& mu) const {
    return build(w, [&](const Degree& g, const std::string& e, ClassTable<R>& tab) {
        if (g.is_zero()) {
            tab.v[e] = R(1);  // the zero class: constant term 1
            return;
        }
        if (src_->is_semistable(e) && src_->slope_of(e) == mu) tab.v[e] = R(1);
    });
}

template <class R>
HallElement<R> HallAlgebra<R>::one_ss_interval(const Window& w, const Slope& lo,
                                               const Slope& hi) const {
    return build(w, [&](const Degree& g, const std::string& e, ClassTable<R>& tab) {
        if (g.is_zero()) {
            tab.v[e] = R(1);
            return;
        }
        if (!src_->is_semistable(e)) return;
        Slope mu = src_->slope_of(e);
        if (lo <= mu && mu <= hi) tab.v[e] = R(1);
    });
}

template <class R>
HallElement<R> HallAlgebra<R>::framed_element(
    const Window& w, const std::function<bool(const std::string&)>& pred) const {
    if (!src_->has_framing()) throw NoFramingObject("source declares no framing object");
    return build(w, [&](const Degree&, const std::string& e, ClassTable<R>& tab) {
        if (!pred(e)) return;
        R v = src_->framed(e);
        if (!coeff_traits<R>::is_zero(v)) tab.v[e] = std::move(v);
    });
}

template <class R>
HallElement<R> HallAlgebra<R>::framed_all(const Window& w) const {
    return framed_element(w, [](const std::string&) { return true; });
}

template <class R>
HallElement<R> HallAlgebra<R>::framed_p(const Window& w) const {
    if (!src_->has_framing()) throw NoFramingObject("source declares no framing object");
    return build(w, [&](const Degree& g, const std::string& e, ClassTable<R>& tab) {
        if (!src_->in_p(g)) return;
        R v = src_->framed(e);
        if (!coeff_traits<R>::is_zero(v)) tab.v[e] = std::move(v);
    });
}

template <class R>
HallElement<R> HallAlgebra<R>::hilbert_element(const Window& w) const {
    if (!src_->has_framing()) throw NoFramingObject("source declares no framing object");
    return build(w, [&](const Degree&, const std::string& e, ClassTable<R>& tab) {
        R v = src_->epi(e);
        if (!coeff_traits<R>::is_zero(v)) tab.v[e] = std::move(v);
    });
}

template <class R>
HallElement<R> HallAlgebra<R>::pt_element(const Window& w) const {
    if (!src_->has_framing()) throw NoFramingObject("source declares no framing object");
    if (!src_->has_torsion_cut())
        throw NoTorsionCut("source declares no torsion decomposition");
    return build(w, [&](const Degree&, const std::string& e, ClassTable<R>& tab) {
        R v = src_->stable_pair(e);
        if (!coeff_traits<R>::is_zero(v)) tab.v[e] = std::move(v);
    });
}

template <class R>
HallElement<R> HallAlgebra<R>::h_zero(const Window& w) const {
    if (!src_->has_framing()) throw NoFramingObject("source declares no framing object");
    return build(w, [&](const Degree& g, const std::string& e, ClassTable<R>& tab) {
        if (!src_->in_p(g)) return;
        R v = src_->epi(e);
        if (!coeff_traits<R>::is_zero(v)) tab.v[e] = std::move(v);
    });
}

template <class R>
HallElement<R> HallAlgebra<R>::convolve(const HallElement<R>& f, const HallElement<R>& g) const {
    check(f);
    check(g);
    return wrap(mul(f.s, g.s, *conv_));
}

template <class R>
HallElement<R> HallAlgebra<R>::inverse(const HallElement<R>& f) const {
    check(f);
    return wrap(invert(f.s, *conv_));
}

template <class R>
HallElement<R> HallAlgebra<R>::log(const HallElement<R>& f) const {
    check(f);
    return wrap(log_series(f.s, *conv_));
}

template <class R>
HallElement<R> HallAlgebra<R>::exp(const HallElement<R>& f) const {
    check(f);
    return wrap(exp_series(f.s, *conv_));
}

template <class R>
HallElement<R> HallAlgebra<R>::twist(const HallElement<R>& f, std::int64_t power) const {
    check(f);
    return wrap(twist_chi(f.s, power));
}

template <class R>
HallElement<R> HallAlgebra<R>::dual_pushforward(const HallElement<R>& f) const {
    check(f);
    if (!src_->has_duality()) throw NoDuality("source declares no duality");
    GradedSeries<ClassTable<R>> out(src_->context(), f.s.window());
    for (auto& [g, tab] : f.s.terms()) {
        Degree gd = src_->dual_degree(g);
        if (!f.s.window().contains(gd))
            throw OutOfWindow("window not closed under the dual degree map at " + g.str());
        ClassTable<R> dt;
        for (auto& [e, val] : tab.v) dt.v[src_->dual(e)] = val;
        out.accumulate(gd, dt);
    }
    return wrap(std::move(out));
}

template <class R>
GradedSeries<R> HallAlgebra<R>::integrate_series(const GradedSeries<ClassTable<R>>& s) const {
    GradedSeries<R> out(src_->context(), s.window());
    for (auto& [g, tab] : s.terms()) {
        R acc = coeff_traits<R>::zero();
        for (auto& [e, val] : tab.v)
            acc = coeff_traits<R>::add(acc, val / src_->aut(e));
        out.set(g, std::move(acc));
    }
    return out;
}

template <class R>
GradedSeries<R> HallAlgebra<R>::integrate(const HallElement<R>& f) const {
    check(f);
    return integrate_series(f.s);
}

template <class R>
GradedSeries<R> HallAlgebra<R>::torus_mul(const GradedSeries<R>& a,
                                          const GradedSeries<R>& b) const {
    return mul(a, b, *torus_);
}

template <class R>
std::vector<Slope> HallAlgebra<R>::realized_slopes(const Window& w) const {
    std::vector<Slope> out;
    for (const Degree& g : w.degrees()) {
        if (g.is_zero()) continue;
        out.push_back(src_->context()->slope(g));
    }
    std::sort(out.begin(), out.end(), [](const Slope& a, const Slope& b) { return b < a; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

template class HallAlgebra<Rational>;
template class HallAlgebra<RatFun>;

EpsilonEta epsilon_eta_of(const HallAlgebra<RatFun>& alg, const HallElement<RatFun>& one_like) {
    EpsilonEta out{alg.log(one_like), HallElement<RatFun>{}, true};
    out.eta = out.eps.scaled_by(RatFun::variable() - RatFun(1));
    // Regularity is read on the stacky measure eta(E)/|Aut E|: for an element
    // carried by an honest variety that ratio is its fiberwise point count, a
    // polynomial, while a raw table value sees no pole for any characteristic
    // input. The L-1 valuation of |Aut E| must be exactly cancelled.
    for (auto& [g, tab] : out.eta.s.terms())
        for (auto& [e, v] : tab.v) {
            std::optional<std::int64_t> o = (v / alg.source().aut(e)).order_at_one();
            if (o && *o < 0) out.regular = false;
        }
    return out;
}

EpsilonEta epsilon_eta(const HallAlgebra<RatFun>& alg, const Window& w, const Slope& mu) {
    return epsilon_eta_of(alg, alg.one_ss(w, mu));
}

NTable n_invariants(const HallAlgebra<RatFun>& alg, const EpsilonEta& ee) {
    if (!ee.regular) throw NotRegular("eta has a coefficient with a pole at L = 1");
    GradedSeries<RatFun> integral = alg.integrate(ee.eta);
    NTable out(alg.context(), integral.window());
    for (auto& [g, v] : integral.terms()) out.set(g, -v.semiclassical_limit());
    return out;
}

} // namespace hallab
