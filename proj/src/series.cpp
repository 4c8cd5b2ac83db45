#include "hallab/series.hpp"

namespace hallab {

namespace {

void require_regular(const GradedSeries<RatFun>& a, const char* who) {
    for (auto& [g, c] : a.terms()) {
        auto ord = c.order_at_one();
        if (ord && *ord < 0)
            throw NotRegular(std::string(who) + ": coefficient at " + g.str() +
                             " has a pole at L=1: " + c.str());
    }
}

// (commutator)/(L-1) evaluated at L=1, coefficientwise.
GradedSeries<Rational> semiclassical_quotient(const GradedSeries<RatFun>& c) {
    GradedSeries<Rational> out(c.context_ptr(), c.window());
    const RatFun lm1 = RatFun::variable() - RatFun(1);
    for (auto& [g, v] : c.terms()) {
        auto ord = v.order_at_one();
        if (ord && *ord < 1)
            throw CommutatorNotDivisible("commutator coefficient at " + g.str() +
                                         " is not divisible by (L-1): " + v.str());
        out.set(g, (v / lm1).semiclassical_limit());
    }
    return out;
}

} // namespace

GradedSeries<Rational> semiclassical(const GradedSeries<RatFun>& a) {
    GradedSeries<Rational> out(a.context_ptr(), a.window());
    for (auto& [g, c] : a.terms()) out.set(g, c.semiclassical_limit());
    return out;
}

GradedSeries<Rational> poisson_bracket(const GradedSeries<RatFun>& a,
                                       const GradedSeries<RatFun>& b,
                                       const BilinearProduct<RatFun>& p) {
    require_regular(a, "poisson_bracket lhs");
    require_regular(b, "poisson_bracket rhs");
    GradedSeries<RatFun> comm = mul(a, b, p) - mul(b, a, p);
    return semiclassical_quotient(comm);
}

SkewElement<Rational> skew_poisson_bracket(const SkewElement<RatFun>& a,
                                           const SkewElement<RatFun>& b,
                                           const BilinearProduct<RatFun>& p) {
    for (auto& [k, s] : a.components) require_regular(s, "skew bracket lhs");
    for (auto& [k, s] : b.components) require_regular(s, "skew bracket rhs");
    SkewElement<RatFun> ab = skew_mul(a, b, p), ba = skew_mul(b, a, p);
    SkewElement<RatFun> comm;
    for (auto& [k, s] : ab.components) comm.components[k] = s;
    for (auto& [k, s] : ba.components) {
        auto it = comm.components.find(k);
        if (it == comm.components.end())
            comm.components[k] = -s;
        else
            it->second = it->second - s;
    }
    SkewElement<Rational> out;
    for (auto& [k, s] : comm.components) {
        GradedSeries<Rational> q = semiclassical_quotient(s);
        if (!q.is_zero()) out.components[k] = std::move(q);
    }
    return out;
}

} // namespace hallab
