#include "hallab/grading.hpp"

namespace hallab {

namespace {

// Iterate all componentwise splittings b = b1 + (b - b1), b1 in [0, b].
std::vector<Beta> sub_betas(const Beta& b) {
    std::vector<Beta> out;
    Beta cur(b.size(), 0);
    for (;;) {
        out.push_back(cur);
        std::size_t i = 0;
        while (i < cur.size() && cur[i] == b[i]) cur[i++] = 0;
        if (i == cur.size()) break;
        ++cur[i];
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

std::vector<std::pair<Degree, Degree>> decompositions(const GradingContext& ctx,
                                                      const Degree& gamma) {
    ctx.check_rank(gamma);
    std::vector<std::pair<Degree, Degree>> out;
    if (!ctx.is_effective(gamma)) return out;
    for (const Beta& b1 : sub_betas(gamma.beta)) {
        Beta b2 = gamma.beta;
        for (std::size_t i = 0; i < b2.size(); ++i) b2[i] -= b1[i];
        auto lo1 = ctx.column_lower(b1);
        auto lo2 = ctx.column_lower(b2);
        if (!lo1 || !lo2)
            throw Error("effective splittings of " + gamma.str() +
                        " form an infinite set: cone does not bound column");
        for (std::int64_t n1 = *lo1; n1 <= gamma.n - *lo2; ++n1) {
            Degree g1{b1, n1}, g2{b2, gamma.n - n1};
            if (ctx.is_effective(g1) && ctx.is_effective(g2)) out.emplace_back(g1, g2);
        }
    }
    return out;
}

Window window_sum(const Window& a, const Window& b) {
    if (a.context_ptr().get() != b.context_ptr().get())
        throw ConfigError("window_sum across different grading contexts");
    Window out(a.context_ptr());
    std::map<Beta, std::pair<std::int64_t, std::int64_t>> merged;  // beta -> (lo, hi)
    for (auto& [b1, c1] : a.columns()) {
        for (auto& [b2, c2] : b.columns()) {
            Beta s = b1;
            for (std::size_t i = 0; i < s.size(); ++i) s[i] += b2[i];
            auto lo = c1.lo + c2.lo;
            auto hi = c1.hi + c2.hi;
            auto it = merged.find(s);
            if (it == merged.end())
                merged[s] = {lo, hi};
            else {
                it->second.first = std::min(it->second.first, lo);
                it->second.second = std::max(it->second.second, hi);
            }
        }
    }
    for (auto& [s, lh] : merged) out.add_column(s, lh.second, lh.first);
    return out;
}

Window window_intersection(const Window& a, const Window& b) {
    if (a.context_ptr().get() != b.context_ptr().get())
        throw ConfigError("window_intersection across different grading contexts");
    Window out(a.context_ptr());
    for (auto& [beta, c1] : a.columns()) {
        auto it = b.columns().find(beta);
        if (it == b.columns().end()) continue;
        std::int64_t lo = std::max(c1.lo, it->second.lo);
        std::int64_t hi = std::min(c1.hi, it->second.hi);
        if (hi >= lo) out.add_column(beta, hi, lo);
    }
    return out;
}

Window guaranteed_product_window(const Window& a, const Window& b) {
    if (a.context_ptr().get() != b.context_ptr().get())
        throw ConfigError("product window across different grading contexts");
    const GradingContext& ctx = a.context();
    Window out(a.context_ptr());
    if (a.empty() || b.empty()) return out;

    std::map<Beta, std::pair<std::int64_t, std::int64_t>> keep;  // beta -> (lo, hi)
    for (const Degree& g : window_sum(a, b).degrees()) {
        bool ok = true;
        for (const Beta& b1 : sub_betas(g.beta)) {
            Beta b2 = g.beta;
            for (std::size_t i = 0; i < b2.size(); ++i) b2[i] -= b1[i];
            auto lo1 = ctx.column_lower(b1);
            auto lo2 = ctx.column_lower(b2);
            if (!lo1 || !lo2) {
                ok = false;  // infinitely many effective splittings: never covered
                break;
            }
            for (std::int64_t n1 = *lo1; ok && n1 <= g.n - *lo2; ++n1) {
                Degree g1{b1, n1}, g2{b2, g.n - n1};
                if (!ctx.is_effective(g1) || !ctx.is_effective(g2)) continue;
                if (!a.contains(g1) || !b.contains(g2)) ok = false;
            }
            if (!ok) break;
        }
        if (ok) {
            auto it = keep.find(g.beta);
            if (it == keep.end())
                keep[g.beta] = {g.n, g.n};
            else {
                it->second.first = std::min(it->second.first, g.n);
                it->second.second = std::max(it->second.second, g.n);
            }
        }
    }
    for (auto& [beta, lh] : keep) out.add_column(beta, lh.second, lh.first);
    return out;
}

Window saturated(const Window& w) { return guaranteed_product_window(w, w); }

} // namespace hallab
