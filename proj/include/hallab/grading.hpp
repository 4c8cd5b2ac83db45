#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hallab/errors.hpp"
#include "hallab/rational.hpp"

namespace hallab {

using Beta = std::vector<std::int32_t>;

// Degree in the grading lattice: curve part beta (rank components) plus the
// point/Euler slot n.
struct Degree {
    Beta beta;
    std::int64_t n = 0;

    bool is_zero() const {
        return n == 0 && std::all_of(beta.begin(), beta.end(), [](auto b) { return b == 0; });
    }
    friend bool operator==(const Degree& a, const Degree& b) {
        return a.beta == b.beta && a.n == b.n;
    }
    friend bool operator!=(const Degree& a, const Degree& b) { return !(a == b); }
    friend bool operator<(const Degree& a, const Degree& b) {
        if (a.beta != b.beta) return a.beta < b.beta;
        return a.n < b.n;
    }
    friend Degree operator+(const Degree& a, const Degree& b) {
        Degree r = a;
        for (std::size_t i = 0; i < r.beta.size(); ++i) r.beta[i] += b.beta[i];
        r.n += b.n;
        return r;
    }
    friend Degree operator-(const Degree& a, const Degree& b) {
        Degree r = a;
        for (std::size_t i = 0; i < r.beta.size(); ++i) r.beta[i] -= b.beta[i];
        r.n -= b.n;
        return r;
    }
    std::string str() const {
        std::string s = "(";
        for (auto b : beta) s += std::to_string(b) + ",";
        s += "n=" + std::to_string(n) + ")";
        return s;
    }
};

// Slope value: finite rational or +infinity (maximal in the order).
struct Slope {
    bool infinite = false;
    Rational value;

    static Slope inf() { return Slope{true, Rational(0)}; }
    static Slope finite(Rational v) { return Slope{false, std::move(v)}; }

    friend bool operator==(const Slope& a, const Slope& b) {
        if (a.infinite || b.infinite) return a.infinite == b.infinite;
        return a.value == b.value;
    }
    friend bool operator!=(const Slope& a, const Slope& b) { return !(a == b); }
    friend bool operator<(const Slope& a, const Slope& b) {
        if (a.infinite) return false;
        if (b.infinite) return true;
        return a.value < b.value;
    }
    friend bool operator<=(const Slope& a, const Slope& b) { return a == b || a < b; }
    friend bool operator>(const Slope& a, const Slope& b) { return b < a; }
    friend bool operator>=(const Slope& a, const Slope& b) { return b <= a; }

    std::string str() const { return infinite ? "inf" : value.str(); }
};

enum class ConeKind {
    SheafDelta,  // beta componentwise >= 0; beta = 0 forces n >= 0, beta != 0 leaves n free
    Quiver,      // beta componentwise >= 0 and n >= 0
    Custom,
};

// Grading data shared by series, models and verifiers. theta/kappa define the
// slope function theta.gamma / kappa.beta; chi is the twisting character.
struct GradingContext {
    int rank = 0;
    ConeKind cone = ConeKind::SheafDelta;
    std::vector<std::int64_t> theta_beta;  // rank entries
    std::int64_t theta_n = 1;
    std::vector<std::int64_t> kappa;       // rank entries, >= 0 pairing on the cone
    std::vector<std::int64_t> chi_beta;    // rank entries
    std::int64_t chi_n = 1;
    // Custom cone hooks; only consulted when cone == Custom.
    std::function<bool(const Degree&)> custom_effective;
    std::function<std::optional<std::int64_t>(const Beta&)> custom_column_lower;

    static GradingContext one_column() {
        GradingContext c;
        c.rank = 0;
        c.cone = ConeKind::SheafDelta;
        return c;
    }
    static GradingContext quiver(int rank) {
        GradingContext c;
        c.rank = rank;
        c.cone = ConeKind::Quiver;
        c.theta_beta.assign(rank, 0);
        c.theta_n = 1;
        c.kappa.assign(rank, 0);
        c.chi_beta.assign(rank, 0);
        c.chi_n = 1;
        return c;
    }

    void check_rank(const Degree& g) const {
        if (static_cast<int>(g.beta.size()) != rank)
            throw DegreeMismatch("degree rank " + std::to_string(g.beta.size()) +
                                 " vs context rank " + std::to_string(rank));
    }

    bool beta_nonneg(const Beta& b) const {
        return std::all_of(b.begin(), b.end(), [](auto x) { return x >= 0; });
    }
    bool beta_zero(const Beta& b) const {
        return std::all_of(b.begin(), b.end(), [](auto x) { return x == 0; });
    }

    bool is_effective(const Degree& g) const {
        check_rank(g);
        switch (cone) {
            case ConeKind::SheafDelta:
                if (!beta_nonneg(g.beta)) return false;
                return !beta_zero(g.beta) || g.n >= 0;
            case ConeKind::Quiver:
                return beta_nonneg(g.beta) && g.n >= 0;
            case ConeKind::Custom:
                if (!custom_effective) throw ConfigError("custom cone without predicate");
                return custom_effective(g);
        }
        return false;
    }

    // Smallest n with (beta, n) effective, when the cone bounds the column.
    std::optional<std::int64_t> column_lower(const Beta& b) const {
        if (static_cast<int>(b.size()) != rank)
            throw DegreeMismatch("beta rank mismatch");
        switch (cone) {
            case ConeKind::SheafDelta:
                if (beta_zero(b)) return 0;
                return std::nullopt;
            case ConeKind::Quiver:
                return 0;
            case ConeKind::Custom:
                if (!custom_column_lower) throw ConfigError("custom cone without column bound");
                return custom_column_lower(b);
        }
        return std::nullopt;
    }

    std::int64_t theta_pair(const Degree& g) const {
        check_rank(g);
        std::int64_t s = theta_n * g.n;
        for (int i = 0; i < rank; ++i) s += theta_beta[i] * g.beta[i];
        return s;
    }
    std::int64_t kappa_pair(const Beta& b) const {
        std::int64_t s = 0;
        for (int i = 0; i < rank; ++i) s += kappa[i] * b[i];
        return s;
    }
    std::int64_t chi(const Degree& g) const {
        check_rank(g);
        std::int64_t s = chi_n * g.n;
        for (int i = 0; i < rank; ++i) s += chi_beta[i] * g.beta[i];
        return s;
    }

    // Slope theta.gamma / kappa.beta; infinite (maximal) when kappa.beta = 0.
    Slope slope(const Degree& g) const {
        if (g.is_zero()) throw ZeroClass("slope of the zero class");
        const std::int64_t den = kappa_pair(g.beta);
        if (den == 0) return Slope::inf();
        return Slope::finite(Rational(theta_pair(g), den));
    }
};

// Exhaustive ordered effective splittings gamma = g1 + g2. Finite exactly
// when every sub-column is bounded below by the cone; columns without a cone
// bound are refused (windows carry explicit bounds instead, see Window).
std::vector<std::pair<Degree, Degree>> decompositions(const GradingContext& ctx,
                                                      const Degree& gamma);

// Finite truncation frontier of a Laurent support: finitely many beta
// columns, each carrying the n-interval [lo, hi]. lo comes from the cone
// when the cone bounds the column, otherwise it must be given explicitly.
class Window {
public:
    struct Column {
        std::int64_t lo = 0, hi = -1;  // empty when hi < lo
    };

    Window() = default;
    explicit Window(std::shared_ptr<const GradingContext> ctx) : ctx_(std::move(ctx)) {}

    static Window single_column(std::shared_ptr<const GradingContext> ctx, std::int64_t hi) {
        Window w(std::move(ctx));
        w.add_column(Beta(w.ctx_->rank, 0), hi, std::nullopt);
        return w;
    }

    // All columns 0 <= beta <= box componentwise, n in [0, n_hi].
    static Window box(std::shared_ptr<const GradingContext> ctx, const Beta& box,
                      std::int64_t n_hi = 0) {
        Window w(ctx);
        Beta b(box.size(), 0);
        for (;;) {
            w.add_column(b, n_hi, std::nullopt);
            std::size_t i = 0;
            while (i < b.size() && b[i] == box[i]) b[i++] = 0;
            if (i == b.size()) break;
            ++b[i];
        }
        return w;
    }

    const GradingContext& context() const {
        if (!ctx_) throw ConfigError("window without grading context");
        return *ctx_;
    }
    std::shared_ptr<const GradingContext> context_ptr() const { return ctx_; }

    void add_column(const Beta& beta, std::int64_t hi, std::optional<std::int64_t> lo) {
        if (!ctx_->beta_nonneg(beta))
            throw ConfigError("window column outside the effective cone");
        std::optional<std::int64_t> cone_lo = ctx_->column_lower(beta);
        if (!lo && !cone_lo)
            throw ConfigError("window column needs an explicit lower bound (cone is unbounded)");
        std::int64_t l = lo ? *lo : *cone_lo;
        if (cone_lo && l < *cone_lo) l = *cone_lo;
        if (hi < l) return;  // empty column: skip
        cols_[beta] = Column{l, hi};
    }

    const std::map<Beta, Column>& columns() const { return cols_; }
    bool empty() const { return cols_.empty(); }

    bool contains(const Degree& g) const {
        if (!ctx_->is_effective(g)) return false;
        auto it = cols_.find(g.beta);
        return it != cols_.end() && g.n >= it->second.lo && g.n <= it->second.hi;
    }

    // All in-window degrees in deterministic (beta, n) order.
    std::vector<Degree> degrees() const {
        std::vector<Degree> out;
        for (auto& [b, c] : cols_)
            for (std::int64_t n = c.lo; n <= c.hi; ++n)
                if (ctx_->is_effective(Degree{b, n})) out.push_back(Degree{b, n});
        return out;
    }

    friend bool operator==(const Window& a, const Window& b) {
        auto key = [](const Window& w) {
            std::vector<std::pair<Beta, std::pair<std::int64_t, std::int64_t>>> k;
            for (auto& [b, c] : w.cols_) k.push_back({b, {c.lo, c.hi}});
            return k;
        };
        return key(a) == key(b);
    }

private:
    std::shared_ptr<const GradingContext> ctx_;
    std::map<Beta, Column> cols_;
};

// Smallest window containing all pairwise sums (support bound of a product).
Window window_sum(const Window& a, const Window& b);

// Columnwise intersection: degrees known exactly in both windows.
Window window_intersection(const Window& a, const Window& b);

// Largest window on which a product of series known exactly on a and b is
// itself exact: every effective splitting of each retained degree must land
// in a x b. Downward closed per column by construction.
Window guaranteed_product_window(const Window& a, const Window& b);

// Degrees of w whose full splitting ideal stays inside w; equal to
// guaranteed_product_window(w, w). Box and single-column windows are
// saturated: sat(w) == w.
Window saturated(const Window& w);

} // namespace hallab
