#include "hallab/genfun.hpp"

#include <algorithm>

namespace hallab {

namespace {

std::string beta_label(const Beta& b) {
    std::string s = "[";
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(b[i]);
    }
    return s + "]";
}

std::string exp_label(std::int64_t e) {
    if (e == 0) return "";
    if (e == 1) return "q";
    return "q^" + std::to_string(e);
}

// Drops stored coefficients above the guaranteed window. Sums and products
// of truncations can produce exponents whose true coefficient is unknown;
// the window fields are authoritative, the stored support follows them.
TruncatedLaurent clipped(TruncatedLaurent t) {
    if (t.hi) {
        LaurentPoly p;
        for (auto& [e, c] : t.c.coeffs())
            if (e <= *t.hi) p.set_coeff(e, c);
        t.c = p;
    }
    if (!t.c.is_zero() && t.c.min_exp() < t.lo)
        throw Error("series column: support below the declared lower bound");
    return t;
}

// Power-series inverse of g (unit constant term), exact up to q^target.
TruncatedLaurent series_inverse(const TruncatedLaurent& g, std::int64_t target) {
    const Rational c0 = g.lo > 0 ? Rational(0) : g.c.coeff(0);
    if (g.lo < 0 || c0.is_zero())
        throw NonUnitConstantTerm("series division needs a unit constant term");
    const Rational inv0 = c0.inverse();
    LaurentPoly b;
    b.set_coeff(0, inv0);
    for (std::int64_t e = 1; e <= target; ++e) {
        Rational s(0);
        for (std::int64_t j = 1; j <= e; ++j) {
            const Rational gj = g.c.coeff(j);
            if (gj.is_zero()) continue;
            s += gj * b.coeff(e - j);
        }
        b.set_coeff(e, -(s * inv0));
    }
    return clipped({b, 0, target});
}

void check_box(const Beta& box) {
    long long count = 1;
    for (auto v : box) {
        if (v < 0) throw ConfigError("column box: negative bound");
        count *= static_cast<long long>(v) + 1;
        if (count > 200000) throw ConfigError("column box: too many classes");
    }
}

std::vector<Beta> enumerate_box(const Beta& box) {
    std::vector<Beta> out;
    Beta cur(box.size(), 0);
    while (true) {
        out.push_back(cur);
        std::size_t i = box.size();
        while (i > 0 && cur[i - 1] == box[i - 1]) cur[--i] = 0;
        if (i == 0) break;
        ++cur[i - 1];
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool leq_componentwise(const Beta& a, const Beta& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Beta minus(const Beta& a, const Beta& b) {
    Beta r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = static_cast<std::int32_t>(a[i] - b[i]);
    return r;
}

void validate_table(const Beta& b, const PeriodicTable& t) {
    if (t.period < 1)
        throw ConfigError("local table at " + beta_label(b) + ": period must be positive");
    if (static_cast<std::int64_t>(t.values.size()) != t.period)
        throw ConfigError("local table at " + beta_label(b) +
                          ": need exactly one value per residue");
    for (std::int64_t r = 0; r < t.period; ++r) {
        const std::int64_t mirror = (t.period - r) % t.period;
        if (t.values[static_cast<std::size_t>(r)] !=
            t.values[static_cast<std::size_t>(mirror)])
            throw SymmetryViolation("local table at " + beta_label(b) +
                                    ": values at residues " + std::to_string(r) + " and " +
                                    std::to_string(mirror) + " differ");
    }
}

} // namespace

std::string LaurentPoly::str() const {
    if (is_zero()) return "0";
    std::string s;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        if (!s.empty()) s += " + ";
        const std::string e = exp_label(it->first);
        if (e.empty()) s += it->second.str();
        else if (it->second == Rational(1)) s += e;
        else s += it->second.str() + "*" + e;
    }
    return s;
}

RatFunQ::RatFunQ(const LaurentPoly& num, const LaurentPoly& den) {
    if (den.is_zero()) throw Error("laurent fraction: zero denominator");
    f_ = embed(num) / embed(den);
}

RatFun RatFunQ::embed(const LaurentPoly& p) {
    if (p.is_zero()) return RatFun();
    const std::int64_t v = std::min<std::int64_t>(p.min_exp(), 0);
    Poly num;
    for (auto& [e, c] : p.coeffs()) num.set_coeff(e - v, c);
    return RatFun(num) * RatFun::l_power(v);
}

LaurentPoly RatFunQ::from_poly(const Poly& p) {
    LaurentPoly r;
    for (auto& [e, c] : p.coeffs()) r.set_coeff(e, c);
    return r;
}

bool RatFunQ::is_laurent_polynomial() const {
    const Poly& d = f_.denominator();
    return d.coeffs().size() == 1;  // canonical form: a monic power of q
}

RatFunQ RatFunQ::subst_inv_q() const {
    if (f_.is_zero()) return RatFunQ();
    const Poly& a = f_.numerator();
    const Poly& b = f_.denominator();
    auto reversed = [](const Poly& p) {
        Poly r;
        const std::int64_t d = p.degree();
        for (auto& [e, c] : p.coeffs()) r.set_coeff(d - e, c);
        return r;
    };
    RatFun g = (RatFun(reversed(a)) / RatFun(reversed(b))) *
               RatFun::l_power(b.degree() - a.degree());
    return RatFunQ(std::move(g));
}

std::string RatFunQ::str() const {
    if (is_laurent_polynomial()) {
        const LaurentPoly d = denom();
        LaurentPoly n = numer();
        if (d != LaurentPoly(1)) n = n * d.subst_inv_q();  // divide by the monic q-power
        return n.str();
    }
    return "(" + numer().str() + ") / (" + denom().str() + ")";
}

TruncatedLaurent TruncatedLaurent::truncation(LaurentPoly p, std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw ConfigError("series column: empty window");
    return clipped({std::move(p), lo, hi});
}

std::string TruncatedLaurent::str() const {
    std::string s = c.str();
    if (hi) {
        const std::string tail = exp_label(*hi + 1);
        s += " + O(" + (tail.empty() ? "1" : tail) + ")";
    }
    return s;
}

TruncatedLaurent add(const TruncatedLaurent& a, const TruncatedLaurent& b) {
    if (a.is_exact_zero()) return b;
    if (b.is_exact_zero()) return a;
    TruncatedLaurent r;
    r.lo = std::min(a.lo, b.lo);
    if (a.hi && b.hi) r.hi = std::min(*a.hi, *b.hi);
    else r.hi = a.hi ? a.hi : b.hi;
    r.c = a.c + b.c;
    return clipped(std::move(r));
}

TruncatedLaurent scale(const TruncatedLaurent& a, const Rational& s) {
    if (s.is_zero()) return {};
    return {a.c.scaled(s), a.lo, a.hi};
}

TruncatedLaurent mul(const TruncatedLaurent& a, const TruncatedLaurent& b) {
    if (a.is_exact_zero() || b.is_exact_zero()) return {};
    TruncatedLaurent r;
    r.lo = a.lo + b.lo;
    std::optional<std::int64_t> h;
    if (a.hi) h = *a.hi + b.lo;
    if (b.hi) h = h ? std::min(*h, *b.hi + a.lo) : *b.hi + a.lo;
    r.hi = h;
    r.c = a.c * b.c;
    return clipped(std::move(r));
}

TruncatedLaurent subst_neg_q(const TruncatedLaurent& a) {
    return {a.c.subst_neg_q(), a.lo, a.hi};
}

TruncatedLaurent divide(const TruncatedLaurent& f, const TruncatedLaurent& g) {
    const Rational c0 = g.lo > 0 ? Rational(0) : g.c.coeff(0);
    if (g.lo < 0 || c0.is_zero())
        throw NonUnitConstantTerm("series division needs a unit constant term");
    if (f.is_exact_zero()) return {};
    if (!g.hi && g.c.max_exp() == 0)
        return scale(f, c0.inverse());
    std::int64_t target;
    if (g.hi) {
        target = *g.hi;
    } else {
        if (!f.hi)
            throw ConfigError(
                "dividing an exact column by a non-constant unit needs a truncation order");
        target = *f.hi - f.lo;
    }
    return mul(f, series_inverse(g, target));
}

TruncatedLaurent exp_positive(const TruncatedLaurent& z) {
    if (z.is_exact_zero()) return TruncatedLaurent::exact(LaurentPoly(1));
    if (z.lo < 1)
        throw ConfigError("series exponential needs strictly positive valuation");
    if (!z.hi)
        throw ConfigError("exponentiating an exact column needs a truncation order");
    const std::int64_t h = *z.hi;
    TruncatedLaurent acc = TruncatedLaurent::truncation(LaurentPoly(1), 0, h);
    TruncatedLaurent term = TruncatedLaurent::exact(LaurentPoly(1));
    Rational factorial(1);
    for (std::int64_t k = 1; k <= h; ++k) {
        term = mul(term, z);
        factorial *= Rational(k);
        acc = add(acc, scale(term, factorial.inverse()));
        if (term.c.is_zero()) break;
    }
    return acc;
}

TruncatedLaurent taylor(const RatFunQ& f, std::int64_t hi) {
    if (f.is_zero()) return {};
    const LaurentPoly num = f.numer();
    const LaurentPoly den = f.denom();
    const std::int64_t vd = den.min_exp();     // canonical: vd >= 0, and 0 unless num has valuation 0
    LaurentPoly shifted;                        // den / q^vd, unit constant term
    for (auto& [e, c] : den.coeffs()) shifted.set_coeff(e - vd, c);
    const std::int64_t lo = num.min_exp() - vd;
    if (hi < lo) return TruncatedLaurent{LaurentPoly(), lo, hi};
    const TruncatedLaurent inv = series_inverse(
        TruncatedLaurent::exact(shifted), hi + vd - num.min_exp());
    LaurentPoly out;
    for (auto& [e, c] : num.coeffs())
        for (auto& [j, b] : inv.c.coeffs())
            out.set_coeff(e - vd + j, out.coeff(e - vd + j) + c * b);
    return clipped({std::move(out), lo, hi});
}

DTSeries::DTSeries(Beta box) : box_(std::move(box)) {
    check_box(box_);
    classes_ = enumerate_box(box_);
    for (const Beta& b : classes_) cols_[b] = TruncatedLaurent{};
}

bool DTSeries::contains(const Beta& b) const {
    return b.size() == box_.size() && leq_componentwise(b, box_) &&
           std::all_of(b.begin(), b.end(), [](std::int32_t v) { return v >= 0; });
}

const TruncatedLaurent& DTSeries::column(const Beta& b) const {
    auto it = cols_.find(b);
    if (it == cols_.end())
        throw DegreeOutOfBounds("column family: class " + beta_label(b) + " outside the box");
    return it->second;
}

void DTSeries::set_column(const Beta& b, TruncatedLaurent col) {
    if (!contains(b))
        throw DegreeOutOfBounds("column family: class " + beta_label(b) + " outside the box");
    cols_[b] = clipped(std::move(col));
}

DTSeries DTSeries::subst_neg_q() const {
    DTSeries r(box_);
    for (auto& [b, col] : cols_) r.cols_[b] = hallab::subst_neg_q(col);
    return r;
}

DTSeries add(const DTSeries& a, const DTSeries& b) {
    if (a.box_bound() != b.box_bound())
        throw DegreeMismatch("column families over different boxes");
    DTSeries r(a.box_bound());
    for (const Beta& g : r.classes())
        r.set_column(g, add(a.column(g), b.column(g)));
    return r;
}

DTSeries scale(const DTSeries& a, const Rational& s) {
    DTSeries r(a.box_bound());
    for (const Beta& g : r.classes()) r.set_column(g, scale(a.column(g), s));
    return r;
}

DTSeries mul(const DTSeries& a, const DTSeries& b) {
    if (a.box_bound() != b.box_bound())
        throw DegreeMismatch("column families over different boxes");
    DTSeries r(a.box_bound());
    for (const Beta& g : r.classes()) {
        TruncatedLaurent acc;
        for (const Beta& x : r.classes()) {
            if (!leq_componentwise(x, g)) continue;
            acc = add(acc, mul(a.column(x), b.column(minus(g, x))));
        }
        r.set_column(g, std::move(acc));
    }
    return r;
}

TruncatedLaurent macmahon(std::int64_t order) {
    if (order < 0) throw ConfigError("truncation order must be nonnegative");
    std::vector<Rational> acc(static_cast<std::size_t>(order) + 1, Rational(0));
    acc[0] = Rational(1);
    for (std::int64_t k = 1; k <= order; ++k) {
        // Multiply by (1 - q^k)^{-k} = sum_j binom(k+j-1, j) q^{kj}.
        std::vector<Rational> factor;
        Rational binom(1);
        for (std::int64_t j = 0; k * j <= order; ++j) {
            if (j > 0) binom = binom * Rational(k + j - 1) / Rational(j);
            factor.push_back(binom);
        }
        std::vector<Rational> next(acc.size(), Rational(0));
        for (std::size_t i = 0; i < acc.size(); ++i) {
            if (acc[i].is_zero()) continue;
            for (std::size_t j = 0; j < factor.size(); ++j) {
                const std::size_t e = i + static_cast<std::size_t>(k) * j;
                if (e >= next.size()) break;
                next[e] += acc[i] * factor[j];
            }
        }
        acc = std::move(next);
    }
    LaurentPoly p;
    for (std::size_t i = 0; i < acc.size(); ++i)
        p.set_coeff(static_cast<std::int64_t>(i), acc[i]);
    return {std::move(p), 0, order};
}

TruncatedLaurent dt_zero(std::int64_t chi, std::int64_t order) {
    const TruncatedLaurent one = TruncatedLaurent::truncation(LaurentPoly(1), 0, order);
    if (chi == 0) return one;
    TruncatedLaurent base = subst_neg_q(macmahon(order));
    if (chi < 0) base = divide(one, base);
    std::int64_t n = chi < 0 ? -chi : chi;
    TruncatedLaurent acc = one;
    while (n > 0) {
        if (n & 1) acc = mul(acc, base);
        base = mul(base, base);
        n >>= 1;
    }
    return acc;
}

DTSeries reduce_dt(const DTSeries& dt, const TruncatedLaurent& dt0) {
    DTSeries r(dt.box_bound());
    for (const Beta& g : r.classes()) r.set_column(g, divide(dt.column(g), dt0));
    return r;
}

DTSeries dt_from_pt(const DTSeries& pt, std::int64_t chi, std::int64_t order) {
    const TruncatedLaurent d0 = dt_zero(chi, order);
    DTSeries r(pt.box_bound());
    for (const Beta& g : r.classes()) r.set_column(g, mul(pt.column(g), d0));
    return r;
}

RatFunQ rational_from_periodic(std::int64_t period, const std::vector<Rational>& values) {
    PeriodicTable t{period, values};
    if (t.period < 1) throw ConfigError("periodic table: period must be positive");
    if (static_cast<std::int64_t>(t.values.size()) != t.period)
        throw ConfigError("periodic table: need exactly one value per residue");
    bool even = true;
    for (std::int64_t r = 0; r < period; ++r)
        if (values[static_cast<std::size_t>(r)] !=
            values[static_cast<std::size_t>((period - r) % period)])
            even = false;
    const RatFunQ one_minus_qd =
        RatFunQ(1) - RatFunQ::q_power(period);
    RatFunQ f;
    for (std::int64_t r = 0; r < period; ++r) {
        const Rational& a = values[static_cast<std::size_t>(r)];
        if (a.is_zero()) continue;
        // sum_{k>=0} (r+kd) q^{r+kd} = r q^r / (1-q^d) + d q^{r+d} / (1-q^d)^2
        RatFunQ part = RatFunQ(Rational(r)) * RatFunQ::q_power(r) / one_minus_qd;
        part += RatFunQ(Rational(period)) * RatFunQ::q_power(r + period) /
                (one_minus_qd * one_minus_qd);
        f += RatFunQ(a) * part;
    }
    if (even && !symmetry_check(f))
        throw Error("periodic table: even table produced an asymmetric closed form");
    return f;
}

DTSeries n_table_series(const NTableSpec& tables, const Beta& box, std::int64_t hi) {
    if (hi < 1) throw ConfigError("weighted table family needs a positive truncation order");
    DTSeries r(box);
    for (auto& [b, t] : tables) {
        if (!r.contains(b))
            throw ConfigError("local table at class " + beta_label(b) + " outside the box");
        validate_table(b, t);
        LaurentPoly col;
        for (std::int64_t n = 1; n <= hi; ++n) {
            const Rational& a = t.values[static_cast<std::size_t>(n % t.period)];
            if (!a.is_zero()) col.set_coeff(n, Rational(n) * a);
        }
        r.set_column(b, TruncatedLaurent::truncation(std::move(col), 1, hi));
    }
    return r;
}

DTSeries exp_dt(const DTSeries& a) {
    const Beta zero(a.box_bound().size(), 0);
    const TruncatedLaurent& z = a.column(zero);
    if (!z.is_exact_zero() && z.lo < 1)
        throw ConfigError("family exponential needs vanishing q-constant terms");

    DTSeries positive = a;                      // classes other than zero
    positive.set_column(zero, TruncatedLaurent{});
    DTSeries acc(a.box_bound());
    acc.set_column(zero, TruncatedLaurent::exact(LaurentPoly(1)));
    DTSeries term = acc;
    std::int64_t mass = 0;
    for (auto v : a.box_bound()) mass += v;
    Rational factorial(1);
    for (std::int64_t k = 1; k <= mass; ++k) {
        term = mul(term, positive);
        factorial *= Rational(k);
        acc = add(acc, scale(term, factorial.inverse()));
    }

    DTSeries constant_part(a.box_bound());
    constant_part.set_column(zero, exp_positive(z));
    return mul(acc, constant_part);
}

std::map<Beta, TodaColumn> toda_assemble(const NTableSpec& tables, const DTSeries& pt) {
    // Wide enough for every product against the table exponential: each
    // column of the exponential factor starts at q^0.
    std::int64_t span = 1;
    for (const Beta& g : pt.classes()) {
        const TruncatedLaurent& col = pt.column(g);
        if (col.hi) span = std::max(span, *col.hi - col.lo);
        else if (!col.c.is_zero()) span = std::max(span, col.c.max_exp() - col.lo);
    }
    const DTSeries weights = n_table_series(tables, pt.box_bound(), span);
    const DTSeries g = mul(exp_dt(scale(weights, Rational(-1))), pt.subst_neg_q());

    std::map<Beta, TodaColumn> out;
    for (const Beta& b : g.classes()) {
        const TruncatedLaurent& col = g.column(b);
        if (col.hi) {
            const std::int64_t h = *col.hi;
            if (col.c.is_zero()) {
                if (h < 0)
                    throw InsufficientTruncation("core at class " + beta_label(b) +
                                                 ": window ends below q^0");
            } else if (h <= col.c.max_exp() || h < -col.c.min_exp()) {
                throw InsufficientTruncation(
                    "core at class " + beta_label(b) +
                    ": support cannot be separated from the unknown tail");
            }
        }
        out[b] = TodaColumn{col.c, col.c.palindromic()};
    }
    return out;
}

} // namespace hallab
