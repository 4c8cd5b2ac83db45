#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "hallab/genfun.hpp"

using namespace hallab;

namespace {

LaurentPoly lp(std::initializer_list<std::pair<std::int64_t, long long>> cs) {
    LaurentPoly p;
    for (auto& [e, c] : cs) p.set_coeff(e, Rational(c));
    return p;
}

Beta b1(int k) { return Beta{static_cast<std::int32_t>(k)}; }

Beta b2(int a, int b) {
    return Beta{static_cast<std::int32_t>(a), static_cast<std::int32_t>(b)};
}

// Exhaustive enumeration of plane partitions of n: stacks of weakly
// decreasing rows, each row pointwise bounded by the row above. Independent
// of the infinite-product expansion it is checked against.
long long plane_partitions(int n) {
    std::function<long long(int, const std::vector<int>&)> rows =
        [&](int remaining, const std::vector<int>& prev) -> long long {
        if (remaining == 0) return 1;
        long long total = 0;
        std::vector<int> row;
        std::function<void(int)> extend = [&](int left) {
            if (!row.empty()) total += rows(left, row);
            const int pos = static_cast<int>(row.size());
            if (!prev.empty() && pos >= static_cast<int>(prev.size())) return;
            int cap = prev.empty() ? left : std::min(prev[pos], left);
            if (pos > 0) cap = std::min(cap, row[pos - 1]);
            for (int v = 1; v <= cap; ++v) {
                row.push_back(v);
                extend(left - v);
                row.pop_back();
            }
        };
        extend(remaining);
        return total;
    };
    return rows(n, {});
}

} // namespace

TEST_SUITE("genfun") {

TEST_CASE("laurent polynomials and rational functions in q are exact") {
    const LaurentPoly s = lp({{1, 1}, {-1, 1}});        // q + q^-1
    CHECK(s * s == lp({{2, 1}, {0, 2}, {-2, 1}}));
    CHECK(s - s == LaurentPoly());
    CHECK(s.scaled(Rational(0)) == LaurentPoly());
    CHECK(s.min_exp() == -1);
    CHECK(s.max_exp() == 1);
    CHECK(s.coeff(0) == Rational(0));

    const LaurentPoly t = lp({{0, 1}, {1, 1}, {2, 1}});
    CHECK(t.subst_neg_q() == lp({{0, 1}, {1, -1}, {2, 1}}));
    CHECK(t.subst_neg_q().subst_neg_q() == t);
    CHECK(s.subst_neg_q() == -s);
    CHECK(LaurentPoly::monomial(3, Rational(5)).subst_inv_q() ==
          LaurentPoly::monomial(-3, Rational(5)));
    CHECK(s.palindromic());
    CHECK(!t.palindromic());
    CHECK(lp({{2, 1}, {0, 2}, {1, 2}}).str() == "q^2 + 2*q + 2");

    // Canonical fractions: no common factor, no common power of q, monic
    // denominator.
    const RatFunQ f(lp({{-1, 1}}), lp({{0, 1}, {1, -1}}));      // (1/q)/(1-q)
    CHECK(f.numer() == LaurentPoly(-1));
    CHECK(f.denom() == lp({{2, 1}, {1, -1}}));
    CHECK(f == RatFunQ(lp({{0, -1}}), lp({{2, 1}, {1, -1}})));
    CHECK(RatFunQ(lp({{0, 1}, {2, -1}}), lp({{0, 1}, {1, -1}})) ==
          RatFunQ(lp({{0, 1}, {1, 1}})));
    CHECK(RatFunQ::q_power(-2) * RatFunQ::q_power(2) == RatFunQ(1));
    CHECK_THROWS_AS(RatFunQ(LaurentPoly(1), LaurentPoly()), Error);

    const RatFunQ mixed(lp({{1, 1}, {0, 2}, {-1, 1}}));         // q + 2 + 1/q
    CHECK(mixed.is_laurent_polynomial());
    CHECK(mixed.numer() == lp({{2, 1}, {1, 2}, {0, 1}}));
    CHECK(mixed.denom() == lp({{1, 1}}));
    CHECK(mixed.str() == "q + 2 + q^-1");
    CHECK(mixed.subst_inv_q() == mixed);

    const RatFunQ one_minus_q(lp({{0, 1}, {1, -1}}));
    const RatFunQ g = RatFunQ::q_power(1) / (one_minus_q * one_minus_q);
    CHECK(symmetry_check(g));              // q/(1-q)^2 is q <-> 1/q invariant
    CHECK(g.subst_inv_q() == g);
    const RatFunQ h = RatFunQ(1) / one_minus_q;
    CHECK(!symmetry_check(h));
    CHECK(h.subst_inv_q().subst_inv_q() == h);
    CHECK((g + h).subst_inv_q().subst_inv_q() == g + h);
    CHECK(RatFunQ().subst_inv_q() == RatFunQ());
}

TEST_CASE("series columns carry honest windows") {
    const TruncatedLaurent a = TruncatedLaurent::truncation(lp({{-1, 1}, {3, 1}}), -1, 5);
    const TruncatedLaurent b = TruncatedLaurent::truncation(lp({{0, 1}, {1, 1}}), 0, 3);

    // Window arithmetic: sums are known where both are, products up to the
    // first exponent an unknown tail can reach.
    CHECK(add(a, b) == TruncatedLaurent::truncation(lp({{-1, 1}, {0, 1}, {1, 1}, {3, 1}}), -1, 3));
    CHECK(mul(a, b) == TruncatedLaurent::truncation(lp({{-1, 1}, {0, 1}}), -1, 2));

    CHECK(TruncatedLaurent::truncation(lp({{1, 1}, {7, 1}}), 0, 5).c == lp({{1, 1}}));
    CHECK_THROWS_AS(TruncatedLaurent::truncation(lp({{-1, 1}}), 0, 4), Error);
    CHECK_THROWS_AS(TruncatedLaurent::truncation(LaurentPoly(), 3, 2), ConfigError);
    CHECK(a.coeff(4) == Rational(0));       // inside the window, known zero
    CHECK(a.coeff(-2) == Rational(0));      // below lo, exactly zero
    CHECK_THROWS_AS(a.coeff(6), OutOfWindow);

    const TruncatedLaurent zero;
    CHECK(zero.is_exact_zero());
    CHECK(add(a, zero) == a);
    CHECK(mul(a, zero) == zero);
    CHECK(mul(TruncatedLaurent::exact(LaurentPoly(1)), b) == b);
    CHECK(subst_neg_q(subst_neg_q(a)) == a);
    CHECK(subst_neg_q(a) == TruncatedLaurent::truncation(lp({{-1, -1}, {3, -1}}), -1, 5));

    // exp of a positive-valuation column has factorial coefficients.
    const TruncatedLaurent z = TruncatedLaurent::truncation(lp({{1, 1}}), 1, 6);
    const TruncatedLaurent e = exp_positive(z);
    CHECK(e.lo == 0);
    CHECK(e.hi == 6);
    Rational fact(1);
    for (std::int64_t n = 0; n <= 6; ++n) {
        if (n > 0) fact *= Rational(n);
        CHECK(e.coeff(n) == fact.inverse());
    }
    const TruncatedLaurent cancel = mul(e, exp_positive(scale(z, Rational(-1))));
    CHECK(cancel.c == LaurentPoly(1));
    CHECK(exp_positive(TruncatedLaurent{}) == TruncatedLaurent::exact(LaurentPoly(1)));
    CHECK_THROWS_AS(exp_positive(b), ConfigError);                       // lo = 0
    CHECK_THROWS_AS(exp_positive(TruncatedLaurent::exact(lp({{1, 1}}))), ConfigError);

    // Division against the geometric series, and by exact constants.
    const TruncatedLaurent ones =
        divide(TruncatedLaurent::truncation(LaurentPoly(1), 0, 6),
               TruncatedLaurent::exact(lp({{0, 1}, {1, -1}})));
    for (std::int64_t n = 0; n <= 6; ++n) CHECK(ones.coeff(n) == Rational(1));
    CHECK(divide(a, TruncatedLaurent::exact(LaurentPoly(2))) == scale(a, Rational(1, 2)));
    CHECK_THROWS_AS(divide(a, TruncatedLaurent::truncation(lp({{1, 1}}), 1, 3)),
                    NonUnitConstantTerm);
    CHECK_THROWS_AS(divide(a, TruncatedLaurent::truncation(lp({{-1, 1}, {0, 1}}), -1, 3)),
                    NonUnitConstantTerm);
    CHECK_THROWS_AS(divide(TruncatedLaurent::exact(LaurentPoly(1)),
                           TruncatedLaurent::exact(lp({{0, 1}, {1, -1}}))),
                    ConfigError);

    // Randomized division checked against schoolbook coefficient recursion.
    std::mt19937 rng(20260816u);
    std::uniform_int_distribution<int> coef(-4, 4);
    for (int rep = 0; rep < 6; ++rep) {
        LaurentPoly fp, gp;
        for (std::int64_t e2 = -2; e2 <= 6; ++e2) fp.set_coeff(e2, Rational(coef(rng)));
        gp.set_coeff(0, Rational(1));
        for (std::int64_t j = 1; j <= 5; ++j) gp.set_coeff(j, Rational(coef(rng)));
        const TruncatedLaurent f = TruncatedLaurent::truncation(fp, -2, 6);
        const TruncatedLaurent g = TruncatedLaurent::truncation(gp, 0, 5);
        const TruncatedLaurent q = divide(f, g);
        CHECK(q.lo == -2);
        CHECK(q.hi == 3);
        std::map<std::int64_t, Rational> want;
        for (std::int64_t e2 = q.lo; e2 <= *q.hi; ++e2) {
            Rational s = f.c.coeff(e2);
            for (std::int64_t j = 1; j <= e2 - q.lo; ++j) s -= g.c.coeff(j) * want[e2 - j];
            want[e2] = s;
        }
        for (std::int64_t e2 = q.lo; e2 <= *q.hi; ++e2) CHECK(q.coeff(e2) == want[e2]);
        const TruncatedLaurent back = mul(q, g);
        for (std::int64_t e2 = back.lo; e2 <= *back.hi; ++e2)
            CHECK(back.coeff(e2) == f.coeff(e2));
    }

    // Laurent expansion of rational functions around q = 0.
    const RatFunQ geo = RatFunQ(1) / RatFunQ(lp({{0, 1}, {1, -1}}));
    const TruncatedLaurent tg = taylor(geo, 6);
    CHECK(tg.lo == 0);
    CHECK(tg.hi == 6);
    for (std::int64_t n = 0; n <= 6; ++n) CHECK(tg.coeff(n) == Rational(1));
    const TruncatedLaurent tsh = taylor(RatFunQ(lp({{-1, 1}})) * geo, 4);
    CHECK(tsh.lo == -1);
    for (std::int64_t n = -1; n <= 4; ++n) CHECK(tsh.coeff(n) == Rational(1));
    CHECK(taylor(RatFunQ(lp({{-2, 1}, {0, 5}})), 3) ==
          TruncatedLaurent::truncation(lp({{-2, 1}, {0, 5}}), -2, 3));
    CHECK(taylor(RatFunQ(), 5) == TruncatedLaurent{});
}

TEST_CASE("the infinite-product column counts plane partitions exactly") {
    // Independent oracle: exhaustive enumeration, no generating functions.
    const std::vector<long long> frozen = {1, 1, 3, 6, 13, 24, 48};
    for (std::size_t n = 0; n < frozen.size(); ++n)
        CHECK(plane_partitions(static_cast<int>(n)) == frozen[n]);
    CHECK(plane_partitions(10) == 500);

    for (std::int64_t order = 0; order <= 10; ++order) {
        const TruncatedLaurent m = macmahon(order);
        CHECK(m.lo == 0);
        CHECK(m.hi == order);
        for (std::int64_t n = 0; n <= order; ++n)
            CHECK(m.coeff(n) == Rational(plane_partitions(static_cast<int>(n))));
    }
    CHECK_THROWS_AS(macmahon(-1), ConfigError);
}

TEST_CASE("the degree-zero column is a signed power of the product series") {
    CHECK(dt_zero(1, 2) == TruncatedLaurent::truncation(lp({{0, 1}, {1, -1}, {2, 3}}), 0, 2));
    CHECK(dt_zero(0, 5) == TruncatedLaurent::truncation(LaurentPoly(1), 0, 5));

    const TruncatedLaurent d1 = dt_zero(1, 10);
    for (std::int64_t n = 0; n <= 10; ++n) {
        const Rational pp(plane_partitions(static_cast<int>(n)));
        CHECK(d1.coeff(n) == (n % 2 == 0 ? pp : -pp));
    }

    CHECK(dt_zero(2, 4) == mul(dt_zero(1, 4), dt_zero(1, 4)));
    CHECK(mul(dt_zero(-3, 6), dt_zero(3, 6)) ==
          TruncatedLaurent::truncation(LaurentPoly(1), 0, 6));
    CHECK(mul(dt_zero(-1, 8), dt_zero(1, 8)) ==
          TruncatedLaurent::truncation(LaurentPoly(1), 0, 8));
}

TEST_CASE("families reduce and reassemble around the degree-zero column") {
    DTSeries pt(b1(2));
    pt.set_column(b1(0), TruncatedLaurent::exact(LaurentPoly(1)));
    pt.set_column(b1(1), TruncatedLaurent::exact(lp({{-1, 1}, {0, 3}, {2, 1}})));
    pt.set_column(b1(2), TruncatedLaurent::truncation(lp({{0, 1}, {1, 1}}), 0, 5));

    // A family synthesized from its reduced columns divides back exactly,
    // with the windows the product bookkeeping guarantees.
    const DTSeries dt = dt_from_pt(pt, 2, 8);
    CHECK(dt.column(b1(0)) == dt_zero(2, 8));
    const DTSeries back = reduce_dt(dt, dt_zero(2, 8));
    CHECK(back.column(b1(0)) == TruncatedLaurent::truncation(LaurentPoly(1), 0, 8));
    CHECK(back.column(b1(1)) ==
          TruncatedLaurent::truncation(lp({{-1, 1}, {0, 3}, {2, 1}}), -1, 7));
    CHECK(back.column(b1(2)) == pt.column(b1(2)));

    CHECK_THROWS_AS(reduce_dt(dt, TruncatedLaurent::truncation(lp({{1, 1}}), 1, 3)),
                    NonUnitConstantTerm);
    CHECK(pt.subst_neg_q().subst_neg_q() == pt);

    CHECK_THROWS_AS(pt.column(b1(3)), DegreeOutOfBounds);
    DTSeries narrow(b1(1));
    CHECK_THROWS_AS(mul(pt, narrow), DegreeMismatch);
    CHECK_THROWS_AS(narrow.set_column(b1(2), TruncatedLaurent{}), DegreeOutOfBounds);
    CHECK_THROWS_AS(DTSeries(Beta{-1}), ConfigError);

    // Convolution across a rank-two box.
    DTSeries u(b2(1, 1));
    u.set_column(b2(0, 0), TruncatedLaurent::exact(LaurentPoly(1)));
    u.set_column(b2(1, 0), TruncatedLaurent::exact(lp({{1, 1}})));
    u.set_column(b2(0, 1), TruncatedLaurent::exact(lp({{-1, 1}})));
    const DTSeries uu = mul(u, u);
    CHECK(uu.column(b2(0, 0)) == TruncatedLaurent::exact(LaurentPoly(1)));
    CHECK(uu.column(b2(1, 0)) == TruncatedLaurent::exact(lp({{1, 2}})));
    CHECK(uu.column(b2(1, 1)) == TruncatedLaurent::exact(LaurentPoly(2)));

    // Rank-zero boxes carry a single class.
    DTSeries point((Beta()));
    CHECK(point.classes().size() == 1);
    point.set_column(Beta(), TruncatedLaurent::truncation(lp({{0, 1}, {1, 1}}), 0, 4));
    CHECK(mul(point, point).column(Beta()) ==
          TruncatedLaurent::truncation(lp({{0, 1}, {1, 2}, {2, 1}}), 0, 4));
}

TEST_CASE("periodic even tables have symmetric rational closed forms") {
    // Period one: c q / (1-q)^2.
    const Rational c(7, 3);
    const RatFunQ one_minus_q(lp({{0, 1}, {1, -1}}));
    const RatFunQ f1 = rational_from_periodic(1, {c});
    CHECK(f1 == RatFunQ(c) * RatFunQ::q_power(1) / (one_minus_q * one_minus_q));
    CHECK(symmetry_check(f1));

    // Period two, odd weights only: direct summation to order 50.
    const RatFunQ f2 = rational_from_periodic(2, {Rational(0), Rational(1)});
    CHECK(symmetry_check(f2));
    const TruncatedLaurent t2 = taylor(f2, 50);
    for (std::int64_t n = 0; n <= 50; ++n)
        CHECK(t2.coeff(n) == (n % 2 == 1 ? Rational(n) : Rational(0)));

    CHECK(rational_from_periodic(4, {Rational(0), Rational(0), Rational(0), Rational(0)})
              .is_zero());
    CHECK_THROWS_AS(rational_from_periodic(0, {}), ConfigError);
    CHECK_THROWS_AS(rational_from_periodic(3, {Rational(1)}), ConfigError);

    // Randomized even tables: the closed form matches direct summation and
    // is q <-> 1/q invariant; breaking evenness breaks the symmetry.
    std::mt19937 rng(424242u);
    std::uniform_int_distribution<int> coef(-5, 5);
    for (std::int64_t d = 1; d <= 6; ++d) {
        std::vector<Rational> a(static_cast<std::size_t>(d), Rational(0));
        for (std::int64_t r = 0; r <= d / 2; ++r) {
            const Rational v(coef(rng));
            a[static_cast<std::size_t>(r)] = v;
            a[static_cast<std::size_t>((d - r) % d)] = v;
        }
        const RatFunQ f = rational_from_periodic(d, a);
        CHECK(symmetry_check(f));
        const TruncatedLaurent t = taylor(f, 50);
        for (std::int64_t n = 0; n <= 50; ++n)
            CHECK(t.coeff(n) == Rational(n) * a[static_cast<std::size_t>(n % d)]);

        if (d >= 3) {
            std::vector<Rational> bad = a;
            bad[1] += Rational(1);          // now bad[1] != bad[d-1]
            CHECK(!symmetry_check(rational_from_periodic(d, bad)));
        }
    }
}

TEST_CASE("wall-crossing assembly extracts palindromic cores") {
    // Weighted table family and its exponential, frozen by hand.
    NTableSpec one_at_1;
    one_at_1[b1(1)] = PeriodicTable{1, {Rational(1)}};
    const DTSeries w = n_table_series(one_at_1, b1(2), 4);
    CHECK(w.column(b1(1)) ==
          TruncatedLaurent::truncation(lp({{1, 1}, {2, 2}, {3, 3}, {4, 4}}), 1, 4));
    CHECK(w.column(b1(0)).is_exact_zero());
    const DTSeries ew = exp_dt(w);
    CHECK(ew.column(b1(0)) == TruncatedLaurent::exact(LaurentPoly(1)));
    CHECK(ew.column(b1(1)) == w.column(b1(1)));
    LaurentPoly half_sq = lp({{3, 2}, {4, 5}, {5, 10}});
    half_sq.set_coeff(2, Rational(1, 2));
    CHECK(ew.column(b1(2)) == TruncatedLaurent::truncation(half_sq, 2, 5));

    // exp(A) * exp(-A) is the unit family on the guaranteed windows.
    const DTSeries cancel = mul(ew, exp_dt(scale(w, Rational(-1))));
    CHECK(cancel.column(b1(0)) == TruncatedLaurent::exact(LaurentPoly(1)));
    CHECK(cancel.column(b1(1)).c.is_zero());
    CHECK(cancel.column(b1(1)).hi == 4);
    CHECK(cancel.column(b1(2)).c.is_zero());
    CHECK(cancel.column(b1(2)).hi == 5);

    DTSeries bad(b1(1));
    bad.set_column(b1(0), TruncatedLaurent::truncation(lp({{0, 1}, {1, 1}}), 0, 3));
    CHECK_THROWS_AS(exp_dt(bad), ConfigError);
    NTableSpec outside;
    outside[b1(2)] = PeriodicTable{1, {Rational(1)}};
    CHECK_THROWS_AS(n_table_series(outside, b1(1), 4), ConfigError);
    NTableSpec uneven;
    uneven[b1(1)] = PeriodicTable{3, {Rational(1), Rational(2), Rational(5)}};
    CHECK_THROWS_AS(n_table_series(uneven, b1(1), 4), SymmetryViolation);

    // Empty table: the cores are the stable-pair columns at -q, verbatim.
    DTSeries pt(b1(2));
    pt.set_column(b1(0), TruncatedLaurent::exact(LaurentPoly(1)));
    pt.set_column(b1(1), TruncatedLaurent::truncation(lp({{-2, 1}, {0, 5}, {2, 1}}), -2, 7));
    pt.set_column(b1(2), TruncatedLaurent::truncation(lp({{0, 1}, {1, 1}}), 0, 6));
    const auto plain = toda_assemble({}, pt);
    CHECK(plain.at(b1(0)).value == LaurentPoly(1));
    CHECK(plain.at(b1(0)).palindromic);
    CHECK(plain.at(b1(1)).value == lp({{-2, 1}, {0, 5}, {2, 1}}));
    CHECK(plain.at(b1(1)).palindromic);
    CHECK(plain.at(b1(2)).value == lp({{0, 1}, {1, -1}}));
    CHECK(!plain.at(b1(2)).palindromic);

    // A core whose mirrored support escapes the window cannot be certified,
    // nor can one whose support touches the unknown tail.
    DTSeries thin(b1(1));
    thin.set_column(b1(0), TruncatedLaurent::exact(LaurentPoly(1)));
    thin.set_column(b1(1), TruncatedLaurent::truncation(lp({{-3, 1}, {1, 1}}), -3, 2));
    CHECK_THROWS_AS(toda_assemble({}, thin), InsufficientTruncation);
    DTSeries edge(b1(1));
    edge.set_column(b1(0), TruncatedLaurent::exact(LaurentPoly(1)));
    edge.set_column(b1(1), TruncatedLaurent::truncation(lp({{2, 1}}), 0, 2));
    CHECK_THROWS_AS(toda_assemble({}, edge), InsufficientTruncation);
    NTableSpec uneven2;
    uneven2[b1(1)] = PeriodicTable{3, {Rational(1), Rational(2), Rational(5)}};
    CHECK_THROWS_AS(toda_assemble(uneven2, pt), SymmetryViolation);

    // Roundtrip: synthesize the stable-pair family from random palindromic
    // cores and a random even table, then recover the cores exactly.
    std::mt19937 rng(777u);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int rep = 0; rep < 3; ++rep) {
        const Beta box = b1(3);
        NTableSpec tables;
        for (int k = 1; k <= 3; ++k) {
            PeriodicTable t;
            t.period = 2 * k;                   // one ample-degree step per unit of k
            t.values.assign(static_cast<std::size_t>(t.period), Rational(0));
            for (int r = 0; r <= k; ++r) {
                const Rational v(coef(rng));
                t.values[static_cast<std::size_t>(r)] = v;
                t.values[static_cast<std::size_t>((t.period - r) % t.period)] = v;
            }
            tables[b1(k)] = t;
        }
        if (rep == 0) tables[b1(0)] = PeriodicTable{1, {Rational(2)}};

        DTSeries cores(box);
        std::map<int, LaurentPoly> ls;
        ls[0] = LaurentPoly(1);
        cores.set_column(b1(0), TruncatedLaurent::exact(ls[0]));
        for (int k = 1; k <= 3; ++k) {
            LaurentPoly l(Rational(coef(rng)));
            for (std::int64_t e = 1; e <= 2; ++e) {
                const Rational v(coef(rng));
                l.set_coeff(e, v);
                l.set_coeff(-e, v);
            }
            if (l.is_zero()) l = LaurentPoly(1);
            ls[static_cast<int>(k)] = l;
            cores.set_column(b1(k), TruncatedLaurent::exact(l));
        }

        const DTSeries weights = n_table_series(tables, box, 12);
        const DTSeries synth = mul(exp_dt(weights), cores).subst_neg_q();
        const auto out = toda_assemble(tables, synth);
        for (int k = 0; k <= 3; ++k) {
            CHECK(out.at(b1(k)).value == ls[k]);
            CHECK(out.at(b1(k)).palindromic);
        }
    }

    // Rank-two roundtrip: splits mix classes from both components.
    NTableSpec tables2;
    tables2[b2(1, 0)] = PeriodicTable{2, {Rational(1), Rational(-1)}};
    tables2[b2(0, 1)] = PeriodicTable{2, {Rational(2), Rational(0)}};
    tables2[b2(1, 1)] = PeriodicTable{4, {Rational(1), Rational(3), Rational(-2), Rational(3)}};
    DTSeries cores2(b2(1, 1));
    cores2.set_column(b2(0, 0), TruncatedLaurent::exact(LaurentPoly(1)));
    cores2.set_column(b2(1, 0), TruncatedLaurent::exact(lp({{-1, 2}, {0, 1}, {1, 2}})));
    cores2.set_column(b2(0, 1), TruncatedLaurent::exact(lp({{0, 3}})));
    cores2.set_column(b2(1, 1), TruncatedLaurent::exact(lp({{-2, 1}, {0, -4}, {2, 1}})));
    const DTSeries weights2 = n_table_series(tables2, b2(1, 1), 10);
    const DTSeries synth2 = mul(exp_dt(weights2), cores2).subst_neg_q();
    const auto out2 = toda_assemble(tables2, synth2);
    CHECK(out2.at(b2(0, 0)).value == LaurentPoly(1));
    CHECK(out2.at(b2(1, 0)).value == lp({{-1, 2}, {0, 1}, {1, 2}}));
    CHECK(out2.at(b2(0, 1)).value == lp({{0, 3}}));
    CHECK(out2.at(b2(1, 1)).value == lp({{-2, 1}, {0, -4}, {2, 1}}));
    for (const auto& [cls, col] : out2) CHECK(col.palindromic);
}

} // TEST_SUITE
