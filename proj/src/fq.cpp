#include "hallab/fq.hpp"

#include <algorithm>
#include <numeric>

namespace hallab {

namespace {

// Polynomials over F_p as little-endian digit vectors, used only while
// building the F_{p^e} tables.
using PPoly = std::vector<int>;

PPoly ppoly_mod(PPoly a, const PPoly& m, std::int64_t p) {
    const int dm = static_cast<int>(m.size()) - 1;
    while (static_cast<int>(a.size()) - 1 >= dm) {
        int da = static_cast<int>(a.size()) - 1;
        if (a[da] == 0) {
            a.pop_back();
            continue;
        }
        // m is monic, so subtract a[da] * x^{da-dm} * m.
        for (int i = 0; i <= dm; ++i) {
            int& c = a[da - dm + i];
            c = static_cast<int>(((c - static_cast<std::int64_t>(a[da]) * m[i]) % p + p) % p);
        }
    }
    return a;
}

PPoly ppoly_mulmod(const PPoly& a, const PPoly& b, const PPoly& m, std::int64_t p) {
    PPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<int>((r[i + j] + static_cast<std::int64_t>(a[i]) * b[j]) % p);
    return ppoly_mod(std::move(r), m, p);
}

bool ppoly_is_zero(const PPoly& a) {
    return std::all_of(a.begin(), a.end(), [](int c) { return c == 0; });
}

// Trial division by every monic polynomial of degree 1..deg(m)/2.
bool is_irreducible(const PPoly& m, std::int64_t p) {
    const int dm = static_cast<int>(m.size()) - 1;
    for (int d = 1; 2 * d <= dm; ++d) {
        std::int64_t count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (std::int64_t code = 0; code < count; ++code) {
            PPoly div(d + 1, 0);
            std::int64_t c = code;
            for (int i = 0; i < d; ++i) {
                div[i] = static_cast<int>(c % p);
                c /= p;
            }
            div[d] = 1;
            // Remainder of m modulo div.
            PPoly rem = m;
            while (static_cast<int>(rem.size()) > d) {
                int da = static_cast<int>(rem.size()) - 1;
                if (rem[da] == 0) {
                    rem.pop_back();
                    continue;
                }
                for (int i = 0; i <= d; ++i) {
                    int& x = rem[da - d + i];
                    x = static_cast<int>(
                        ((x - static_cast<std::int64_t>(rem[da]) * div[i]) % p + p) % p);
                }
            }
            if (ppoly_is_zero(rem)) return false;
        }
    }
    return true;
}

} // namespace

Fq::Fq(std::int64_t q) : q_(q) {
    if (q < 2 || q > 121) throw ConfigError("field size must be a prime power in [2,121]");
    std::int64_t p = 2;
    while (q % p != 0) ++p;
    std::int64_t r = q;
    int e = 0;
    while (r % p == 0) {
        r /= p;
        ++e;
    }
    if (r != 1) throw ConfigError("field size " + std::to_string(q) + " is not a prime power");
    p_ = p;
    e_ = e;

    // Element k encodes the digit vector of k in base p.
    auto digits = [&](std::int64_t k) {
        PPoly d(e_, 0);
        for (int i = 0; i < e_; ++i) {
            d[i] = static_cast<int>(k % p_);
            k /= p_;
        }
        return d;
    };
    auto encode = [&](const PPoly& d) {
        std::int64_t k = 0;
        for (int i = e_ - 1; i >= 0; --i) k = k * p_ + (i < static_cast<int>(d.size()) ? d[i] : 0);
        return static_cast<std::uint8_t>(k);
    };

    PPoly irred;
    if (e_ == 1) {
        irred = {0, 1};
    } else {
        for (std::int64_t code = 0; code < q_ && irred.empty(); ++code) {
            PPoly cand = digits(code);
            cand.push_back(1);
            if (is_irreducible(cand, p_)) irred = cand;
        }
        if (irred.empty()) throw Error("no irreducible polynomial found");
    }

    add_.assign(static_cast<std::size_t>(q_) * q_, 0);
    mul_.assign(static_cast<std::size_t>(q_) * q_, 0);
    neg_.assign(q_, 0);
    inv_.assign(q_, 0);
    for (std::int64_t a = 0; a < q_; ++a) {
        PPoly da = digits(a);
        PPoly na(e_, 0);
        for (int i = 0; i < e_; ++i) na[i] = static_cast<int>((p_ - da[i]) % p_);
        neg_[a] = encode(na);
        for (std::int64_t b = 0; b < q_; ++b) {
            PPoly db = digits(b);
            PPoly s(e_, 0);
            for (int i = 0; i < e_; ++i) s[i] = static_cast<int>((da[i] + db[i]) % p_);
            add_[idx(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b))] = encode(s);
            mul_[idx(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b))] =
                encode(ppoly_mulmod(da, db, irred, p_));
        }
    }
    for (std::int64_t a = 1; a < q_; ++a) {
        for (std::int64_t b = 1; b < q_; ++b) {
            if (mul_[idx(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b))] == 1) {
                inv_[a] = static_cast<std::uint8_t>(b);
                break;
            }
        }
        if (inv_[a] == 0) throw Error("field table construction failed: no inverse");
    }
    for (std::int64_t g = 1; g < q_; ++g) {
        std::int64_t ord = 1;
        std::uint8_t x = static_cast<std::uint8_t>(g);
        while (x != 1) {
            x = mul_[idx(x, static_cast<std::uint8_t>(g))];
            ++ord;
        }
        if (ord == q_ - 1) {
            primitive_ = static_cast<std::uint8_t>(g);
            break;
        }
    }
    if (q_ > 2 && primitive_ == 0) throw Error("no primitive element found");
    if (q_ == 2) primitive_ = 1;
}

FqMat mat_mul(const Fq& F, const FqMat& x, const FqMat& y) {
    if (x.cols != y.rows) throw Error("matrix shape mismatch in mat_mul");
    FqMat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            std::uint8_t v = x.at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < y.cols; ++j)
                r.at(i, j) = F.add(r.at(i, j), F.mul(v, y.at(k, j)));
        }
    return r;
}

std::vector<std::uint8_t> mat_apply(const Fq& F, const FqMat& m,
                                    const std::vector<std::uint8_t>& v) {
    if (static_cast<int>(v.size()) != m.cols) throw Error("vector size mismatch in mat_apply");
    std::vector<std::uint8_t> r(m.rows, 0);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (m.at(i, j) && v[j]) r[i] = F.add(r[i], F.mul(m.at(i, j), v[j]));
    return r;
}

FqMat mat_transpose(const FqMat& x) {
    FqMat r(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
    return r;
}

FqMat mat_pow(const Fq& F, const FqMat& x, int k) {
    FqMat r = FqMat::identity(x.rows);
    for (int i = 0; i < k; ++i) r = mat_mul(F, r, x);
    return r;
}

Echelon echelon_form(const Fq& F, FqMat m) {
    Echelon e;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int piv = -1;
        for (int i = r; i < m.rows; ++i)
            if (m.at(i, c) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        for (int j = 0; j < m.cols; ++j) std::swap(m.at(r, j), m.at(piv, j));
        std::uint8_t d = F.inv(m.at(r, c));
        for (int j = 0; j < m.cols; ++j) m.at(r, j) = F.mul(m.at(r, j), d);
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || m.at(i, c) == 0) continue;
            std::uint8_t f = m.at(i, c);
            for (int j = 0; j < m.cols; ++j)
                m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(r, j)));
        }
        e.pivots.push_back(c);
        ++r;
    }
    e.basis = FqMat(r, m.cols);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < m.cols; ++j) e.basis.at(i, j) = m.at(i, j);
    return e;
}

int mat_rank(const Fq& F, FqMat m) { return static_cast<int>(echelon_form(F, std::move(m)).pivots.size()); }

FqMat mat_inverse(const Fq& F, const FqMat& x) {
    if (x.rows != x.cols) throw Error("inverse of non-square matrix");
    if (x.rows == 0) return x;
    FqMat aug(x.rows, 2 * x.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int j = 0; j < x.cols; ++j) aug.at(i, j) = x.at(i, j);
        aug.at(i, x.cols + i) = 1;
    }
    Echelon e = echelon_form(F, aug);
    if (static_cast<int>(e.pivots.size()) != x.rows || e.pivots[x.rows - 1] != x.rows - 1)
        throw Error("matrix is singular");
    FqMat r(x.rows, x.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r.at(i, j) = e.basis.at(i, x.cols + j);
    return r;
}

std::optional<std::vector<std::uint8_t>> coords_in(const Fq& F, const Echelon& e,
                                                   const std::vector<std::uint8_t>& v) {
    std::vector<std::uint8_t> res = v;
    std::vector<std::uint8_t> coords(e.pivots.size(), 0);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
        std::uint8_t c = res[e.pivots[i]];
        coords[i] = c;
        if (c == 0) continue;
        for (int j = 0; j < e.basis.cols; ++j)
            res[j] = F.sub(res[j], F.mul(c, e.basis.at(static_cast<int>(i), j)));
    }
    for (std::uint8_t x : res)
        if (x != 0) return std::nullopt;
    return coords;
}

std::vector<std::uint8_t> reduce_mod(const Fq& F, const Echelon& e, std::vector<std::uint8_t> v) {
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
        std::uint8_t c = v[e.pivots[i]];
        if (c == 0) continue;
        for (int j = 0; j < e.basis.cols; ++j)
            v[j] = F.sub(v[j], F.mul(c, e.basis.at(static_cast<int>(i), j)));
    }
    return v;
}

FqMat kernel_basis(const Fq& F, const FqMat& m) {
    Echelon e = echelon_form(F, m);
    std::vector<int> free_cols;
    {
        std::size_t pi = 0;
        for (int c = 0; c < m.cols; ++c) {
            if (pi < e.pivots.size() && e.pivots[pi] == c)
                ++pi;
            else
                free_cols.push_back(c);
        }
    }
    FqMat k(static_cast<int>(free_cols.size()), m.cols);
    for (std::size_t f = 0; f < free_cols.size(); ++f) {
        k.at(static_cast<int>(f), free_cols[f]) = 1;
        for (std::size_t i = 0; i < e.pivots.size(); ++i)
            k.at(static_cast<int>(f), e.pivots[i]) =
                F.neg(e.basis.at(static_cast<int>(i), free_cols[f]));
    }
    return k;
}

std::vector<Echelon> all_subspaces(const Fq& F, int n) {
    std::vector<Echelon> out;
    // Dimension 0 first.
    out.push_back(Echelon{FqMat(0, n), {}});
    for (int k = 1; k <= n; ++k) {
        // All strictly increasing pivot-column k-subsets, lexicographic.
        std::vector<int> piv(k);
        std::iota(piv.begin(), piv.end(), 0);
        while (true) {
            // Free positions: (i, j) with j > piv[i], j not a pivot column.
            std::vector<std::pair<int, int>> free_pos;
            std::vector<bool> is_piv(n, false);
            for (int c : piv) is_piv[c] = true;
            for (int i = 0; i < k; ++i)
                for (int j = piv[i] + 1; j < n; ++j)
                    if (!is_piv[j]) free_pos.emplace_back(i, j);
            std::vector<std::uint8_t> assign(free_pos.size(), 0);
            while (true) {
                Echelon e;
                e.pivots = piv;
                e.basis = FqMat(k, n);
                for (int i = 0; i < k; ++i) e.basis.at(i, piv[i]) = 1;
                for (std::size_t t = 0; t < free_pos.size(); ++t)
                    e.basis.at(free_pos[t].first, free_pos[t].second) = assign[t];
                out.push_back(std::move(e));
                std::size_t t = 0;
                for (; t < assign.size(); ++t) {
                    if (assign[t] + 1 < F.q()) {
                        ++assign[t];
                        break;
                    }
                    assign[t] = 0;
                }
                if (t == assign.size()) break;
            }
            // Next pivot subset.
            int i = k - 1;
            while (i >= 0 && piv[i] == n - k + i) --i;
            if (i < 0) break;
            ++piv[i];
            for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
        }
    }
    return out;
}

BigInt bigint_pow(const BigInt& b, std::int64_t e) {
    if (e < 0) throw Error("negative exponent in bigint_pow");
    BigInt r = 1, base = b;
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

BigInt gauss_binomial(std::int64_t q, int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt num = 1, den = 1;
    for (int i = 0; i < k; ++i) {
        num *= bigint_pow(q, n - i) - 1;
        den *= bigint_pow(q, i + 1) - 1;
    }
    if (num % den != 0) throw Error("gaussian binomial did not divide");
    return num / den;
}

BigInt subspace_total(std::int64_t q, int n) {
    BigInt t = 0;
    for (int k = 0; k <= n; ++k) t += gauss_binomial(q, n, k);
    return t;
}

BigInt gl_order(std::int64_t q, int n) {
    BigInt r = 1;
    for (int i = 0; i < n; ++i) r *= bigint_pow(q, n) - bigint_pow(q, i);
    return r;
}

} // namespace hallab
