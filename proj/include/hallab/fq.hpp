#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hallab/errors.hpp"
#include "hallab/rational.hpp"

namespace hallab {

// Finite field F_q, q = p^e, with full lookup tables. Elements are encoded as
// 0..q-1: the base-p digit vector of a polynomial over F_p reduced modulo a
// fixed irreducible polynomial (for e = 1 this is plain mod-p arithmetic).
class Fq {
public:
    explicit Fq(std::int64_t q);

    std::int64_t q() const { return q_; }
    std::int64_t p() const { return p_; }
    int e() const { return e_; }
    std::uint8_t primitive() const { return primitive_; }

    std::uint8_t add(std::uint8_t a, std::uint8_t b) const { return add_[idx(a, b)]; }
    std::uint8_t sub(std::uint8_t a, std::uint8_t b) const { return add_[idx(a, neg_[b])]; }
    std::uint8_t mul(std::uint8_t a, std::uint8_t b) const { return mul_[idx(a, b)]; }
    std::uint8_t neg(std::uint8_t a) const { return neg_[a]; }
    std::uint8_t inv(std::uint8_t a) const {
        if (a == 0) throw Error("division by zero in F_q");
        return inv_[a];
    }

private:
    std::size_t idx(std::uint8_t a, std::uint8_t b) const {
        return static_cast<std::size_t>(a) * static_cast<std::size_t>(q_) + b;
    }

    std::int64_t q_ = 0, p_ = 0;
    int e_ = 0;
    std::uint8_t primitive_ = 0;
    std::vector<std::uint8_t> add_, mul_, neg_, inv_;
};

// Dense row-major matrix over F_q with entries encoded as above.
struct FqMat {
    int rows = 0, cols = 0;
    std::vector<std::uint8_t> a;

    FqMat() = default;
    FqMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}

    std::uint8_t& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    std::uint8_t at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    static FqMat identity(int n) {
        FqMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
};

FqMat mat_mul(const Fq& F, const FqMat& x, const FqMat& y);
std::vector<std::uint8_t> mat_apply(const Fq& F, const FqMat& m,
                                    const std::vector<std::uint8_t>& v);
FqMat mat_transpose(const FqMat& x);
int mat_rank(const Fq& F, FqMat m);
FqMat mat_pow(const Fq& F, const FqMat& x, int k);
FqMat mat_inverse(const Fq& F, const FqMat& x);

// Row space of `m` in reduced row-echelon form; `pivots` are the pivot
// columns, rows beyond the rank are dropped.
struct Echelon {
    FqMat basis;             // rank x cols, RREF
    std::vector<int> pivots; // size = rank, strictly increasing
};
Echelon echelon_form(const Fq& F, FqMat m);

// Coordinates of v in the RREF row basis; nullopt when v is outside the span.
std::optional<std::vector<std::uint8_t>> coords_in(const Fq& F, const Echelon& e,
                                                   const std::vector<std::uint8_t>& v);

// Residual of v after subtracting its pivot-matching combination of basis
// rows; zero exactly when v lies in the span, and always supported on the
// non-pivot columns — the coordinates of v in the quotient by the row space.
std::vector<std::uint8_t> reduce_mod(const Fq& F, const Echelon& e, std::vector<std::uint8_t> v);

// Basis of {x : m x = 0} as rows of the returned matrix.
FqMat kernel_basis(const Fq& F, const FqMat& m);

// All subspaces of F_q^n, every dimension, as RREF bases. Deterministic
// order: by dimension, then by pivot-column set, then by free entries.
std::vector<Echelon> all_subspaces(const Fq& F, int n);

// Number of k-dimensional subspaces of F_q^n (Gaussian binomial), and the
// total over all k — used for cost guardrails and as a test oracle.
BigInt gauss_binomial(std::int64_t q, int n, int k);
BigInt subspace_total(std::int64_t q, int n);

BigInt gl_order(std::int64_t q, int n);
BigInt bigint_pow(const BigInt& b, std::int64_t e);

} // namespace hallab
