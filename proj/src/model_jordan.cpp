#include <algorithm>
#include <numeric>

#include "hallab/model.hpp"

namespace hallab {

// ---- Partition utilities.

std::string partition_label(const Partition& p) {
    std::string s = "[";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(p[i]);
    }
    return s + "]";
}

Partition parse_partition(const std::string& label) {
    if (label.size() < 2 || label.front() != '[' || label.back() != ']')
        throw Error("bad partition label: " + label);
    Partition p;
    std::size_t i = 1;
    while (i + 1 < label.size()) {
        std::size_t j = label.find(',', i);
        if (j == std::string::npos) j = label.size() - 1;
        p.push_back(std::stoi(label.substr(i, j - i)));
        i = j + 1;
    }
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] <= 0) throw Error("bad partition part in " + label);
        if (k && p[k] > p[k - 1]) throw Error("partition parts not descending in " + label);
    }
    return p;
}

std::vector<Partition> partitions_of(int n, int max_part) {
    if (n < 0) throw Error("partitions of a negative number");
    std::vector<Partition> out;
    Partition cur;
    // Descending-lex generation: largest first part first.
    auto rec = [&](auto&& self, int rest, int cap) -> void {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int part = std::min(rest, cap); part >= 1; --part) {
            cur.push_back(part);
            self(self, rest - part, part);
            cur.pop_back();
        }
    };
    rec(rec, n, max_part);
    return out;
}

Partition conjugate_partition(const Partition& p) {
    Partition c;
    for (int k = 1; p.size() && k <= p[0]; ++k) {
        int m = 0;
        for (int part : p)
            if (part >= k) ++m;
        c.push_back(m);
    }
    return c;
}

int partition_weight(const Partition& p) { return std::accumulate(p.begin(), p.end(), 0); }

AutShape nilpotent_aut_shape(const Partition& p) {
    AutShape s;
    const Partition c = conjugate_partition(p);
    for (int col : c) s.pow += static_cast<std::int64_t>(col) * col;
    // Multiplicity run-lengths of equal parts.
    for (std::size_t i = 0; i < p.size();) {
        std::size_t j = i;
        while (j < p.size() && p[j] == p[i]) ++j;
        const int m = static_cast<int>(j - i);
        s.pow -= static_cast<std::int64_t>(m) * (m + 1) / 2;
        for (int k = 1; k <= m; ++k) s.qk_minus_one.push_back(k);
        i = j;
    }
    return s;
}

std::int64_t nilpotent_hom_exponent(const Partition& a, const Partition& b) {
    std::int64_t e = 0;
    for (int x : a)
        for (int y : b) e += std::min(x, y);
    return e;
}

// ---- The nilpotent-module category: finite-length modules over F_q[t] with
// ---- t nilpotent of bounded order. Iso-classes are partitions (Jordan
// ---- types); all counts are exact.

namespace {

// t-action matrix of the module with Jordan type p (subdiagonal blocks).
FqMat jordan_matrix(const Partition& p) {
    const int n = partition_weight(p);
    FqMat m(n, n);
    int off = 0;
    for (int part : p) {
        for (int i = 1; i < part; ++i) m.at(off + i, off + i - 1) = 1;
        off += part;
    }
    return m;
}

// Jordan type of a nilpotent operator from its rank sequence:
// multiplicity of part k is r_{k-1} - 2 r_k + r_{k+1}.
Partition operator_partition(const Fq& F, const FqMat& m) {
    const int n = m.rows;
    std::vector<int> r{n};
    FqMat p = FqMat::identity(n);
    while (r.back() > 0) {
        p = mat_mul(F, p, m);
        r.push_back(mat_rank(F, p));
        if (static_cast<int>(r.size()) > n + 1) throw Error("operator is not nilpotent");
    }
    r.push_back(0);
    Partition out;
    for (int k = static_cast<int>(r.size()) - 2; k >= 1; --k) {
        const int mult = r[k - 1] - 2 * r[k] + r[k + 1];
        if (mult < 0) throw Error("rank sequence is not concave");
        for (int i = 0; i < mult; ++i) out.push_back(k);
    }
    std::sort(out.rbegin(), out.rend());
    if (partition_weight(out) != n) throw Error("rank sequence does not resolve the dimension");
    return out;
}

class JordanModel final : public Model {
public:
    JordanModel(std::int64_t q, int bound, std::int64_t max_n, bool allow_large)
        : field_(q), bound_(bound), max_n_(max_n) {
        q_ = q;
        auto ctx = std::make_shared<GradingContext>(GradingContext::one_column());
        ctx_ = ctx;
        if (bound < 1) throw ConfigError("nilpotency bound must be >= 1");
        if (max_n < 0) throw ConfigError("negative enumeration depth");
        if (!allow_large && subspace_total(q, static_cast<int>(max_n)) > 200000)
            throw ConfigError("subspace enumeration too large; pass the large-run override");

        for (std::int64_t n = 0; n <= max_n_; ++n) {
            std::vector<std::string> labels;
            for (const Partition& p : partitions_of(static_cast<int>(n), bound_)) {
                std::string l = partition_label(p);
                parts_[l] = p;
                labels.push_back(std::move(l));
            }
            by_n_.push_back(std::move(labels));
        }
        for (std::int64_t n = 0; n <= max_n_; ++n) {
            const auto subs = all_subspaces(field_, static_cast<int>(n));
            for (const std::string& l : by_n_[n]) build_profile(l, subs);
        }
    }

    std::string fingerprint() const override {
        return "{\"bound\":" + std::to_string(bound_) + ",\"q\":" + std::to_string(q_) +
               ",\"type\":\"jordan\"}";
    }

    std::vector<std::string> classes(const Degree& d) const override {
        ctx_->check_rank(d);
        if (d.n < 0 || d.n > max_n_)
            throw DegreeOutOfBounds("degree " + d.str() + " outside the enumerated range");
        return by_n_[d.n];
    }

    Degree degree_of(const std::string& label) const override {
        return Degree{{}, partition_weight(part_of(label))};
    }

    std::string zero_label() const override { return "[]"; }

    BigInt aut(const std::string& e) const override {
        const AutShape s = nilpotent_aut_shape(part_of(e));
        BigInt r = bigint_pow(BigInt(q_), s.pow);
        for (int k : s.qk_minus_one) r *= bigint_pow(BigInt(q_), k) - 1;
        return r;
    }

    BigInt hom(const std::string& a, const std::string& b) const override {
        return bigint_pow(BigInt(q_), nilpotent_hom_exponent(part_of(a), part_of(b)));
    }

    const Profile& filt_profile(const std::string& e) const override {
        auto it = profiles_.find(e);
        if (it == profiles_.end()) throw Error("unknown class label " + e);
        return it->second;
    }

    bool has_framing() const override { return true; }

    // Framing object = the cyclic module of maximal length: every element of
    // E is killed by t^bound, so maps from it are arbitrary elements of E.
    BigInt framed(const std::string& e) const override {
        return bigint_pow(BigInt(q_), partition_weight(part_of(e)));
    }

    // A quotient of a cyclic module is cyclic; surjections onto the cyclic
    // module of length m are its generators, of which there are q^m - q^{m-1}.
    BigInt epi(const std::string& e) const override {
        const Partition p = part_of(e);
        if (p.empty()) return 1;
        if (p.size() > 1) return 0;
        return bigint_pow(BigInt(q_), p[0]) - bigint_pow(BigInt(q_), p[0] - 1);
    }

    bool is_semistable(const std::string& e) const override {
        if (part_of(e).empty()) throw ZeroObject("semistability of the zero object");
        return true;  // one-column grading: a single (infinite) slope
    }

    std::vector<std::pair<Slope, std::string>> hn(const std::string& e) const override {
        if (part_of(e).empty()) throw ZeroObject("HN filtration of the zero object");
        return {{Slope::inf(), e}};
    }

    bool has_torsion_cut() const override { return true; }

    std::pair<std::string, std::string> torsion_decompose(const std::string& e) const override {
        part_of(e);
        return {e, zero_label()};  // every object is torsion here
    }

    BigInt stable_pair(const std::string& e) const override {
        // The only torsion-free object is 0; it admits exactly the zero map.
        return part_of(e).empty() ? 1 : 0;
    }

    bool has_duality() const override { return true; }

    // Vector-space duality transposes the nilpotent operator, which is
    // conjugate to itself: the involution fixes every class.
    std::string dual(const std::string& e) const override {
        part_of(e);
        return e;
    }

    Degree dual_degree(const Degree& d) const override {
        ctx_->check_rank(d);
        return d;
    }

    std::int64_t euler(const Degree& d, const Degree& e) const override {
        ctx_->check_rank(d);
        ctx_->check_rank(e);
        return 0;
    }

    bool zero_euler_form() const override { return true; }

private:
    const Partition& part_of(const std::string& label) const {
        auto it = parts_.find(label);
        if (it == parts_.end()) throw Error("unknown class label " + label);
        return it->second;
    }

    void build_profile(const std::string& label, const std::vector<Echelon>& subs) {
        const Partition& p = parts_.at(label);
        const int n = partition_weight(p);
        const FqMat t = jordan_matrix(p);
        Profile prof;
        for (const Echelon& u : subs) {
            const int k = static_cast<int>(u.pivots.size());
            // t-invariance: the image of every basis vector stays in the span.
            bool invariant = true;
            std::vector<std::vector<std::uint8_t>> images(k);
            for (int i = 0; i < k && invariant; ++i) {
                std::vector<std::uint8_t> row(n);
                for (int j = 0; j < n; ++j) row[j] = u.basis.at(i, j);
                images[i] = mat_apply(field_, t, row);
                invariant = coords_in(field_, u, images[i]).has_value();
            }
            if (!invariant) continue;
            // Restricted action in the subspace basis.
            FqMat rest(k, k);
            for (int i = 0; i < k; ++i) {
                auto c = coords_in(field_, u, images[i]);
                for (int j = 0; j < k; ++j) rest.at(j, i) = (*c)[j];
            }
            // Induced action on the quotient, in non-pivot coordinates.
            std::vector<int> nc;
            {
                std::size_t pi = 0;
                for (int c = 0; c < n; ++c) {
                    if (pi < u.pivots.size() && u.pivots[pi] == c)
                        ++pi;
                    else
                        nc.push_back(c);
                }
            }
            FqMat quot(static_cast<int>(nc.size()), static_cast<int>(nc.size()));
            for (std::size_t j = 0; j < nc.size(); ++j) {
                std::vector<std::uint8_t> col(n);
                for (int i = 0; i < n; ++i) col[i] = t.at(i, nc[j]);
                auto red = reduce_mod(field_, u, col);
                for (std::size_t i = 0; i < nc.size(); ++i)
                    quot.at(static_cast<int>(i), static_cast<int>(j)) = red[nc[i]];
            }
            const Partition ps = operator_partition(field_, rest);
            const Partition pq = operator_partition(field_, quot);
            if ((ps.size() && ps[0] > bound_) || (pq.size() && pq[0] > bound_))
                throw Error("subquotient violates the nilpotency bound");
            prof[{partition_label(ps), partition_label(pq)}] += 1;
        }
        profiles_[label] = std::move(prof);
    }

    Fq field_;
    int bound_;
    std::int64_t max_n_;
    std::vector<std::vector<std::string>> by_n_;
    std::map<std::string, Partition> parts_;
    std::map<std::string, Profile> profiles_;
};

} // namespace

std::unique_ptr<Model> make_jordan_model(std::int64_t q, int bound, std::int64_t max_n,
                                         bool allow_large) {
    return std::make_unique<JordanModel>(q, bound, max_n, allow_large);
}

} // namespace hallab
