#include <algorithm>
#include <deque>
#include <numeric>

#include "hallab/model.hpp"

namespace hallab {

namespace {

std::string beta_str(const Beta& b) {
    std::string s = "(";
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(b[i]);
    }
    return s + ")";
}

std::string hex_bytes(const std::vector<std::uint8_t>& v) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(v.size() * 2);
    for (auto b : v) {
        s += digits[b >> 4];
        s += digits[b & 15];
    }
    return s;
}

// Generators of GL_k(F_q): a transvection, the basis cycle, and a primitive
// scalar in the first slot. Forward moves alone reach the whole orbit: in a
// finite group every inverse is a positive word in the generators. Identity
// moves are dropped (k <= 1 cases, q = 2 scalar).
std::vector<std::pair<FqMat, FqMat>> gl_generators(const Fq& F, int k) {
    std::vector<std::pair<FqMat, FqMat>> gens;
    auto push = [&](const FqMat& g) {
        if (g.a != FqMat::identity(k).a) gens.emplace_back(g, mat_inverse(F, g));
    };
    if (k >= 2) {
        FqMat t = FqMat::identity(k);
        t.at(0, 1) = 1;
        push(t);
        FqMat c(k, k);
        for (int i = 0; i < k; ++i) c.at((i + 1) % k, i) = 1;
        push(c);
    }
    if (k >= 1) {
        FqMat d = FqMat::identity(k);
        d.at(0, 0) = F.primitive();
        push(d);
    }
    return gens;
}

class QuiverModel final : public Model {
public:
    QuiverModel(const QuiverSpec& spec, bool allow_large) : spec_(spec), field_(spec.q) {
        q_ = spec_.q;
        validate_spec();
        auto ctx = std::make_shared<GradingContext>(GradingContext::quiver(spec_.vertices));
        ctx->theta_beta = spec_.theta;
        ctx->kappa = spec_.kappa;
        ctx_ = ctx;
        check_cost(allow_large);
        const int maxdim = *std::max_element(spec_.box.begin(), spec_.box.end());
        for (int m = 0; m <= maxdim; ++m) subs_.push_back(all_subspaces(field_, m));
        for_each_dims([&](const Beta& d) { enumerate_dimension(d); });
        for (auto& [label, info] : info_) analyze_class(label, info);
        for (auto& [label, info] : info_) {
            (void)info;
            assemble_hn(label);
        }
    }

    std::string fingerprint() const override {
        std::string s = "{\"arrows\":[";
        for (std::size_t i = 0; i < spec_.arrows.size(); ++i) {
            if (i) s += ",";
            s += "[" + std::to_string(spec_.arrows[i].first + 1) + "," +
                 std::to_string(spec_.arrows[i].second + 1) + "]";
        }
        s += "],\"box\":" + int_list(spec_.box);
        if (!spec_.duality.empty()) {
            std::vector<std::int64_t> d1;
            for (int v : spec_.duality) d1.push_back(v + 1);
            s += ",\"duality\":" + int_list(d1);
        }
        if (spec_.framing_vertex >= 0)
            s += ",\"framing_vertex\":" + std::to_string(spec_.framing_vertex + 1);
        s += ",\"kappa\":" + int_list(spec_.kappa);
        s += ",\"q\":" + std::to_string(q_);
        s += ",\"theta\":" + int_list(spec_.theta);
        s += ",\"type\":\"quiver\",\"vertices\":" + std::to_string(spec_.vertices) + "}";
        return s;
    }

    std::vector<std::string> classes(const Degree& d) const override {
        return dim_table(d).labels;
    }

    Degree degree_of(const std::string& label) const override { return info_of(label).deg; }

    std::string zero_label() const override {
        return beta_str(Beta(spec_.vertices, 0)) + "#";
    }

    BigInt aut(const std::string& e) const override { return info_of(e).aut; }

    // |Hom(A,B)| = q^dim of the solution space of the intertwining equations
    // phi_t M^A_a = M^B_a phi_s over all arrows a.
    BigInt hom(const std::string& a, const std::string& b) const override {
        const ClassInfo& A = info_of(a);
        const ClassInfo& B = info_of(b);
        const auto MA = decode(A);
        const auto MB = decode(B);
        std::vector<int> off(spec_.vertices + 1, 0);
        for (int v = 0; v < spec_.vertices; ++v)
            off[v + 1] = off[v] + A.deg.beta[v] * B.deg.beta[v];
        const int vars = off[spec_.vertices];
        std::vector<FqMat> rows;
        FqMat sys(0, vars);
        std::vector<std::uint8_t> data;
        for (std::size_t ar = 0; ar < spec_.arrows.size(); ++ar) {
            const int s = spec_.arrows[ar].first, t = spec_.arrows[ar].second;
            const int das = A.deg.beta[s], dbt = B.deg.beta[t];
            const int dat = A.deg.beta[t], dbs = B.deg.beta[s];
            for (int r = 0; r < dbt; ++r)
                for (int c = 0; c < das; ++c) {
                    std::vector<std::uint8_t> row(vars, 0);
                    // phi_t[r][j] * MA[j][c] contribution
                    for (int j = 0; j < dat; ++j) {
                        auto& cell = row[off[t] + r * dat + j];
                        cell = field_.add(cell, MA[ar].at(j, c));
                    }
                    // - MB[r][k] * phi_s[k][c] contribution
                    for (int k = 0; k < dbs; ++k) {
                        auto& cell = row[off[s] + k * das + c];
                        cell = field_.sub(cell, MB[ar].at(r, k));
                    }
                    data.insert(data.end(), row.begin(), row.end());
                }
        }
        FqMat m(vars == 0 ? 0 : static_cast<int>(data.size() / std::max(vars, 1)), vars);
        m.a = std::move(data);
        const int rank = vars == 0 ? 0 : mat_rank(field_, m);
        return bigint_pow(BigInt(q_), vars - rank);
    }

    const Profile& filt_profile(const std::string& e) const override {
        return info_of(e).profile;
    }

    bool has_framing() const override { return spec_.framing_vertex >= 0; }

    // Maps from the projective at the framing vertex are evaluation there.
    BigInt framed(const std::string& e) const override {
        require_framing();
        return bigint_pow(BigInt(q_), info_of(e).deg.beta[spec_.framing_vertex]);
    }

    BigInt epi(const std::string& e) const override {
        require_framing();
        return info_of(e).epi;
    }

    bool is_semistable(const std::string& e) const override {
        const ClassInfo& i = info_of(e);
        if (i.deg.is_zero()) throw ZeroObject("semistability of the zero object");
        return i.semistable;
    }

    std::vector<std::pair<Slope, std::string>> hn(const std::string& e) const override {
        const ClassInfo& i = info_of(e);
        if (i.deg.is_zero()) throw ZeroObject("HN filtration of the zero object");
        return i.hn;
    }

    // A torsion cut needs the slope-infinity class to be visible: some kappa
    // entry must vanish (all-positive kappa leaves only the zero object).
    bool has_torsion_cut() const override {
        return std::any_of(spec_.kappa.begin(), spec_.kappa.end(),
                           [](auto k) { return k == 0; });
    }

    std::pair<std::string, std::string> torsion_decompose(const std::string& e) const override {
        require_torsion();
        return info_of(e).torsion;
    }

    BigInt stable_pair(const std::string& e) const override {
        require_torsion();
        require_framing();
        return info_of(e).spair;
    }

    bool has_duality() const override { return !spec_.duality.empty(); }

    std::string dual(const std::string& e) const override {
        require_duality();
        const ClassInfo& i = info_of(e);
        const auto mats = decode(i);
        Beta nd(spec_.vertices);
        for (int v = 0; v < spec_.vertices; ++v) nd[v] = i.deg.beta[spec_.duality[v]];
        std::vector<FqMat> nm(spec_.arrows.size());
        for (std::size_t a = 0; a < spec_.arrows.size(); ++a)
            nm[arrow_dual_[a]] = mat_transpose(mats[a]);
        const DimTable& table = dims_.at(nd);
        return table.labels[table.class_of[state_index(encode(nd, nm))]];
    }

    Degree dual_degree(const Degree& d) const override {
        require_duality();
        ctx_->check_rank(d);
        Beta nd(spec_.vertices);
        for (int v = 0; v < spec_.vertices; ++v) nd[v] = d.beta[spec_.duality[v]];
        return Degree{nd, d.n};
    }

    std::int64_t euler(const Degree& d, const Degree& e) const override {
        ctx_->check_rank(d);
        ctx_->check_rank(e);
        std::int64_t r = 0;
        for (int v = 0; v < spec_.vertices; ++v)
            r += static_cast<std::int64_t>(d.beta[v]) * e.beta[v];
        for (auto& [s, t] : spec_.arrows) r -= static_cast<std::int64_t>(d.beta[s]) * e.beta[t];
        return r;
    }

    bool zero_euler_form() const override {
        for (int i = 0; i < spec_.vertices; ++i)
            for (int j = 0; j < spec_.vertices; ++j) {
                Degree a{Beta(spec_.vertices, 0), 0}, b{Beta(spec_.vertices, 0), 0};
                a.beta[i] = 1;
                b.beta[j] = 1;
                if (euler(a, b) != 0) return false;
            }
        return true;
    }

private:
    struct ClassInfo {
        Degree deg;
        std::vector<std::uint8_t> state;  // orbit-minimal representative
        BigInt aut = 1;
        std::int64_t orbit = 0;
        Profile profile;
        bool semistable = false;
        std::vector<std::pair<Slope, std::string>> hn;
        // Maximal destabilizer (sub label, quot label); empty when semistable.
        std::pair<std::string, std::string> destab;
        std::pair<std::string, std::string> torsion;
        BigInt epi = 0, spair = 0;
    };

    struct DimTable {
        std::vector<std::int32_t> class_of;  // state index -> class position
        std::vector<std::string> labels;     // ascending minimal-state order
    };

    static std::string int_list(const std::vector<std::int64_t>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(v[i]);
        }
        return s + "]";
    }
    static std::string int_list(const std::vector<std::int32_t>& v) {
        return int_list(std::vector<std::int64_t>(v.begin(), v.end()));
    }

    void validate_spec() {
        const int V = spec_.vertices;
        if (V < 1) throw ModelLoadError("quiver needs at least one vertex");
        for (auto& [s, t] : spec_.arrows)
            if (s < 0 || s >= V || t < 0 || t >= V)
                throw ModelLoadError("arrow endpoint out of range");
        if (static_cast<int>(spec_.box.size()) != V)
            throw ModelLoadError("box size must match the vertex count");
        for (auto b : spec_.box)
            if (b < 0) throw ModelLoadError("negative box entry");
        if (static_cast<int>(spec_.theta.size()) != V ||
            static_cast<int>(spec_.kappa.size()) != V)
            throw ModelLoadError("theta and kappa must have one entry per vertex");
        for (auto k : spec_.kappa)
            if (k < 0) throw ModelLoadError("kappa entries must be >= 0");
        if (spec_.framing_vertex < -1 || spec_.framing_vertex >= V)
            throw ModelLoadError("framing vertex out of range");
        if (!spec_.duality.empty()) {
            if (static_cast<int>(spec_.duality.size()) != V)
                throw ModelLoadError("duality permutation size must match the vertex count");
            std::vector<bool> seen(V, false);
            for (int v : spec_.duality) {
                if (v < 0 || v >= V || seen[v]) throw ModelLoadError("duality is not a permutation");
                seen[v] = true;
            }
            for (int v = 0; v < V; ++v)
                if (spec_.duality[spec_.duality[v]] != v)
                    throw ModelLoadError("duality permutation must be an involution");
            for (int v = 0; v < V; ++v)
                if (spec_.box[spec_.duality[v]] != spec_.box[v])
                    throw ModelLoadError("duality requires a symmetric box");
            // The reversed arrow multiset must match; fix a matching in input
            // order so the involution on arrows is also deterministic.
            arrow_dual_.assign(spec_.arrows.size(), -1);
            std::vector<bool> used(spec_.arrows.size(), false);
            for (std::size_t i = 0; i < spec_.arrows.size(); ++i) {
                const int rs = spec_.duality[spec_.arrows[i].second];
                const int rt = spec_.duality[spec_.arrows[i].first];
                bool found = false;
                for (std::size_t j = 0; j < spec_.arrows.size() && !found; ++j) {
                    if (used[j] || spec_.arrows[j] != std::make_pair(rs, rt)) continue;
                    arrow_dual_[i] = static_cast<int>(j);
                    used[j] = true;
                    found = true;
                }
                if (!found)
                    throw ModelLoadError("duality does not reverse the arrow multiset");
            }
        }
    }

    std::int64_t rep_entries(const Beta& d) const {
        std::int64_t e = 0;
        for (auto& [s, t] : spec_.arrows) e += static_cast<std::int64_t>(d[s]) * d[t];
        return e;
    }

    template <class Fn>
    void for_each_dims(Fn&& fn) const {
        Beta d(spec_.vertices, 0);
        for (;;) {
            fn(d);
            int i = 0;
            while (i < spec_.vertices && d[i] == spec_.box[i]) d[i++] = 0;
            if (i == spec_.vertices) break;
            ++d[i];
        }
    }

    void check_cost(bool allow_large) const {
        BigInt total = 0;
        for_each_dims([&](const Beta& d) { total += bigint_pow(BigInt(q_), rep_entries(d)); });
        if (total > BigInt(1) << 26)
            throw ConfigError("state space beyond hard enumeration cap");
        if (!allow_large && total > BigInt(1) << 22)
            throw ConfigError("state space too large; pass the large-run override");
    }

    std::vector<std::uint8_t> encode(const Beta& d, const std::vector<FqMat>& mats) const {
        std::vector<std::uint8_t> out;
        out.reserve(rep_entries(d));
        for (std::size_t a = 0; a < spec_.arrows.size(); ++a)
            out.insert(out.end(), mats[a].a.begin(), mats[a].a.end());
        return out;
    }

    std::vector<FqMat> decode(const ClassInfo& info) const {
        return decode_state(info.deg.beta, info.state);
    }

    std::vector<FqMat> decode_state(const Beta& d, const std::vector<std::uint8_t>& bytes) const {
        std::vector<FqMat> mats;
        std::size_t off = 0;
        for (auto& [s, t] : spec_.arrows) {
            FqMat m(d[t], d[s]);
            std::copy(bytes.begin() + off, bytes.begin() + off + m.a.size(), m.a.begin());
            off += m.a.size();
            mats.push_back(std::move(m));
        }
        return mats;
    }

    std::int64_t state_index(const std::vector<std::uint8_t>& bytes) const {
        std::int64_t idx = 0;
        for (std::size_t i = bytes.size(); i-- > 0;) idx = idx * q_ + bytes[i];
        return idx;
    }

    std::vector<std::uint8_t> state_bytes(std::int64_t idx, std::int64_t len) const {
        std::vector<std::uint8_t> b(len);
        for (std::int64_t i = 0; i < len; ++i) {
            b[i] = static_cast<std::uint8_t>(idx % q_);
            idx /= q_;
        }
        return b;
    }

    void enumerate_dimension(const Beta& d) {
        const std::int64_t entries = rep_entries(d);
        std::int64_t states = 1;
        for (std::int64_t i = 0; i < entries; ++i) states *= q_;
        DimTable table;
        table.class_of.assign(states, -1);

        BigInt gl_prod = 1;
        for (int v = 0; v < spec_.vertices; ++v) gl_prod *= gl_order(q_, d[v]);
        // Moves: (vertex, generator, inverse), acting by g at one vertex.
        std::vector<std::tuple<int, FqMat, FqMat>> moves;
        for (int v = 0; v < spec_.vertices; ++v)
            for (auto& [g, gi] : gl_generators(field_, d[v])) moves.emplace_back(v, g, gi);

        std::int64_t assigned = 0;
        for (std::int64_t start = 0; start < states; ++start) {
            if (table.class_of[start] != -1) continue;
            const auto id = static_cast<std::int32_t>(table.labels.size());
            std::int64_t orbit = 0;
            std::deque<std::vector<std::uint8_t>> queue;
            queue.push_back(state_bytes(start, entries));
            table.class_of[start] = id;
            while (!queue.empty()) {
                auto cur = std::move(queue.front());
                queue.pop_front();
                ++orbit;
                const auto mats = decode_state(d, cur);
                for (auto& [v, g, gi] : moves) {
                    std::vector<FqMat> nm = mats;
                    for (std::size_t a = 0; a < spec_.arrows.size(); ++a) {
                        const int s = spec_.arrows[a].first, t = spec_.arrows[a].second;
                        if (t == v) nm[a] = mat_mul(field_, g, nm[a]);
                        if (s == v) nm[a] = mat_mul(field_, nm[a], gi);
                    }
                    auto nb = encode(d, nm);
                    const std::int64_t ni = state_index(nb);
                    if (table.class_of[ni] == -1) {
                        table.class_of[ni] = id;
                        queue.push_back(std::move(nb));
                    }
                }
            }
            assigned += orbit;

            ClassInfo info;
            info.deg = Degree{d, 0};
            info.state = state_bytes(start, entries);
            info.orbit = orbit;
            if (gl_prod % orbit != 0) throw Error("orbit size does not divide the group order");
            info.aut = gl_prod / orbit;
            std::string label = beta_str(d) + "#" + hex_bytes(info.state);
            table.labels.push_back(label);
            info_.emplace(std::move(label), std::move(info));
        }
        if (assigned != states) throw Error("orbit decomposition missed states");
        dims_.emplace(d, std::move(table));
    }

    // Subobject scan: profile of filtration counts, semistability, maximal
    // destabilizer, torsion decomposition. One pass over all subobjects.
    void analyze_class(const std::string& label, ClassInfo& info) {
        const Beta& d = info.deg.beta;
        const auto mats = decode(info);
        const int V = spec_.vertices;

        std::vector<int> pick(V, 0);
        struct PSub {
            std::vector<const Echelon*> spaces;
            int totdim;
            std::string sub, quot;
        };
        std::vector<PSub> p_subs;
        bool have_best = false;
        Slope best_slope = Slope::inf();
        int best_dim = -1;
        int best_count = 0;
        std::pair<std::string, std::string> best_labels;
        bool semistable = true;
        const bool zero = info.deg.is_zero();
        const Slope own_slope = zero ? Slope::inf() : ctx_->slope(info.deg);
        const int total_dim = std::accumulate(d.begin(), d.end(), 0);

        for (;;) {
            std::vector<const Echelon*> u(V);
            for (int v = 0; v < V; ++v) u[v] = &subs_[d[v]][pick[v]];
            if (subrep_ok(mats, u)) {
                Beta sd(V);
                int totdim = 0;
                for (int v = 0; v < V; ++v) {
                    sd[v] = static_cast<std::int32_t>(u[v]->pivots.size());
                    totdim += sd[v];
                }
                auto [sub_label, quot_label] = classify_pair(d, mats, u, sd);
                info.profile[{sub_label, quot_label}] += 1;

                const bool is_zero_sub = totdim == 0;
                const bool is_full = totdim == total_dim;
                if (!is_zero_sub && !is_full) {
                    const Slope s = ctx_->slope(Degree{sd, 0});
                    if (s > own_slope) semistable = false;
                    if (!have_best || s > best_slope ||
                        (s == best_slope && totdim > best_dim)) {
                        have_best = true;
                        best_slope = s;
                        best_dim = totdim;
                        best_count = 1;
                        best_labels = {sub_label, quot_label};
                    } else if (s == best_slope && totdim == best_dim) {
                        ++best_count;
                    }
                }
                if (ctx_->kappa_pair(sd) == 0)
                    p_subs.push_back(PSub{u, totdim, sub_label, quot_label});
            }
            int v = 0;
            while (v < V && pick[v] + 1 == static_cast<int>(subs_[d[v]].size())) pick[v++] = 0;
            if (v == V) break;
            ++pick[v];
        }

        info.semistable = semistable;
        if (!semistable) {
            if (best_count != 1) throw Error("maximal destabilizer is not unique for " + label);
            info.destab = best_labels;
        }

        if (has_torsion_cut()) {
            // Maximal torsion subobject: the largest kappa-null subobject;
            // every other kappa-null subobject must sit inside it.
            const PSub* best_p = nullptr;
            for (const PSub& p : p_subs)
                if (!best_p || p.totdim > best_p->totdim) best_p = &p;
            int max_count = 0;
            for (const PSub& p : p_subs)
                if (p.totdim == best_p->totdim) ++max_count;
            if (max_count != 1) throw Error("torsion subobject is not unique for " + label);
            for (const PSub& p : p_subs) {
                for (int v = 0; v < V; ++v) {
                    const Echelon* small = p.spaces[v];
                    for (std::size_t i = 0; i < small->pivots.size(); ++i) {
                        std::vector<std::uint8_t> row(small->basis.cols);
                        for (int j = 0; j < small->basis.cols; ++j)
                            row[j] = small->basis.at(static_cast<int>(i), j);
                        if (!coords_in(field_, *best_p->spaces[v], row))
                            throw Error("torsion subobjects are not nested for " + label);
                    }
                }
            }
            info.torsion = {best_p->sub, best_p->quot};
        }

        if (has_framing()) {
            const int df = d[spec_.framing_vertex];
            std::int64_t count = 1;
            for (int i = 0; i < df; ++i) count *= q_;
            BigInt epi = 0, spair = 0;
            const bool in_q = !has_torsion_cut() ||
                              info.torsion.first == zero_label();
            for (std::int64_t e = 0; e < count; ++e) {
                const Beta gen = generated_dims(d, mats, state_bytes(e, df));
                int gen_total = 0;
                Beta coker(V);
                for (int v = 0; v < V; ++v) {
                    gen_total += gen[v];
                    coker[v] = d[v] - gen[v];
                }
                if (gen_total == total_dim) epi += 1;
                if (in_q && ctx_->kappa_pair(coker) == 0) spair += 1;
            }
            info.epi = epi;
            if (has_torsion_cut()) info.spair = in_q ? spair : 0;
        }
    }

    bool subrep_ok(const std::vector<FqMat>& mats, const std::vector<const Echelon*>& u) const {
        for (std::size_t a = 0; a < spec_.arrows.size(); ++a) {
            const int s = spec_.arrows[a].first, t = spec_.arrows[a].second;
            const Echelon* us = u[s];
            for (std::size_t i = 0; i < us->pivots.size(); ++i) {
                std::vector<std::uint8_t> row(us->basis.cols);
                for (int j = 0; j < us->basis.cols; ++j)
                    row[j] = us->basis.at(static_cast<int>(i), j);
                if (!coords_in(field_, *u[t], mat_apply(field_, mats[a], row)))
                    return false;
            }
        }
        return true;
    }

    // Labels of the subobject cut out by u and of its quotient.
    std::pair<std::string, std::string> classify_pair(const Beta& d,
                                                      const std::vector<FqMat>& mats,
                                                      const std::vector<const Echelon*>& u,
                                                      const Beta& sd) const {
        const int V = spec_.vertices;
        // Restricted representation in the subspace bases.
        std::vector<FqMat> rest(spec_.arrows.size());
        for (std::size_t a = 0; a < spec_.arrows.size(); ++a) {
            const int s = spec_.arrows[a].first, t = spec_.arrows[a].second;
            FqMat m(sd[t], sd[s]);
            for (int i = 0; i < static_cast<int>(sd[s]); ++i) {
                std::vector<std::uint8_t> row(d[s]);
                for (int j = 0; j < static_cast<int>(d[s]); ++j) row[j] = u[s]->basis.at(i, j);
                auto c = coords_in(field_, *u[t], mat_apply(field_, mats[a], row));
                for (int r = 0; r < static_cast<int>(sd[t]); ++r) m.at(r, i) = (*c)[r];
            }
            rest[a] = std::move(m);
        }
        // Quotient representation in non-pivot coordinates.
        std::vector<std::vector<int>> nc(V);
        Beta qd(V);
        for (int v = 0; v < V; ++v) {
            std::size_t pi = 0;
            for (int c = 0; c < static_cast<int>(d[v]); ++c) {
                if (pi < u[v]->pivots.size() && u[v]->pivots[pi] == c)
                    ++pi;
                else
                    nc[v].push_back(c);
            }
            qd[v] = static_cast<std::int32_t>(nc[v].size());
        }
        std::vector<FqMat> quot(spec_.arrows.size());
        for (std::size_t a = 0; a < spec_.arrows.size(); ++a) {
            const int s = spec_.arrows[a].first, t = spec_.arrows[a].second;
            FqMat m(qd[t], qd[s]);
            for (std::size_t j = 0; j < nc[s].size(); ++j) {
                std::vector<std::uint8_t> col(d[t]);
                for (int i = 0; i < static_cast<int>(d[t]); ++i)
                    col[i] = mats[a].at(i, nc[s][j]);
                auto red = reduce_mod(field_, *u[t], col);
                for (std::size_t i = 0; i < nc[t].size(); ++i)
                    m.at(static_cast<int>(i), static_cast<int>(j)) = red[nc[t][i]];
            }
            quot[a] = std::move(m);
        }
        return {label_of_state(sd, encode(sd, rest)), label_of_state(qd, encode(qd, quot))};
    }

    std::string label_of_state(const Beta& d, const std::vector<std::uint8_t>& bytes) const {
        const DimTable& table = dims_.at(d);
        return table.labels[table.class_of[state_index(bytes)]];
    }

    // Dimension vector of the subobject generated by one vector at the
    // framing vertex (closure under all arrow maps).
    Beta generated_dims(const Beta& d, const std::vector<FqMat>& mats,
                        const std::vector<std::uint8_t>& seed) const {
        const int V = spec_.vertices;
        std::vector<std::vector<std::vector<std::uint8_t>>> basis(V);
        std::vector<Echelon> ech(V);
        for (int v = 0; v < V; ++v) ech[v] = Echelon{FqMat(0, d[v]), {}};
        auto insert = [&](int v, const std::vector<std::uint8_t>& vec) {
            if (coords_in(field_, ech[v], vec)) return false;
            basis[v].push_back(vec);
            FqMat m(static_cast<int>(basis[v].size()), d[v]);
            for (std::size_t i = 0; i < basis[v].size(); ++i)
                for (int j = 0; j < static_cast<int>(d[v]); ++j) m.at(static_cast<int>(i), j) = basis[v][i][j];
            ech[v] = echelon_form(field_, m);
            return true;
        };
        bool nonzero_seed = std::any_of(seed.begin(), seed.end(), [](auto x) { return x != 0; });
        if (nonzero_seed) insert(spec_.framing_vertex, seed);
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t a = 0; a < spec_.arrows.size(); ++a) {
                const int s = spec_.arrows[a].first, t = spec_.arrows[a].second;
                for (std::size_t i = 0; i < basis[s].size(); ++i)
                    if (insert(t, mat_apply(field_, mats[a], basis[s][i]))) changed = true;
            }
        }
        Beta g(V);
        for (int v = 0; v < V; ++v) g[v] = static_cast<std::int32_t>(ech[v].pivots.size());
        return g;
    }

    void assemble_hn(const std::string& label) {
        ClassInfo& info = info_.at(label);
        if (!info.hn.empty() || info.deg.is_zero()) return;
        if (info.semistable) {
            info.hn = {{ctx_->slope(info.deg), label}};
            return;
        }
        const auto [sub, quot] = info.destab;
        if (!info_.at(sub).semistable)
            throw Error("maximal destabilizer is not semistable for " + label);
        assemble_hn(quot);
        const auto& rest = info_.at(quot).hn;
        const Slope first = ctx_->slope(info_.at(sub).deg);
        if (!(first > rest.front().first))
            throw Error("HN slopes are not strictly descending for " + label);
        info.hn.push_back({first, sub});
        info.hn.insert(info.hn.end(), rest.begin(), rest.end());
    }

    const ClassInfo& info_of(const std::string& label) const {
        auto it = info_.find(label);
        if (it == info_.end()) throw Error("unknown class label " + label);
        return it->second;
    }

    const DimTable& dim_table(const Degree& deg) const {
        ctx_->check_rank(deg);
        if (deg.n != 0) throw DegreeOutOfBounds("no classes off the n = 0 slice: " + deg.str());
        for (int v = 0; v < spec_.vertices; ++v)
            if (deg.beta[v] < 0 || deg.beta[v] > spec_.box[v])
                throw DegreeOutOfBounds("degree " + deg.str() + " outside the enumerated box");
        return dims_.at(deg.beta);
    }

    void require_framing() const {
        if (!has_framing()) throw NoFramingObject("model declares no framing vertex");
    }
    void require_torsion() const {
        if (!has_torsion_cut()) throw NoTorsionCut("kappa is positive: no torsion cut");
    }
    void require_duality() const {
        if (!has_duality()) throw NoDuality("model declares no duality");
    }

    QuiverSpec spec_;
    Fq field_;
    std::vector<int> arrow_dual_;
    std::vector<std::vector<Echelon>> subs_;  // all subspaces per dimension
    std::map<Beta, DimTable> dims_;
    std::map<std::string, ClassInfo> info_;
};

} // namespace

std::unique_ptr<Model> make_quiver_model(const QuiverSpec& spec, bool allow_large) {
    return std::make_unique<QuiverModel>(spec, allow_large);
}

} // namespace hallab
