#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hallab/errors.hpp"
#include "hallab/fq.hpp"
#include "hallab/grading.hpp"
#include "hallab/rational.hpp"

namespace hallab {

// A finite abelian category over F_q presented through exact counting
// primitives. Iso-classes are named by canonical string labels: equal labels
// mean isomorphic objects, and per-degree enumeration order is deterministic.
//
// Convolution convention downstream is SUB-FIRST: filt(E, A, B) counts
// subobjects U of E with U isomorphic to A and E/U isomorphic to B, so the
// first Hall factor is always evaluated on the subobject.
class Model {
public:
    virtual ~Model() = default;

    const std::shared_ptr<const GradingContext>& context() const { return ctx_; }
    std::int64_t q() const { return q_; }
    // Semantic identity of the category (not of enumeration limits).
    virtual std::string fingerprint() const = 0;

    virtual std::vector<std::string> classes(const Degree& d) const = 0;
    virtual Degree degree_of(const std::string& label) const = 0;
    virtual std::string zero_label() const = 0;

    virtual BigInt aut(const std::string& e) const = 0;
    virtual BigInt hom(const std::string& a, const std::string& b) const = 0;

    // All filtration counts of E at once: (sub label, quot label) -> count.
    using Profile = std::map<std::pair<std::string, std::string>, BigInt>;
    virtual const Profile& filt_profile(const std::string& e) const = 0;
    BigInt filt(const std::string& e, const std::string& sub, const std::string& quot) const {
        if (degree_of(sub) + degree_of(quot) != degree_of(e))
            throw DegreeMismatch("filtration degrees do not add up: " + sub + " + " + quot +
                                 " vs " + e);
        const Profile& p = filt_profile(e);
        auto it = p.find({sub, quot});
        return it == p.end() ? BigInt(0) : it->second;
    }

    // Framing object P: |Hom(P,E)| and #{epimorphisms P onto E}.
    virtual bool has_framing() const = 0;
    virtual BigInt framed(const std::string& e) const = 0;
    virtual BigInt epi(const std::string& e) const = 0;

    Slope slope_of(const std::string& e) const { return ctx_->slope(degree_of(e)); }
    virtual bool is_semistable(const std::string& e) const = 0;
    // Harder-Narasimhan type: (slope, semistable factor) from the maximal
    // destabilizing subobject down, slopes strictly descending.
    virtual std::vector<std::pair<Slope, std::string>> hn(const std::string& e) const = 0;

    // Torsion pair with P = the slope-infinity classes (kappa pairing 0).
    virtual bool has_torsion_cut() const = 0;
    bool in_p(const Degree& d) const { return ctx_->kappa_pair(d.beta) == 0; }
    // Maximal subobject in P and its quotient (which has no P-subobject).
    virtual std::pair<std::string, std::string> torsion_decompose(const std::string& e) const = 0;
    // #{maps f : P -> E with E torsion-free and coker(f) torsion}.
    virtual BigInt stable_pair(const std::string& e) const = 0;

    // Exact contravariant involution, when the category has one.
    virtual bool has_duality() const = 0;
    virtual std::string dual(const std::string& e) const = 0;
    virtual Degree dual_degree(const Degree& d) const = 0;

    // Euler form <d,e> = dim Hom - dim Ext^1 on degrees.
    virtual std::int64_t euler(const Degree& d, const Degree& e) const = 0;
    virtual bool zero_euler_form() const = 0;

protected:
    std::shared_ptr<const GradingContext> ctx_;
    std::int64_t q_ = 0;
};

// ---- Partition utilities (shared by the nilpotent-module model and the
// ---- symbolic coefficient layer, where the same closed forms are reused
// ---- with the count variable left symbolic).

using Partition = std::vector<int>;  // weakly decreasing positive parts

std::string partition_label(const Partition& p);
Partition parse_partition(const std::string& label);
// All partitions of n with parts <= max_part, in descending lex order.
std::vector<Partition> partitions_of(int n, int max_part);
Partition conjugate_partition(const Partition& p);
int partition_weight(const Partition& p);

// |Aut(M_lambda)| = q^pow * prod over qk_minus_one entries k of (q^k - 1),
// for the module M_lambda = direct sum of F_q[t]/t^{lambda_i}.
struct AutShape {
    std::int64_t pow = 0;
    std::vector<int> qk_minus_one;
};
AutShape nilpotent_aut_shape(const Partition& p);
// dim Hom(M_lambda, M_mu) = sum_{i,j} min(lambda_i, mu_j).
std::int64_t nilpotent_hom_exponent(const Partition& a, const Partition& b);

// ---- Model factories.

std::unique_ptr<Model> make_jordan_model(std::int64_t q, int bound, std::int64_t max_n,
                                         bool allow_large = false);

struct QuiverSpec {
    std::int64_t q = 2;
    int vertices = 0;
    std::vector<std::pair<int, int>> arrows;  // 0-indexed (source, target)
    std::vector<std::int32_t> box;            // per-vertex dimension bound
    std::vector<std::int64_t> theta;
    std::vector<std::int64_t> kappa;          // entries >= 0
    int framing_vertex = -1;                  // -1 = no framing object
    std::vector<int> duality;                 // 0-indexed involution; empty = none
};

std::unique_ptr<Model> make_quiver_model(const QuiverSpec& spec, bool allow_large = false);

// Parse a JSON model description:
//   {"type":"jordan","q":2,"bound":4}
//   {"type":"quiver","q":2,"vertices":2,"arrows":[[1,2],[1,2]],
//    "framing_vertex":1,"theta":[0,1],"kappa":[1,0],"box":[2,2],
//    "duality":[2,1]}
// JSON vertex numbering is 1-based. max_n bounds the enumerated column depth
// of one-column models (ignored by box-bounded quiver models).
std::unique_ptr<Model> load_model(const std::string& json_text, std::int64_t max_n,
                                  bool allow_large = false);

} // namespace hallab
