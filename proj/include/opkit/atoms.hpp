#pragma once

#include "opkit/invariants.hpp"
#include "opkit/kato.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace opkit {

// Symbolic operator built from a small atom inventory, closed under direct
// sums and powers. Shift atoms act on one-sided sequence spaces; ZeroInf
// and IdentityInf act on an infinite-dimensional space.
//
// Per-atom dimension sequences (constant unless noted):
//   ForwardShift(k):  alpha = 0,        beta = k
//   BackwardShift(k): alpha = k,        beta = 0
//   ZeroInf:          alpha = (inf, 0), beta = (inf, 0)
//   IdentityInf:      alpha = 0,        beta = 0
// Each row is a one-line kernel/range computation: S^k has trivial kernel
// and range of codimension k, its adjoint the mirror image; the zero
// operator has everything in its kernel and zero range, so its restriction
// to R(Z) = {0} is trivial from step one onward.
struct AtomTree {
    enum class Kind {
        finite,
        forward_shift,
        backward_shift,
        zero_inf,
        identity_inf,
        direct_sum,
        power,
    };

    Kind kind = Kind::finite;
    RatMatrix matrix;            // finite leaves
    std::uint64_t param = 0;     // shift power, or power-node exponent
    std::vector<AtomTree> children;

    static AtomTree finite(RatMatrix m) {
        if (!m.square()) throw std::invalid_argument("finite atom needs a square matrix");
        AtomTree t;
        t.kind = Kind::finite;
        t.matrix = std::move(m);
        return t;
    }
    static AtomTree forward_shift(std::uint64_t k) {
        if (k == 0) throw std::invalid_argument("shift power must be at least 1");
        AtomTree t;
        t.kind = Kind::forward_shift;
        t.param = k;
        return t;
    }
    static AtomTree backward_shift(std::uint64_t k) {
        if (k == 0) throw std::invalid_argument("shift power must be at least 1");
        AtomTree t;
        t.kind = Kind::backward_shift;
        t.param = k;
        return t;
    }
    static AtomTree zero_inf() {
        AtomTree t;
        t.kind = Kind::zero_inf;
        return t;
    }
    static AtomTree identity_inf() {
        AtomTree t;
        t.kind = Kind::identity_inf;
        return t;
    }
    static AtomTree direct_sum(std::vector<AtomTree> summands) {
        if (summands.empty()) throw std::invalid_argument("direct sum needs a summand");
        AtomTree t;
        t.kind = Kind::direct_sum;
        t.children = std::move(summands);
        return t;
    }
    static AtomTree power(AtomTree base, std::uint64_t exponent) {
        if (exponent == 0) throw std::invalid_argument("power exponent must be at least 1");
        AtomTree t;
        t.kind = Kind::power;
        t.param = exponent;
        t.children.push_back(std::move(base));
        return t;
    }

    bool is_leaf() const { return kind != Kind::direct_sum && kind != Kind::power; }

    friend bool operator==(const AtomTree& a, const AtomTree& b) {
        return a.kind == b.kind && a.param == b.param && a.matrix == b.matrix &&
               a.children == b.children;
    }
    friend bool operator!=(const AtomTree& a, const AtomTree& b) { return !(a == b); }
};

// Normal form: powers pushed to leaves and folded, direct sums flattened,
// singleton sums collapsed. (A + B)^k = A^k + B^k for direct sums.
inline AtomTree normalize(const AtomTree& t, std::uint64_t outer_power = 1) {
    switch (t.kind) {
        case AtomTree::Kind::finite:
            return AtomTree::finite(matrix_power(t.matrix, outer_power));
        case AtomTree::Kind::forward_shift:
            return AtomTree::forward_shift(t.param * outer_power);
        case AtomTree::Kind::backward_shift:
            return AtomTree::backward_shift(t.param * outer_power);
        case AtomTree::Kind::zero_inf:
            return AtomTree::zero_inf(); // Z^k = Z
        case AtomTree::Kind::identity_inf:
            return AtomTree::identity_inf();
        case AtomTree::Kind::power: {
            if (t.param == 0) throw std::invalid_argument("power exponent must be at least 1");
            return normalize(t.children.front(), outer_power * t.param);
        }
        case AtomTree::Kind::direct_sum: {
            std::vector<AtomTree> flat;
            for (const AtomTree& child : t.children) {
                AtomTree norm = normalize(child, outer_power);
                if (norm.kind == AtomTree::Kind::direct_sum)
                    for (AtomTree& gc : norm.children) flat.push_back(std::move(gc));
                else
                    flat.push_back(std::move(norm));
            }
            if (flat.size() == 1) return flat.front();
            return AtomTree::direct_sum(std::move(flat));
        }
    }
    throw std::logic_error("unreachable atom kind");
}

inline bool is_normalized(const AtomTree& t) {
    if (t.kind == AtomTree::Kind::power) return false;
    if (t.kind == AtomTree::Kind::direct_sum) {
        if (t.children.size() < 2) return false;
        for (const AtomTree& c : t.children)
            if (!c.is_leaf()) return false;
    }
    return true;
}

namespace detail {

struct LeafData {
    EcSeq alpha;
    EcSeq beta;
    ExtNat v;
    bool nilpotent = false;
    ExtNat finite_dim = ExtNat(0); // infinity when the leaf space is infinite
};

inline LeafData leaf_data(const AtomTree& leaf) {
    LeafData d;
    switch (leaf.kind) {
        case AtomTree::Kind::finite: {
            const IterLattice lat = iterate(leaf.matrix);
            d.alpha = alpha_seq(lat);
            d.beta = beta_seq(lat);
            d.v = v_degree(lat);
            d.nilpotent = lat.kernels.back().dim() == lat.ambient();
            d.finite_dim = ExtNat(lat.ambient());
            return d;
        }
        case AtomTree::Kind::forward_shift:
            d.alpha = EcSeq::constant(ExtNat(0));
            d.beta = EcSeq::constant(ExtNat(leaf.param));
            d.v = ExtNat::infinity();
            d.finite_dim = ExtNat::infinity();
            return d;
        case AtomTree::Kind::backward_shift:
            d.alpha = EcSeq::constant(ExtNat(leaf.param));
            d.beta = EcSeq::constant(ExtNat(0));
            d.v = ExtNat::infinity();
            d.finite_dim = ExtNat::infinity();
            return d;
        case AtomTree::Kind::zero_inf:
            d.alpha = EcSeq({ExtNat::infinity(), ExtNat(0)});
            d.beta = EcSeq({ExtNat::infinity(), ExtNat(0)});
            d.v = ExtNat(1);
            d.nilpotent = true;
            d.finite_dim = ExtNat::infinity();
            return d;
        case AtomTree::Kind::identity_inf:
            d.alpha = EcSeq::constant(ExtNat(0));
            d.beta = EcSeq::constant(ExtNat(0));
            d.v = ExtNat::infinity();
            d.finite_dim = ExtNat::infinity();
            return d;
        default:
            throw std::invalid_argument("leaf_data: not a leaf");
    }
}

inline std::vector<const AtomTree*> leaves_of(const AtomTree& t) {
    if (t.is_leaf()) return {&t};
    std::vector<const AtomTree*> out;
    for (const AtomTree& c : t.children) out.push_back(&c);
    return out;
}

} // namespace detail

// Leafwise sequences summed pointwise with infinity absorbing.
inline std::pair<EcSeq, EcSeq> symbolic_sequences(const AtomTree& t) {
    if (!is_normalized(t)) throw std::invalid_argument("symbolic_sequences: normalize first");
    EcSeq alpha = EcSeq::constant(ExtNat(0));
    EcSeq beta = EcSeq::constant(ExtNat(0));
    for (const AtomTree* leaf : detail::leaves_of(t)) {
        const detail::LeafData d = detail::leaf_data(*leaf);
        alpha = EcSeq::pointwise_sum(alpha, d.alpha);
        beta = EcSeq::pointwise_sum(beta, d.beta);
    }
    return {alpha, beta};
}

// Full symbolic report. The degree of semi-regularity of a direct sum is
// the minimum over the summands, since kernels and ranges split leafwise.
inline InvariantReport symbolic_invariants(const AtomTree& t) {
    if (!is_normalized(t)) throw std::invalid_argument("symbolic_invariants: normalize first");
    auto [alpha, beta] = symbolic_sequences(t);
    InvariantReport r;
    r.kind = ReportKind::symbolic;
    r.alpha = alpha;
    r.beta = beta;
    r.k = k_seq(alpha);
    r.dis = dis_of(alpha);
    ExtNat v = ExtNat::infinity();
    bool all_nilpotent = true;
    ExtNat total_dim = ExtNat(0);
    for (const AtomTree* leaf : detail::leaves_of(t)) {
        const detail::LeafData d = detail::leaf_data(*leaf);
        if (d.v < v) v = d.v;
        all_nilpotent = all_nilpotent && d.nilpotent;
        total_dim = total_dim + d.finite_dim;
    }
    r.v = v;
    r.dim = total_dim.is_finite() ? total_dim.finite_value() : 0;
    const EssentialDegrees ess = essential_degrees(alpha, beta);
    r.m_t = ess.m_t;
    r.a_e = ess.a_e;
    r.d_e = ess.d_e;
    const AscentDescent ad = ascent_descent(alpha, beta);
    r.ascent = ad.ascent;
    r.descent = ad.descent;
    if (is_semi_b_fredholm(alpha, beta)) {
        r.jump = jump_of(alpha, beta, r.m_t, r.dis);
        r.index = index_of(alpha, beta, r.m_t);
    }
    r.flags = classify(alpha, beta, r.dis, ess, ad, all_nilpotent);
    return r;
}

// Where each leaf ends up in a structural decomposition of the tree.
enum class KatoPartKind {
    core,            // leaf stays wholly in M
    nilpotent,       // leaf lands wholly in N
    split,           // finite leaf split by the matrix-level construction
};

struct SymbolicKatoPart {
    std::size_t leaf_index = 0;
    KatoPartKind assignment = KatoPartKind::core;
    ExtNat nilpotent_dim = ExtNat(0);
    std::size_t degree = 0;                 // nilpotency degree contributed
    std::optional<KatoCertificate> finite_cert; // for split finite leaves
};

// Structural decomposition report: M collects the semi-regular material,
// N the nilpotent material. A ZeroInf summand makes dim N infinite; the
// finite-dimensional-N guarantee of the matrix model does not cover that
// case and the report says so.
struct SymbolicKatoReport {
    std::vector<SymbolicKatoPart> parts;
    std::size_t d = 0;        // nilpotency degree of the N side
    ExtNat nilpotent_dim = ExtNat(0);
    bool dim_n_finite = true; // false exactly when a ZeroInf atom landed in N
    ExtInt index_total = ExtInt(0);
    ExtInt index_core = ExtInt(0);
};

inline SymbolicKatoReport symbolic_kato(const AtomTree& t) {
    if (!is_normalized(t)) throw std::invalid_argument("symbolic_kato: normalize first");
    const InvariantReport whole = symbolic_invariants(t);
    if (!whole.flags.semi_b_fredholm)
        throw std::domain_error("symbolic_kato needs a semi-B-Fredholm operator");
    SymbolicKatoReport rep;
    rep.index_total = whole.index.value();
    std::int64_t core_index = 0;
    const auto leaves = detail::leaves_of(t);
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        SymbolicKatoPart part;
        part.leaf_index = i;
        switch (leaves[i]->kind) {
            case AtomTree::Kind::finite: {
                KatoCertificate cert = kato_decompose(leaves[i]->matrix);
                part.assignment = KatoPartKind::split;
                part.nilpotent_dim = ExtNat(cert.nilpotent.dim());
                part.degree = cert.d;
                part.finite_cert = std::move(cert);
                break;
            }
            case AtomTree::Kind::zero_inf:
                part.assignment = KatoPartKind::nilpotent;
                part.nilpotent_dim = ExtNat::infinity();
                part.degree = 1;
                rep.dim_n_finite = false;
                break;
            case AtomTree::Kind::forward_shift:
                part.assignment = KatoPartKind::core;
                core_index -= static_cast<std::int64_t>(leaves[i]->param);
                break;
            case AtomTree::Kind::backward_shift:
                part.assignment = KatoPartKind::core;
                core_index += static_cast<std::int64_t>(leaves[i]->param);
                break;
            case AtomTree::Kind::identity_inf:
                part.assignment = KatoPartKind::core;
                break;
            default:
                throw std::logic_error("unexpected non-leaf in normalized tree");
        }
        if (part.degree > rep.d) rep.d = part.degree;
        rep.nilpotent_dim = rep.nilpotent_dim + part.nilpotent_dim;
        rep.parts.push_back(std::move(part));
    }
    // Finite cores are invertible, so only shifts contribute to the index
    // of the core side.
    rep.index_core = ExtInt(core_index);
    return rep;
}

// Block-diagonal assembly of a tree with only finite leaves.
inline RatMatrix assemble_finite(const AtomTree& t) {
    if (!is_normalized(t)) throw std::invalid_argument("assemble_finite: normalize first");
    std::vector<RatMatrix> blocks;
    for (const AtomTree* leaf : detail::leaves_of(t)) {
        if (leaf->kind != AtomTree::Kind::finite)
            throw std::invalid_argument("assemble_finite: tree has an infinite atom");
        blocks.push_back(leaf->matrix);
    }
    return block_diag(blocks);
}

} // namespace opkit
