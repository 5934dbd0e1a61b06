#pragma once

#include "opkit/atoms.hpp"
#include "opkit/matrix.hpp"

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace opkit {

// splitmix64: the published 64-bit mixing generator. Constants:
//   increment  0x9E3779B97F4A7C15
//   mixers     0xBF58476D1CE4E5B9, 0x94D049BB133111EB
//   shifts     30, 27, 31
// Portable and stateless apart from one word, so identical seeds give
// identical instances on every platform.
class Splitmix64 {
  public:
    explicit Splitmix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound); bound >= 1. The modulo bias is irrelevant for
    // the tiny bounds used here.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

    // In [lo, hi] inclusive.
    std::uint64_t range(std::uint64_t lo, std::uint64_t hi) {
        return lo + below(hi - lo + 1);
    }

    std::int64_t pick_signed(std::initializer_list<std::int64_t> values) {
        return *(values.begin() + static_cast<std::ptrdiff_t>(below(values.size())));
    }

    // Independent stream for trial i of a run seeded with s.
    static Splitmix64 stream(std::uint64_t seed, std::uint64_t trial) {
        Splitmix64 base(seed);
        const std::uint64_t a = base.next();
        Splitmix64 t(trial ^ 0xD6E8FEB86659FD93ULL);
        return Splitmix64(a ^ t.next());
    }

  private:
    std::uint64_t state_;
};

struct GenProfile {
    std::size_t max_dim = 8;
    std::size_t max_block = 4;
    unsigned invertible_weight = 1;
    unsigned nilpotent_weight = 2;
    std::uint64_t seed = 0;
};

// What the generator knows about an instance by construction. Nilpotent
// blocks within one instance share a single size: the invariant batteries
// assert identities (dis = v, the two-valued closed forms for alpha(T^n))
// that hold exactly on that class, while mixed block sizes are covered by
// direct unit tests of the identities that hold unconditionally.
struct GenRecord {
    std::size_t nilpotent_block_size = 0;  // 0 when there is no nilpotent part
    std::size_t nilpotent_block_count = 0;
    std::size_t invertible_dim = 0;
    std::size_t conjugation_steps = 0;

    bool invertible() const { return nilpotent_block_count == 0; }
    std::size_t expected_dis() const { return invertible() ? 0 : nilpotent_block_size; }
    std::size_t expected_jump() const { return nilpotent_block_count; }
    bool expected_nilpotent() const { return invertible_dim == 0 && !invertible(); }
};

struct GeneratedMatrix {
    RatMatrix matrix;
    GenRecord record;
};

namespace detail {

// Companion matrix of x^k + c_{k-1} x^{k-1} + ... + c_0 with c_0 != 0;
// invertible since det = +-c_0.
inline RatMatrix companion_block(Splitmix64& rng, std::size_t k) {
    RatMatrix m(k, k);
    for (std::size_t i = 0; i + 1 < k; ++i) m.at(i + 1, i) = 1;
    for (std::size_t i = 0; i < k; ++i) {
        const std::int64_t c =
            i == 0 ? rng.pick_signed({-2, -1, 1, 2}) : rng.pick_signed({-2, -1, 0, 1, 2});
        m.at(i, k - 1) = -Rat(c);
    }
    return m;
}

struct Unimodular {
    RatMatrix u;
    RatMatrix u_inv;
};

// Product of elementary row operations with multipliers in {-2..2} and
// row swaps; the inverse is assembled from the inverted factors, so both
// matrices are exact.
inline Unimodular random_unimodular(Splitmix64& rng, std::size_t n, std::size_t steps) {
    Unimodular out{RatMatrix::identity(n), RatMatrix::identity(n)};
    if (n < 2) return out;
    struct Op {
        bool swap;
        std::size_t i, j;
        std::int64_t mult;
    };
    std::vector<Op> ops;
    for (std::size_t s = 0; s < steps; ++s) {
        Op op{};
        op.i = rng.below(n);
        op.j = rng.below(n - 1);
        if (op.j >= op.i) ++op.j;
        op.swap = rng.below(4) == 0;
        op.mult = rng.pick_signed({-2, -1, 1, 2});
        ops.push_back(op);
    }
    const auto row_add = [](RatMatrix& m, std::size_t dst, std::size_t src, const Rat& c) {
        for (std::size_t col = 0; col < m.cols(); ++col)
            m.at(dst, col) += c * m.at(src, col);
    };
    const auto row_swap = [](RatMatrix& m, std::size_t a, std::size_t b) {
        for (std::size_t col = 0; col < m.cols(); ++col) std::swap(m.at(a, col), m.at(b, col));
    };
    for (const Op& op : ops) {
        if (op.swap)
            row_swap(out.u, op.i, op.j);
        else
            row_add(out.u, op.i, op.j, Rat(op.mult));
    }
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        if (it->swap)
            row_swap(out.u_inv, it->i, it->j);
        else
            row_add(out.u_inv, it->i, it->j, Rat(-it->mult));
    }
    return out;
}

} // namespace detail

inline GeneratedMatrix gen_matrix(const GenProfile& profile) {
    if (profile.max_dim == 0) throw std::invalid_argument("gen_matrix: max_dim must be >= 1");
    if (profile.invertible_weight == 0 && profile.nilpotent_weight == 0)
        throw std::invalid_argument("gen_matrix: both weights are zero");
    Splitmix64 rng(profile.seed);
    GenRecord rec;
    std::vector<RatMatrix> blocks;

    const std::size_t max_block =
        std::max<std::size_t>(1, std::min(profile.max_block, profile.max_dim));
    std::size_t budget = rng.range(1, profile.max_dim);
    rec.nilpotent_block_size = rng.range(1, std::min(max_block, budget));

    const unsigned total_weight = profile.invertible_weight + profile.nilpotent_weight;
    while (budget > 0) {
        const bool want_nilpotent = rng.below(total_weight) < profile.nilpotent_weight;
        if (want_nilpotent && budget >= rec.nilpotent_block_size) {
            blocks.push_back(RatMatrix::jordan_block(rec.nilpotent_block_size));
            rec.nilpotent_block_count += 1;
            budget -= rec.nilpotent_block_size;
        } else if (profile.invertible_weight == 0) {
            break; // remaining budget cannot hold another uniform block
        } else {
            const std::size_t k = rng.range(1, std::min(budget, max_block));
            blocks.push_back(detail::companion_block(rng, k));
            rec.invertible_dim += k;
            budget -= k;
        }
    }
    if (rec.nilpotent_block_count == 0) rec.nilpotent_block_size = 0;

    RatMatrix d = block_diag(blocks);
    rec.conjugation_steps = d.rows() < 2 ? 0 : rng.below(2 * d.rows() + 1);
    const detail::Unimodular u = detail::random_unimodular(rng, d.rows(), rec.conjugation_steps);
    return {u.u * d * u.u_inv, rec};
}

struct GenTreeRecord {
    std::size_t finite_dim = 0;
    std::size_t infinite_atoms = 0;
    bool finite_only() const { return infinite_atoms == 0; }
};

struct GeneratedTree {
    AtomTree tree;
    GenTreeRecord record;
};

// Random normalized tree over the atom inventory: at most four infinite
// atoms, finite leaves within the dimension budget.
inline GeneratedTree gen_atom_tree(const GenProfile& profile) {
    Splitmix64 rng(profile.seed);
    GenTreeRecord rec;
    std::vector<AtomTree> leaves;
    const std::size_t leaf_count = rng.range(1, 4);
    std::size_t budget = std::max<std::size_t>(1, profile.max_dim);
    for (std::size_t i = 0; i < leaf_count; ++i) {
        const bool allow_infinite = rec.infinite_atoms < 4;
        const bool allow_finite = budget >= 1;
        const std::uint64_t choice = rng.below(6);
        if (!allow_finite || (allow_infinite && choice < 4)) {
            switch (choice % 4) {
                case 0: leaves.push_back(AtomTree::forward_shift(rng.range(1, 3))); break;
                case 1: leaves.push_back(AtomTree::backward_shift(rng.range(1, 3))); break;
                case 2: leaves.push_back(AtomTree::zero_inf()); break;
                default: leaves.push_back(AtomTree::identity_inf()); break;
            }
            rec.infinite_atoms += 1;
        } else {
            GenProfile sub = profile;
            sub.max_dim = std::min<std::size_t>(budget, 4);
            sub.max_block = std::min<std::size_t>(sub.max_dim, 3);
            sub.seed = rng.next();
            const GeneratedMatrix gm = gen_matrix(sub);
            rec.finite_dim += gm.matrix.rows();
            budget -= std::min(budget, gm.matrix.rows());
            leaves.push_back(AtomTree::finite(gm.matrix));
        }
    }
    AtomTree t = leaves.size() == 1 ? std::move(leaves.front())
                                    : AtomTree::direct_sum(std::move(leaves));
    return {normalize(t), rec};
}

} // namespace opkit
