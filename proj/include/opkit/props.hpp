#pragma once

#include "opkit/gen.hpp"
#include "opkit/io.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace opkit {

// One randomized check, run once per trial. Returns an empty string on
// success and a short description of the first violation otherwise.
struct Property {
    std::string name;
    std::function<std::string(std::uint64_t seed, std::uint64_t trial, std::size_t max_dim)> run;
};

namespace props_detail {

inline GenProfile matrix_profile(std::uint64_t seed, std::uint64_t trial, std::size_t max_dim) {
    GenProfile p;
    p.max_dim = max_dim;
    p.max_block = std::min<std::size_t>(4, max_dim);
    p.invertible_weight = 1;
    p.nilpotent_weight = 2;
    p.seed = Splitmix64::stream(seed, trial).next();
    return p;
}

inline GenProfile tree_profile(std::uint64_t seed, std::uint64_t trial, std::size_t max_dim) {
    GenProfile p = matrix_profile(seed, trial ^ 0x5BF0363546A4CB01ULL, max_dim);
    return p;
}

// Fraction-free (Bareiss) rank of an integer matrix: the independent
// elimination route used to cross-check the rational RREF.
inline std::size_t bareiss_rank(std::vector<std::vector<Int>> a) {
    if (a.empty()) return 0;
    const std::size_t rows = a.size(), cols = a[0].size();
    Int prev = 1;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t sel = rank;
        while (sel < rows && a[sel][col] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(a[sel], a[rank]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j)
                a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
            a[i][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return rank;
}

inline std::vector<std::vector<Int>> clear_denominators(const RatMatrix& m) {
    std::vector<std::vector<Int>> out(m.rows(), std::vector<Int>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Int lcm = 1;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Int& den = rat_den(m.at(i, j));
            lcm = lcm / boost::multiprecision::gcd(lcm, den) * den;
        }
        for (std::size_t j = 0; j < m.cols(); ++j)
            out[i][j] = rat_num(m.at(i, j)) * (lcm / rat_den(m.at(i, j)));
    }
    return out;
}

} // namespace props_detail

inline std::vector<Property> matrix_properties() {
    using namespace props_detail;
    std::vector<Property> props;

    props.push_back({"alpha-recurrence", [](std::uint64_t seed, std::uint64_t trial,
                                            std::size_t max_dim) -> std::string {
        const auto gm = gen_matrix(matrix_profile(seed, trial, max_dim));
        const IterLattice lat = iterate(gm.matrix);
        const EcSeq alpha = alpha_seq(lat);
        const auto ks = k_seq(alpha);
        for (std::size_t n = 0; n <= lat.stab; ++n) {
            const ExtNat k_n = n < ks.size() ? ks[n] : ExtNat(0);
            if (alpha.at(n) != alpha.at(n + 1) + k_n)
                return "alpha_n != alpha_{n+1} + k_n at n=" + std::to_string(n);
            // Second route: alpha_n as a kernel-dimension difference.
            const std::size_t diff = lat.kernel_at(n + 1).dim() - lat.kernel_at(n).dim();
            if (alpha.at(n) != ExtNat(diff))
                return "alpha route disagreement at n=" + std::to_string(n);
        }
        return "";
    }});

    props.push_back({"power-kernel-sums", [](std::uint64_t seed, std::uint64_t trial,
                                             std::size_t max_dim) -> std::string {
        const auto gm = gen_matrix(matrix_profile(seed, trial, max_dim));
        const IterLattice lat = iterate(gm.matrix);
        const EcSeq alpha = alpha_seq(lat);
        const EcSeq beta = beta_seq(lat);
        for (std::size_t m = 1; m <= lat.stab + 2; ++m) {
            ExtNat alpha_sum(0), beta_sum(0);
            for (std::size_t k = 0; k < m; ++k) {
                alpha_sum = alpha_sum + alpha.at(k);
                beta_sum = beta_sum + beta.at(k);
            }
            const RatMatrix tm = lat.power_at(m);
            if (ExtNat(kernel(tm).dim()) != alpha_sum)
                return "dim N(T^m) != partial alpha sum at m=" + std::to_string(m);
            if (ExtNat(codim_image(tm)) != beta_sum)
                return "codim R(T^m) != partial beta sum at m=" + std::to_string(m);
        }
        // Kernel-range overlap route: dim(N(T^s) cap R(T^s)) as a window sum.
        for (std::size_t s = 0; s <= lat.stab; ++s) {
            ExtNat window(0);
            for (std::size_t k = s; k < 2 * s; ++k) window = window + alpha.at(k);
            const std::size_t direct =
                subspace_intersect(lat.kernel_at(s), lat.range_at(s)).dim();
            if (ExtNat(direct) != window)
                return "overlap window sum fails at s=" + std::to_string(s);
        }
        return "";
    }});

    props.push_back({"snm-beta-sums", [](std::uint64_t seed, std::uint64_t trial,
                                         std::size_t max_dim) -> std::string {
        const auto gm = gen_matrix(matrix_profile(seed, trial, max_dim));
        const IterLattice lat = iterate(gm.matrix);
        const EcSeq beta = beta_seq(lat);
        for (std::size_t m = 1; m <= 3; ++m) {
            for (std::size_t n = 0; n + m <= lat.stab + 2; ++n) {
                ExtNat expected(0);
                for (std::size_t i = n; i < n + m; ++i) expected = expected + beta.at(i);
                const std::size_t got = codim_image(snm_operator(gm.matrix, n, m));
                if (ExtNat(got) != expected)
                    return "beta(S_{n,m}) mismatch at n=" + std::to_string(n) +
                           ", m=" + std::to_string(m);
            }
        }
        return "";
    }});

    props.push_back({"transpose-duality", [](std::uint64_t seed, std::uint64_t trial,
                                             std::size_t max_dim) -> std::string {
        const auto gm = gen_matrix(matrix_profile(seed, trial, max_dim));
        const InvariantReport rep = analyze_matrix(gm.matrix);
        const InvariantReport drep = analyze_matrix(dual(gm.matrix));
        if (rep.dis != drep.dis) return "dis(T) != dis(T^t)";
        if (drep.alpha != rep.beta) return "alpha(T^t) != beta(T)";
        if (drep.beta != rep.alpha) return "beta(T^t) != alpha(T)";
        return "";
    }});

    props.push_back({"power-dim-closed-forms", [](std::uint64_t seed, std::uint64_t trial,
                                                  std::size_t max_dim) -> std::string {
        const auto gm = gen_matrix(matrix_profile(seed, trial, max_dim));
        const InvariantReport rep = analyze_matrix(gm.matrix);
        const IterLattice lat = iterate(gm.matrix);
        for (std::size_t n = 1; n <= lat.stab + 2; ++n) {
            const PowerDims pd = predicted_power_dims(rep, n);
            const RatMatrix tn = lat.power_at(n);
            if (pd.alpha_n != ExtNat(kernel(tn).dim()))
                return "alpha(T^n) closed form fails at n=" + std::to_string(n);
            if (pd.beta_n != ExtNat(codim_image(tn)))
                return "beta(T^n) closed form fails at n=" + std::to_string(n);
        }
        return "";
    }});

    props.push_back({"dis-equals-v", [](std::uint64_t seed, std::uint64_t trial,
                                        std::size_t max_dim) -> std::string {
        const auto gm = gen_matrix(matrix_profile(seed, trial, max_dim));
        const InvariantReport rep = analyze_matrix(gm.matrix);
        if (rep.flags.semi_regular) {
            if (!rep.v.is_infinite()) return "semi-regular operator with finite v";
            return "";
        }
        if (rep.dis != rep.v) return "dis != v on a non-semi-regular instance";
        // Containment form of the same statement.
        const IterLattice lat = iterate(gm.matrix);
        if (lat.range_at(rep.dis.finite_value()).contains(lat.kernel_at(1)))
            return "N(T) lies in R(T^dis) although T is not semi-regular";
        if (rep.flags.nilpotent) {
            const std::size_t deg = rep.dis.finite_value();
            if (!matrix_power(gm.matrix, deg).is_zero() ||
                (deg > 0 && matrix_power(gm.matrix, deg - 1).is_zero()))
                return "dis differs from the nilpotency degree";
        }
        return "";
    }});

    props.push_back({"kato-equals-fitting", [](std::uint64_t seed, std::uint64_t trial,
                                               std::size_t max_dim) -> std::string {
        const auto gm = gen_matrix(matrix_profile(seed, trial, max_dim));
        const KatoCertificate cert = kato_decompose(gm.matrix);
        const auto [m, n] = fitting_oracle(gm.matrix);
        if (cert.core != m) return "core differs from the invertible Fitting part";
        if (cert.nilpotent != n) return "nilpotent part differs from the Fitting part";
        return "";
    }});

    props.push_back({"kato-side-conditions", [](std::uint64_t seed, std::uint64_t trial,
                                                std::size_t max_dim) -> std::string {
        const auto gm = gen_matrix(matrix_profile(seed, trial, max_dim));
        const KatoCertificate cert = kato_decompose(gm.matrix);
        const VerifyReport rep = verify_certificate(gm.matrix, cert);
        for (const CheckResult& c : rep.checks)
            if (!c.pass) return "certificate check '" + c.name + "' failed";
        // Per-iteration degrees: non-increasing and summing to dim N.
        std::size_t total = 0, prev = cert.d;
        for (const KatoIterationRecord& rec : cert.trace) {
            if (rec.degree > prev) return "peeled degrees are not non-increasing";
            prev = rec.degree;
            total += rec.degree;
        }
        if (!cert.trace.empty() && cert.trace.front().degree != cert.d)
            return "first peeled degree differs from dis";
        if (total != cert.nilpotent.dim()) return "peeled degrees do not sum to dim N";
        return "";
    }});

    props.push_back({"construction-record", [](std::uint64_t seed, std::uint64_t trial,
                                               std::size_t max_dim) -> std::string {
        const auto gm = gen_matrix(matrix_profile(seed, trial, max_dim));
        const InvariantReport rep = analyze_matrix(gm.matrix);
        if (rep.dis != ExtNat(gm.record.expected_dis()))
            return "dis differs from the planted block size";
        if (rep.jump.value() != ExtNat(gm.record.expected_jump()))
            return "jump differs from the planted block count";
        if (rep.flags.nilpotent != gm.record.expected_nilpotent())
            return "nilpotency flag differs from the construction";
        return "";
    }});

    props.push_back({"subspace-lattice", [](std::uint64_t seed, std::uint64_t trial,
                                            std::size_t max_dim) -> std::string {
        Splitmix64 rng = Splitmix64::stream(seed ^ 0xA24BAED4963EE407ULL, trial);
        const std::size_t n = 2 + rng.below(std::max<std::size_t>(1, max_dim - 1));
        const auto random_subspace = [&]() {
            const std::size_t count = 1 + rng.below(n);
            std::vector<RatVec> rows;
            for (std::size_t i = 0; i < count; ++i) {
                RatVec v(n);
                for (std::size_t j = 0; j < n; ++j)
                    v[j] = Rat(rng.pick_signed({-3, -2, -1, 0, 0, 1, 2, 3}));
                rows.push_back(std::move(v));
            }
            return RatSubspace::span(rows, n);
        };
        const RatSubspace a = random_subspace();
        const RatSubspace b = random_subspace();
        const RatSubspace s = subspace_sum(a, b);
        const RatSubspace i = subspace_intersect(a, b);
        if (s.dim() + i.dim() != a.dim() + b.dim())
            return "dim(a+b) + dim(a cap b) != dim a + dim b";
        if (!s.contains(a) || !s.contains(b)) return "sum does not contain the terms";
        if (!a.contains(i) || !b.contains(i)) return "intersection not contained in terms";
        // Canonicalization is idempotent.
        if (RatSubspace::span(a.basis(), n) != a) return "canonical form is not idempotent";
        // rank from rational RREF matches the fraction-free elimination.
        const auto gm = gen_matrix(matrix_profile(seed, trial, max_dim));
        const std::size_t r1 = rref(gm.matrix).second;
        const std::size_t r2 = props_detail::bareiss_rank(
            props_detail::clear_denominators(gm.matrix));
        if (r1 != r2) return "rational rref rank differs from fraction-free rank";
        const std::size_t dim = gm.matrix.cols();
        if (kernel(gm.matrix).dim() + image(gm.matrix).dim() != dim)
            return "rank-nullity fails";
        return "";
    }});

    props.push_back({"gen-determinism", [](std::uint64_t seed, std::uint64_t trial,
                                           std::size_t max_dim) -> std::string {
        const GenProfile p = matrix_profile(seed, trial, max_dim);
        if (gen_matrix(p).matrix != gen_matrix(p).matrix) return "matrix generation not stable";
        const GenProfile tp = tree_profile(seed, trial, max_dim);
        if (!(gen_atom_tree(tp).tree == gen_atom_tree(tp).tree))
            return "tree generation not stable";
        return "";
    }});

    return props;
}

inline std::vector<Property> tree_properties() {
    using namespace props_detail;
    std::vector<Property> props;

    props.push_back({"index-power-law", [](std::uint64_t seed, std::uint64_t trial,
                                           std::size_t max_dim) -> std::string {
        const auto gt = gen_atom_tree(tree_profile(seed, trial, max_dim));
        const InvariantReport rep = symbolic_invariants(gt.tree);
        if (!rep.index) return "index undefined on a generated tree";
        for (std::uint64_t n = 1; n <= 4; ++n) {
            const AtomTree powered = normalize(AtomTree::power(gt.tree, n));
            const InvariantReport prep = symbolic_invariants(powered);
            if (!prep.index) return "index undefined on a generated power";
            if (*prep.index != static_cast<std::int64_t>(n) * *rep.index)
                return "index(T^n) != n index(T) at n=" + std::to_string(n);
        }
        return "";
    }});

    props.push_back({"fredholm-flag-equivalences", [](std::uint64_t seed, std::uint64_t trial,
                                                      std::size_t max_dim) -> std::string {
        const auto gt = gen_atom_tree(tree_profile(seed, trial, max_dim));
        const ClassificationFlags f = symbolic_invariants(gt.tree).flags;
        const bool via_upper = f.upper_semi_fredholm && f.lower_semi_b_fredholm;
        const bool via_lower = f.lower_semi_fredholm && f.upper_semi_b_fredholm;
        if (f.fredholm != via_upper || f.fredholm != via_lower)
            return "Fredholm flag fails the semi-class equivalences";
        if (f.fredholm && !(f.upper_semi_fredholm && f.lower_semi_fredholm))
            return "Fredholm without both semi-Fredholm sides";
        if (f.b_fredholm && !(f.upper_semi_b_fredholm && f.lower_semi_b_fredholm))
            return "B-Fredholm without both semi-B-Fredholm sides";
        return "";
    }});

    props.push_back({"jump-zero-iff-stable", [](std::uint64_t seed, std::uint64_t trial,
                                                std::size_t max_dim) -> std::string {
        const auto gt = gen_atom_tree(tree_profile(seed, trial, max_dim));
        const InvariantReport rep = symbolic_invariants(gt.tree);
        if (!rep.jump) return "jump undefined on a generated tree";
        if ((*rep.jump == ExtNat(0)) != (rep.dis == rep.m_t))
            return "jump = 0 does not match dis = m_T";
        return "";
    }});

    props.push_back({"essential-degree-collapse", [](std::uint64_t seed, std::uint64_t trial,
                                                     std::size_t max_dim) -> std::string {
        const auto gt = gen_atom_tree(tree_profile(seed, trial, max_dim));
        const InvariantReport rep = symbolic_invariants(gt.tree);
        if (rep.a_e.is_finite() && rep.d_e.is_finite()) {
            if (rep.m_t != rep.a_e || rep.m_t != rep.d_e)
                return "m_T, a_e, d_e disagree although both are finite";
        }
        return "";
    }});

    props.push_back({"symbolic-kato-index", [](std::uint64_t seed, std::uint64_t trial,
                                               std::size_t max_dim) -> std::string {
        const auto gt = gen_atom_tree(tree_profile(seed, trial, max_dim));
        const InvariantReport rep = symbolic_invariants(gt.tree);
        const SymbolicKatoReport kato = symbolic_kato(gt.tree);
        if (kato.index_total != kato.index_core) return "index not preserved by the core";
        if (rep.index && kato.index_total != *rep.index)
            return "structural index differs from the report index";
        if (rep.dis.is_finite() && kato.d != rep.dis.finite_value())
            return "structural degree differs from dis";
        return "";
    }});

    props.push_back({"finite-tree-consistency", [](std::uint64_t seed, std::uint64_t trial,
                                                   std::size_t max_dim) -> std::string {
        const auto gt = gen_atom_tree(tree_profile(seed, trial, max_dim));
        if (!gt.record.finite_only()) return ""; // vacuous for this instance
        const auto [alpha, beta] = symbolic_sequences(gt.tree);
        const RatMatrix assembled = assemble_finite(gt.tree);
        const IterLattice lat = iterate(assembled);
        if (alpha != alpha_seq(lat)) return "symbolic alpha differs from the block matrix";
        if (beta != beta_seq(lat)) return "symbolic beta differs from the block matrix";
        const InvariantReport srep = symbolic_invariants(gt.tree);
        const InvariantReport frep = analyze_matrix(assembled);
        if (srep.dis != frep.dis || srep.v != frep.v) return "dis or v differs";
        if (srep.jump.value() != frep.jump.value()) return "jump differs";
        return "";
    }});

    return props;
}

inline std::vector<Property> all_properties() {
    std::vector<Property> all = matrix_properties();
    const std::vector<Property> trees = tree_properties();
    all.insert(all.end(), trees.begin(), trees.end());
    return all;
}

struct PropRunSummary {
    struct Line {
        std::string name;
        std::uint64_t passed = 0;
        std::uint64_t ran = 0;
        std::string first_failure; // reproduction line, empty if none
    };
    std::vector<Line> lines;
    bool all_pass = true;
};

inline PropRunSummary run_properties(const std::vector<Property>& props, std::uint64_t seed,
                                     std::uint64_t trials, std::size_t max_dim) {
    PropRunSummary summary;
    for (const Property& p : props) {
        PropRunSummary::Line line;
        line.name = p.name;
        for (std::uint64_t t = 0; t < trials; ++t) {
            line.ran += 1;
            const std::string failure = p.run(seed, t, max_dim);
            if (failure.empty()) {
                line.passed += 1;
            } else if (line.first_failure.empty()) {
                std::ostringstream os;
                os << p.name << " failed: " << failure << " (reproduce with --seed " << seed
                   << ", trial " << t << ", --max-dim " << max_dim << ")";
                line.first_failure = os.str();
            }
        }
        summary.all_pass = summary.all_pass && line.passed == line.ran;
        summary.lines.push_back(std::move(line));
    }
    return summary;
}

} // namespace opkit
