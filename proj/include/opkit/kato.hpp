#pragma once

#include "opkit/invariants.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace opkit {

// The chain y, Ty, ..., T^{d-1}y grown from a seed y in
// N(T^d) \ (N(T^{d-1}) + R(T)). Its vectors are linearly independent
// modulo R(T^d).
struct Cascade {
    RatVec seed;
    std::vector<RatVec> vectors; // y, Ty, ..., T^{d-1} y
    std::size_t degree = 0;
};

// The dual chain f, fT, ..., fT^{d-1} paired with a cascade by
// (f T^i)(T^{d-j-1} y) = [i = j], with f vanishing on R(T^d).
struct AdjointCascade {
    RatVec functional;
    std::vector<RatVec> covectors; // f, fT, ..., fT^{d-1}
};

struct KatoIterationRecord {
    RatVec seed;           // in ambient coordinates
    RatVec functional;     // in the coordinates of that iteration's core
    std::size_t projection_rank = 0;
    std::size_t degree = 0; // d_i = dis of the operator peeled at this step
};

// Claimed decomposition X = M + N with T-invariant parts, T nilpotent of
// degree d on N and with stable-iteration degree zero on M. Everything a
// verifier needs is re-derivable from T and the two bases; the trace is
// informational only.
struct KatoCertificate {
    std::size_t ambient_dim = 0;
    std::size_t d = 0; // nilpotency degree of T on N
    std::size_t k = 0; // number of peeling iterations
    RatSubspace core;      // M
    RatSubspace nilpotent; // N
    std::vector<KatoIterationRecord> trace;
};

// Deterministic seed choice: the first RREF-pivot-order extension vector of
// (N(T^{d-1}) + R(T)) cap N(T^d) inside N(T^d).
inline RatVec pick_cascade_seed(const RatMatrix& t, std::size_t d) {
    if (d == 0) throw std::invalid_argument("cascade seed needs a positive degree");
    const RatSubspace w = kernel(matrix_power(t, d));
    const RatSubspace blocked =
        subspace_sum(kernel(matrix_power(t, d - 1)), image(t));
    const RatSubspace u = subspace_intersect(blocked, w);
    const std::vector<RatVec> ext = extend_basis(u, w);
    if (ext.empty())
        throw std::logic_error("cascade seed: N(T^d) lies in N(T^{d-1}) + R(T); "
                               "stable-iteration degree was miscomputed");
    return ext.front();
}

inline Cascade build_cascade(const RatMatrix& t, const RatVec& seed, std::size_t d) {
    Cascade c;
    c.seed = seed;
    c.degree = d;
    RatVec v = seed;
    for (std::size_t i = 0; i < d; ++i) {
        c.vectors.push_back(v);
        v = t * v;
    }
    if (!is_zero_vec(v)) throw std::invalid_argument("cascade seed not killed by T^d");
    if (is_zero_vec(c.vectors.back()))
        throw std::invalid_argument("cascade seed killed before T^d");
    return c;
}

// Canonical functional: solve f|R(T^d) = 0, f(T^m y) = [m = d-1], free
// variables zeroed. Consistency is guaranteed by cascade independence.
inline AdjointCascade adjoint_cascade(const RatMatrix& t, const RatVec& seed, std::size_t d) {
    const std::size_t n = t.rows();
    const Cascade casc = build_cascade(t, seed, d);
    const RatSubspace range_d = image(matrix_power(t, d));
    RatMatrix system(range_d.dim() + d, n);
    RatVec rhs(range_d.dim() + d);
    std::size_t row = 0;
    for (const RatVec& b : range_d.basis()) {
        for (std::size_t j = 0; j < n; ++j) system.at(row, j) = b[j];
        rhs[row] = 0;
        ++row;
    }
    for (std::size_t m = 0; m < d; ++m) {
        for (std::size_t j = 0; j < n; ++j) system.at(row, j) = casc.vectors[m][j];
        rhs[row] = (m + 1 == d) ? 1 : 0;
        ++row;
    }
    const auto f = solve_canonical(system, rhs);
    if (!f) throw std::invalid_argument("adjoint cascade: seed constraints are inconsistent");
    AdjointCascade adj;
    adj.functional = *f;
    RatVec g = *f;
    for (std::size_t i = 0; i < d; ++i) {
        adj.covectors.push_back(g);
        g = g * t;
    }
    return adj;
}

// P = sum_i (T^{d-i-1} y) (f T^i): a rank-d projection onto the cascade
// span that commutes with T.
inline RatMatrix cascade_projection(const RatMatrix& t, const Cascade& casc,
                                    const AdjointCascade& adj) {
    const std::size_t n = t.rows();
    const std::size_t d = casc.degree;
    RatMatrix p(n, n);
    for (std::size_t i = 0; i < d; ++i)
        p = p + outer(casc.vectors[d - i - 1], adj.covectors[i]);
    if (p * p != p) throw std::logic_error("cascade projection is not idempotent");
    if (t * p != p * t) throw std::logic_error("cascade projection does not commute with T");
    if (rref(p).second != d) throw std::logic_error("cascade projection has the wrong rank");
    return p;
}

// Fitting decomposition at stabilization: M = R(T^s), N = N(T^s). The
// independent oracle for the cascade construction below.
inline std::pair<RatSubspace, RatSubspace> fitting_oracle(const RatMatrix& t) {
    const IterLattice lat = iterate(t);
    return {lat.ranges.back(), lat.kernels.back()};
}

// Iterative peeling: remove one cascade per step until the remaining core
// has stable-iteration degree zero. Each step is an instance of the seed /
// adjoint-cascade / projection construction in the coordinates of the
// current core.
inline KatoCertificate kato_decompose(const RatMatrix& t) {
    if (!t.square()) throw std::invalid_argument("kato_decompose: operator must be square");
    const std::size_t n = t.rows();
    KatoCertificate cert;
    cert.ambient_dim = n;

    const InvariantReport top = analyze_matrix(t);
    const std::size_t jump_cap = top.jump.value().finite_value();
    cert.d = top.dis.finite_value();

    RatSubspace core = RatSubspace::full(n); // current core, ambient coordinates
    std::vector<RatSubspace> peeled;         // ambient-coordinate nilpotent parts

    for (;;) {
        const RatMatrix tc = restrict_to(t, core);
        const IterLattice lat = iterate(tc);
        const std::size_t d_i = dis_of(alpha_seq(lat)).finite_value();
        if (d_i == 0) break;
        if (peeled.size() >= jump_cap)
            throw std::logic_error("kato_decompose: peeling exceeded the jump bound");

        const RatVec seed_local = pick_cascade_seed(tc, d_i);
        const Cascade casc = build_cascade(tc, seed_local, d_i);
        const AdjointCascade adj = adjoint_cascade(tc, seed_local, d_i);
        const RatMatrix proj = cascade_projection(tc, casc, adj);

        // Lift local data back to ambient coordinates through the core basis.
        const auto lift_vec = [&](const RatVec& v) {
            RatVec out(n);
            for (std::size_t i = 0; i < core.dim(); ++i)
                for (std::size_t j = 0; j < n; ++j) out[j] += v[i] * core.basis()[i][j];
            return out;
        };
        std::vector<RatVec> cascade_ambient;
        cascade_ambient.reserve(d_i);
        for (const RatVec& v : casc.vectors) cascade_ambient.push_back(lift_vec(v));
        peeled.push_back(RatSubspace::span(cascade_ambient, n));

        KatoIterationRecord rec;
        rec.seed = lift_vec(seed_local);
        rec.functional = adj.functional;
        rec.projection_rank = d_i;
        rec.degree = d_i;
        cert.trace.push_back(std::move(rec));

        const RatSubspace next_local = kernel(proj);
        std::vector<RatVec> next_ambient;
        next_ambient.reserve(next_local.dim());
        for (const RatVec& v : next_local.basis()) next_ambient.push_back(lift_vec(v));
        core = next_ambient.empty() ? RatSubspace::zero(n)
                                    : RatSubspace::span(next_ambient, n);
    }

    cert.core = core;
    RatSubspace nil = RatSubspace::zero(n);
    for (const RatSubspace& part : peeled) nil = subspace_sum(nil, part);
    cert.nilpotent = nil;
    cert.k = peeled.size();
    return cert;
}

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

// Re-derives every certificate side condition from T and the claimed bases.
// Stored trace data is never consulted.
inline VerifyReport verify_certificate(const RatMatrix& t, const KatoCertificate& cert) {
    VerifyReport rep;
    const auto add = [&rep](std::string name, bool pass, std::string detail = "") {
        rep.checks.push_back({std::move(name), pass, std::move(detail)});
    };

    const bool ambient_ok = t.square() && t.rows() == cert.ambient_dim &&
                            cert.core.ambient_dim() == cert.ambient_dim &&
                            cert.nilpotent.ambient_dim() == cert.ambient_dim;
    add("ambient-dim", ambient_ok,
        ambient_ok ? "" : "operator and certificate dimensions disagree");
    if (!ambient_ok) return rep;

    const RatSubspace& m = cert.core;
    const RatSubspace& nl = cert.nilpotent;

    const bool ds = subspace_intersect(m, nl).is_zero() &&
                    m.dim() + nl.dim() == cert.ambient_dim;
    add("direct-sum", ds, ds ? "" : "M and N do not split the space");

    bool m_inv = true, n_inv = true;
    for (const RatVec& b : m.basis()) m_inv = m_inv && m.contains(t * b);
    for (const RatVec& b : nl.basis()) n_inv = n_inv && nl.contains(t * b);
    add("invariance", m_inv && n_inv,
        m_inv ? (n_inv ? "" : "T(N) not contained in N") : "T(M) not contained in M");

    // The remaining checks need the restrictions; skip them if invariance
    // already failed.
    if (!(m_inv && n_inv)) return rep;

    const RatMatrix tn = restrict_to(t, nl);
    bool nil_ok;
    std::string nil_detail;
    if (cert.d == 0) {
        nil_ok = nl.is_zero();
        nil_detail = nil_ok ? "" : "degree 0 requires N = {0}";
    } else {
        const bool killed = matrix_power(tn, cert.d).is_zero();
        const bool sharp = !matrix_power(tn, cert.d - 1).is_zero();
        nil_ok = killed && sharp;
        nil_detail = killed ? (sharp ? "" : "T^{d-1} already vanishes on N")
                            : "T^d does not vanish on N";
    }
    add("nilpotency-degree", nil_ok, nil_detail);

    const RatMatrix tm = restrict_to(t, m);
    const InvariantReport core_rep = analyze_matrix(tm);
    const bool core_ok = core_rep.jump.value() == ExtNat(0) && core_rep.dis == ExtNat(0);
    add("core-semi-regular", core_ok, core_ok ? "" : "restriction to M has a nonzero jump");

    const InvariantReport full_rep = analyze_matrix(t);
    const bool deg_ok = ExtNat(cert.d) == full_rep.dis;
    add("degree-equals-dis", deg_ok,
        deg_ok ? "" : "claimed degree differs from the stable-iteration degree");

    const bool iter_ok = ExtNat(cert.k) == full_rep.jump.value();
    add("iterations-equal-jump", iter_ok, iter_ok ? "" : "iteration count differs from jump");

    bool bounds_ok = true;
    std::string bounds_detail;
    if (cert.k == 0) {
        bounds_ok = nl.is_zero() && cert.d == 0;
        if (!bounds_ok) bounds_detail = "no iterations but a nonempty nilpotent part";
    } else {
        const std::size_t m_t = full_rep.m_t.finite_value();
        const std::size_t lower = cert.d + (cert.k - 1) * m_t;
        bounds_ok = lower <= nl.dim() && nl.dim() <= cert.k * cert.d;
        if (!bounds_ok) bounds_detail = "dim N outside [d + (k-1) m_T, k d]";
    }
    add("dimension-bounds", bounds_ok, bounds_detail);

    const bool index_ok = full_rep.index.value() == core_rep.index.value();
    add("index-preserved", index_ok, index_ok ? "" : "index changes when passing to M");

    return rep;
}

} // namespace opkit
