#pragma once

#include "opkit/extnat.hpp"
#include "opkit/subspace.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace opkit {

// Kernel and range chains of a square matrix, computed up to the first
// repetition. For a square matrix over a field both chains stabilize at the
// same index, which is at most the ambient dimension. Indexing past stab
// returns the stabilized subspace.
struct IterLattice {
    RatMatrix op;
    std::vector<RatMatrix> powers;    // T^0 .. T^stab
    std::vector<RatSubspace> kernels; // N(T^0) .. N(T^stab)
    std::vector<RatSubspace> ranges;  // R(T^0) .. R(T^stab)
    std::size_t stab = 0;

    std::size_t ambient() const { return op.rows(); }

    const RatSubspace& kernel_at(std::size_t n) const {
        return kernels[n < kernels.size() ? n : kernels.size() - 1];
    }
    const RatSubspace& range_at(std::size_t n) const {
        return ranges[n < ranges.size() ? n : ranges.size() - 1];
    }
    RatMatrix power_at(std::size_t n) const {
        if (n < powers.size()) return powers[n];
        RatMatrix p = powers.back();
        for (std::size_t i = powers.size() - 1; i < n; ++i) p = p * op;
        return p;
    }
};

inline IterLattice iterate(const RatMatrix& t) {
    if (!t.square()) throw std::invalid_argument("iterate: operator must be square");
    IterLattice lat;
    lat.op = t;
    RatMatrix p = RatMatrix::identity(t.rows());
    lat.powers.push_back(p);
    lat.kernels.push_back(kernel(p));
    lat.ranges.push_back(image(p));
    for (;;) {
        p = p * t;
        RatSubspace ker = kernel(p);
        RatSubspace rng = image(p);
        if (ker == lat.kernels.back() && rng == lat.ranges.back()) break;
        lat.powers.push_back(p);
        lat.kernels.push_back(std::move(ker));
        lat.ranges.push_back(std::move(rng));
    }
    lat.stab = lat.kernels.size() - 1;
    return lat;
}

// alpha_n = dim(N(T) cap R(T^n)): the kernel dimension of T restricted to
// R(T^n). Constant from stab onward.
inline EcSeq alpha_seq(const IterLattice& lat) {
    const RatSubspace& ker = lat.kernel_at(1);
    std::vector<ExtNat> vals;
    vals.reserve(lat.stab + 1);
    for (std::size_t n = 0; n <= lat.stab; ++n)
        vals.push_back(ExtNat(subspace_intersect(ker, lat.ranges[n]).dim()));
    EcSeq seq(std::move(vals));
    if (!seq.non_increasing()) throw std::logic_error("alpha sequence must be non-increasing");
    return seq;
}

// beta_n = dim R(T^n) - dim R(T^{n+1}): the range codimension of the
// restriction to R(T^n). Equals alpha_n for square matrices.
inline EcSeq beta_seq(const IterLattice& lat) {
    std::vector<ExtNat> vals;
    vals.reserve(lat.stab + 1);
    for (std::size_t n = 0; n <= lat.stab; ++n)
        vals.push_back(ExtNat(lat.range_at(n).dim() - lat.range_at(n + 1).dim()));
    EcSeq seq(std::move(vals));
    if (!seq.non_increasing()) throw std::logic_error("beta sequence must be non-increasing");
    return seq;
}

// k_n = alpha_n - alpha_{n+1}, for n = 0 .. stab-1; zero afterwards.
inline std::vector<ExtNat> k_seq(const EcSeq& alpha) {
    std::vector<ExtNat> ks;
    for (std::size_t n = 0; n + 1 < alpha.values().size(); ++n)
        ks.push_back(alpha.at(n) - alpha.at(n + 1));
    return ks;
}

inline std::vector<ExtNat> k_seq(const IterLattice& lat) { return k_seq(alpha_seq(lat)); }

// Matrix of the pairing (x, y) -> T^m x + y on X x N(T^n): the columns of
// T^m followed by a basis of N(T^n). Its image is R(T^m) + N(T^n).
inline RatMatrix snm_operator(const RatMatrix& t, std::size_t n, std::size_t m) {
    if (!t.square()) throw std::invalid_argument("snm_operator: operator must be square");
    if (m == 0) throw std::invalid_argument("snm_operator: m must be at least 1");
    const std::size_t dim = t.rows();
    const RatMatrix tm = matrix_power(t, m);
    const RatSubspace ker_n = kernel(matrix_power(t, n));
    RatMatrix s(dim, dim + ker_n.dim());
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) s.at(i, j) = tm.at(i, j);
    for (std::size_t j = 0; j < ker_n.dim(); ++j)
        for (std::size_t i = 0; i < dim; ++i) s.at(i, dim + j) = ker_n.basis()[j][i];
    return s;
}

// Range codimension of a (possibly rectangular) matrix.
inline std::size_t codim_image(const RatMatrix& m) { return m.rows() - rref(m).second; }

// Finite-dimensional realization of the dual operator.
inline RatMatrix dual(const RatMatrix& t) { return t.transpose(); }

} // namespace opkit
