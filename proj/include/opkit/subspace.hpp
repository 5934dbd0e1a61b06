#pragma once

#include "opkit/matrix.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace opkit {

// Reduced row echelon form with the row rank. The RREF of a matrix is
// unique, which is what makes subspace equality a syntactic check.
inline std::pair<RatMatrix, std::size_t> rref(const RatMatrix& m) {
    RatMatrix a = m;
    const std::size_t rows = a.rows(), cols = a.cols();
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < cols && pivot_row < rows; ++col) {
        std::size_t sel = pivot_row;
        while (sel < rows && a.at(sel, col) == 0) ++sel;
        if (sel == rows) continue;
        if (sel != pivot_row)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a.at(sel, j), a.at(pivot_row, j));
        const Rat inv = Rat(1) / a.at(pivot_row, col);
        for (std::size_t j = col; j < cols; ++j) a.at(pivot_row, j) *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == pivot_row || a.at(i, col) == 0) continue;
            const Rat factor = a.at(i, col);
            for (std::size_t j = col; j < cols; ++j)
                a.at(i, j) -= factor * a.at(pivot_row, j);
        }
        ++pivot_row;
    }
    return {a, pivot_row};
}

// A subspace of Q^n held as its unique RREF basis (no zero rows). Two
// subspaces are equal exactly when their stored bases are equal entry-wise.
class RatSubspace {
  public:
    RatSubspace() = default;

    static RatSubspace zero(std::size_t ambient) {
        RatSubspace s;
        s.ambient_ = ambient;
        return s;
    }

    static RatSubspace full(std::size_t ambient) {
        RatSubspace s;
        s.ambient_ = ambient;
        for (std::size_t i = 0; i < ambient; ++i) s.basis_.push_back(unit_vec(ambient, i));
        return s;
    }

    static RatSubspace span(const std::vector<RatVec>& vectors, std::size_t ambient) {
        auto [r, rank] = rref(RatMatrix::from_rows(vectors, ambient));
        RatSubspace s;
        s.ambient_ = ambient;
        for (std::size_t i = 0; i < rank; ++i) s.basis_.push_back(r.row(i));
        return s;
    }

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<RatVec>& basis() const { return basis_; }

    bool is_zero() const { return basis_.empty(); }
    bool is_full() const { return basis_.size() == ambient_; }

    // Reduces v against the stored RREF rows; the remainder is zero exactly
    // when v lies in the subspace.
    RatVec reduce(const RatVec& v) const {
        if (v.size() != ambient_) throw std::invalid_argument("reduce: ambient mismatch");
        RatVec r = v;
        for (const RatVec& b : basis_) {
            const std::size_t p = pivot_of(b);
            if (r[p] == 0) continue;
            const Rat c = r[p];
            for (std::size_t j = p; j < ambient_; ++j) r[j] -= c * b[j];
        }
        return r;
    }

    bool contains(const RatVec& v) const { return is_zero_vec(reduce(v)); }

    bool contains(const RatSubspace& inner) const {
        require_same_ambient(inner);
        for (const RatVec& b : inner.basis_)
            if (!contains(b)) return false;
        return true;
    }

    friend bool operator==(const RatSubspace& a, const RatSubspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }
    friend bool operator!=(const RatSubspace& a, const RatSubspace& b) { return !(a == b); }

    void require_same_ambient(const RatSubspace& other) const {
        if (ambient_ != other.ambient_)
            throw std::invalid_argument("subspace ambient dimension mismatch");
    }

    static std::size_t pivot_of(const RatVec& row) {
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j] != 0) return j;
        throw std::logic_error("zero row stored in subspace basis");
    }

  private:
    std::size_t ambient_ = 0;
    std::vector<RatVec> basis_; // strict RREF, pivots strictly increasing
};

inline RatSubspace subspace_sum(const RatSubspace& a, const RatSubspace& b) {
    a.require_same_ambient(b);
    std::vector<RatVec> rows = a.basis();
    rows.insert(rows.end(), b.basis().begin(), b.basis().end());
    if (rows.empty()) return RatSubspace::zero(a.ambient_dim());
    return RatSubspace::span(rows, a.ambient_dim());
}

// Zassenhaus: row-reduce [A | A; B | 0]; rows whose left half vanished have
// right halves spanning the intersection.
inline RatSubspace subspace_intersect(const RatSubspace& a, const RatSubspace& b) {
    a.require_same_ambient(b);
    const std::size_t n = a.ambient_dim();
    const std::size_t ra = a.dim(), rb = b.dim();
    if (ra == 0 || rb == 0) return RatSubspace::zero(n);
    RatMatrix stack(ra + rb, 2 * n);
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            stack.at(i, j) = a.basis()[i][j];
            stack.at(i, n + j) = a.basis()[i][j];
        }
    for (std::size_t i = 0; i < rb; ++i)
        for (std::size_t j = 0; j < n; ++j) stack.at(ra + i, j) = b.basis()[i][j];
    auto [red, rank] = rref(stack);
    std::vector<RatVec> inter;
    for (std::size_t i = 0; i < rank; ++i) {
        bool left_zero = true;
        for (std::size_t j = 0; j < n && left_zero; ++j)
            if (red.at(i, j) != 0) left_zero = false;
        if (!left_zero) continue;
        RatVec v(n);
        for (std::size_t j = 0; j < n; ++j) v[j] = red.at(i, n + j);
        if (!is_zero_vec(v)) inter.push_back(std::move(v));
    }
    if (inter.empty()) return RatSubspace::zero(n);
    return RatSubspace::span(inter, n);
}

// Exact null space of m, canonicalized.
inline RatSubspace kernel(const RatMatrix& m) {
    const std::size_t n = m.cols();
    auto [red, rank] = rref(m);
    std::vector<std::size_t> pivots;
    pivots.reserve(rank);
    for (std::size_t i = 0; i < rank; ++i) {
        std::size_t j = 0;
        while (red.at(i, j) == 0) ++j;
        pivots.push_back(j);
    }
    std::vector<RatVec> basis;
    std::size_t pi = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (pi < pivots.size() && pivots[pi] == j) {
            ++pi;
            continue;
        }
        RatVec v(n);
        v[j] = 1;
        for (std::size_t i = 0; i < rank; ++i) v[pivots[i]] = -red.at(i, j);
        basis.push_back(std::move(v));
    }
    if (basis.empty()) return RatSubspace::zero(n);
    return RatSubspace::span(basis, n);
}

// Column space of m, canonicalized.
inline RatSubspace image(const RatMatrix& m) {
    const RatMatrix t = m.transpose();
    std::vector<RatVec> rows;
    rows.reserve(t.rows());
    for (std::size_t i = 0; i < t.rows(); ++i) rows.push_back(t.row(i));
    if (rows.empty()) return RatSubspace::zero(m.rows());
    return RatSubspace::span(rows, m.rows());
}

// Vectors taken greedily from outer's RREF basis, in pivot order, that
// extend a basis of inner to one of outer. Deterministic by construction;
// empty exactly when inner = outer.
inline std::vector<RatVec> extend_basis(const RatSubspace& inner, const RatSubspace& outer) {
    inner.require_same_ambient(outer);
    if (!outer.contains(inner))
        throw std::invalid_argument("extend_basis: inner is not contained in outer");
    std::vector<RatVec> picked;
    RatSubspace cur = inner;
    for (const RatVec& row : outer.basis()) {
        if (cur.dim() == outer.dim()) break;
        if (cur.contains(row)) continue;
        picked.push_back(row);
        std::vector<RatVec> rows = cur.basis();
        rows.push_back(row);
        cur = RatSubspace::span(rows, outer.ambient_dim());
    }
    return picked;
}

// Unique particular solution of A x = b with every RREF free variable set
// to zero; empty when the system is inconsistent.
inline std::optional<RatVec> solve_canonical(const RatMatrix& a, const RatVec& b) {
    if (a.rows() != b.size()) throw std::invalid_argument("solve_canonical: shape mismatch");
    RatMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols()) = b[i];
    }
    auto [red, rank] = rref(aug);
    RatVec x(a.cols());
    for (std::size_t i = 0; i < rank; ++i) {
        std::size_t j = 0;
        while (j < a.cols() && red.at(i, j) == 0) ++j;
        if (j == a.cols()) return std::nullopt; // pivot in the constant column
        x[j] = red.at(i, a.cols());
    }
    return x;
}

// Matrix of T restricted to the T-invariant subspace M, written in M's
// stored RREF basis. Column j holds the coordinates of T b_j.
inline RatMatrix restrict_to(const RatMatrix& t, const RatSubspace& m) {
    if (!t.square() || t.rows() != m.ambient_dim())
        throw std::invalid_argument("restrict_to: shape mismatch");
    const std::size_t k = m.dim();
    std::vector<std::size_t> pivots;
    pivots.reserve(k);
    for (const RatVec& b : m.basis()) pivots.push_back(RatSubspace::pivot_of(b));
    RatMatrix r(k, k);
    for (std::size_t j = 0; j < k; ++j) {
        const RatVec w = t * m.basis()[j];
        // RREF structure: the coordinate along basis row i is w at pivot i.
        RatVec residual = w;
        for (std::size_t i = 0; i < k; ++i) {
            const Rat c = w[pivots[i]];
            r.at(i, j) = c;
            if (c == 0) continue;
            for (std::size_t col = 0; col < m.ambient_dim(); ++col)
                residual[col] -= c * m.basis()[i][col];
        }
        if (!is_zero_vec(residual))
            throw std::invalid_argument("restrict_to: subspace is not invariant");
    }
    return r;
}

} // namespace opkit
