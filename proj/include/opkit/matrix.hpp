#pragma once

#include "opkit/rat.hpp"

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace opkit {

using RatVec = std::vector<Rat>;

// Dense row-major matrix over Q. Values are immutable in spirit: all
// operations below return fresh matrices.
class RatMatrix {
  public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    RatMatrix(std::initializer_list<std::initializer_list<long long>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        entries_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
            for (long long v : row) entries_.emplace_back(v);
        }
    }

    static RatMatrix identity(std::size_t n) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static RatMatrix zero(std::size_t n) { return RatMatrix(n, n); }

    // Single nilpotent Jordan block: ones on the superdiagonal.
    static RatMatrix jordan_block(std::size_t n) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i + 1 < n; ++i) m.at(i, i + 1) = 1;
        return m;
    }

    static RatMatrix from_rows(const std::vector<RatVec>& rows, std::size_t cols) {
        RatMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw std::invalid_argument("ragged row list");
            for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Rat& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Rat& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    RatVec row(std::size_t i) const {
        return RatVec(entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                      entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }

    RatVec col(std::size_t j) const {
        RatVec c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
        return c;
    }

    RatMatrix transpose() const {
        RatMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    bool is_zero() const {
        for (const Rat& e : entries_)
            if (e != 0) return false;
        return true;
    }

    friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
    }
    friend bool operator!=(const RatMatrix& a, const RatMatrix& b) { return !(a == b); }

    friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
        RatMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Rat& aik = a.at(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c.at(i, j) += aik * b.at(k, j);
            }
        return c;
    }

    friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("matrix sum shape mismatch");
        RatMatrix c(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.entries_.size(); ++i)
            c.entries_[i] = a.entries_[i] + b.entries_[i];
        return c;
    }

    friend RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("matrix difference shape mismatch");
        RatMatrix c(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.entries_.size(); ++i)
            c.entries_[i] = a.entries_[i] - b.entries_[i];
        return c;
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rat> entries_;
};

inline RatMatrix matrix_power(const RatMatrix& m, std::size_t e) {
    if (!m.square()) throw std::invalid_argument("matrix power of non-square matrix");
    RatMatrix acc = RatMatrix::identity(m.rows());
    for (std::size_t i = 0; i < e; ++i) acc = acc * m;
    return acc;
}

inline RatMatrix block_diag(const std::vector<RatMatrix>& blocks) {
    std::size_t n = 0;
    for (const auto& b : blocks) {
        if (!b.square()) throw std::invalid_argument("block_diag needs square blocks");
        n += b.rows();
    }
    RatMatrix m(n, n);
    std::size_t off = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) m.at(off + i, off + j) = b.at(i, j);
        off += b.rows();
    }
    return m;
}

// y = M x for a column vector x.
inline RatVec operator*(const RatMatrix& m, const RatVec& x) {
    if (m.cols() != x.size()) throw std::invalid_argument("matrix-vector shape mismatch");
    RatVec y(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Rat s = 0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m.at(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

// y = f M for a row covector f.
inline RatVec operator*(const RatVec& f, const RatMatrix& m) {
    if (m.rows() != f.size()) throw std::invalid_argument("covector-matrix shape mismatch");
    RatVec y(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        Rat s = 0;
        for (std::size_t i = 0; i < m.rows(); ++i) s += f[i] * m.at(i, j);
        y[j] = s;
    }
    return y;
}

inline Rat dot(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Column-times-row rank-one product x f^T.
inline RatMatrix outer(const RatVec& x, const RatVec& f) {
    RatMatrix m(x.size(), f.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < f.size(); ++j) m.at(i, j) = x[i] * f[j];
    return m;
}

inline bool is_zero_vec(const RatVec& v) {
    for (const Rat& e : v)
        if (e != 0) return false;
    return true;
}

inline RatVec unit_vec(std::size_t n, std::size_t i) {
    RatVec v(n);
    v[i] = 1;
    return v;
}

} // namespace opkit
