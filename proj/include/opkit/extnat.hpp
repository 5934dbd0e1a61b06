#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace opkit {

// Natural numbers extended by infinity. Addition absorbs infinity; the
// partial subtractions that make sense are the only ones provided.
class ExtNat {
  public:
    constexpr ExtNat() = default;
    constexpr ExtNat(std::uint64_t v) : value_(v) {} // NOLINT: implicit by design
    static constexpr ExtNat infinity() {
        ExtNat e;
        e.infinite_ = true;
        return e;
    }

    constexpr bool is_infinite() const { return infinite_; }
    constexpr bool is_finite() const { return !infinite_; }

    std::uint64_t finite_value() const {
        if (infinite_) throw std::domain_error("infinite value where a finite one is required");
        return value_;
    }

    friend constexpr bool operator==(const ExtNat& a, const ExtNat& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
        return a.value_ == b.value_;
    }
    friend constexpr bool operator<(const ExtNat& a, const ExtNat& b) {
        if (a.infinite_) return false;
        if (b.infinite_) return true;
        return a.value_ < b.value_;
    }
    friend constexpr bool operator!=(const ExtNat& a, const ExtNat& b) { return !(a == b); }
    friend constexpr bool operator<=(const ExtNat& a, const ExtNat& b) { return a < b || a == b; }
    friend constexpr bool operator>(const ExtNat& a, const ExtNat& b) { return b < a; }
    friend constexpr bool operator>=(const ExtNat& a, const ExtNat& b) { return b <= a; }

    friend ExtNat operator+(const ExtNat& a, const ExtNat& b) {
        if (a.infinite_ || b.infinite_) return infinity();
        return ExtNat(a.value_ + b.value_);
    }

    // a - b: defined for finite a >= finite b, and for infinite a, finite b.
    friend ExtNat operator-(const ExtNat& a, const ExtNat& b) {
        if (b.infinite_) throw std::domain_error("cannot subtract infinity");
        if (a.infinite_) return infinity();
        if (a.value_ < b.value_) throw std::domain_error("negative extended-natural difference");
        return ExtNat(a.value_ - b.value_);
    }

    // n * a with the 0 * inf = 0 convention.
    friend ExtNat operator*(const ExtNat& a, const ExtNat& b) {
        if ((a.is_finite() && a.value_ == 0) || (b.is_finite() && b.value_ == 0)) return ExtNat(0);
        if (a.infinite_ || b.infinite_) return infinity();
        return ExtNat(a.value_ * b.value_);
    }

    std::string str() const { return infinite_ ? "inf" : std::to_string(value_); }

  private:
    std::uint64_t value_ = 0;
    bool infinite_ = false;
};

// Signed index values: an integer, or one of the two infinities.
class ExtInt {
  public:
    constexpr ExtInt() = default;
    constexpr ExtInt(std::int64_t v) : value_(v) {} // NOLINT: implicit by design
    static constexpr ExtInt plus_infinity() { return ExtInt(Kind::plus_inf); }
    static constexpr ExtInt minus_infinity() { return ExtInt(Kind::minus_inf); }

    constexpr bool is_finite() const { return kind_ == Kind::finite; }
    constexpr bool is_plus_infinity() const { return kind_ == Kind::plus_inf; }
    constexpr bool is_minus_infinity() const { return kind_ == Kind::minus_inf; }

    std::int64_t finite_value() const {
        if (!is_finite()) throw std::domain_error("infinite index where finite required");
        return value_;
    }

    friend constexpr bool operator==(const ExtInt& a, const ExtInt& b) {
        return a.kind_ == b.kind_ && (a.kind_ != Kind::finite || a.value_ == b.value_);
    }
    friend constexpr bool operator!=(const ExtInt& a, const ExtInt& b) { return !(a == b); }

    friend ExtInt operator*(std::int64_t n, const ExtInt& a) {
        if (n == 0) return ExtInt(0);
        if (a.kind_ == Kind::finite) return ExtInt(n * a.value_);
        const bool flip = n < 0;
        if (a.kind_ == Kind::plus_inf) return flip ? minus_infinity() : plus_infinity();
        return flip ? plus_infinity() : minus_infinity();
    }

    std::string str() const {
        switch (kind_) {
            case Kind::plus_inf: return "inf";
            case Kind::minus_inf: return "-inf";
            default: return std::to_string(value_);
        }
    }

    // alpha - beta over extended naturals, at most one of them infinite.
    static ExtInt difference(const ExtNat& a, const ExtNat& b) {
        if (a.is_infinite() && b.is_infinite())
            throw std::domain_error("index undefined: both terms infinite");
        if (a.is_infinite()) return plus_infinity();
        if (b.is_infinite()) return minus_infinity();
        return ExtInt(static_cast<std::int64_t>(a.finite_value()) -
                      static_cast<std::int64_t>(b.finite_value()));
    }

  private:
    enum class Kind { finite, plus_inf, minus_inf };
    constexpr explicit ExtInt(Kind k) : kind_(k) {}
    Kind kind_ = Kind::finite;
    std::int64_t value_ = 0;
};

// A sequence that is constant from its last stored index onward. Indexing
// past the stored prefix repeats the final value.
class EcSeq {
  public:
    EcSeq() : values_{ExtNat(0)} {}
    explicit EcSeq(std::vector<ExtNat> values) : values_(std::move(values)) {
        if (values_.empty()) throw std::invalid_argument("EcSeq needs at least one value");
    }

    const std::vector<ExtNat>& values() const { return values_; }
    std::size_t stable_from() const { return values_.size() - 1; }

    ExtNat at(std::size_t i) const { return values_[i < values_.size() ? i : values_.size() - 1]; }
    ExtNat tail() const { return values_.back(); }

    bool non_increasing() const {
        for (std::size_t i = 0; i + 1 < values_.size(); ++i)
            if (values_[i] < values_[i + 1]) return false;
        return true;
    }

    // Semantic equality: equal as functions on all indices.
    friend bool operator==(const EcSeq& a, const EcSeq& b) {
        const std::size_t n = std::max(a.values_.size(), b.values_.size());
        for (std::size_t i = 0; i < n; ++i)
            if (a.at(i) != b.at(i)) return false;
        return true;
    }
    friend bool operator!=(const EcSeq& a, const EcSeq& b) { return !(a == b); }

    // Least m with values constant from m onward.
    std::size_t settling_index() const {
        std::size_t m = values_.size() - 1;
        while (m > 0 && values_[m - 1] == values_.back()) --m;
        return m;
    }

    // First index where the value drops strictly below the initial one.
    ExtNat first_drop() const {
        for (std::size_t i = 1; i < values_.size(); ++i)
            if (values_[i] < values_[0]) return ExtNat(i);
        return ExtNat::infinity();
    }

    // First index with a finite value.
    ExtNat first_finite() const {
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (values_[i].is_finite()) return ExtNat(i);
        return ExtNat::infinity();
    }

    // First index with value zero.
    ExtNat first_zero() const {
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (values_[i] == ExtNat(0)) return ExtNat(i);
        return ExtNat::infinity();
    }

    static EcSeq constant(ExtNat v) { return EcSeq({v}); }

    // Pointwise sum; the result stabilizes no later than both inputs.
    static EcSeq pointwise_sum(const EcSeq& a, const EcSeq& b) {
        const std::size_t n = std::max(a.values_.size(), b.values_.size());
        std::vector<ExtNat> vals;
        vals.reserve(n);
        for (std::size_t i = 0; i < n; ++i) vals.push_back(a.at(i) + b.at(i));
        return EcSeq(std::move(vals));
    }

  private:
    std::vector<ExtNat> values_;
};

} // namespace opkit
