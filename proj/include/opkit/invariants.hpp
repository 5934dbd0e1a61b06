#pragma once

#include "opkit/chains.hpp"
#include "opkit/extnat.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace opkit {

struct ClassificationFlags {
    bool semi_regular = false;          // dis = 0
    bool quasi_fredholm = false;        // dis finite
    bool upper_semi_fredholm = false;   // alpha_0 finite
    bool lower_semi_fredholm = false;   // beta_0 finite
    bool upper_semi_b_fredholm = false; // a_e finite
    bool lower_semi_b_fredholm = false; // d_e finite
    bool semi_b_fredholm = false;
    bool b_fredholm = false;
    bool fredholm = false;          // alpha_0 and beta_0 finite
    bool drazin_invertible = false; // ascent and descent finite
    bool nilpotent = false;
    // Range-closedness holds structurally in both implemented models; it is
    // carried in the report so the classification reads like the theory.
    bool ranges_closed = true;
};

enum class ReportKind { finite, symbolic };

// Every scalar invariant of one operator, plus its dimension sequences.
struct InvariantReport {
    ReportKind kind = ReportKind::finite;
    std::size_t dim = 0; // ambient dimension; meaningful for finite reports
    EcSeq alpha;
    EcSeq beta;
    std::vector<ExtNat> k;
    ExtNat dis;
    ExtNat v;
    ExtNat m_t;
    ExtNat a_e;
    ExtNat d_e;
    ExtNat ascent;
    ExtNat descent;
    std::optional<ExtNat> jump;  // defined iff semi-B-Fredholm
    std::optional<ExtInt> index; // defined iff semi-B-Fredholm
    ClassificationFlags flags;
};

// Degree of stable iteration: least m from which alpha is constant.
inline ExtNat dis_of(const EcSeq& alpha) { return ExtNat(alpha.settling_index()); }

// Degree of semi-regularity: least n with N(T) not contained in R(T^n);
// infinite when the containment never fails.
inline ExtNat v_degree(const IterLattice& lat) {
    const RatSubspace& ker = lat.kernel_at(1);
    for (std::size_t n = 0; n <= lat.stab; ++n)
        if (!lat.ranges[n].contains(ker)) return ExtNat(n);
    return ExtNat::infinity();
}

struct EssentialDegrees {
    ExtNat m_t;
    ExtNat a_e;
    ExtNat d_e;
};

inline EssentialDegrees essential_degrees(const EcSeq& alpha, const EcSeq& beta) {
    EssentialDegrees e;
    e.a_e = alpha.first_finite();
    e.d_e = beta.first_finite();
    e.m_t = e.a_e < e.d_e ? e.a_e : e.d_e;
    return e;
}

struct AscentDescent {
    ExtNat ascent;
    ExtNat descent;
};

inline AscentDescent ascent_descent(const EcSeq& alpha, const EcSeq& beta) {
    return {alpha.first_zero(), beta.first_zero()};
}

inline bool is_semi_b_fredholm(const EcSeq& alpha, const EcSeq& beta) {
    return alpha.first_finite().is_finite() || beta.first_finite().is_finite();
}

// jump = alpha_{m_T} - alpha_{dis} on the upper side, the beta analogue on
// the lower side. When both sides apply the two values agree.
inline ExtNat jump_of(const EcSeq& alpha, const EcSeq& beta, const ExtNat& m_t,
                      const ExtNat& dis) {
    if (!is_semi_b_fredholm(alpha, beta))
        throw std::domain_error("jump is undefined for non-semi-B-Fredholm operators");
    const std::size_t m = m_t.finite_value();
    const std::size_t d = dis.finite_value();
    if (alpha.at(m).is_finite()) {
        const ExtNat upper = alpha.at(m) - alpha.at(d);
        if (beta.at(m).is_finite()) {
            const ExtNat lower = beta.at(m) - beta.at(d);
            if (upper != lower)
                throw std::logic_error("upper and lower jump forms disagree");
        }
        return upper;
    }
    return beta.at(m) - beta.at(d);
}

inline ExtInt index_of(const EcSeq& alpha, const EcSeq& beta, const ExtNat& m_t) {
    if (!is_semi_b_fredholm(alpha, beta))
        throw std::domain_error("index is undefined for non-semi-B-Fredholm operators");
    const std::size_t m = m_t.finite_value();
    return ExtInt::difference(alpha.at(m), beta.at(m));
}

inline ClassificationFlags classify(const EcSeq& alpha, const EcSeq& beta, const ExtNat& dis,
                                    const EssentialDegrees& ess, const AscentDescent& ad,
                                    bool nilpotent) {
    ClassificationFlags f;
    f.semi_regular = dis == ExtNat(0);
    f.quasi_fredholm = dis.is_finite();
    f.upper_semi_fredholm = alpha.at(0).is_finite();
    f.lower_semi_fredholm = beta.at(0).is_finite();
    f.upper_semi_b_fredholm = ess.a_e.is_finite();
    f.lower_semi_b_fredholm = ess.d_e.is_finite();
    f.semi_b_fredholm = f.upper_semi_b_fredholm || f.lower_semi_b_fredholm;
    f.b_fredholm = f.upper_semi_b_fredholm && f.lower_semi_b_fredholm;
    f.fredholm = f.upper_semi_fredholm && f.lower_semi_fredholm;
    f.drazin_invertible = ad.ascent.is_finite() && ad.descent.is_finite();
    f.nilpotent = nilpotent;
    return f;
}

// Closed forms for alpha(T^n), beta(T^n) of a semi-Fredholm operator whose
// alpha sequence takes at most two values; see predicted_power_dims callers
// for where that holds.
struct PowerDims {
    ExtNat alpha_n;
    ExtNat beta_n;
};

inline PowerDims predicted_power_dims(const InvariantReport& report, std::size_t n) {
    if (!report.flags.upper_semi_fredholm && !report.flags.lower_semi_fredholm)
        throw std::domain_error("power-dimension closed forms need a semi-Fredholm operator");
    const ExtNat nn(n);
    const ExtNat d = report.dis;
    PowerDims out;
    if (nn <= d) {
        out.alpha_n = nn * report.alpha.at(0);
        out.beta_n = nn * report.beta.at(0);
    } else {
        const std::size_t dv = d.finite_value();
        out.alpha_n = d * report.alpha.at(0) + (nn - d) * report.alpha.at(dv);
        out.beta_n = d * report.beta.at(0) + (nn - d) * report.beta.at(dv);
    }
    return out;
}

// Full report for a concrete square rational matrix.
inline InvariantReport analyze_matrix(const RatMatrix& t) {
    const IterLattice lat = iterate(t);
    InvariantReport r;
    r.kind = ReportKind::finite;
    r.dim = lat.ambient();
    r.alpha = alpha_seq(lat);
    r.beta = beta_seq(lat);
    if (r.alpha != r.beta) throw std::logic_error("alpha and beta must agree for square matrices");
    r.k = k_seq(r.alpha);
    r.dis = dis_of(r.alpha);
    r.v = v_degree(lat);
    const EssentialDegrees ess = essential_degrees(r.alpha, r.beta);
    r.m_t = ess.m_t;
    r.a_e = ess.a_e;
    r.d_e = ess.d_e;
    const AscentDescent ad = ascent_descent(r.alpha, r.beta);
    r.ascent = ad.ascent;
    r.descent = ad.descent;
    r.jump = jump_of(r.alpha, r.beta, r.m_t, r.dis);
    r.index = index_of(r.alpha, r.beta, r.m_t);
    const bool nilpotent = lat.kernels.back().dim() == lat.ambient();
    r.flags = classify(r.alpha, r.beta, r.dis, ess, ad, nilpotent);
    return r;
}

} // namespace opkit
