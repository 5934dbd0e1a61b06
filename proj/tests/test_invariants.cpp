#include "opkit/invariants.hpp"

#include <doctest.h>

using namespace opkit;

namespace {
const RatMatrix j3 = RatMatrix::jordan_block(3);
const RatMatrix j2_plus_two = block_diag({RatMatrix::jordan_block(2), RatMatrix{{2}}});
const RatMatrix invertible{{1, 1}, {0, 1}};
} // namespace

TEST_CASE("extended naturals") {
    const ExtNat inf = ExtNat::infinity();
    CHECK(ExtNat(3) + inf == inf);
    CHECK(inf + inf == inf);
    CHECK(ExtNat(2) < inf);
    CHECK(inf - ExtNat(5) == inf);
    CHECK(ExtNat(5) - ExtNat(2) == ExtNat(3));
    CHECK_THROWS_AS(ExtNat(2) - ExtNat(5), std::domain_error);
    CHECK_THROWS_AS(ExtNat(2) - inf, std::domain_error);
    CHECK_THROWS_AS(inf - inf, std::domain_error);
    CHECK(ExtNat(0) * inf == ExtNat(0));
    CHECK(ExtNat(3) * inf == inf);
    CHECK(ExtInt::difference(inf, ExtNat(1)) == ExtInt::plus_infinity());
    CHECK(ExtInt::difference(ExtNat(1), inf) == ExtInt::minus_infinity());
    CHECK(ExtInt::difference(ExtNat(1), ExtNat(4)) == ExtInt(-3));
    CHECK(3 * ExtInt(-2) == ExtInt(-6));
    CHECK(2 * ExtInt::minus_infinity() == ExtInt::minus_infinity());
}

TEST_CASE("eventually constant sequences") {
    const EcSeq s({ExtNat(2), ExtNat(2), ExtNat(1), ExtNat(0)});
    CHECK(s.at(2) == ExtNat(1));
    CHECK(s.at(17) == ExtNat(0));
    CHECK(s.settling_index() == 3);
    CHECK(s.first_drop() == ExtNat(2));
    CHECK(EcSeq({ExtNat(1), ExtNat(1)}).settling_index() == 0);
    CHECK(EcSeq::constant(ExtNat(4)).first_drop() == ExtNat::infinity());
    CHECK(EcSeq({ExtNat::infinity(), ExtNat(0)}).first_finite() == ExtNat(1));
    // semantic equality ignores prefix padding
    CHECK(EcSeq({ExtNat(1), ExtNat(0), ExtNat(0)}) == EcSeq({ExtNat(1), ExtNat(0)}));
}

TEST_CASE("stable iteration degree") {
    CHECK(analyze_matrix(j3).dis == ExtNat(3));
    CHECK(analyze_matrix(RatMatrix::identity(2)).dis == ExtNat(0));
    CHECK(analyze_matrix(RatMatrix::zero(2)).dis == ExtNat(1));
}

TEST_CASE("semi-regularity degree") {
    CHECK(analyze_matrix(j3).v == ExtNat(3));
    CHECK(analyze_matrix(invertible).v == ExtNat::infinity());
    CHECK(analyze_matrix(RatMatrix::zero(2)).v == ExtNat(1));
    SUBCASE("containment route matches the first alpha drop") {
        for (const RatMatrix& t : {j3, j2_plus_two, RatMatrix::zero(2), invertible}) {
            const InvariantReport r = analyze_matrix(t);
            CHECK(r.v == r.alpha.first_drop());
        }
    }
}

TEST_CASE("essential degrees vanish for matrices") {
    const InvariantReport r = analyze_matrix(j2_plus_two);
    CHECK(r.m_t == ExtNat(0));
    CHECK(r.a_e == ExtNat(0));
    CHECK(r.d_e == ExtNat(0));
}

TEST_CASE("ascent and descent") {
    const InvariantReport r3 = analyze_matrix(j3);
    CHECK(r3.ascent == ExtNat(3));
    CHECK(r3.descent == ExtNat(3));
    const InvariantReport ri = analyze_matrix(invertible);
    CHECK(ri.ascent == ExtNat(0));
    CHECK(ri.descent == ExtNat(0));
}

TEST_CASE("jump and index") {
    CHECK(analyze_matrix(j3).jump.value() == ExtNat(1));
    CHECK(analyze_matrix(RatMatrix::zero(2)).jump.value() == ExtNat(2));
    CHECK(analyze_matrix(j3).index.value() == ExtInt(0));
    CHECK(analyze_matrix(j2_plus_two).index.value() == ExtInt(0));
    SUBCASE("jump vanishes exactly at stability") {
        for (const RatMatrix& t : {j3, j2_plus_two, invertible, RatMatrix::zero(2)}) {
            const InvariantReport r = analyze_matrix(t);
            CHECK((r.jump.value() == ExtNat(0)) == (r.dis == r.m_t));
        }
    }
}

TEST_CASE("classification flags") {
    const ClassificationFlags f = analyze_matrix(invertible).flags;
    CHECK(f.semi_regular);
    CHECK(f.fredholm);
    CHECK(f.drazin_invertible);
    CHECK_FALSE(f.nilpotent);
    const ClassificationFlags n = analyze_matrix(j3).flags;
    CHECK(n.nilpotent);
    CHECK_FALSE(n.semi_regular);
    CHECK(n.quasi_fredholm);
    SUBCASE("flag implications") {
        for (const RatMatrix& t : {j3, j2_plus_two, invertible}) {
            const ClassificationFlags g = analyze_matrix(t).flags;
            if (g.fredholm) {
                CHECK(g.upper_semi_fredholm);
                CHECK(g.lower_semi_fredholm);
            }
            if (g.b_fredholm) {
                CHECK(g.upper_semi_b_fredholm);
                CHECK(g.lower_semi_b_fredholm);
            }
        }
    }
}

TEST_CASE("power dimension closed forms") {
    const InvariantReport r = analyze_matrix(j3);
    CHECK(predicted_power_dims(r, 2).alpha_n == ExtNat(2));
    CHECK(predicted_power_dims(r, 5).alpha_n == ExtNat(3));
    CHECK(kernel(matrix_power(j3, 2)).dim() == 2);
    CHECK(kernel(matrix_power(j3, 5)).dim() == 3);
    const InvariantReport ri = analyze_matrix(invertible);
    CHECK(predicted_power_dims(ri, 7).alpha_n == ExtNat(0));
    CHECK(predicted_power_dims(ri, 7).beta_n == ExtNat(0));
}

TEST_CASE("transpose duality") {
    for (const RatMatrix& t : {j3, j2_plus_two, RatMatrix::zero(2)}) {
        const InvariantReport r = analyze_matrix(t);
        const InvariantReport d = analyze_matrix(dual(t));
        CHECK(r.dis == d.dis);
        CHECK(r.alpha == d.beta);
        CHECK(r.beta == d.alpha);
    }
}

// With nilpotent blocks of two different sizes the alpha sequence drops
// twice: the first drop (v) sees the small block, stabilization (dis) the
// large one. Pinned so the boundary of the two-valued closed forms stays
// visible.
TEST_CASE("mixed block sizes separate v from dis") {
    const RatMatrix mixed = block_diag({RatMatrix::zero(1), RatMatrix::jordan_block(2)});
    const InvariantReport r = analyze_matrix(mixed);
    CHECK(r.dis == ExtNat(2));
    CHECK(r.v == ExtNat(1));
    CHECK(r.jump.value() == ExtNat(2));
    CHECK(r.alpha == EcSeq({ExtNat(2), ExtNat(1), ExtNat(0)}));
    CHECK(r.v == r.alpha.first_drop());
}

TEST_CASE("semi-regular iff kernel survives the stable range") {
    for (const RatMatrix& t :
         {j3, j2_plus_two, invertible, block_diag({RatMatrix::zero(1), invertible})}) {
        const InvariantReport r = analyze_matrix(t);
        const IterLattice lat = iterate(t);
        const bool contained =
            lat.range_at(r.dis.finite_value()).contains(lat.kernel_at(1));
        CHECK(r.flags.semi_regular == contained);
    }
}
