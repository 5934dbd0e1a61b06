#include "opkit/chains.hpp"

#include <doctest.h>

using namespace opkit;

namespace {

EcSeq seq(std::initializer_list<std::uint64_t> xs) {
    std::vector<ExtNat> v;
    for (auto x : xs) v.emplace_back(x);
    return EcSeq(std::move(v));
}

const RatMatrix j3 = RatMatrix::jordan_block(3);
const RatMatrix j2_plus_two = block_diag({RatMatrix::jordan_block(2), RatMatrix{{2}}});

} // namespace

TEST_CASE("lattice stabilization") {
    SUBCASE("identity") {
        const IterLattice lat = iterate(RatMatrix::identity(3));
        CHECK(lat.stab == 0);
        CHECK(lat.kernels.size() == 1);
        CHECK(lat.kernels[0] == RatSubspace::zero(3));
        CHECK(lat.ranges[0] == RatSubspace::full(3));
    }
    SUBCASE("nilpotent jordan block") {
        const IterLattice lat = iterate(j3);
        CHECK(lat.stab == 3);
        for (std::size_t n = 0; n <= 3; ++n) {
            CHECK(lat.ranges[n].dim() == 3 - n);
            CHECK(lat.kernels[n].dim() == n);
        }
    }
    SUBCASE("zero matrix") {
        const IterLattice lat = iterate(RatMatrix::zero(2));
        CHECK(lat.stab == 1);
        CHECK(lat.ranges[0].dim() == 2);
        CHECK(lat.ranges[1].dim() == 0);
        CHECK(lat.kernels[0].dim() == 0);
        CHECK(lat.kernels[1].dim() == 2);
    }
    SUBCASE("chains are nested") {
        const IterLattice lat = iterate(j2_plus_two);
        for (std::size_t n = 0; n + 1 <= lat.stab; ++n) {
            CHECK(lat.kernels[n + 1].contains(lat.kernels[n]));
            CHECK(lat.ranges[n].contains(lat.ranges[n + 1]));
        }
    }
    CHECK_THROWS_AS(iterate(RatMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("alpha sequences") {
    CHECK(alpha_seq(iterate(j3)) == seq({1, 1, 1, 0}));
    CHECK(alpha_seq(iterate(RatMatrix::identity(4))) == seq({0}));
    CHECK(alpha_seq(iterate(j2_plus_two)) == seq({1, 1, 0}));
}

TEST_CASE("beta sequences") {
    CHECK(beta_seq(iterate(j3)) == seq({1, 1, 1, 0}));
    CHECK(beta_seq(iterate(RatMatrix::zero(2))) == seq({2, 0}));
    CHECK(beta_seq(iterate(RatMatrix{{1, 1}, {0, 1}})) == seq({0}));
    SUBCASE("alpha equals beta for square matrices") {
        CHECK(alpha_seq(iterate(j2_plus_two)) == beta_seq(iterate(j2_plus_two)));
    }
}

TEST_CASE("k sequences") {
    CHECK(k_seq(iterate(j3)) == std::vector<ExtNat>{ExtNat(0), ExtNat(0), ExtNat(1)});
    CHECK(k_seq(iterate(RatMatrix::zero(2))) == std::vector<ExtNat>{ExtNat(2)});
    CHECK(k_seq(iterate(RatMatrix::identity(2))).empty());
}

TEST_CASE("pairing operator") {
    const RatMatrix j2 = RatMatrix::jordan_block(2);
    SUBCASE("n = 0 degenerates to the power") {
        CHECK(snm_operator(j2, 0, 2) == matrix_power(j2, 2));
    }
    SUBCASE("range codimension sums the beta window") {
        CHECK(codim_image(snm_operator(j2, 1, 1)) == 1);
    }
    SUBCASE("invertible operators have full pairing range") {
        const RatMatrix inv{{1, 1}, {0, 1}};
        CHECK(codim_image(snm_operator(inv, 1, 2)) == 0);
        CHECK(codim_image(snm_operator(inv, 2, 3)) == 0);
    }
    CHECK_THROWS_AS(snm_operator(j2, 1, 0), std::invalid_argument);
}

TEST_CASE("dual realization") {
    const RatMatrix sym{{1, 2}, {2, 5}};
    CHECK(dual(sym) == sym);
    const RatMatrix j3t = dual(j3);
    for (std::size_t i = 0; i + 1 < 3; ++i) CHECK(j3t.at(i + 1, i) == 1);
    CHECK(dual(dual(j2_plus_two)) == j2_plus_two);
}

// Mixed nilpotent block sizes: the smallest block controls when N(T) first
// escapes the range chain while the largest controls stabilization, so the
// alpha sequence takes three values here. The unconditional identities
// still hold.
TEST_CASE("mixed nilpotent block sizes") {
    const RatMatrix mixed = block_diag({RatMatrix::zero(1), RatMatrix::jordan_block(2)});
    const IterLattice lat = iterate(mixed);
    const EcSeq alpha = alpha_seq(lat);
    CHECK(alpha == seq({2, 1, 0}));
    SUBCASE("partial kernel sums") {
        for (std::size_t m = 1; m <= lat.stab + 2; ++m) {
            ExtNat sum(0);
            for (std::size_t k = 0; k < m; ++k) sum = sum + alpha.at(k);
            CHECK(ExtNat(kernel(lat.power_at(m)).dim()) == sum);
        }
    }
    SUBCASE("pairing range codimension") {
        const EcSeq beta = beta_seq(lat);
        for (std::size_t m = 1; m <= 3; ++m)
            for (std::size_t n = 0; n + m <= lat.stab + 2; ++n) {
                ExtNat expected(0);
                for (std::size_t i = n; i < n + m; ++i) expected = expected + beta.at(i);
                CHECK(ExtNat(codim_image(snm_operator(mixed, n, m))) == expected);
            }
    }
    SUBCASE("two blocks of different sizes") {
        const RatMatrix bigger =
            block_diag({RatMatrix::jordan_block(2), RatMatrix::jordan_block(3)});
        CHECK(alpha_seq(iterate(bigger)) == seq({2, 2, 1, 0}));
    }
}

TEST_CASE("kernel-range overlap window") {
    for (const RatMatrix& t : {j3, j2_plus_two, RatMatrix::zero(2)}) {
        const IterLattice lat = iterate(t);
        const EcSeq alpha = alpha_seq(lat);
        for (std::size_t s = 0; s <= lat.stab; ++s) {
            ExtNat window(0);
            for (std::size_t k = s; k < 2 * s; ++k) window = window + alpha.at(k);
            CHECK(ExtNat(subspace_intersect(lat.kernel_at(s), lat.range_at(s)).dim()) == window);
        }
    }
}
