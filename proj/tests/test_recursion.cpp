#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "unirec/recursion.hpp"
#include "unirec/toolkit.hpp"

using namespace unirec;
using unirec::testing::random_a_levels;
using unirec::testing::random_unit_vector;
using unirec::testing::rotation2;

namespace {

double vector_difference(const ComplexVector& a, const ComplexVector& b) {
    EXPECT_EQ(a.size(), b.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

// The A^(2) of the n = 3 example: (cos g, sin g e^{i d}).
ComplexVector spherical2(double gamma, double delta) {
    return {std::cos(gamma), std::polar(std::sin(gamma), delta)};
}

// Block formula [[I - (1-c)|u><u|, s|u>], [-s<u|, c]] written out entry by
// entry for a 2-vector, independent of the library's factor builder.
ComplexMatrix hand_factor3(double theta, const ComplexVector& u) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double k = 1.0 - c;
    return {{1.0 - k * std::norm(u[0]), -k * u[0] * std::conj(u[1]), s * u[0]},
            {-k * u[1] * std::conj(u[0]), 1.0 - k * std::norm(u[1]), s * u[1]},
            {-s * std::conj(u[0]), -s * std::conj(u[1]), c}};
}

ComplexMatrix hand_embed_rotation(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {{c, s, 0.0}, {-s, c, 0.0}, {0.0, 0.0, 1.0}};
}

} // namespace

TEST(BFromA, LevelOneGivesMinusOne) {
    const auto b = b_from_a(ComplexMatrix::identity(1), {1.0});
    EXPECT_EQ(b, ComplexVector({-1.0}));
}

TEST(BFromA, IdentityNegates) {
    const auto b = b_from_a(ComplexMatrix::identity(2), {0.0, kI});
    EXPECT_LE(vector_difference(b, {0.0, -kI}), 0.0);
}

TEST(BFromA, RotationCaseMatchesTwoByTwoRelation) {
    // B = -R2(-theta) A at (theta, gamma, delta) = (0.3, 0.7, 1.1).
    const double theta = 0.3;
    const ComplexVector a = spherical2(0.7, 1.1);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const ComplexVector expected{-(c * a[0] - s * a[1]), -(s * a[0] + c * a[1])};
    EXPECT_LE(vector_difference(b_from_a(rotation2(theta), a), expected), 1e-15);
}

TEST(BFromA, Errors) {
    EXPECT_THROW(b_from_a(ComplexMatrix::identity(2), {1.0}), DimensionError);
    EXPECT_THROW(b_from_a(ComplexMatrix::identity(2), {1.0, 1.0}), DomainError);
    EXPECT_THROW(b_from_a(ComplexMatrix{{2.0, 0.0}, {0.0, 1.0}}, {1.0, 0.0}), NotUnitaryError);
}

TEST(AFromB, Examples) {
    EXPECT_EQ(a_from_b(ComplexMatrix::identity(1), {-1.0}), ComplexVector({1.0}));
    const ComplexMatrix v{{kI, 0.0}, {0.0, -kI}};
    EXPECT_LE(vector_difference(a_from_b(v, {1.0, 0.0}), {-kI, 0.0}), 0.0);
}

TEST(AFromB, InvertsBFromA) {
    std::mt19937_64 rng(41);
    for (std::size_t m = 1; m <= 6; ++m) {
        for (int trial = 0; trial < 10; ++trial) {
            const ComplexMatrix v = haar_unitary(m, rng());
            const ComplexVector a = random_unit_vector(rng, m);
            EXPECT_LE(vector_difference(a_from_b(v, b_from_a(v, a)), a), 1e-14);
        }
    }
}

TEST(MixedForm, LevelOneIsRotation) {
    for (double theta : {0.0, 0.3, 1.2, -2.0}) {
        EXPECT_LE(max_abs_difference(mixed_form(ComplexMatrix::identity(1), theta, {1.0}), rotation2(theta)), 1e-15);
    }
}

TEST(MixedForm, ZeroAngleIsBlockDiagonal) {
    std::mt19937_64 rng(1);
    const ComplexMatrix v = haar_unitary(3, 17);
    const ComplexVector a = random_unit_vector(rng, 3);
    EXPECT_LE(max_abs_difference(mixed_form(v, 0.0, a), embed_factor(v, 4)), 0.0);
}

TEST(MixedForm, MatchesStepAAtReferencePoint) {
    const ComplexMatrix v = rotation2(0.3);
    const ComplexVector a = spherical2(0.7, 1.1);
    EXPECT_LE(max_abs_difference(mixed_form(v, 0.5, a), step_a(v, 0.5, a)), 1e-13);
}

TEST(MixedForm, RejectsNonUnitaryPrevious) {
    EXPECT_THROW(mixed_form(ComplexMatrix{{1.1}}, 0.2, {1.0}), NotUnitaryError);
}

TEST(AFactorBlock, Examples) {
    for (double theta : {0.4, 1.0, 2.0}) {
        EXPECT_LE(max_abs_difference(a_factor_block(theta, {1.0}), rotation2(theta)), 1e-15);
    }
    std::mt19937_64 rng(3);
    EXPECT_LE(max_abs_difference(a_factor_block(0.0, random_unit_vector(rng, 4)), ComplexMatrix::identity(5)), 0.0);

    // a = (0, 1), theta = pi/2: I - |a><a| = diag(1, 0), s|a> = (0, 1)^T,
    // -s<a| = (0, -1), c = 0.
    const ComplexMatrix expected{{1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, -1.0, 0.0}};
    EXPECT_LE(max_abs_difference(a_factor_block(std::numbers::pi / 2, {0.0, 1.0}), expected), 1e-15);
}

TEST(AFactorBlock, UnitaryWithUnitDeterminant) {
    std::mt19937_64 rng(5);
    for (std::size_t j = 1; j <= 12; ++j) {
        const auto block = a_factor_block(unirec::testing::random_angle(rng), random_unit_vector(rng, j));
        EXPECT_LE(unitarity_deviation(block), 1e-13);
        EXPECT_LE(std::abs(determinant(block) - 1.0), 1e-12);
    }
}

TEST(AFactorBlock, RejectsNonUnitVector) {
    EXPECT_THROW(a_factor_block(0.1, {0.5, 0.5}), DomainError);
}

TEST(BFactorBlock, Examples) {
    EXPECT_LE(max_abs_difference(b_factor_block(0.8, {-1.0}), rotation2(0.8)), 1e-15);
    EXPECT_LE(max_abs_difference(b_factor_block(0.0, {0.0, kI}), ComplexMatrix::identity(3)), 0.0);
}

TEST(BFactorBlock, NegatedVectorGivesAFactor) {
    std::mt19937_64 rng(8);
    for (std::size_t j = 1; j <= 6; ++j) {
        const double theta = unirec::testing::random_angle(rng);
        const ComplexVector a = random_unit_vector(rng, j);
        EXPECT_LE(max_abs_difference(b_factor_block(theta, -a), a_factor_block(theta, a)), 1e-16);
        const auto block = b_factor_block(theta, a);
        EXPECT_LE(unitarity_deviation(block), 1e-13);
        EXPECT_LE(std::abs(determinant(block) - 1.0), 1e-12);
    }
}

TEST(EmbedFactor, Examples) {
    const ComplexMatrix r = rotation2(0.6);
    EXPECT_EQ(embed_factor(r, 2), r);
    EXPECT_EQ(embed_factor(ComplexMatrix::identity(2), 5), ComplexMatrix::identity(5));
    EXPECT_LE(max_abs_difference(embed_factor(r, 3), hand_embed_rotation(0.6)), 0.0);
    EXPECT_THROW(embed_factor(ComplexMatrix::identity(4), 3), DimensionError);
}

TEST(StepA, Examples) {
    EXPECT_LE(max_abs_difference(step_a(ComplexMatrix::identity(1), 0.9, {1.0}), rotation2(0.9)), 1e-15);
    const ComplexMatrix v = haar_unitary(3, 4);
    EXPECT_LE(max_abs_difference(step_a(v, 0.0, {0.0, 1.0, 0.0}), embed_factor(v, 4)), 1e-16);
}

TEST(StepA, AgreesWithMixedFormAtNFour) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix v = haar_unitary(3, rng());
        const ComplexVector a = random_unit_vector(rng, 3);
        const double theta = unirec::testing::random_angle(rng);
        EXPECT_LE(max_abs_difference(step_a(v, theta, a), mixed_form(v, theta, a)), 1e-13);
    }
}

TEST(StepB, Examples) {
    EXPECT_LE(max_abs_difference(step_b(ComplexMatrix::identity(1), 0.9, {-1.0}), rotation2(0.9)), 1e-15);
    const ComplexMatrix v = haar_unitary(2, 9);
    EXPECT_LE(max_abs_difference(step_b(v, 0.0, {kI, 0.0}), embed_factor(v, 3)), 1e-16);
}

TEST(StepB, PairedWithStepAAtNFive) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix v = haar_unitary(4, rng());
        const ComplexVector a = random_unit_vector(rng, 4);
        const double theta = unirec::testing::random_angle(rng);
        EXPECT_LE(max_abs_difference(step_b(v, theta, b_from_a(v, a)), step_a(v, theta, a)), 1e-13);
    }
}

TEST(ComposeA, TwoByTwoIsRotation) {
    for (double theta : {0.0, 0.3, 1.4, 3.0}) {
        const std::vector<FactorSpec> levels{{1, theta, {1.0}, FactorKind::A}};
        EXPECT_LE(max_abs_difference(compose_a(levels, 2), rotation2(theta)), 1e-15);
    }
}

TEST(ComposeA, ZeroAnglesGiveIdentity) {
    std::mt19937_64 rng(2);
    auto levels = random_a_levels(rng, 7);
    for (auto& l : levels) l.theta = 0.0;
    EXPECT_EQ(compose_a(levels, 7), ComplexMatrix::identity(7));
}

TEST(ComposeA, ThreeByThreePureForm) {
    // (theta2, theta3, gamma, delta) = (0.3, 0.5, 0.7, 1.1)
    const ComplexVector a2 = spherical2(0.7, 1.1);
    const ComplexMatrix pure = matmul(hand_factor3(0.5, a2), hand_embed_rotation(0.3));
    const std::vector<FactorSpec> levels{{1, 0.3, {1.0}, FactorKind::A}, {2, 0.5, a2, FactorKind::A}};
    const ComplexMatrix composed = compose_a(levels, 3);
    EXPECT_LE(max_abs_difference(composed, pure), 1e-13);
    // Chain of mixed forms.
    const ComplexMatrix chain = mixed_form(mixed_form(ComplexMatrix::identity(1), 0.3, {1.0}), 0.5, a2);
    EXPECT_LE(max_abs_difference(composed, chain), 1e-13);
}

TEST(ComposeA, Errors) {
    std::mt19937_64 rng(4);
    auto levels = random_a_levels(rng, 4);
    EXPECT_THROW(compose_a(levels, 5), DimensionError);
    auto bad_length = levels;
    bad_length[1].vector = random_unit_vector(rng, 3);
    EXPECT_THROW(compose_a(bad_length, 4), DimensionError);
    auto bad_kind = levels;
    bad_kind[0].kind = FactorKind::B;
    EXPECT_THROW(compose_a(bad_kind, 4), DomainError);
}

TEST(ComposeB, Examples) {
    const std::vector<FactorSpec> two{{1, 0.4, {-1.0}, FactorKind::B}};
    EXPECT_LE(max_abs_difference(compose_b(two, 2), rotation2(0.4)), 1e-15);
    std::mt19937_64 rng(6);
    auto levels = paired_b_levels(random_a_levels(rng, 5), 5);
    for (auto& l : levels) l.theta = 0.0;
    EXPECT_EQ(compose_b(levels, 5), ComplexMatrix::identity(5));
}

TEST(ComposeB, PairedLevelsMatchComposeA) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a_levels = random_a_levels(rng, 4);
        EXPECT_LE(max_abs_difference(compose_b(paired_b_levels(a_levels, 4), 4), compose_a(a_levels, 4)), 1e-12);
    }
}

TEST(FactorConjugation, Examples) {
    const auto [lhs, rhs] = factor_conjugation(1, 4, ComplexMatrix::identity(1), 0.7, {1.0});
    EXPECT_LE(max_abs_difference(lhs, embed_factor(rotation2(0.7), 4)), 1e-15);
    EXPECT_LE(max_abs_difference(lhs, rhs), 1e-15);

    std::mt19937_64 rng(30);
    const auto [id_l, id_r] = factor_conjugation(3, 6, haar_unitary(3, 2), 0.0, random_unit_vector(rng, 3));
    EXPECT_LE(max_abs_difference(id_l, ComplexMatrix::identity(6)), 0.0);
    EXPECT_LE(max_abs_difference(id_r, ComplexMatrix::identity(6)), 1e-15);
}

TEST(FactorConjugation, RandomLevelTwoOfFour) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const auto [lhs, rhs] = factor_conjugation(2, 4, haar_unitary(2, rng()), unirec::testing::random_angle(rng),
                                                   random_unit_vector(rng, 2));
        EXPECT_LE(max_abs_difference(lhs, rhs), 1e-13);
    }
}

TEST(FactorConjugation, Errors) {
    EXPECT_THROW(factor_conjugation(0, 3, ComplexMatrix::identity(1), 0.1, {1.0}), DimensionError);
    EXPECT_THROW(factor_conjugation(2, 3, ComplexMatrix::identity(1), 0.1, {1.0}), DimensionError);
}

TEST(ComposeFull, OneByOne) {
    const std::vector<double> alpha{0.4};
    const std::vector<double> beta{-1.3};
    const auto x = compose_full(alpha, beta, {});
    EXPECT_LE(std::abs(x(0, 0) - std::polar(1.0, 0.4 - 1.3)), 1e-16);
}

TEST(ComposeFull, ZeroPhasesGiveComposeA) {
    std::mt19937_64 rng(50);
    const auto levels = random_a_levels(rng, 5);
    const std::vector<double> zeros(5, 0.0);
    EXPECT_LE(max_abs_difference(compose_full(zeros, zeros, levels), compose_a(levels, 5)), 0.0);
}

TEST(ComposeFull, ConstantShiftBetweenPhasesIsInvisible) {
    std::mt19937_64 rng(51);
    const auto levels = random_a_levels(rng, 4);
    std::vector<double> alpha(4), beta(4);
    for (auto& x : alpha) x = unirec::testing::random_angle(rng);
    for (auto& x : beta) x = unirec::testing::random_angle(rng);
    auto alpha_shift = alpha;
    auto beta_shift = beta;
    for (auto& x : alpha_shift) x += 0.4;
    for (auto& x : beta_shift) x -= 0.4;
    EXPECT_LE(max_abs_difference(compose_full(alpha, beta, levels), compose_full(alpha_shift, beta_shift, levels)),
              1e-14);
}

TEST(ComposeFull, Errors) {
    const std::vector<double> two(2, 0.0);
    const std::vector<double> three(3, 0.0);
    EXPECT_THROW(compose_full(two, three, {}), DimensionError);
    EXPECT_THROW(compose_full(three, three, {}), DimensionError);
}

// Properties over random inputs.

TEST(RecursionProperties, ComposeAIsSpecialUnitary) {
    std::mt19937_64 rng(100);
    for (std::size_t n : {2u, 3u, 5u, 8u, 16u, 33u, 64u}) {
        const auto v = compose_a(random_a_levels(rng, n), n);
        EXPECT_LE(unitarity_deviation(v), 1e-12 * static_cast<double>(n)) << "n = " << n;
        if (n <= 16) {
            EXPECT_LE(std::abs(determinant(v) - 1.0), 1e-11) << "n = " << n;
        }
    }
}

TEST(RecursionProperties, FormEquivalence) {
    std::mt19937_64 rng(101);
    for (std::size_t n = 2; n <= 16; ++n) {
        const ComplexMatrix v = compose_a(random_a_levels(rng, n - 1), n - 1);
        const ComplexVector a = random_unit_vector(rng, n - 1);
        const double theta = unirec::testing::random_angle(rng);
        const auto mixed = mixed_form(v, theta, a);
        EXPECT_LE(max_abs_difference(mixed, step_a(v, theta, a)), 1e-13) << "n = " << n;
        EXPECT_LE(max_abs_difference(mixed, step_b(v, theta, b_from_a(v, a))), 1e-13) << "n = " << n;
    }
}

TEST(RecursionProperties, ProductEquivalence) {
    std::mt19937_64 rng(102);
    for (std::size_t n = 1; n <= 16; ++n) {
        const auto levels = random_a_levels(rng, n);
        ComplexMatrix iterated = ComplexMatrix::identity(1);
        for (const auto& l : levels) iterated = step_a(iterated, l.theta, l.vector);
        const auto composed = compose_a(levels, n);
        EXPECT_LE(max_abs_difference(composed, iterated), 1e-12) << "n = " << n;
        EXPECT_LE(max_abs_difference(composed, compose_b(paired_b_levels(levels, n), n)), 1e-12) << "n = " << n;
    }
}

TEST(RecursionProperties, BFromAPreservesNorm) {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 1 + rng() % 10;
        const auto b = b_from_a(haar_unitary(m, rng()), random_unit_vector(rng, m));
        EXPECT_NEAR(b.norm(), 1.0, 1e-12);
    }
}
