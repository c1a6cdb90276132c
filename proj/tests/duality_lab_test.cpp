#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kframe/duality_lab.hpp"
#include "oracles.hpp"

using namespace kframe;

namespace {

const double kHalfRoot2 = std::numbers::sqrt2 / 2.0;

Matrix w1_canonical_samples() {
    Matrix s(2, 3);
    s << kHalfRoot2, kHalfRoot2, 0.0, 0.0, 0.0, 0.0;
    return s;
}

FrameFixture orthonormal_basis(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    return {SampledFrame(make_space(MeasureSpace::uniform(d)), Matrix(Matrix::Identity(n, n))),
            KOperator::identity(d)};
}

// Q = F~ + G_alpha for Fixture W1 with alpha = (1, -1, 0)/sqrt2 and h = e2.
SampledFrame w1_alternative() {
    const FrameFixture w1 = fixture_w1();
    Vector alpha(3);
    alpha << kHalfRoot2, -kHalfRoot2, 0.0;
    return alternative_dual_from(w1.frame, w1.k, alpha, Vector::Unit(2, 1));
}

} // namespace

TEST_CASE("canonical dual examples") {
    const FrameFixture onb = orthonormal_basis(3);
    CHECK(frames_equal(canonical_dual(onb.frame, onb.k), onb.frame, 1e-15));

    const FrameFixture w1p = fixture_w1_prime();
    const SampledFrame dual = canonical_dual(w1p.frame, w1p.k);
    CHECK((dual.samples() - w1_canonical_samples()).norm() < 1e-15);

    const FrameFixture w1 = fixture_w1();
    CHECK(frames_equal(canonical_dual(w1.frame, w1.k), w1.frame, 1e-15));

    CHECK_THROWS_AS(canonical_dual(w1.frame, KOperator::identity(2)), HypothesisViolation);
}

TEST_CASE("dual verification examples") {
    const FrameFixture w1p = fixture_w1_prime();
    const SampledFrame dual = canonical_dual(w1p.frame, w1p.k);
    const DualityReport rep = is_dual_k_bessel(dual, w1p.frame, w1p.k);
    CHECK(rep.is_dual);
    CHECK(rep.duality_residual < 1e-15);
    CHECK(rep.analysis_norm_of_g == doctest::Approx(1.0));

    // Hand sum: sum_i <f, F~_i> F_i = (2 f1, 0).
    Vector f(2);
    f << Scalar(0.7, 0.2), Scalar(-1.1, 3.0);
    const Matrix tg = analysis(dual).mat();
    const Vector recon = oracle::weighted_sum(w1p.frame.samples(), tg * f, {1.0, 1.0, 1.0});
    CHECK(std::abs(recon(0) - 2.0 * f(0)) < 1e-15);
    CHECK(std::abs(recon(1)) == 0.0);

    const SampledFrame zero(w1p.frame.space(), Matrix(Matrix::Zero(2, 3)));
    CHECK_FALSE(is_dual_k_bessel(zero, w1p.frame, w1p.k).is_dual);

    const SampledFrame other(make_space(MeasureSpace::uniform(4)), Matrix(Matrix::Zero(2, 4)));
    CHECK_THROWS_AS(is_dual_k_bessel(other, w1p.frame, w1p.k), ContractViolation);
}

TEST_CASE("residual operator examples") {
    const FrameFixture w1 = fixture_w1();
    const SampledFrame canon = canonical_dual(w1.frame, w1.k);
    CHECK(residual_operator(canon, w1.frame, w1.k).phi.norm() == 0.0);

    const SampledFrame q = w1_alternative();
    const Matrix phi = residual_operator(q, w1.frame, w1.k).phi;
    Matrix expected = Matrix::Zero(3, 2);
    expected(0, 1) = kHalfRoot2;
    expected(1, 1) = -kHalfRoot2;
    CHECK((phi - expected).norm() < 1e-15);
    CHECK((synthesis(w1.frame).mat() * phi).norm() < 1e-15);

    CHECK(frames_equal(build_dual_from_phi(w1.frame, w1.k, Matrix::Zero(3, 2)), canon, 1e-15));
    CHECK(frames_equal(build_dual_from_phi(w1.frame, w1.k, phi), q, 1e-15));

    Matrix not_in_kernel = Matrix::Zero(3, 2);
    not_in_kernel(0, 0) = 1.0;
    CHECK_THROWS_AS(build_dual_from_phi(w1.frame, w1.k, not_in_kernel), HypothesisViolation);

    const SampledFrame zero(w1.frame.space(), Matrix(Matrix::Zero(2, 3)));
    CHECK_THROWS_AS(residual_operator(zero, w1.frame, w1.k), HypothesisViolation);
}

TEST_CASE("minimality examples") {
    const FrameFixture w1 = fixture_w1();
    CHECK(minimality_check(w1.frame, w1.k, 0, 1));

    const SampledFrame canon = canonical_dual(w1.frame, w1.k);
    const SampledFrame q = w1_alternative();
    const Matrix tq = analysis(q).mat();
    const Matrix tc = analysis(canon).mat();
    const Matrix phi = tq - tc;
    CHECK(oracle::spectral_norm(tc) <= oracle::spectral_norm(tq) + 1e-12);
    Rng rng(4);
    for (int probe = 0; probe < 10; ++probe) {
        const Vector f = rng.complex_gaussian(2);
        const double lhs = (tq * f).squaredNorm();
        const double rhs = (tc * f).squaredNorm() + (phi * f).squaredNorm();
        CHECK(std::abs(lhs - rhs) <= 1e-14 * (1.0 + f.squaredNorm()));
    }
    CHECK(minimality_check(w1.frame, w1.k, 25, 17));
}

TEST_CASE("canonical characterization examples") {
    const FrameFixture w1 = fixture_w1();
    const SampledFrame canon = canonical_dual(w1.frame, w1.k);
    CHECK(canonical_characterization(canon, w1.frame, w1.k, 50, 3));
    CHECK(canonical_characterization(canon, w1.frame, w1.k, 0, 3));

    const SampledFrame q = w1_alternative();
    // T_G^* T_G - T_G^* T_F~ = phi^* phi = diag(0, 1); |T_G| = 1.
    CHECK(characterization_residual(q, canon) == doctest::Approx(0.5));
    CHECK_FALSE(canonical_characterization(q, w1.frame, w1.k, 50, 3));

    const SampledFrame zero(w1.frame.space(), Matrix(Matrix::Zero(2, 3)));
    CHECK_THROWS_AS(canonical_characterization(zero, w1.frame, w1.k, 5, 3), HypothesisViolation);
}

TEST_CASE("uniqueness and alternative duals") {
    const FrameFixture onb = orthonormal_basis(3);
    CHECK(uniqueness_test(onb.frame, onb.k));
    CHECK_THROWS_AS(construct_alternative_dual(onb.frame, onb.k, 1), Infeasible);

    const FrameFixture w1 = fixture_w1();
    CHECK_FALSE(uniqueness_test(w1.frame, w1.k));

    const SampledFrame q = w1_alternative();
    Matrix expected = w1_canonical_samples();
    expected(1, 0) = kHalfRoot2;
    expected(1, 1) = -kHalfRoot2;
    CHECK((q.samples() - expected).norm() < 1e-15);
    CHECK(is_dual_k_bessel(q, w1.frame, w1.k).is_dual);

    Vector alpha(3);
    alpha << -3.0, 3.0, 0.0;
    const SampledFrame scaled = alternative_dual_from(w1.frame, w1.k, alpha, Vector::Unit(2, 1));
    CHECK(is_dual_k_bessel(scaled, w1.frame, w1.k).is_dual);

    Vector bad_alpha(3);
    bad_alpha << 1.0, 1.0, 0.0;
    CHECK_THROWS_AS(alternative_dual_from(w1.frame, w1.k, bad_alpha, Vector::Unit(2, 1)),
                    HypothesisViolation);

    const SampledFrame seeded = construct_alternative_dual(w1.frame, w1.k, 12);
    CHECK(is_dual_k_bessel(seeded, w1.frame, w1.k).is_dual);
    CHECK(max_sample_distance(seeded, canonical_dual(w1.frame, w1.k)) > 1e-6);
}

TEST_CASE("complement parseval examples") {
    const FrameFixture w1p = fixture_w1_prime();
    CHECK(canonical_energy(w1p.frame, w1p.k, Vector::Zero(2)) == 0.0);
    CHECK(canonical_energy(w1p.frame, w1p.k, Vector::Unit(2, 0)) == doctest::Approx(1.0));
    CHECK(canonical_energy(w1p.frame, w1p.k, Vector::Unit(2, 1)) == 0.0);
    CHECK(complement_parseval_check(w1p.frame, w1p.k, 30, 8));
}

TEST_CASE("K-dagger-K frame examples") {
    const FrameFixture onb = orthonormal_basis(4);
    CHECK(kdaggerk_frame_check(onb.frame, onb.k));

    const FrameFixture w1p = fixture_w1_prime();
    const SampledFrame dual = canonical_dual(w1p.frame, w1p.k);
    Matrix p = Matrix::Zero(2, 2);
    p(0, 0) = 1.0;
    CHECK((frame_operator(dual).mat() - p).norm() < 1e-15);
    CHECK((frame_operator(dual.transformed(w1p.k.mat())).mat() - 4.0 * p).norm() < 1e-14);
    const KDaggerKReport rep = kdaggerk_report(w1p.frame, w1p.k);
    CHECK(rep.holds);
    CHECK(rep.dual_residual < 1e-15);
    CHECK(rep.regen_residual < 1e-14);
}

TEST_CASE("independence transfer examples") {
    const FrameFixture onb = orthonormal_basis(3);
    const IndependenceTransfer a = l2_independence_transfer(onb.frame, onb.k);
    CHECK(a.f_indep);
    CHECK(a.dual_indep);
    REQUIRE(a.reconstruction_holds.has_value());
    CHECK(*a.reconstruction_holds);

    const FrameFixture w1 = fixture_w1();
    const IndependenceTransfer b = l2_independence_transfer(w1.frame, w1.k);
    CHECK_FALSE(b.f_indep);
    CHECK_FALSE(b.dual_indep);
    CHECK_FALSE(b.reconstruction_holds.has_value());

    const KOperator k = generate_random_k(4, 3, 21);
    const SampledFrame f = generate_parseval_k_frame(k, 3, make_space(MeasureSpace({0.5, 1.5, 3.0})), 8);
    const IndependenceTransfer c = l2_independence_transfer(f, k);
    CHECK(c.f_indep);
    CHECK(c.dual_indep);
    REQUIRE(c.reconstruction_holds.has_value());
    CHECK(*c.reconstruction_holds);
}

TEST_CASE("unique dual transfer examples") {
    const FrameFixture onb = orthonormal_basis(3);
    CHECK(unique_dual_transfer(onb.frame, onb.k));

    const KOperator k = generate_random_k(5, 5, 2);
    const SampledFrame f = generate_parseval_k_frame(k, 5, make_space(MeasureSpace::uniform(5, 0.4)), 3);
    CHECK(uniqueness_test(f, k));
    CHECK(unique_dual_transfer(f, k));
    CHECK(frames_equal(dual_by_synthesis_solve(f, k), canonical_dual(f, k)));

    const FrameFixture w1 = fixture_w1();
    CHECK_THROWS_AS(unique_dual_transfer(w1.frame, w1.k), HypothesisViolation);
}

TEST_CASE("pythagorean decomposition examples") {
    const FrameFixture w1p = fixture_w1_prime();
    const HVector f(Vector::Unit(2, 0));
    Vector c(3);
    c << std::numbers::sqrt2, 0.0, 0.0;
    const PythagoreanTerms t = pythagorean_decomposition(w1p.frame, w1p.k, f, L2Coefficients(w1p.frame.space(), c));
    CHECK(std::abs(t.total - 2.0) <= 1e-12);
    CHECK(std::abs(t.residual - 1.0) <= 1e-12);
    CHECK(std::abs(t.canonical - 1.0) <= 1e-12);
    CHECK(t.defect <= 1e-12);

    const Vector canon_c = analysis(canonical_dual(w1p.frame, w1p.k)).mat() * f.vec();
    const PythagoreanTerms exact =
        pythagorean_decomposition(w1p.frame, w1p.k, f, L2Coefficients(w1p.frame.space(), canon_c));
    CHECK(exact.residual == 0.0);
    CHECK(exact.total == doctest::Approx(exact.canonical));

    // Kernel perturbation k = (0, 0, 2i): total = canonical + |k|^2.
    Vector kernel = Vector::Zero(3);
    kernel(2) = Scalar(0.0, 2.0);
    const PythagoreanTerms perturbed = pythagorean_decomposition(
        w1p.frame, w1p.k, f, L2Coefficients(w1p.frame.space(), canon_c + kernel));
    CHECK(std::abs(perturbed.total - (perturbed.canonical + 4.0)) <= 1e-12);
    CHECK(std::abs(perturbed.cross_term) <= 1e-12);

    Vector wrong(3);
    wrong << 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(
        pythagorean_decomposition(w1p.frame, w1p.k, f, L2Coefficients(w1p.frame.space(), wrong)),
        InvalidCoefficients);
}

TEST_CASE("dual coefficient family") {
    const FrameFixture w1p = fixture_w1_prime();
    const HVector f(Vector::Unit(2, 0));
    const auto one = dual_coefficient_family(w1p.frame, w1p.k, f, 1, 5);
    REQUIRE(one.size() == 1);
    CHECK((one[0].values() - analysis(canonical_dual(w1p.frame, w1p.k)).mat() * f.vec()).norm() == 0.0);

    for (const L2Coefficients& c : dual_coefficient_family(w1p.frame, w1p.k, f, 10, 5)) {
        CHECK_NOTHROW(pythagorean_decomposition(w1p.frame, w1p.k, f, c));
    }

    const FrameFixture w1 = fixture_w1();
    const Matrix basis = synthesis_kernel_basis(w1.frame);
    REQUIRE(basis.cols() == 2);
    Matrix span(3, 2);
    span << 1.0, 0.0, -1.0, 0.0, 0.0, 1.0;
    CHECK((oracle::range_projector(basis) - oracle::range_projector(span)).norm() < 1e-14);
}
