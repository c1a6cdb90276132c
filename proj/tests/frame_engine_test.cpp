#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kframe/frame_engine.hpp"
#include "kframe/random.hpp"
#include "oracles.hpp"

using namespace kframe;

namespace {

const double kHalfRoot2 = std::numbers::sqrt2 / 2.0;

SampledFrame basis_frame(std::size_t d, double scale = 1.0) {
    return SampledFrame(make_space(MeasureSpace::uniform(d)),
                        Matrix(scale * Matrix::Identity(static_cast<Eigen::Index>(d),
                                                        static_cast<Eigen::Index>(d))));
}

SampledFrame mercedes_benz() {
    Matrix s(2, 3);
    for (int i = 0; i < 3; ++i) {
        const double angle = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * i / 3.0;
        s(0, i) = std::cos(angle);
        s(1, i) = std::sin(angle);
    }
    return SampledFrame(make_space(MeasureSpace::uniform(3)), s);
}

std::vector<double> random_weights(std::size_t m, Rng& rng) {
    std::vector<double> w(m);
    for (double& x : w) {
        x = rng.uniform(0.1, 4.0);
    }
    return w;
}

} // namespace

TEST_CASE("analysis and synthesis examples") {
    CHECK((analysis(basis_frame(3)).mat() - Matrix::Identity(3, 3)).norm() == 0.0);
    CHECK((synthesis(basis_frame(3)).mat() - Matrix::Identity(3, 3)).norm() == 0.0);

    const FrameFixture w1 = fixture_w1();
    Vector f(2);
    f << Scalar(0.3, -1.0), Scalar(2.0, 0.5);
    const Vector tf = analysis(w1.frame).mat() * f;
    CHECK(std::abs(tf(0) - f(0) * kHalfRoot2) < 1e-15);
    CHECK(std::abs(tf(1) - f(0) * kHalfRoot2) < 1e-15);
    CHECK(std::abs(tf(2)) == 0.0);

    const SampledFrame doubled = w1.frame.transformed(2.0 * Matrix::Identity(2, 2));
    CHECK((analysis(doubled).mat() - 2.0 * analysis(w1.frame).mat()).norm() == 0.0);

    Vector x(3);
    x << std::numbers::sqrt2, 0.0, 0.0;
    const Vector out = synthesis(fixture_w1_prime().frame).mat() * x;
    CHECK(std::abs(out(0) - 2.0) < 1e-15);
    CHECK(std::abs(out(1)) == 0.0);

    const SampledFrame zero(make_space(MeasureSpace::uniform(3)), Matrix(Matrix::Zero(2, 3)));
    CHECK(synthesis(zero).mat().norm() == 0.0);
}

TEST_CASE("frame operator examples") {
    CHECK((frame_operator(basis_frame(4)).mat() - Matrix::Identity(4, 4)).norm() < 1e-15);
    Matrix w1s = Matrix::Zero(2, 2);
    w1s(0, 0) = 1.0;
    CHECK((frame_operator(fixture_w1().frame).mat() - w1s).norm() < 1e-15);
    CHECK((frame_operator(mercedes_benz()).mat() - 1.5 * Matrix::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("frame bounds examples") {
    const FrameBounds onb = frame_bounds(basis_frame(3));
    CHECK(onb.lower == doctest::Approx(1.0));
    CHECK(onb.upper == doctest::Approx(1.0));
    const FrameBounds mb = frame_bounds(mercedes_benz());
    CHECK(mb.lower == doctest::Approx(1.5));
    CHECK(mb.upper == doctest::Approx(1.5));
    const FrameBounds w1 = frame_bounds(fixture_w1().frame);
    CHECK(w1.lower == 0.0);
    CHECK(w1.upper == doctest::Approx(1.0));
}

TEST_CASE("k_lower_bound examples") {
    CHECK(*k_lower_bound(basis_frame(3), KOperator::identity(3)) == doctest::Approx(1.0));
    const FrameFixture w1 = fixture_w1();
    const auto bound = k_lower_bound(w1.frame, w1.k);
    REQUIRE(bound.has_value());
    CHECK(*bound == doctest::Approx(1.0));
    const double lambda =
        oracle::loewner_infimum(w1.k.mat() * w1.k.adjoint(), frame_operator(w1.frame).mat());
    CHECK(std::abs(1.0 / lambda - *bound) < 1e-9);
    CHECK_FALSE(k_lower_bound(w1.frame, KOperator::identity(2)).has_value());
}

TEST_CASE("classification examples") {
    CHECK(classify(basis_frame(3), KOperator::identity(3)).verdict == FrameVerdict::ParsevalKFrame);
    const FrameFixture w1 = fixture_w1();
    CHECK(classify(w1.frame, w1.k).verdict == FrameVerdict::ParsevalKFrame);
    const FrameFixture w1p = fixture_w1_prime();
    CHECK(classify(w1p.frame, w1p.k).verdict == FrameVerdict::ParsevalKFrame);

    const FrameClassification tight = classify(basis_frame(2, 2.0), KOperator::identity(2));
    CHECK(tight.verdict == FrameVerdict::TightKFrame);
    CHECK(tight.bounds.lower == doctest::Approx(4.0));
    CHECK(tight.bounds.upper == doctest::Approx(4.0));
    CHECK(to_string(tight.verdict) == "tight-K-frame");

    CHECK(classify(w1.frame, KOperator::identity(2)).verdict == FrameVerdict::BesselOnly);
    CHECK(classify(mercedes_benz(), KOperator::identity(2)).verdict == FrameVerdict::TightKFrame);
}

TEST_CASE("l2 independence examples") {
    CHECK(is_l2_independent(basis_frame(3)));
    CHECK_FALSE(is_l2_independent(fixture_w1().frame));
    Matrix two(2, 2);
    two << 1.0, 1.0, 0.0, Scalar(0.0, 1.0);
    CHECK(is_l2_independent(SampledFrame(make_space(MeasureSpace({0.01, 30.0})), two)));
}

TEST_CASE("parseval generator examples") {
    const SampledFrame unitary =
        generate_parseval_k_frame(KOperator::identity(3), 3, make_space(MeasureSpace::uniform(3)), 5);
    CHECK((unitary.samples().adjoint() * unitary.samples() - Matrix::Identity(3, 3)).norm() < 1e-12);

    const FrameFixture w1 = fixture_w1();
    const SampledFrame gen = generate_parseval_k_frame(w1.k, 3, w1.frame.space(), 9);
    Matrix target = Matrix::Zero(2, 2);
    target(0, 0) = 1.0;
    CHECK((frame_operator(gen).mat() - target).norm() <= 1e-12);
    CHECK(classify(gen, w1.k).verdict == FrameVerdict::ParsevalKFrame);

    const KOperator k3 = generate_random_k(4, 3, 1);
    CHECK(k3.rank() == 3);
    CHECK_THROWS_AS(generate_parseval_k_frame(k3, 2, make_space(MeasureSpace::uniform(2)), 1),
                    Infeasible);
    CHECK_THROWS_AS(generate_parseval_k_frame(k3, 4, make_space(MeasureSpace::uniform(5)), 1),
                    ContractViolation);
}

TEST_CASE("random bessel generator examples") {
    const SpaceRef space = make_space(MeasureSpace({0.3, 1.0, 2.0, 5.0}));
    const SampledFrame a = generate_random_bessel(3, 4, space, 42);
    const SampledFrame b = generate_random_bessel(3, 4, space, 42);
    CHECK(a.samples() == b.samples());
    const SampledFrame single = generate_random_bessel(1, 1, make_space(MeasureSpace::uniform(1)), 3);
    CHECK(single.dim() == 1);
    CHECK(std::isfinite(frame_bounds(a).upper));
}

TEST_CASE("adjoint relation and frame inequality on random frames") {
    Rng rng(314);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = rng.uniform_index(1, 8);
        const std::size_t m = rng.uniform_index(1, 24);
        const std::vector<double> w = random_weights(m, rng);
        const SpaceRef space = make_space(MeasureSpace(w));
        const SampledFrame f = generate_random_bessel(d, m, space, rng.next_u64());

        const Vector v = rng.complex_gaussian(d);
        const Vector x = rng.complex_gaussian(m);
        const Vector tv = analysis(f).mat() * v;
        Scalar l2{0.0, 0.0};
        for (std::size_t i = 0; i < m; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            l2 += w[i] * tv(ii) * std::conj(x(ii));
        }
        const Scalar h = (synthesis(f).mat() * x).dot(v);
        CHECK(std::abs(l2 - h) <= 1e-10 * (1.0 + std::abs(l2)));

        const Matrix s = frame_operator(f).mat();
        CHECK((s - oracle::weighted_outer_sum(f.samples(), f.samples(), w)).norm() <=
              1e-12 * (1.0 + s.norm()));
        const FrameBounds b = frame_bounds(f);
        const double energy = oracle::weighted_energy(f.samples(), v, w);
        CHECK(energy <= b.upper * v.squaredNorm() * (1.0 + 1e-9));
        CHECK(energy >= b.lower * v.squaredNorm() * (1.0 - 1e-9) - 1e-12);

        Eigen::SelfAdjointEigenSolver<Matrix> es(s);
        const Vector top = es.eigenvectors().col(static_cast<Eigen::Index>(d) - 1);
        CHECK(std::abs(oracle::weighted_energy(f.samples(), top, w) - b.upper) <=
              1e-9 * (1.0 + b.upper));
    }
}

TEST_CASE("optimal K-lower bound is tight") {
    Rng rng(2718);
    int checked = 0;
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t d = rng.uniform_index(1, 6);
        const std::size_t m = rng.uniform_index(d, 16);
        const SpaceRef space = make_space(MeasureSpace(random_weights(m, rng)));
        const SampledFrame f = generate_random_bessel(d, m, space, rng.next_u64());
        const KOperator k = generate_random_k(d, rng.uniform_index(1, d), rng.next_u64());
        const auto a = k_lower_bound(f, k);
        REQUIRE(a.has_value());
        const Matrix s = frame_operator(f).mat();
        const Matrix kk = k.mat() * k.adjoint();
        for (int probe = 0; probe < 50; ++probe) {
            const Vector v = rng.complex_gaussian(d);
            const double sf = (v.adjoint() * s * v)(0).real();
            const double kf = (k.adjoint() * v).squaredNorm();
            CHECK(*a * kf <= sf * (1.0 + 1e-9) + 1e-12);
        }
        // The maximiser of |K^*f|^2 / <Sf, f> is the top generalized eigenvector.
        Eigen::SelfAdjointEigenSolver<Matrix> es(s);
        const Matrix root_inv = es.operatorInverseSqrt();
        Eigen::SelfAdjointEigenSolver<Matrix> gen(Matrix(root_inv * kk * root_inv));
        const Vector v = root_inv * gen.eigenvectors().col(static_cast<Eigen::Index>(d) - 1);
        const double sf = (v.adjoint() * s * v)(0).real();
        const double kf = (k.adjoint() * v).squaredNorm();
        CHECK((*a * 1.001) * kf > sf);
        ++checked;
    }
    CHECK(checked == 80);
}
