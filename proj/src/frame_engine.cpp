#include "kframe/frame_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kframe/random.hpp"

namespace kframe {

KOperator::KOperator(LinOperator op) : op_(std::move(op)) {
    if (op_.rows() != op_.cols()) {
        throw ContractViolation("KOperator: K must be square");
    }
    const SvdFactorization f = svd(op_.mat());
    rank_ = f.rank;
    norm_ = f.sigma_max;
    adjoint_ = op_.mat().adjoint();
    if (f.rank == 0) {
        pinv_ = Matrix::Zero(op_.mat().cols(), op_.mat().rows());
    } else {
        pinv_ = f.right * f.singulars.cwiseInverse().asDiagonal() * f.left.adjoint();
    }
    range_proj_ = f.left * f.left.adjoint();
    corange_proj_ = f.right * f.right.adjoint();
}

std::string to_string(FrameVerdict v) {
    switch (v) {
    case FrameVerdict::NotBesselInput: return "not-Bessel-input";
    case FrameVerdict::BesselOnly: return "Bessel-only";
    case FrameVerdict::Frame: return "frame";
    case FrameVerdict::KFrame: return "K-frame";
    case FrameVerdict::TightKFrame: return "tight-K-frame";
    case FrameVerdict::ParsevalKFrame: return "Parseval-K-frame";
    }
    return "unknown";
}

LinOperator analysis(const SampledFrame& f) { return LinOperator(f.samples().adjoint()); }

LinOperator synthesis(const SampledFrame& f) {
    const RealVector& mu = f.space()->weight_vector();
    return LinOperator(f.samples() * mu.asDiagonal());
}

LinOperator weighted_synthesis(const SampledFrame& f) {
    const RealVector& root = f.space()->sqrt_weight_vector();
    return LinOperator(f.samples() * root.asDiagonal());
}

LinOperator frame_operator(const SampledFrame& f) {
    const Matrix u = weighted_synthesis(f).mat();
    Matrix s = u * u.adjoint();
    // Symmetrize away the last-bit asymmetry of the product.
    s = 0.5 * (s + s.adjoint()).eval();
    return LinOperator(std::move(s));
}

double analysis_norm(const SampledFrame& f) { return op_norm(weighted_synthesis(f)); }

FrameBounds frame_bounds(const SampledFrame& f) {
    const Matrix s = frame_operator(f).mat();
    FrameBounds b;
    b.upper = std::max(0.0, max_eigenvalue(s));
    if (rank(s) == static_cast<std::size_t>(s.rows())) {
        b.lower = std::max(0.0, min_eigenvalue(s));
    }
    return b;
}

std::optional<double> k_lower_bound(const SampledFrame& f, const KOperator& k) {
    if (k.dim() != f.dim()) {
        throw ContractViolation("k_lower_bound: K and F act on different spaces");
    }
    const RangeInclusion inc = range_inclusion(k.mat(), weighted_synthesis(f).mat());
    if (!inc.included) {
        return std::nullopt;
    }
    const double lambda = *inc.lambda_star;
    if (lambda <= 0.0) {
        // K = 0: every A > 0 works.
        return std::numeric_limits<double>::infinity();
    }
    return 1.0 / lambda;
}

double parseval_residual(const SampledFrame& f, const KOperator& k) {
    if (k.dim() != f.dim()) {
        throw ContractViolation("parseval_residual: K and F act on different spaces");
    }
    const Matrix kk = k.mat() * k.adjoint();
    const Matrix diff = frame_operator(f).mat() - kk;
    return op_norm(diff) / (1.0 + op_norm(kk));
}

FrameClassification classify(const SampledFrame& f, const KOperator& k, double tol) {
    FrameClassification out;
    if (!all_finite(f.samples())) {
        return out;
    }
    out.bounds = frame_bounds(f);
    out.k_lower = k_lower_bound(f, k);
    const bool ordinary_frame = out.bounds.lower > 0.0;
    const double pres = parseval_residual(f, k);
    out.residuals["parseval"] = pres;

    if (!out.k_lower) {
        out.verdict = ordinary_frame ? FrameVerdict::Frame : FrameVerdict::BesselOnly;
        return out;
    }
    const double a = *out.k_lower;
    const double b = out.bounds.upper;
    out.residuals["tight_gap"] = std::isfinite(a) ? std::abs(a - b) / (1.0 + b) : a;
    if (pres <= tol) {
        out.verdict = FrameVerdict::ParsevalKFrame;
    } else if (std::isfinite(a) && std::abs(a - b) <= tol * (1.0 + b)) {
        out.verdict = FrameVerdict::TightKFrame;
    } else if (ordinary_frame) {
        out.verdict = FrameVerdict::Frame;
    } else {
        out.verdict = FrameVerdict::KFrame;
    }
    return out;
}

bool is_l2_independent(const SampledFrame& f) {
    return rank(synthesis(f).mat()) == f.atoms();
}

SampledFrame generate_parseval_k_frame(const KOperator& k, std::size_t m, SpaceRef space,
                                       std::uint64_t seed) {
    if (!space || space->atoms() != m) {
        throw ContractViolation("generate_parseval_k_frame: space must have m atoms");
    }
    if (m < k.rank()) {
        throw Infeasible("generate_parseval_k_frame: m < rank(K); the lower K-frame bound "
                         "cannot be met");
    }
    const std::size_t d = k.dim();
    Matrix basis; // d x r, orthonormal columns spanning the target of sum mu w w^*
    if (m >= d) {
        basis = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    } else {
        basis = svd(k.mat()).right;
    }
    const Eigen::Index r = basis.cols();
    Rng rng(seed);
    const Matrix v = random_unitary(m, rng).leftCols(r); // m x r isometry
    // w_i = basis * v_i^* / sqrt(mu_i) so that sum_i mu_i w_i w_i^* = basis basis^*.
    Matrix w = basis * v.adjoint();
    const RealVector& root = space->sqrt_weight_vector();
    for (Eigen::Index i = 0; i < w.cols(); ++i) {
        w.col(i) /= root(i);
    }
    return SampledFrame(std::move(space), k.mat() * w);
}

SampledFrame generate_random_bessel(std::size_t d, std::size_t m, SpaceRef space,
                                    std::uint64_t seed) {
    if (!space || space->atoms() != m) {
        throw ContractViolation("generate_random_bessel: space must have m atoms");
    }
    Rng rng(seed);
    Matrix samples = rng.complex_gaussian(d, m);
    for (Eigen::Index i = 0; i < samples.cols(); ++i) {
        samples.col(i) /= std::sqrt(static_cast<double>(m) * space->weight(static_cast<std::size_t>(i)));
    }
    return SampledFrame(std::move(space), std::move(samples));
}

KOperator generate_random_k(std::size_t d, std::size_t r, std::uint64_t seed) {
    if (r > d) {
        throw ContractViolation("generate_random_k: rank exceeds dimension");
    }
    Rng rng(seed);
    const Matrix u = random_unitary(d, rng);
    const Matrix v = random_unitary(d, rng);
    Vector sigma = Vector::Zero(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < r; ++i) {
        sigma(static_cast<Eigen::Index>(i)) = rng.uniform(0.5, 2.0);
    }
    return KOperator(LinOperator(u * sigma.asDiagonal() * v.adjoint()));
}

FrameFixture fixture_w1() {
    const double h = std::numbers::sqrt2 / 2.0;
    Matrix samples(2, 3);
    samples << h, h, 0.0, 0.0, 0.0, 0.0;
    Vector kdiag(2);
    kdiag << 1.0, 0.0;
    return {SampledFrame(make_space(MeasureSpace::uniform(3)), samples),
            KOperator(LinOperator::diagonal(kdiag))};
}

FrameFixture fixture_w1_prime() {
    const double s = std::numbers::sqrt2;
    Matrix samples(2, 3);
    samples << s, s, 0.0, 0.0, 0.0, 0.0;
    Vector kdiag(2);
    kdiag << 2.0, 0.0;
    return {SampledFrame(make_space(MeasureSpace::uniform(3)), samples),
            KOperator(LinOperator::diagonal(kdiag))};
}

} // namespace kframe
