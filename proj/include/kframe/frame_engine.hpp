#pragma once

// Frames as sampled vector fields F: Omega -> C^d, their analysis, synthesis
// and frame operators, optimal bounds, and seeded instance generators.
//
// Operator conventions. The analysis operator T: H -> L^2(Omega) is stored as
// the m x d matrix whose row i is F(omega_i)^*. L^2(Omega) carries the weighted
// inner product, so its adjoint (the synthesis operator) is the d x m matrix
// F diag(mu), not the plain conjugate transpose. weighted_synthesis() is the
// synthesis operator written in the orthonormal basis e_i / sqrt(mu_i) of
// L^2(Omega); it satisfies U U^* = S and is what plain-matrix tools such as
// range_inclusion() must be handed.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "kframe/hilbert.hpp"
#include "kframe/measure_space.hpp"

namespace kframe {

/// K in B(H) with cached pseudo-inverse, adjoint, rank and projectors.
class KOperator {
public:
    explicit KOperator(LinOperator op);
    static KOperator identity(std::size_t d) { return KOperator(LinOperator::identity(d)); }

    std::size_t dim() const { return op_.rows(); }
    const LinOperator& op() const { return op_; }
    const Matrix& mat() const { return op_.mat(); }
    const Matrix& pinv() const { return pinv_; }
    const Matrix& adjoint() const { return adjoint_; }
    std::size_t rank() const { return rank_; }
    double norm() const { return norm_; }
    /// Projector onto R(K) (= K K^+).
    const Matrix& range_projector() const { return range_proj_; }
    /// Projector onto N(K)^perp = R(K^*) (= K^+ K).
    const Matrix& corange_projector() const { return corange_proj_; }

private:
    LinOperator op_;
    Matrix pinv_;
    Matrix adjoint_;
    Matrix range_proj_;
    Matrix corange_proj_;
    std::size_t rank_ = 0;
    double norm_ = 0.0;
};

struct FrameBounds {
    double lower = 0.0;
    double upper = 0.0;
};

enum class FrameVerdict {
    NotBesselInput,
    BesselOnly,
    Frame,
    KFrame,
    TightKFrame,
    ParsevalKFrame,
};

std::string to_string(FrameVerdict v);

struct FrameClassification {
    FrameVerdict verdict = FrameVerdict::NotBesselInput;
    /// Optimal ordinary bounds lambda_min(S), lambda_max(S).
    FrameBounds bounds;
    /// Optimal lower K-frame bound, present iff F is a K-frame.
    std::optional<double> k_lower;
    std::map<std::string, double> residuals;
};

LinOperator analysis(const SampledFrame& f);
LinOperator synthesis(const SampledFrame& f);
LinOperator weighted_synthesis(const SampledFrame& f);
LinOperator frame_operator(const SampledFrame& f);

/// Norm of the analysis operator as a map into weighted L^2(Omega).
double analysis_norm(const SampledFrame& f);

FrameBounds frame_bounds(const SampledFrame& f);

/// Optimal A with A |K^* f|^2 <= <S f, f>, or nullopt when R(K) is not in R(T^*).
std::optional<double> k_lower_bound(const SampledFrame& f, const KOperator& k);

/// |S - K K^*| / (1 + |K K^*|), the Parseval K-frame defect.
double parseval_residual(const SampledFrame& f, const KOperator& k);

FrameClassification classify(const SampledFrame& f, const KOperator& k,
                             double tol = kDefaultTolerance);

bool is_l2_independent(const SampledFrame& f);

/// Samples K w_i where sum_i mu_i w_i w_i^* = I_d when m >= d, or the projector
/// onto R(K^*) when rank(K) <= m < d. Raises Infeasible when m < rank(K).
SampledFrame generate_parseval_k_frame(const KOperator& k, std::size_t m, SpaceRef space,
                                       std::uint64_t seed);

/// Complex Gaussian samples scaled by 1 / sqrt(m mu_i).
SampledFrame generate_random_bessel(std::size_t d, std::size_t m, SpaceRef space,
                                    std::uint64_t seed);

/// Random K = U diag(s) V^* of exact rank r, nonzero singular values in [0.5, 2]
/// (r = 0 gives the zero operator).
KOperator generate_random_k(std::size_t d, std::size_t r, std::uint64_t seed);

struct FrameFixture {
    SampledFrame frame;
    KOperator k;
};

/// d = 2, m = 3, mu = 1: F = (1/sqrt2, 0), (1/sqrt2, 0), (0, 0); K = diag(1, 0).
FrameFixture fixture_w1();
/// As W1 with F_1 = F_2 = (sqrt2, 0) and K = diag(2, 0).
FrameFixture fixture_w1_prime();

} // namespace kframe
