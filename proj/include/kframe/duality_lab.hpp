#pragma once

// Duals of Parseval K-frames: the canonical dual K^+ F, dual verification,
// residual operators, minimality of the canonical analysis norm, uniqueness,
// L^2-independence transfer and the Pythagorean coefficient identity.
//
// Every operation that needs F to be a Parseval K-frame checks it first and
// throws HypothesisViolation otherwise.

#include <cstdint>
#include <optional>
#include <vector>

#include "kframe/frame_engine.hpp"
#include "kframe/random.hpp"

namespace kframe {

/// The coefficient family does not reproduce K f.
class InvalidCoefficients : public HypothesisViolation {
public:
    using HypothesisViolation::HypothesisViolation;
};

/// Throws HypothesisViolation unless |S - K K^*| <= tol (1 + |K K^*|).
void require_parseval_k(const SampledFrame& f, const KOperator& k,
                        double tol = kDefaultTolerance);

/// F~ = K^+ F.
SampledFrame canonical_dual(const SampledFrame& f, const KOperator& k,
                            double tol = kDefaultTolerance);

struct DualityReport {
    bool is_dual = false;
    double duality_residual = 0.0; // |T_F^* T_G - K|
    double bessel_bound_of_g = 0.0;
    double analysis_norm_of_g = 0.0;
};

DualityReport is_dual_k_bessel(const SampledFrame& g, const SampledFrame& f, const KOperator& k,
                               double tol = kDefaultTolerance);

/// phi : H -> L^2(Omega), (phi f)_i = <f, G_i - K^+ F_i>.
struct ResidualOperator {
    Matrix phi; // m x d
};

ResidualOperator residual_operator(const SampledFrame& g, const SampledFrame& f,
                                   const KOperator& k, double tol = kDefaultTolerance);

/// G_i = K^+ F_i + (row i of phi)^*. Requires T_F^* phi = 0.
SampledFrame build_dual_from_phi(const SampledFrame& f, const KOperator& k, const Matrix& phi,
                                 double tol = kDefaultTolerance);

/// Basis of N(T_F^*) that is orthonormal in the weighted L^2(Omega) inner product.
Matrix synthesis_kernel_basis(const SampledFrame& f);

/// A random phi with T_F^* phi = 0 whose weighted norm is `scale`.
/// Returns zero when the kernel is trivial.
Matrix random_kernel_phi(const SampledFrame& f, double scale, Rng& rng);

struct SampledDual {
    SampledFrame g;
    Matrix phi;
};

/// Random dual F~ + phi with |phi| drawn log-uniformly in [0.1, 10] * |T_F~|.
SampledDual sample_dual(const SampledFrame& f, const KOperator& k, Rng& rng);

struct MinimalityReport {
    std::size_t trials = 0;
    double max_norm_excess = 0.0;         // max(|T_F~| - |T_G|, 0)
    double max_pythagorean_residual = 0.0; // |(|T_G f|^2 - |T_F~ f|^2 - |phi f|^2)| / |f|^2
    bool holds = true;
};

MinimalityReport minimality_report(const SampledFrame& f, const KOperator& k, std::size_t trials,
                                   std::uint64_t seed, double tol = kDefaultTolerance);
bool minimality_check(const SampledFrame& f, const KOperator& k, std::size_t trials,
                      std::uint64_t seed);

struct CharacterizationReport {
    std::size_t trials = 0;
    double max_residual = 0.0; // |T_G^* T_G - T_G^* T_H| / (1 + |T_G|^2)
    std::optional<std::size_t> failing_trial;
    bool holds = true;
};

CharacterizationReport canonical_characterization_report(const SampledFrame& g,
                                                         const SampledFrame& f,
                                                         const KOperator& k, std::size_t trials,
                                                         std::uint64_t seed,
                                                         double tol = kDefaultTolerance);
bool canonical_characterization(const SampledFrame& g, const SampledFrame& f, const KOperator& k,
                                std::size_t trials, std::uint64_t seed);
/// |T_G^* T_G - T_G^* T_H| / (1 + |T_G|^2) for one pair.
double characterization_residual(const SampledFrame& g, const SampledFrame& h);

/// True iff R(T_F) = L^2(Omega), i.e. rank(T_F) = m.
bool uniqueness_test(const SampledFrame& f, const KOperator& k);

/// F~ + G_alpha with G_alpha(omega_i) = conj(alpha_i) h; alpha must lie in R(T_F)^perp.
SampledFrame alternative_dual_from(const SampledFrame& f, const KOperator& k, const Vector& alpha,
                                   const Vector& h, double tol = kDefaultTolerance);

/// Seeded alpha in R(T_F)^perp and h in H; Infeasible when the dual is unique.
SampledFrame construct_alternative_dual(const SampledFrame& f, const KOperator& k,
                                        std::uint64_t seed, double tol = kDefaultTolerance);

/// The dual whose analysis operator is (T_F^*)^+ K (unweighted minimum-norm solve).
SampledFrame dual_by_synthesis_solve(const SampledFrame& f, const KOperator& k);

struct ParsevalProbeReport {
    std::size_t trials = 0;
    double max_residual = 0.0; // |sum mu |<f, F~_i>|^2 - |f|^2| / |f|^2
    bool holds = true;
};

/// Random f in N(K)^perp: F~ is Parseval there.
ParsevalProbeReport complement_parseval_report(const SampledFrame& f, const KOperator& k,
                                               std::size_t trials, std::uint64_t seed,
                                               double tol = kDefaultTolerance);
bool complement_parseval_check(const SampledFrame& f, const KOperator& k, std::size_t trials,
                               std::uint64_t seed);

/// sum_i mu_i |<g, F~_i>|^2 for one probe vector.
double canonical_energy(const SampledFrame& f, const KOperator& k, const Vector& g);

struct KDaggerKReport {
    double dual_residual = 0.0;   // |S(F~) - (K^+K)(K^+K)^*| / (1 + |K|^2)
    double regen_residual = 0.0;  // |S(K F~) - K K^*| / (1 + |K|^2)
    bool holds = true;
};

KDaggerKReport kdaggerk_report(const SampledFrame& f, const KOperator& k,
                               double tol = kDefaultTolerance);
bool kdaggerk_frame_check(const SampledFrame& f, const KOperator& k);

struct IndependenceTransfer {
    bool f_indep = false;
    bool dual_indep = false;
    /// Present only when f_indep: F_i = K F~_i for all i.
    std::optional<bool> reconstruction_holds;
    double reconstruction_residual = 0.0; // max_i |F_i - K F~_i| / (1 + |K|)
};

IndependenceTransfer l2_independence_transfer(const SampledFrame& f, const KOperator& k,
                                              double tol = kDefaultTolerance);

/// F~ has a unique dual K^*-Bessel sequence (rank(T_F~) = m).
/// Requires uniqueness_test(F, K).
bool unique_dual_transfer(const SampledFrame& f, const KOperator& k);

struct PythagoreanTerms {
    double total = 0.0;     // |c|^2
    double residual = 0.0;  // |c - c~|^2
    double canonical = 0.0; // |c~|^2
    double defect = 0.0;    // |total - residual - canonical|
    Scalar cross_term;      // <c - c~, c~>
};

PythagoreanTerms pythagorean_decomposition(const SampledFrame& f, const KOperator& k,
                                           const HVector& vec, const L2Coefficients& c,
                                           double tol = kDefaultTolerance);

/// c~ = T_F~ f followed by count - 1 families c~ + k with random k in N(T_F^*).
std::vector<L2Coefficients> dual_coefficient_family(const SampledFrame& f, const KOperator& k,
                                                    const HVector& vec, std::size_t count,
                                                    std::uint64_t seed);

} // namespace kframe
