#include "kframe/duality_lab.hpp"

#include <algorithm>
#include <cmath>

namespace kframe {

namespace {

constexpr std::size_t kProbesPerDual = 20;

void require_same_shape(const SampledFrame& g, const SampledFrame& f, const KOperator& k,
                        const char* where) {
    if (!same_space(g.space(), f.space()) || g.dim() != f.dim() || k.dim() != f.dim()) {
        throw ContractViolation(std::string(where) + ": frames and K must share Omega and H");
    }
}

// Samplewise K^+ F without the Parseval gate.
Matrix canonical_samples(const SampledFrame& f, const KOperator& k) {
    return k.pinv() * f.samples();
}

} // namespace

void require_parseval_k(const SampledFrame& f, const KOperator& k, double tol) {
    const double r = parseval_residual(f, k);
    if (!(r <= tol)) {
        throw HypothesisViolation("F is not a Parseval K-frame (|S - KK*| relative residual " +
                                  std::to_string(r) + ")");
    }
}

SampledFrame canonical_dual(const SampledFrame& f, const KOperator& k, double tol) {
    require_parseval_k(f, k, tol);
    return SampledFrame(f.space(), canonical_samples(f, k));
}

DualityReport is_dual_k_bessel(const SampledFrame& g, const SampledFrame& f, const KOperator& k,
                               double tol) {
    require_same_shape(g, f, k, "is_dual_k_bessel");
    DualityReport r;
    const Matrix product = synthesis(f).mat() * analysis(g).mat();
    r.duality_residual = op_norm(Matrix(product - k.mat()));
    r.analysis_norm_of_g = analysis_norm(g);
    r.bessel_bound_of_g = r.analysis_norm_of_g * r.analysis_norm_of_g;
    r.is_dual = r.duality_residual <= tol * (1.0 + k.norm());
    return r;
}

ResidualOperator residual_operator(const SampledFrame& g, const SampledFrame& f,
                                   const KOperator& k, double tol) {
    require_parseval_k(f, k, tol);
    if (!is_dual_k_bessel(g, f, k, tol).is_dual) {
        throw HypothesisViolation("residual_operator: G is not a dual K-Bessel sequence of F");
    }
    const Matrix diff = g.samples() - canonical_samples(f, k);
    return {diff.adjoint()};
}

SampledFrame build_dual_from_phi(const SampledFrame& f, const KOperator& k, const Matrix& phi,
                                 double tol) {
    require_parseval_k(f, k, tol);
    if (static_cast<std::size_t>(phi.rows()) != f.atoms() ||
        static_cast<std::size_t>(phi.cols()) != f.dim()) {
        throw ContractViolation("build_dual_from_phi: phi must be m x d");
    }
    const Matrix syn = synthesis(f).mat();
    const double defect = op_norm(Matrix(syn * phi));
    if (!(defect <= tol * (1.0 + op_norm(syn) * op_norm(phi)))) {
        throw HypothesisViolation("build_dual_from_phi: T_F^* phi != 0");
    }
    return SampledFrame(f.space(), canonical_samples(f, k) + phi.adjoint());
}

Matrix synthesis_kernel_basis(const SampledFrame& f) {
    const Matrix ny = null_space(weighted_synthesis(f).mat());
    const RealVector inv_root = f.space()->sqrt_weight_vector().cwiseInverse();
    return inv_root.asDiagonal() * ny;
}

Matrix random_kernel_phi(const SampledFrame& f, double scale, Rng& rng) {
    const Matrix basis = synthesis_kernel_basis(f);
    const auto m = static_cast<Eigen::Index>(f.atoms());
    const auto d = static_cast<Eigen::Index>(f.dim());
    if (basis.cols() == 0) {
        return Matrix::Zero(m, d);
    }
    const Matrix z = rng.complex_gaussian(static_cast<std::size_t>(basis.cols()), f.dim());
    Matrix phi = basis * z;
    const double norm = weighted_op_norm(*f.space(), phi);
    if (norm > 0.0) {
        phi *= scale / norm;
    }
    return phi;
}

SampledDual sample_dual(const SampledFrame& f, const KOperator& k, Rng& rng) {
    const SampledFrame canon = canonical_dual(f, k);
    const double base = analysis_norm(canon);
    const double factor = std::pow(10.0, rng.uniform(-1.0, 1.0));
    Matrix phi = random_kernel_phi(f, factor * (base > 0.0 ? base : 1.0), rng);
    SampledFrame g(f.space(), canon.samples() + phi.adjoint());
    return {std::move(g), std::move(phi)};
}

MinimalityReport minimality_report(const SampledFrame& f, const KOperator& k, std::size_t trials,
                                   std::uint64_t seed, double tol) {
    require_parseval_k(f, k, tol);
    const SampledFrame canon = canonical_dual(f, k, tol);
    const double canon_norm = analysis_norm(canon);
    const Matrix t_canon = analysis(canon).mat();
    const MeasureSpace& space = *f.space();

    MinimalityReport rep;
    rep.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, t));
        const SampledDual dual = sample_dual(f, k, rng);
        const double g_norm = analysis_norm(dual.g);
        rep.max_norm_excess = std::max(rep.max_norm_excess, canon_norm - g_norm);
        const Matrix t_g = analysis(dual.g).mat();
        for (std::size_t p = 0; p < kProbesPerDual; ++p) {
            const Vector probe = rng.complex_gaussian(f.dim());
            const double lhs = weighted_norm_sq(space, t_g * probe);
            const double rhs = weighted_norm_sq(space, t_canon * probe) +
                               weighted_norm_sq(space, dual.phi * probe);
            rep.max_pythagorean_residual =
                std::max(rep.max_pythagorean_residual, std::abs(lhs - rhs) / probe.squaredNorm());
        }
    }
    rep.holds = rep.max_norm_excess <= tol && rep.max_pythagorean_residual <= tol;
    return rep;
}

bool minimality_check(const SampledFrame& f, const KOperator& k, std::size_t trials,
                      std::uint64_t seed) {
    return minimality_report(f, k, trials, seed).holds;
}

double characterization_residual(const SampledFrame& g, const SampledFrame& h) {
    const Matrix lhs = synthesis(g).mat() * (analysis(g).mat() - analysis(h).mat());
    const double tg = analysis_norm(g);
    return op_norm(lhs) / (1.0 + tg * tg);
}

CharacterizationReport canonical_characterization_report(const SampledFrame& g,
                                                         const SampledFrame& f,
                                                         const KOperator& k, std::size_t trials,
                                                         std::uint64_t seed, double tol) {
    require_parseval_k(f, k, tol);
    if (!is_dual_k_bessel(g, f, k, tol).is_dual) {
        throw HypothesisViolation("canonical_characterization: G is not a dual of F");
    }
    CharacterizationReport rep;
    rep.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, t));
        const SampledDual h = sample_dual(f, k, rng);
        const double r = characterization_residual(g, h.g);
        rep.max_residual = std::max(rep.max_residual, r);
        if (r > tol && !rep.failing_trial) {
            rep.failing_trial = t;
        }
    }
    rep.holds = !rep.failing_trial.has_value();
    return rep;
}

bool canonical_characterization(const SampledFrame& g, const SampledFrame& f, const KOperator& k,
                                std::size_t trials, std::uint64_t seed) {
    return canonical_characterization_report(g, f, k, trials, seed).holds;
}

bool uniqueness_test(const SampledFrame& f, const KOperator& k) {
    require_parseval_k(f, k);
    return rank(analysis(f).mat()) == f.atoms();
}

SampledFrame alternative_dual_from(const SampledFrame& f, const KOperator& k, const Vector& alpha,
                                   const Vector& h, double tol) {
    require_parseval_k(f, k, tol);
    if (static_cast<std::size_t>(alpha.size()) != f.atoms() ||
        static_cast<std::size_t>(h.size()) != f.dim()) {
        throw ContractViolation("alternative_dual_from: alpha must have m entries and h d entries");
    }
    // alpha in R(T_F)^perp = N(T_F^*).
    const Vector image = synthesis(f).mat() * alpha;
    if (!(image.norm() <= tol * (1.0 + op_norm(synthesis(f)) * alpha.norm()))) {
        throw HypothesisViolation("alternative_dual_from: alpha is not orthogonal to R(T_F)");
    }
    const Matrix g_alpha = h * alpha.adjoint(); // column i = conj(alpha_i) h
    return SampledFrame(f.space(), canonical_samples(f, k) + g_alpha);
}

SampledFrame construct_alternative_dual(const SampledFrame& f, const KOperator& k,
                                        std::uint64_t seed, double tol) {
    require_parseval_k(f, k, tol);
    const Matrix basis = synthesis_kernel_basis(f);
    if (basis.cols() == 0) {
        throw Infeasible("construct_alternative_dual: R(T_F) = L^2(Omega), the dual is unique");
    }
    Rng rng(seed);
    Vector coeffs = rng.complex_gaussian(static_cast<std::size_t>(basis.cols()));
    coeffs.normalize();
    const Vector alpha = basis * coeffs; // unit norm in L^2(Omega)
    Vector h = rng.complex_gaussian(f.dim());
    h.normalize();
    SampledFrame q = alternative_dual_from(f, k, alpha, h, tol);

    const SampledFrame canon(f.space(), canonical_samples(f, k));
    if (!is_dual_k_bessel(q, f, k, tol).is_dual || frames_equal(q, canon, tol)) {
        throw Infeasible("construct_alternative_dual: construction did not yield a distinct dual");
    }
    return q;
}

SampledFrame dual_by_synthesis_solve(const SampledFrame& f, const KOperator& k) {
    const Matrix t_g = pinv(synthesis(f).mat()) * k.mat(); // m x d analysis operator
    return SampledFrame(f.space(), t_g.adjoint());
}

double canonical_energy(const SampledFrame& f, const KOperator& k, const Vector& g) {
    const Matrix canon = canonical_samples(f, k);
    return weighted_norm_sq(*f.space(), canon.adjoint() * g);
}

ParsevalProbeReport complement_parseval_report(const SampledFrame& f, const KOperator& k,
                                               std::size_t trials, std::uint64_t seed,
                                               double tol) {
    require_parseval_k(f, k, tol);
    ParsevalProbeReport rep;
    rep.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, t));
        const Vector probe = k.corange_projector() * rng.complex_gaussian(f.dim());
        const double norm_sq = probe.squaredNorm();
        if (norm_sq == 0.0) {
            continue;
        }
        const double energy = canonical_energy(f, k, probe);
        rep.max_residual = std::max(rep.max_residual, std::abs(energy - norm_sq) / norm_sq);
    }
    rep.holds = rep.max_residual <= tol;
    return rep;
}

bool complement_parseval_check(const SampledFrame& f, const KOperator& k, std::size_t trials,
                               std::uint64_t seed) {
    return complement_parseval_report(f, k, trials, seed).holds;
}

KDaggerKReport kdaggerk_report(const SampledFrame& f, const KOperator& k, double tol) {
    const SampledFrame canon = canonical_dual(f, k, tol);
    const Matrix kdk = k.pinv() * k.mat();
    const double scale = 1.0 + k.norm() * k.norm();

    KDaggerKReport rep;
    rep.dual_residual =
        op_norm(Matrix(frame_operator(canon).mat() - kdk * kdk.adjoint())) / scale;
    const SampledFrame regenerated = canon.transformed(k.mat());
    rep.regen_residual =
        op_norm(Matrix(frame_operator(regenerated).mat() - k.mat() * k.adjoint())) / scale;
    rep.holds = rep.dual_residual <= tol && rep.regen_residual <= tol;
    return rep;
}

bool kdaggerk_frame_check(const SampledFrame& f, const KOperator& k) {
    return kdaggerk_report(f, k).holds;
}

IndependenceTransfer l2_independence_transfer(const SampledFrame& f, const KOperator& k,
                                              double tol) {
    const SampledFrame canon = canonical_dual(f, k, tol);
    IndependenceTransfer out;
    out.f_indep = is_l2_independent(f);
    out.dual_indep = is_l2_independent(canon);
    const Matrix regenerated = k.mat() * canon.samples();
    out.reconstruction_residual =
        (f.samples() - regenerated).colwise().norm().maxCoeff() / (1.0 + k.norm());
    if (out.f_indep) {
        out.reconstruction_holds = out.reconstruction_residual <= tol;
    }
    return out;
}

bool unique_dual_transfer(const SampledFrame& f, const KOperator& k) {
    if (!uniqueness_test(f, k)) {
        throw HypothesisViolation("unique_dual_transfer: F does not have a unique dual");
    }
    const SampledFrame canon = canonical_dual(f, k);
    return rank(analysis(canon).mat()) == f.atoms();
}

PythagoreanTerms pythagorean_decomposition(const SampledFrame& f, const KOperator& k,
                                           const HVector& vec, const L2Coefficients& c,
                                           double tol) {
    if (!same_space(c.space(), f.space()) || vec.dim() != f.dim()) {
        throw ContractViolation("pythagorean_decomposition: shape mismatch");
    }
    const SampledFrame canon = canonical_dual(f, k, tol);
    const Vector target = k.mat() * vec.vec();
    const Vector reproduced = bochner_integrate(f, c).vec();
    if (!((reproduced - target).norm() <= tol * (1.0 + k.norm() * vec.norm()))) {
        throw InvalidCoefficients(
            "pythagorean_decomposition: c does not satisfy K f = integral c F dmu");
    }
    const L2Coefficients canon_c(f.space(), analysis(canon).mat() * vec.vec());
    const L2Coefficients diff(f.space(), c.values() - canon_c.values());

    PythagoreanTerms out;
    out.total = l2_norm_sq(c);
    out.canonical = l2_norm_sq(canon_c);
    out.residual = l2_norm_sq(diff);
    out.defect = std::abs(out.total - out.residual - out.canonical);
    out.cross_term = l2_inner(diff, canon_c);
    return out;
}

std::vector<L2Coefficients> dual_coefficient_family(const SampledFrame& f, const KOperator& k,
                                                    const HVector& vec, std::size_t count,
                                                    std::uint64_t seed) {
    const SampledFrame canon = canonical_dual(f, k);
    const Vector canon_c = analysis(canon).mat() * vec.vec();
    const Matrix basis = synthesis_kernel_basis(f);
    const double base = std::sqrt(weighted_norm_sq(*f.space(), canon_c));

    std::vector<L2Coefficients> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (i == 0 || basis.cols() == 0) {
            out.emplace_back(f.space(), canon_c);
            continue;
        }
        Rng rng(derive_seed(seed, i));
        Vector z = rng.complex_gaussian(static_cast<std::size_t>(basis.cols()));
        z.normalize(); // basis is weighted-orthonormal, so |basis z|_mu = 1
        const double scale = std::pow(10.0, rng.uniform(-1.0, 1.0)) * (base > 0.0 ? base : 1.0);
        out.emplace_back(f.space(), canon_c + scale * (basis * z));
    }
    return out;
}

} // namespace kframe
