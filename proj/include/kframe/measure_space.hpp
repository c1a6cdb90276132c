#pragma once

// Discretized measure space (Omega, mu): finitely many atoms of positive
// weight. Integrals over Omega become weighted sums, and "almost everywhere"
// means "at every atom".

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "kframe/hilbert.hpp"

namespace kframe {

class MeasureSpace {
public:
    /// Weights must be finite and strictly positive; labels default to "w0", "w1", ...
    explicit MeasureSpace(std::vector<double> weights, std::vector<std::string> labels = {});
    static MeasureSpace uniform(std::size_t atoms, double weight = 1.0);

    std::size_t atoms() const { return weights_.size(); }
    const std::vector<double>& weights() const { return weights_; }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }
    double total_mass() const;

    /// diag(mu) and diag(sqrt(mu)) as real vectors.
    const RealVector& weight_vector() const { return mu_; }
    const RealVector& sqrt_weight_vector() const { return sqrt_mu_; }

    friend bool operator==(const MeasureSpace& a, const MeasureSpace& b) {
        return a.weights_ == b.weights_;
    }

private:
    std::vector<double> weights_;
    std::vector<std::string> labels_;
    RealVector mu_;
    RealVector sqrt_mu_;
};

using SpaceRef = std::shared_ptr<const MeasureSpace>;

inline SpaceRef make_space(MeasureSpace s) {
    return std::make_shared<const MeasureSpace>(std::move(s));
}

bool same_space(const SpaceRef& a, const SpaceRef& b);

/// A function c: Omega -> C, an element of L^2(Omega, mu).
class L2Coefficients {
public:
    L2Coefficients(SpaceRef space, Vector values);
    static L2Coefficients zero(SpaceRef space);

    const SpaceRef& space() const { return space_; }
    const Vector& values() const { return values_; }
    std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

private:
    SpaceRef space_;
    Vector values_;
};

/// A map F: Omega -> H = C^d stored sample-wise; column i of samples() is F(omega_i).
class SampledFrame {
public:
    SampledFrame(SpaceRef space, Matrix samples);
    SampledFrame(SpaceRef space, const std::vector<HVector>& samples);

    const SpaceRef& space() const { return space_; }
    std::size_t dim() const { return static_cast<std::size_t>(samples_.rows()); }
    std::size_t atoms() const { return static_cast<std::size_t>(samples_.cols()); }
    const Matrix& samples() const { return samples_; }
    HVector sample(std::size_t i) const;

    /// The frame omega -> op * F(omega).
    SampledFrame transformed(const Matrix& op) const;

private:
    SpaceRef space_;
    Matrix samples_;
};

/// sum_i mu_i a_i conj(b_i)
Scalar l2_inner(const L2Coefficients& a, const L2Coefficients& b);
/// sum_i mu_i |c_i|^2
double l2_norm_sq(const L2Coefficients& c);

/// Weighted norm of a raw coefficient vector on `space`.
double weighted_norm_sq(const MeasureSpace& space, const Vector& c);
/// Operator norm of A : C^d -> L^2(Omega) (A has atoms() rows).
double weighted_op_norm(const MeasureSpace& space, const Matrix& a);

/// The Bochner integral sum_i mu_i c_i F(omega_i).
HVector bochner_integrate(const SampledFrame& field, const L2Coefficients& c);

/// Samplewise equality: max_i |F_i - G_i| <= tol * (1 + max sample norm).
bool frames_equal(const SampledFrame& f, const SampledFrame& g, double tol = kDefaultTolerance);
double max_sample_distance(const SampledFrame& f, const SampledFrame& g);

} // namespace kframe
