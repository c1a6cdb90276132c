#include "kframe/measure_space.hpp"

#include <cmath>
#include <numeric>

namespace kframe {

MeasureSpace::MeasureSpace(std::vector<double> weights, std::vector<std::string> labels)
    : weights_(std::move(weights)), labels_(std::move(labels)) {
    if (weights_.empty()) {
        throw InvalidInput("MeasureSpace: at least one atom is required");
    }
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (!std::isfinite(weights_[i]) || !(weights_[i] > 0.0)) {
            throw InvalidInput("MeasureSpace: weights must be positive and finite (atom " +
                               std::to_string(i) + ")");
        }
    }
    if (labels_.empty()) {
        labels_.reserve(weights_.size());
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            labels_.push_back("w" + std::to_string(i));
        }
    } else if (labels_.size() != weights_.size()) {
        throw InvalidInput("MeasureSpace: label count differs from atom count");
    }
    mu_ = Eigen::Map<const RealVector>(weights_.data(), static_cast<Eigen::Index>(weights_.size()));
    sqrt_mu_ = mu_.cwiseSqrt();
}

MeasureSpace MeasureSpace::uniform(std::size_t atoms, double weight) {
    return MeasureSpace(std::vector<double>(atoms, weight));
}

double MeasureSpace::total_mass() const {
    return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

bool same_space(const SpaceRef& a, const SpaceRef& b) {
    return a && b && (a == b || *a == *b);
}

L2Coefficients::L2Coefficients(SpaceRef space, Vector values)
    : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) {
        throw ContractViolation("L2Coefficients: null measure space");
    }
    if (static_cast<std::size_t>(values_.size()) != space_->atoms()) {
        throw ContractViolation("L2Coefficients: length differs from atom count");
    }
    if (!all_finite(values_)) {
        throw InvalidInput("L2Coefficients: non-finite entry");
    }
}

L2Coefficients L2Coefficients::zero(SpaceRef space) {
    const auto m = static_cast<Eigen::Index>(space->atoms());
    return L2Coefficients(std::move(space), Vector::Zero(m));
}

SampledFrame::SampledFrame(SpaceRef space, Matrix samples)
    : space_(std::move(space)), samples_(std::move(samples)) {
    if (!space_) {
        throw ContractViolation("SampledFrame: null measure space");
    }
    if (samples_.rows() < 1) {
        throw InvalidInput("SampledFrame: dimension must be at least 1");
    }
    if (static_cast<std::size_t>(samples_.cols()) != space_->atoms()) {
        throw ContractViolation("SampledFrame: sample count differs from atom count");
    }
    if (!all_finite(samples_)) {
        throw InvalidInput("SampledFrame: non-finite sample entry");
    }
}

namespace {

Matrix stack_columns(const std::vector<HVector>& samples) {
    if (samples.empty()) {
        throw InvalidInput("SampledFrame: no samples");
    }
    const std::size_t d = samples.front().dim();
    Matrix out(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].dim() != d) {
            throw InvalidInput("SampledFrame: samples have different dimensions");
        }
        out.col(static_cast<Eigen::Index>(i)) = samples[i].vec();
    }
    return out;
}

} // namespace

SampledFrame::SampledFrame(SpaceRef space, const std::vector<HVector>& samples)
    : SampledFrame(std::move(space), stack_columns(samples)) {}

HVector SampledFrame::sample(std::size_t i) const {
    return HVector(samples_.col(static_cast<Eigen::Index>(i)));
}

SampledFrame SampledFrame::transformed(const Matrix& op) const {
    if (op.cols() != samples_.rows()) {
        throw ContractViolation("SampledFrame::transformed: operator width differs from dim");
    }
    return SampledFrame(space_, op * samples_);
}

Scalar l2_inner(const L2Coefficients& a, const L2Coefficients& b) {
    if (!same_space(a.space(), b.space())) {
        throw ContractViolation("l2_inner: coefficients live on different measure spaces");
    }
    const RealVector& mu = a.space()->weight_vector();
    Scalar acc{0.0, 0.0};
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        acc += mu(i) * a.values()(i) * std::conj(b.values()(i));
    }
    return acc;
}

double weighted_norm_sq(const MeasureSpace& space, const Vector& c) {
    if (static_cast<std::size_t>(c.size()) != space.atoms()) {
        throw ContractViolation("weighted_norm_sq: length differs from atom count");
    }
    return (space.weight_vector().array() * c.array().abs2()).sum();
}

double l2_norm_sq(const L2Coefficients& c) { return weighted_norm_sq(*c.space(), c.values()); }

double weighted_op_norm(const MeasureSpace& space, const Matrix& a) {
    if (static_cast<std::size_t>(a.rows()) != space.atoms()) {
        throw ContractViolation("weighted_op_norm: row count differs from atom count");
    }
    return op_norm(Matrix(space.sqrt_weight_vector().asDiagonal() * a));
}

HVector bochner_integrate(const SampledFrame& field, const L2Coefficients& c) {
    if (!same_space(field.space(), c.space())) {
        throw ContractViolation("bochner_integrate: field and coefficients differ in space");
    }
    const Vector weighted =
        (c.space()->weight_vector().cast<Scalar>().array() * c.values().array()).matrix();
    return HVector(field.samples() * weighted);
}

double max_sample_distance(const SampledFrame& f, const SampledFrame& g) {
    if (f.dim() != g.dim() || f.atoms() != g.atoms()) {
        throw ContractViolation("max_sample_distance: frames differ in shape");
    }
    return (f.samples() - g.samples()).colwise().norm().maxCoeff();
}

bool frames_equal(const SampledFrame& f, const SampledFrame& g, double tol) {
    const double scale =
        std::max(f.samples().colwise().norm().maxCoeff(), g.samples().colwise().norm().maxCoeff());
    return max_sample_distance(f, g) <= tol * (1.0 + scale);
}

} // namespace kframe
