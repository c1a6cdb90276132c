#pragma once

// Dense complex linear algebra over C^d: validated operator/vector values,
// one-sided Jacobi SVD, Moore-Penrose pseudo-inverse, Loewner comparisons
// and the Douglas range-inclusion factorization.

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kframe {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Caller broke a documented precondition (size mismatch, different spaces, ...).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Non-finite or otherwise malformed numeric input.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A mathematical hypothesis required by an operation does not hold
/// (e.g. range inclusion fails, frame is not Parseval-K).
class HypothesisViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The requested object cannot exist for these inputs.
class Infeasible : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Relative rank cut: sigma_k counts iff sigma_k > kRankEpsilon * sigma_max * max(rows, cols).
inline constexpr double kRankEpsilon = 1e-10;
/// Default relative comparison tolerance for operator identities.
inline constexpr double kDefaultTolerance = 1e-9;

bool all_finite(const Matrix& m);

/// Element of H = C^d, d >= 1.
class HVector {
public:
    explicit HVector(Vector entries);
    static HVector zero(std::size_t dim);

    std::size_t dim() const { return static_cast<std::size_t>(v_.size()); }
    const Vector& vec() const { return v_; }
    Scalar operator[](std::size_t i) const { return v_(static_cast<Eigen::Index>(i)); }
    double norm() const { return v_.norm(); }

private:
    Vector v_;
};

/// Bounded operator between coordinate spaces, stored as a rows x cols matrix.
/// Immutable; rows, cols >= 1 and every entry finite.
class LinOperator {
public:
    explicit LinOperator(Matrix entries);
    static LinOperator identity(std::size_t n);
    static LinOperator zero(std::size_t rows, std::size_t cols);
    static LinOperator diagonal(const Vector& values);

    std::size_t rows() const { return static_cast<std::size_t>(m_.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(m_.cols()); }
    const Matrix& mat() const { return m_; }
    Scalar operator()(std::size_t i, std::size_t j) const {
        return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    HVector apply(const HVector& x) const;

    friend LinOperator operator*(const LinOperator& a, const LinOperator& b);
    friend LinOperator operator+(const LinOperator& a, const LinOperator& b);
    friend LinOperator operator-(const LinOperator& a, const LinOperator& b);
    friend LinOperator operator*(Scalar s, const LinOperator& a);

private:
    Matrix m_;
};

/// Thin SVD A = left * diag(singulars) * right^*, truncated at the numerical rank.
/// `null_basis` is an orthonormal basis of N(A) (cols - rank columns).
struct SvdFactorization {
    Matrix left;          // rows x rank, orthonormal columns
    RealVector singulars; // rank entries, strictly positive, descending
    Matrix right;         // cols x rank, orthonormal columns
    Matrix null_basis;    // cols x (cols - rank)
    std::size_t rank = 0;
    double sigma_max = 0.0;
};

LinOperator adjoint(const LinOperator& a);

/// One-sided (Hestenes) Jacobi SVD. Raises InvalidInput on non-finite entries and
/// ContractViolation on a negative tolerance.
SvdFactorization svd(const Matrix& a, double rank_tol = kRankEpsilon);
inline SvdFactorization svd(const LinOperator& a, double rank_tol = kRankEpsilon) {
    return svd(a.mat(), rank_tol);
}

std::size_t rank(const Matrix& a, double rank_tol = kRankEpsilon);

Matrix pinv(const Matrix& a, double rank_tol = kRankEpsilon);
LinOperator pinv(const LinOperator& a);

/// Largest singular value.
double op_norm(const Matrix& a);
inline double op_norm(const LinOperator& a) { return op_norm(a.mat()); }

/// Orthogonal projector onto R(A).
Matrix range_projector(const Matrix& a);
/// Orthogonal projector onto N(A)^perp = R(A^*).
Matrix corange_projector(const Matrix& a);
/// Orthonormal basis of N(A); may have zero columns.
Matrix null_space(const Matrix& a);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const Matrix& hermitian);
/// Largest eigenvalue of a Hermitian matrix.
double max_eigenvalue(const Matrix& hermitian);

bool is_hermitian(const Matrix& a, double tol = kDefaultTolerance);

/// A <= B in the Loewner order, up to tol * max(1, |A|, |B|).
/// Both arguments must be Hermitian of the same size.
bool loewner_leq(const Matrix& a, const Matrix& b, double tol = kDefaultTolerance);
inline bool loewner_leq(const LinOperator& a, const LinOperator& b,
                        double tol = kDefaultTolerance) {
    return loewner_leq(a.mat(), b.mat(), tol);
}

struct RangeInclusion {
    bool included = false;
    /// inf{lambda : S S^* <= lambda T T^*}; present iff included.
    std::optional<double> lambda_star;
};

/// Tests R(S) subset R(T) by rank([T | S]) == rank(T).
RangeInclusion range_inclusion(const Matrix& s, const Matrix& t);
inline RangeInclusion range_inclusion(const LinOperator& s, const LinOperator& t) {
    return range_inclusion(s.mat(), t.mat());
}

/// The minimal-norm solution theta = T^+ S of S = T theta.
/// Throws HypothesisViolation when R(S) is not contained in R(T).
Matrix douglas_factor(const Matrix& s, const Matrix& t);
inline LinOperator douglas_factor(const LinOperator& s, const LinOperator& t) {
    return LinOperator(douglas_factor(s.mat(), t.mat()));
}

} // namespace kframe
