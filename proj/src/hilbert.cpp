#include "kframe/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace kframe {

namespace {

constexpr double kJacobiTol = 1e-15;
constexpr int kMaxSweeps = 80;

struct JacobiResult {
    Matrix columns; // A V, orthogonal columns
    Matrix v;       // unitary, cols x cols
};

// Hestenes iteration: rotate column pairs of W = A V until they are mutually
// orthogonal. Columns i, j are rotated by the unitary J = D R D^* where R is
// the real Jacobi rotation for [[a, |c|], [|c|, b]] and D = diag(1, e^{-i arg c}).
JacobiResult one_sided_jacobi(Matrix w) {
    const Eigen::Index n = w.cols();
    Matrix v = Matrix::Identity(n, n);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (Eigen::Index j = 1; j < n; ++j) {
            for (Eigen::Index i = 0; i < j; ++i) {
                const double a = w.col(i).squaredNorm();
                const double b = w.col(j).squaredNorm();
                const Scalar c = w.col(i).dot(w.col(j)); // sum conj(w_i) w_j
                const double abs_c = std::abs(c);
                if (a == 0.0 || b == 0.0 || abs_c <= kJacobiTol * std::sqrt(a) * std::sqrt(b)) {
                    continue;
                }
                rotated = true;
                const double zeta = (b - a) / (2.0 * abs_c);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                const Scalar phase = c / abs_c; // e^{i arg c}
                const Scalar sn_fwd = sn * phase;
                const Scalar sn_bwd = sn * std::conj(phase);
                for (Eigen::Index k = 0; k < w.rows(); ++k) {
                    const Scalar wi = w(k, i);
                    const Scalar wj = w(k, j);
                    w(k, i) = cs * wi - sn_bwd * wj;
                    w(k, j) = sn_fwd * wi + cs * wj;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar vi = v(k, i);
                    const Scalar vj = v(k, j);
                    v(k, i) = cs * vi - sn_bwd * vj;
                    v(k, j) = sn_fwd * vi + cs * vj;
                }
            }
        }
        if (!rotated) {
            break;
        }
    }
    return {std::move(w), std::move(v)};
}

// Orthonormal basis of the orthogonal complement of R(q), q with orthonormal columns.
Matrix orthogonal_complement(const Matrix& q, Eigen::Index ambient) {
    if (q.cols() == 0) {
        return Matrix::Identity(ambient, ambient);
    }
    if (q.cols() >= ambient) {
        return Matrix(ambient, 0);
    }
    Eigen::HouseholderQR<Matrix> qr(q);
    Matrix full = qr.householderQ() * Matrix::Identity(ambient, ambient);
    return full.rightCols(ambient - q.cols());
}

// SVD of a matrix with rows >= cols.
SvdFactorization svd_tall(const Matrix& a, double rank_tol) {
    const Eigen::Index n = a.cols();
    JacobiResult jr = one_sided_jacobi(a);

    std::vector<double> sigma(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
        sigma[static_cast<std::size_t>(j)] = jr.columns.col(j).norm();
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        return sigma[static_cast<std::size_t>(x)] > sigma[static_cast<std::size_t>(y)];
    });

    SvdFactorization out;
    out.sigma_max = n > 0 ? sigma[static_cast<std::size_t>(order.front())] : 0.0;
    const double cut =
        rank_tol * out.sigma_max * static_cast<double>(std::max(a.rows(), a.cols()));
    std::size_t r = 0;
    while (r < order.size() && sigma[static_cast<std::size_t>(order[r])] > cut &&
           sigma[static_cast<std::size_t>(order[r])] > 0.0) {
        ++r;
    }
    const auto rr = static_cast<Eigen::Index>(r);
    out.rank = r;
    out.left.resize(a.rows(), rr);
    out.right.resize(n, rr);
    out.singulars.resize(rr);
    out.null_basis.resize(n, n - rr);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        if (k < rr) {
            const double s = sigma[static_cast<std::size_t>(src)];
            out.singulars(k) = s;
            out.left.col(k) = jr.columns.col(src) / s;
            out.right.col(k) = jr.v.col(src);
        } else {
            out.null_basis.col(k - rr) = jr.v.col(src);
        }
    }
    return out;
}

} // namespace

bool all_finite(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
                return false;
            }
        }
    }
    return true;
}

HVector::HVector(Vector entries) : v_(std::move(entries)) {
    if (v_.size() < 1) {
        throw InvalidInput("HVector: dimension must be at least 1");
    }
    if (!all_finite(v_)) {
        throw InvalidInput("HVector: non-finite entry");
    }
}

HVector HVector::zero(std::size_t dim) {
    return HVector(Vector::Zero(static_cast<Eigen::Index>(dim)));
}

LinOperator::LinOperator(Matrix entries) : m_(std::move(entries)) {
    if (m_.rows() < 1 || m_.cols() < 1) {
        throw InvalidInput("LinOperator: rows and cols must be at least 1");
    }
    if (!all_finite(m_)) {
        throw InvalidInput("LinOperator: non-finite entry");
    }
}

LinOperator LinOperator::identity(std::size_t n) {
    const auto k = static_cast<Eigen::Index>(n);
    return LinOperator(Matrix::Identity(k, k));
}

LinOperator LinOperator::zero(std::size_t rows, std::size_t cols) {
    return LinOperator(
        Matrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)));
}

LinOperator LinOperator::diagonal(const Vector& values) {
    return LinOperator(Matrix(values.asDiagonal()));
}

HVector LinOperator::apply(const HVector& x) const {
    if (x.dim() != cols()) {
        throw ContractViolation("LinOperator::apply: dimension mismatch");
    }
    return HVector(m_ * x.vec());
}

LinOperator operator*(const LinOperator& a, const LinOperator& b) {
    if (a.cols() != b.rows()) {
        throw ContractViolation("operator product: inner dimensions differ");
    }
    return LinOperator(a.m_ * b.m_);
}

LinOperator operator+(const LinOperator& a, const LinOperator& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ContractViolation("operator sum: shapes differ");
    }
    return LinOperator(a.m_ + b.m_);
}

LinOperator operator-(const LinOperator& a, const LinOperator& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ContractViolation("operator difference: shapes differ");
    }
    return LinOperator(a.m_ - b.m_);
}

LinOperator operator*(Scalar s, const LinOperator& a) { return LinOperator(s * a.m_); }

LinOperator adjoint(const LinOperator& a) { return LinOperator(a.mat().adjoint()); }

SvdFactorization svd(const Matrix& a, double rank_tol) {
    if (!(rank_tol >= 0.0)) {
        throw ContractViolation("svd: rank_tol must be non-negative");
    }
    if (!all_finite(a)) {
        throw InvalidInput("svd: non-finite entry");
    }
    if (a.rows() >= a.cols()) {
        return svd_tall(a, rank_tol);
    }
    // A = (A^*)^* : swap the factors of the tall adjoint.
    SvdFactorization t = svd_tall(a.adjoint(), rank_tol);
    SvdFactorization out;
    out.rank = t.rank;
    out.sigma_max = t.sigma_max;
    out.singulars = std::move(t.singulars);
    out.left = std::move(t.right);
    out.right = std::move(t.left);
    out.null_basis = orthogonal_complement(out.right, a.cols());
    return out;
}

std::size_t rank(const Matrix& a, double rank_tol) { return svd(a, rank_tol).rank; }

Matrix pinv(const Matrix& a, double rank_tol) {
    const SvdFactorization f = svd(a, rank_tol);
    if (f.rank == 0) {
        return Matrix::Zero(a.cols(), a.rows());
    }
    const RealVector inv = f.singulars.cwiseInverse();
    return f.right * inv.asDiagonal() * f.left.adjoint();
}

LinOperator pinv(const LinOperator& a) { return LinOperator(pinv(a.mat())); }

double op_norm(const Matrix& a) {
    if (a.size() == 0) {
        return 0.0;
    }
    return svd(a).sigma_max;
}

Matrix range_projector(const Matrix& a) {
    const SvdFactorization f = svd(a);
    return f.left * f.left.adjoint();
}

Matrix corange_projector(const Matrix& a) {
    const SvdFactorization f = svd(a);
    return f.right * f.right.adjoint();
}

Matrix null_space(const Matrix& a) { return svd(a).null_basis; }

double min_eigenvalue(const Matrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double max_eigenvalue(const Matrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

bool is_hermitian(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) {
        return false;
    }
    return op_norm(Matrix(a - a.adjoint())) <= tol * (1.0 + op_norm(a));
}

bool loewner_leq(const Matrix& a, const Matrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ContractViolation("loewner_leq: operands differ in size");
    }
    if (!is_hermitian(a) || !is_hermitian(b)) {
        throw ContractViolation("loewner_leq: operands must be Hermitian");
    }
    const Matrix diff = b - a;
    const Matrix sym = 0.5 * (diff + diff.adjoint());
    const double scale = std::max({1.0, op_norm(a), op_norm(b)});
    return min_eigenvalue(sym) >= -tol * scale;
}

RangeInclusion range_inclusion(const Matrix& s, const Matrix& t) {
    if (s.rows() != t.rows()) {
        throw ContractViolation("range_inclusion: S and T must share a codomain");
    }
    Matrix joined(t.rows(), t.cols() + s.cols());
    joined << t, s;
    RangeInclusion out;
    out.included = rank(joined) == rank(t);
    if (out.included) {
        const double theta_norm = op_norm(Matrix(pinv(t) * s));
        out.lambda_star = theta_norm * theta_norm;
    }
    return out;
}

Matrix douglas_factor(const Matrix& s, const Matrix& t) {
    if (!range_inclusion(s, t).included) {
        throw HypothesisViolation(
            "douglas_factor: R(S) is not contained in R(T); no bounded factor exists");
    }
    return pinv(t) * s;
}

} // namespace kframe
