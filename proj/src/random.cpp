#include "kframe/random.hpp"

#include <cmath>
#include <numbers>

namespace kframe {

std::size_t Rng::uniform_index(std::size_t lo, std::size_t hi) {
    if (hi <= lo) {
        return lo;
    }
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::size_t>(next_u64() % span);
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

Scalar Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

Matrix Rng::complex_gaussian(std::size_t rows, std::size_t cols) {
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            m(i, j) = complex_normal();
        }
    }
    return m;
}

Vector Rng::complex_gaussian(std::size_t n) {
    Vector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v(i) = complex_normal();
    }
    return v;
}

Matrix random_unitary(std::size_t n, Rng& rng) {
    const Matrix z = rng.complex_gaussian(n, n);
    Eigen::HouseholderQR<Matrix> qr(z);
    const auto k = static_cast<Eigen::Index>(n);
    Matrix q = qr.householderQ() * Matrix::Identity(k, k);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < k; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0.0) {
            q.col(j) *= r(j, j) / mag;
        }
    }
    return q;
}

Matrix random_rank_matrix(std::size_t rows, std::size_t cols, std::size_t r, Rng& rng) {
    if (r == 0) {
        return Matrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    }
    const Matrix left = rng.complex_gaussian(rows, r);
    const Matrix right = rng.complex_gaussian(r, cols);
    return left * right / std::sqrt(static_cast<double>(r));
}

} // namespace kframe
