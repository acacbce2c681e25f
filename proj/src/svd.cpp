#include "trajanom/svd.hpp"

#include <random>
#include <stdexcept>

namespace trajanom {

namespace {

/// Flips factor signs so each left column's largest-magnitude entry is
/// positive. SVD signs are otherwise arbitrary; pinning them keeps outputs
/// byte-stable across runs.
void normalize_signs(Eigen::MatrixXd& left, Eigen::MatrixXd& right) {
    for (int c = 0; c < left.cols(); ++c) {
        int idx = 0;
        left.col(c).cwiseAbs().maxCoeff(&idx);
        if (left(idx, c) < 0.0) {
            left.col(c) *= -1.0;
            right.col(c) *= -1.0;
        }
    }
}

FactorizedMatrix truncate(const Eigen::MatrixXd& u, const Eigen::VectorXd& s,
                          const Eigen::MatrixXd& v, int k) {
    FactorizedMatrix f;
    f.k = k;
    f.left = u.leftCols(k);
    f.singular_values = s.head(k);
    f.right = v.leftCols(k);
    normalize_signs(f.left, f.right);
    return f;
}

}  // namespace

FactorizedMatrix truncated_svd(const Eigen::MatrixXd& matrix, int k, SvdMethod method,
                               std::uint64_t seed) {
    const int min_dim = static_cast<int>(std::min(matrix.rows(), matrix.cols()));
    if (k < 1 || k > min_dim) {
        throw std::invalid_argument("truncated_svd: k must be in [1, min(n, m)]");
    }

    if (method == SvdMethod::deterministic) {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(matrix,
                                           Eigen::ComputeThinU | Eigen::ComputeThinV);
        return truncate(svd.matrixU(), svd.singularValues(), svd.matrixV(), k);
    }

    // Randomized range finder (Halko et al. style): sample the column space
    // with a Gaussian sketch, sharpen it with power iterations, then solve the
    // small projected problem exactly.
    const int oversampling = 10;
    const int sketch = std::min(min_dim, k + oversampling);

    std::mt19937_64 engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd omega(matrix.cols(), sketch);
    for (int i = 0; i < omega.rows(); ++i) {
        for (int j = 0; j < omega.cols(); ++j) omega(i, j) = gauss(engine);
    }

    Eigen::MatrixXd y = matrix * omega;
    auto orthonormalize = [](const Eigen::MatrixXd& a) -> Eigen::MatrixXd {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
        return qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
    };
    Eigen::MatrixXd q = orthonormalize(y);
    for (int it = 0; it < 2; ++it) {
        q = orthonormalize(matrix.transpose() * q);
        q = orthonormalize(matrix * q);
    }

    const Eigen::MatrixXd b = q.transpose() * matrix;  // sketch x m
    Eigen::BDCSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::MatrixXd u = q * svd.matrixU();
    return truncate(u, svd.singularValues(), svd.matrixV(), k);
}

FactorizedMatrix truncated_svd(const VisitMatrix& matrix, int k, SvdMethod method,
                               std::uint64_t seed) {
    return truncated_svd(to_dense(matrix), k, method, seed);
}

ExpectedMatrix reconstruct(const FactorizedMatrix& factors) {
    return factors.left * factors.singular_values.asDiagonal() *
           factors.right.transpose();
}

Eigen::MatrixXd to_dense(const VisitMatrix& matrix) {
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(matrix.n_users(), matrix.n_pois());
    for (std::size_t row = 0; row < matrix.rows.size(); ++row) {
        for (const auto& [col, value] : matrix.rows[row]) {
            dense(static_cast<int>(row), col) = value;
        }
    }
    return dense;
}

}  // namespace trajanom
