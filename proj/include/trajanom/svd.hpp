#ifndef TRAJANOM_SVD_HPP
#define TRAJANOM_SVD_HPP

#include <cstdint>

#include <Eigen/Dense>

#include "trajanom/visit_matrix.hpp"

namespace trajanom {

/// Dense model-expected visit matrix; entries may be < 0 or > 1.
using ExpectedMatrix = Eigen::MatrixXd;

enum class SvdMethod { deterministic, randomized };

/// Rank-k factorization U diag(s) V^T with orthonormal factor columns and
/// singular values sorted non-increasing.
struct FactorizedMatrix {
    Eigen::MatrixXd left;             // n_users x k
    Eigen::VectorXd singular_values;  // k, non-increasing, >= 0
    Eigen::MatrixXd right;            // n_pois x k
    int k = 0;
};

/// Top-k singular triplets of the (densified) visit matrix. The deterministic
/// method computes a full dense SVD and truncates; the randomized method uses
/// a Gaussian range finder with oversampling 10 and 2 power iterations and is
/// reproducible given the seed. Throws std::invalid_argument when k is out of
/// range.
FactorizedMatrix truncated_svd(const Eigen::MatrixXd& matrix, int k, SvdMethod method,
                               std::uint64_t seed = 0);
FactorizedMatrix truncated_svd(const VisitMatrix& matrix, int k, SvdMethod method,
                               std::uint64_t seed = 0);

/// left * diag(singular_values) * right^T.
ExpectedMatrix reconstruct(const FactorizedMatrix& factors);

Eigen::MatrixXd to_dense(const VisitMatrix& matrix);

}  // namespace trajanom

#endif
