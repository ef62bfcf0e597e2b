#include "ratclust/linalg.hpp"

#include "ratclust/errors.hpp"

#include <string>

namespace ratclust {

LeastSquaresSolution solve_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                         RankPolicy policy, double threshold) {
    if (a.rows() != b.size()) throw InvalidArgument("least squares: row count mismatch");
    if (a.cols() == 0) return {Eigen::VectorXd(0), 0};

    Eigen::VectorXd scale = a.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < scale.size(); ++j)
        if (scale(j) == 0.0) scale(j) = 1.0;
    const Eigen::MatrixXd scaled = a * scale.cwiseInverse().asDiagonal();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
    qr.setThreshold(threshold);
    const long rank = qr.rank();
    if (rank < a.cols() && policy == RankPolicy::strict) {
        throw IllPosedError("least-squares design matrix is rank deficient (rank " +
                                std::to_string(rank) + " of " + std::to_string(a.cols()) + ")",
                            rank, a.cols());
    }
    LeastSquaresSolution sol;
    sol.coefficients = qr.solve(b).cwiseQuotient(scale);
    sol.rank = rank;
    return sol;
}

}  // namespace ratclust
