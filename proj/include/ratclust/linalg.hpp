#pragma once

#include <Eigen/Dense>

namespace ratclust {

enum class RankPolicy {
    /// Throw IllPosedError when the numerical rank is below the column count.
    strict,
    /// Return the basic solution on the numerically independent columns.
    truncate,
};

struct LeastSquaresSolution {
    Eigen::VectorXd coefficients;
    long rank = 0;
};

/// Relative threshold on |R_ii| / |R_00| used to decide numerical rank.
inline constexpr double kRankThreshold = 1e-14;

/// Solves min ||A c - b||_2 by column-pivoted Householder QR after scaling
/// every column of A to unit 2-norm. Zero columns are left unscaled.
[[nodiscard]] LeastSquaresSolution solve_least_squares(const Eigen::MatrixXd& a,
                                                       const Eigen::VectorXd& b,
                                                       RankPolicy policy = RankPolicy::strict,
                                                       double threshold = kRankThreshold);

}  // namespace ratclust
