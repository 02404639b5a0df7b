#pragma once

#include <Eigen/Core>

namespace curvesearch {

using Vector = Eigen::VectorXd;
using VectorLD = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

/// Slack for every runtime "g_i(x) <= 0" test.
inline constexpr double kFeasTol = 1e-8;

}  // namespace curvesearch
