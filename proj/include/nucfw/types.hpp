#pragma once

#include <Eigen/Core>

namespace nucfw {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// The rank-one matrix scale * u * v^T. Carrier for linear-minimization
/// atoms and rank-drop perturbations.
struct RankOneOuter {
  Vector u;
  Vector v;
  double scale = 0.0;
};

}  // namespace nucfw
