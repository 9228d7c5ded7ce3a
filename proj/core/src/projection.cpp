#include "cobs/projection.hpp"

#include <Eigen/Eigenvalues>

#include "cobs/error.hpp"

namespace cobs {

Matrix principal_projection(const Matrix& points, int dims) {
  if (points.rows() == 0) throw InvalidInput("projection of an empty matrix");
  const Eigen::RowVectorXd mean = points.colwise().mean();
  const Eigen::MatrixXd centered = points.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  const auto f = cov.rows();
  Eigen::MatrixXd axes = Eigen::MatrixXd::Zero(f, dims);
  for (int c = 0; c < dims && c < f; ++c) {
    Eigen::VectorXd v = solver.eigenvectors().col(f - 1 - c);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    axes.col(c) = v;
  }
  return centered * axes;
}

}  // namespace cobs
