#include "rfddes/eig_result.hpp"

#include <cmath>

namespace rfddes {

Eigen::VectorXd pencil_residuals(const SparseSym& a, const SparseSym& m, const Eigen::VectorXd& values,
                                 const Eigen::MatrixXd& vectors) {
  Eigen::VectorXd res(values.size());
  for (int i = 0; i < values.size(); ++i) {
    const Eigen::VectorXd x = vectors.col(i);
    const Eigen::VectorXd mx = spmv(m, x);
    const double mnorm = std::sqrt(std::max(0.0, x.dot(mx)));
    const double r = (spmv(a, x) - values[i] * mx).norm();
    res[i] = mnorm > 0.0 ? r / mnorm : r;
  }
  return res;
}

} // namespace rfddes
