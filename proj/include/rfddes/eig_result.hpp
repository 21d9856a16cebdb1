#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "rfddes/sparse.hpp"

namespace rfddes {

/// Approximate eigenpairs of (A, M) plus run metadata. Eigenvalues are
/// ascending, eigenvectors M-normalized and expressed in the original
/// variable ordering of the input matrices.
struct EigResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;    // n x k
  Eigen::VectorXd residuals;  // ||A x - lambda M x||_2 with x M-normalized

  struct Meta {
    int iterations = 0;  // outer Krylov iterations (mu)
    bool converged = true;
    int dim_subspace = 0;   // projection subspace columns before conditioning
    int rank_subspace = 0;  // columns kept after conditioning
    bool dropped_columns = false;
    int s = 0;
    std::vector<int> d;
    std::vector<double> trace_history;
    std::vector<std::pair<std::string, double>> phase_seconds;
  } meta;

  int count() const { return static_cast<int>(values.size()); }
};

/// Per-pair ||A x - lambda M x||_2 / ||x||_M.
Eigen::VectorXd pencil_residuals(const SparseSym& a, const SparseSym& m, const Eigen::VectorXd& values,
                                 const Eigen::MatrixXd& vectors);

} // namespace rfddes
