#pragma once

#include "rfddes/complex_solver.hpp"

namespace rfddes {

/// Orthonormal basis of the filtered interface operator's range produced by
/// the Lanczos process with full reorthogonalization.
struct InterfaceBasis {
  Eigen::MatrixXd Q;        // s x mu
  Eigen::VectorXd diag;     // tridiagonal diagonal a_1..a_mu
  Eigen::VectorXd offdiag;  // tridiagonal off-diagonal b_2..b_mu
  int mu = 0;
  bool converged = true;
  std::vector<double> trace_history;
};

struct InterfaceLanczosOptions {
  double tol = 1e-6;
  int check_every = 10;
  int max_iter = -1;  // capped by s regardless
  std::uint64_t seed = 0;
};

/// Lanczos on Re{ sum_l w_l S_l^{-1} } restricted to the interface.
/// Stops when the sum of the eigenvalues of the tridiagonal matrix is
/// unchanged (relative tol) between two consecutive check points, or when
/// the basis spans the whole interface space.
InterfaceBasis interface_lanczos(const SchurSet& ss, const InterfaceLanczosOptions& opts = {});

} // namespace rfddes
