#pragma once

#include "rfddes/complex_solver.hpp"
#include "rfddes/eig_result.hpp"

namespace rfddes {

/// Arnoldi data for the filtered operator; exposed for diagnostics and the
/// verification suite.
struct ArnoldiState {
  Eigen::MatrixXd Q;  // n x mu, orthonormal
  Eigen::MatrixXd H;  // (mu+1) x mu upper Hessenberg
  int mu = 0;
  std::vector<double> trace_history;
};

struct RfKrylovOptions {
  double tol = 1e-6;
  int check_every = 10;
  int max_iter = 500;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Arnoldi iteration on the full filtered pencil operator
/// 2 Re{ sum_l w_l (A - z_l M)^{-1} M } with full orthogonalization.
///
/// The iteration stops once the sum of the Hessenberg eigenvalues no less
/// than 1/2 is unchanged (relative `tol`) between two consecutive check
/// points. Ritz pairs whose filtered eigenvalue reaches 1/2 are converted
/// to pencil eigenpairs via Rayleigh quotients; pairs falling outside the
/// filter interval by more than a sliver of its width are discarded.
EigResult rf_krylov_solve(const SparseSym& a, const SparseSym& m, const RationalFilter& f,
                          const RfKrylovOptions& opts = {}, ArnoldiState* state = nullptr);

} // namespace rfddes
