#pragma once

#include "rfddes/complex_solver.hpp"
#include "rfddes/filter.hpp"
#include "rfddes/pencil.hpp"

namespace rfddes {

/// Complete dense reference decomposition of (A, M): all eigenvalues
/// ascending, eigenvectors M-orthonormal, in the ordering of the inputs.
/// Verification-only; allowed to be much slower than the solvers.
struct FullEigenReference {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

FullEigenReference dense_gen_eig(const SparseSym& a, const SparseSym& m, int cap = kDenseCap);

/// Interface parts y^(i) (rows of the permuted eigenvectors below the
/// interior block) of the first `count` reference eigenvectors.
Eigen::MatrixXd interface_components(const FullEigenReference& ref, const PartitionMeta& meta, int count);

/// Interior parts u^(i) of the first `count` reference eigenvectors.
Eigen::MatrixXd interior_components(const FullEigenReference& ref, const PartitionMeta& meta, int count);

struct SingularSpectrum {
  Eigen::VectorXd singular_values;
  int rank = 0;  // count of values above rel_tol * sigma_max
};

SingularSpectrum numerical_rank(const Eigen::MatrixXd& x, double rel_tol = 1e-10);

/// Full singular spectrum of the explicitly formed Re{ sum w_l S_l^{-1} }.
SingularSpectrum rank_filtered_schur(const DDPencil& dd, const RationalFilter& f);

/// Relative Frobenius gap of 2 Re{ sum w_l S_l^{-1} } against the spectral
/// expansion sum_i rho(lambda_i) y_i y_i^T over all reference pairs.
double filtered_schur_identity_error(const DDPencil& dd, const RationalFilter& f, const FullEigenReference& ref);

/// Relative Frobenius gap between the block-assembled inverse of the
/// shifted permuted pencil (transpose convention) and its dense inverse.
double block_inverse_identity_error(const DDPencil& dd, const SparseSym& a, const SparseSym& m, Complex zeta);

/// Relative Frobenius gap of dense (A - zeta M)^{-1} against the spectral
/// expansion sum_i x_i x_i^T / (lambda_i - zeta), for real zeta outside the
/// spectrum.
double resolvent_expansion_error(const SparseSym& a, const SparseSym& m, const FullEigenReference& ref,
                                 double zeta);

/// Difference norm of the two sides of the interior error identity
/// u - u_hat = -[B_l^{-1} - B_s^{-1}] E_s y + (l - s) B_l^{-1} M_E y for one
/// reference eigenpair, with u_hat = -B_s^{-1} E_s y.
double interior_identity_error(const DDPencil& dd, const FullEigenReference& ref, double sigma, int index);

/// Interior approximation error bounds for one subspace family. lhs_* hold
/// the attained M_B-norm errors, rhs_* the analytic bounds.
struct TheoremBounds {
  double lambda = 0.0;
  double lhs_basic = 0.0;     // u_hat = -B_s^{-1} E_s y
  double rhs_basic = 0.0;
  double lhs_expanded = 0.0;  // projection onto the depth-psi expansion
  double rhs_expanded = 0.0;
  double lhs_deflated = 0.0;  // expansion plus kappa nearest eigenvectors
  double rhs_deflated = 0.0;
  bool flagged = false;  // shift or lambda coincides with an eigenvalue of (B, M_B)
};

std::vector<TheoremBounds> theorem_bound_report(const DDPencil& dd, const FullEigenReference& ref, double sigma,
                                                int psi, int kappa);

/// Random symmetric pencil with the given half bandwidth; M is diagonally
/// dominant, hence positive definite.
std::pair<SparseSym, SparseSym> random_sparse_pencil(int n, int bandwidth, std::uint64_t seed);

/// Analytic eigenvalues of gen_fd_laplacian(nx, ny), ascending with their
/// (i, j) mode indices (1-based).
struct MeshModes {
  int nx = 0;
  int ny = 0;
  Eigen::VectorXd values;
  std::vector<std::pair<int, int>> modes;
};

MeshModes fd_mesh_modes(int nx, int ny);

/// Analytic eigenvector of the (i, j) mode, in gen_fd_laplacian's grid
/// ordering, unit 2-norm.
Eigen::VectorXd fd_mesh_eigenvector(int nx, int ny, int i, int j);

} // namespace rfddes
