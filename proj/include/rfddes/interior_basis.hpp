#pragma once

#include <Eigen/SparseLU>
#include <memory>

#include "rfddes/pencil.hpp"

namespace rfddes {

/// Direct factorization of a real sparse matrix (B - sigma * M_B blocks).
class RealFactorization {
public:
  RealFactorization() = default;

  void factor(const Eigen::SparseMatrix<double>& k, double shift);

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;

  int size() const { return n_; }
  double shift() const { return shift_; }
  bool valid() const { return lu_ != nullptr; }

private:
  std::shared_ptr<const Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>> lu_;
  int n_ = 0;
  double shift_ = 0.0;
};

struct InteriorEigOptions {
  double residual_tol = 1e-10;  // relative to ||B||_1 + |delta| ||M_B||_1
  int max_iter = -1;            // default 4 * nev_b + 100, capped by d
  std::uint64_t seed = 0;
};

struct InteriorEigs {
  Eigen::MatrixXd V;      // d x k, M_B-orthonormal
  Eigen::VectorXd delta;  // eigenvalues of (B, M_B), closest to sigma first
  int iterations = 0;
  bool converged = true;
};

/// Eigenpairs of (B, M_B) closest to the shift, i.e. the smallest-magnitude
/// eigenvalues of (B - sigma M_B, M_B), by shift-invert Lanczos in the M_B
/// inner product with full reorthogonalization. Real arithmetic only.
InteriorEigs smallest_eigs_B(const SparseSym& b, const SparseSym& m_b, double sigma, int nev_b,
                             const InteriorEigOptions& opts = {});

/// Phi_j = (E_j - sigma M_E_j) Q_j and Psi_j = M_E_j Q_j, where Q_j is the
/// window slice of the interface basis. Psi_j has zero columns when the
/// pencil has no interface mass coupling.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> compute_phi_psi(const DDPencil& dd, int j, double sigma,
                                                            const Eigen::MatrixXd& q);

/// Column blocks of the resolvent expansion around sigma:
/// block t of Sigma is (B_s^{-1} M_B)^{t-1} B_s^{-1} Phi, t = 1..psi, and
/// Gamma is the analogue seeded with Psi.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> resolvent_blocks(const RealFactorization& b_sigma,
                                                             const SparseSym& m_b, const Eigen::MatrixXd& phi,
                                                             const Eigen::MatrixXd& psi_mat, int psi);

} // namespace rfddes
