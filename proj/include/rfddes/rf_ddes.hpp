#pragma once

#include "rfddes/eig_result.hpp"
#include "rfddes/interface_eig.hpp"
#include "rfddes/interior_basis.hpp"

namespace rfddes {

struct RfDdesConfig {
  double alpha = 0.0;
  double beta = 1.0;
  double sigma = 0.0;
  int p = 2;
  int n_c = 2;
  int nev_b = 100;  // per subdomain
  int psi = 3;
  double tol = 1e-6;
  int check_every = 10;
  int max_iter_interface = -1;
  int max_iter_interior = -1;
  std::uint64_t seed = 0;
  int threads = 1;
  // Ritz pairs are kept when within [alpha, beta] extended by this fraction
  // of the interval width on both sides.
  double keep_slack_rel = 1e-8;

  void validate() const;
};

/// Projection matrix with the arrowhead block layout: interior rows of
/// subdomain j carry [V_j | -Sigma_j | Gamma_j], interface rows carry
/// [0 | Q 0 | 0]. The Gamma block is omitted when every M_E block is zero.
Eigen::MatrixXd assemble_Z(const PartitionMeta& meta, const std::vector<Eigen::MatrixXd>& v,
                           const std::vector<Eigen::MatrixXd>& sigma_blocks,
                           const std::vector<Eigen::MatrixXd>& gamma_blocks, const Eigen::MatrixXd& q, int psi,
                           bool m_e_is_zero);

/// Rayleigh-Ritz extraction from span(Z) for the pencil (A, M), in whatever
/// variable ordering A, M and Z share. Columns of Z are orthonormalized
/// (rank-revealing QR) before projection; dependent columns are dropped and
/// flagged. Pairs outside the slack-extended interval are discarded.
EigResult rayleigh_ritz(const SparseSym& a, const SparseSym& m, const Eigen::MatrixXd& z, double alpha,
                        double beta, double keep_slack_rel = 1e-8);

/// Full pipeline: partition, reorder, interior eigenvectors, interface
/// basis, subspace assembly, Rayleigh-Ritz, and back-permutation to the
/// original ordering. Deterministic for fixed seeds.
EigResult rf_ddes_solve(const RfDdesConfig& cfg, const SparseSym& a, const SparseSym& m);

} // namespace rfddes
