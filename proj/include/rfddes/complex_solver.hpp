#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <memory>
#include <vector>

#include "rfddes/filter.hpp"
#include "rfddes/pencil.hpp"

namespace rfddes {

/// Direct factorization of one complex symmetric sparse matrix supporting
/// repeated multi-right-hand-side solves. Factorizations are immutable once
/// built and solves are reentrant.
class ComplexFactorization {
public:
  ComplexFactorization() = default;

  void factor(const SparseComplex& k, Complex shift);

  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& b) const;

  int size() const { return n_; }
  Complex shift() const { return shift_; }
  bool valid() const { return lu_ != nullptr; }

private:
  std::shared_ptr<const Eigen::SparseLU<SparseComplex, Eigen::COLAMDOrdering<int>>> lu_;
  int n_ = 0;
  Complex shift_{0.0, 0.0};
};

ComplexFactorization factor_complex(const SparseComplex& k, Complex shift = {0.0, 0.0});

/// Schur complement of the shifted pencil at one quadrature node:
/// S = C_z - sum_j E_z_j^T B_z_j^{-1} E_z_j, assembled dense. The transpose
/// (not the conjugate transpose) couples the off-diagonal blocks, which is
/// the exact identity for a complex symmetric shifted pencil.
Eigen::MatrixXcd form_schur(const DDPencil& dd, Complex zeta);

struct SchurNode {
  Complex zeta;
  Complex weight;
  Eigen::MatrixXcd S;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
  std::vector<ComplexFactorization> b_factors;  // kept only on request
};

/// Per-node Schur complements with their dense factorizations. Building the
/// set factors every (node, subdomain) pair independently; `threads` caps
/// how many of those factorizations run concurrently.
struct SchurSet {
  int s = 0;
  std::vector<SchurNode> nodes;
};

SchurSet build_schur_set(const DDPencil& dd, const RationalFilter& f, bool keep_b_factors = false,
                         int threads = 1);

/// w = 2 Re{ sum_l w_l (A - z_l M)^{-1} M v } given per-node factorizations
/// of the full shifted pencil.
Eigen::VectorXd apply_filtered_resolvent_full(const std::vector<ComplexFactorization>& factors,
                                              const RationalFilter& f, const SparseSym& m,
                                              const Eigen::VectorXd& v);

/// w = Re{ sum_l w_l S_l^{-1} q }.
Eigen::VectorXd apply_filtered_schur(const SchurSet& ss, const Eigen::VectorXd& q);

/// Explicit scale * Re{ sum_l w_l S_l^{-1} } (verification support).
Eigen::MatrixXd filtered_schur_matrix(const SchurSet& ss, double scale = 1.0);

/// Largest |S - S^T| entry relative to |S|'s largest entry.
double schur_symmetry_defect(const Eigen::MatrixXcd& s);

} // namespace rfddes
