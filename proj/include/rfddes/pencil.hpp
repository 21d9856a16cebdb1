#pragma once

#include <complex>
#include <vector>

#include "rfddes/partition.hpp"
#include "rfddes/sparse.hpp"

namespace rfddes {

using Complex = std::complex<double>;
using SparseComplex = Eigen::SparseMatrix<Complex>;

/// Rectangular sparse block in CSR with column indices local to the owning
/// subdomain's interface window.
struct SparseRect {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_offsets;
  std::vector<int> col_indices;
  std::vector<double> values;

  int nnz() const { return static_cast<int>(col_indices.size()); }
  Eigen::MatrixXd to_dense() const;
  Eigen::SparseMatrix<double> to_eigen() const;

  /// Dense product with a conforming matrix (cols x k).
  Eigen::MatrixXd multiply(const Eigen::MatrixXd& x) const;
};

/// The reordered pencil split into per-subdomain interior blocks, coupling
/// blocks against the owning interface window, and the global interface
/// blocks. Immutable after construction; per-subdomain blocks can be used
/// concurrently.
struct DDPencil {
  PartitionMeta meta;
  std::vector<SparseSym> B;         // d_j x d_j
  std::vector<SparseSym> M_B;       // d_j x d_j
  std::vector<SparseRect> E_hat;    // d_j x s_j
  std::vector<SparseRect> M_E_hat;  // d_j x s_j
  SparseSym C;                      // s x s
  SparseSym M_C;                    // s x s
  bool m_e_is_zero = true;

  int n() const { return meta.n; }
  int p() const { return meta.p; }
  int s() const { return meta.s_total; }
  int d() const { return meta.d_total; }
};

/// Extracts all blocks of the permuted pencil. Interior rows with entries
/// outside their own block or interface window indicate a broken partition
/// and raise an internal consistency error.
DDPencil split_blocks(const SparseSym& a, const SparseSym& m, const PartitionMeta& meta);

/// Complex blocks X - zeta * M_X on the union pattern of the operands.
struct ShiftedBlocks {
  std::vector<SparseComplex> B;  // d_j x d_j, complex symmetric
  std::vector<SparseComplex> E;  // d_j x s_j
  SparseComplex C;               // s x s
};

ShiftedBlocks shifted_blocks(const DDPencil& dd, Complex zeta);

/// Dense copies of the compact global blocks (oracle support; n capped).
struct DenseBlocks {
  Eigen::MatrixXd b, m_b, e, m_e, c, m_c;
};

DenseBlocks dense_blocks(const DDPencil& dd, int cap = kDenseCap);

} // namespace rfddes
