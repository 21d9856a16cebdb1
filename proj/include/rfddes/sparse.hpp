#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <string>
#include <vector>

#include "rfddes/errors.hpp"

namespace rfddes {

/// Largest dimension accepted by dense conversions and the dense reference
/// eigensolver. Keeps verification runs within desk-scale budgets.
inline constexpr int kDenseCap = 5000;

/// Compressed sparse row storage of a real symmetric matrix. Both triangles
/// are stored explicitly; column indices are strictly increasing within each
/// row and rows never contain duplicate entries. Instances are immutable
/// after construction and safe to read concurrently.
struct SparseSym {
  int n = 0;
  std::vector<int> row_offsets;  // size n + 1
  std::vector<int> col_indices;
  std::vector<double> values;

  int nnz() const { return static_cast<int>(col_indices.size()); }

  /// Stored value at (i, j), or 0 when the entry is structurally absent.
  double coeff(int i, int j) const;

  static SparseSym identity(int n);

  struct Entry {
    int row;
    int col;
    double value;
  };

  /// Builds from an arbitrary entry list covering the full pattern.
  /// Duplicate positions are summed.
  static SparseSym from_entries(int n, std::vector<Entry> entries);
};

struct DensePencilView {
  Eigen::MatrixXd a;
  Eigen::MatrixXd m;
};

/// Reads a Matrix Market coordinate file (real, general or symmetric).
/// Symmetric files are expanded to the full pattern; general files must be
/// numerically symmetric. Comment lines starting with '%' are skipped.
SparseSym load_matrix_market(const std::string& path);

/// Writes the full stored pattern as a general coordinate file.
void save_matrix_market(const SparseSym& a, const std::string& path);

/// 5-point finite-difference Laplacian on an nx-by-ny grid with Dirichlet
/// boundaries, unscaled (diagonal 4, off-diagonal -1). Row index of grid
/// point (x, y) is x * ny + y. Eigenvalues are analytically
/// 4 - 2cos(i pi/(nx+1)) - 2cos(j pi/(ny+1)).
SparseSym gen_fd_laplacian(int nx, int ny);

Eigen::VectorXd spmv(const SparseSym& a, const Eigen::VectorXd& x);

Eigen::MatrixXd to_dense(const SparseSym& a, int cap = kDenseCap);

DensePencilView to_dense_pencil(const SparseSym& a, const SparseSym& m, int cap = kDenseCap);

/// Maximum |A_ij - A_ji| over stored entries; exactly 0 for a valid matrix.
double max_asymmetry(const SparseSym& a);

/// Maximum absolute column sum (equals the row version by symmetry).
double norm1(const SparseSym& a);

Eigen::SparseMatrix<double> to_eigen(const SparseSym& a);

SparseSym from_dense(const Eigen::MatrixXd& a, double drop_tol = 0.0);

} // namespace rfddes
