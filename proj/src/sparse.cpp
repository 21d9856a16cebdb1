#include "rfddes/sparse.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rfddes {

double SparseSym::coeff(int i, int j) const {
  const int* begin = col_indices.data() + row_offsets[i];
  const int* end = col_indices.data() + row_offsets[i + 1];
  const int* it = std::lower_bound(begin, end, j);
  if (it != end && *it == j) return values[it - col_indices.data()];
  return 0.0;
}

SparseSym SparseSym::identity(int n) {
  SparseSym a;
  a.n = n;
  a.row_offsets.resize(n + 1);
  a.col_indices.resize(n);
  a.values.assign(n, 1.0);
  for (int i = 0; i <= n; ++i) a.row_offsets[i] = i;
  for (int i = 0; i < n; ++i) a.col_indices[i] = i;
  return a;
}

SparseSym SparseSym::from_entries(int n, std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& l, const Entry& r) {
    return l.row != r.row ? l.row < r.row : l.col < r.col;
  });
  SparseSym a;
  a.n = n;
  a.row_offsets.assign(n + 1, 0);
  a.col_indices.reserve(entries.size());
  a.values.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size();) {
    const int i = entries[k].row;
    const int j = entries[k].col;
    double v = 0.0;
    while (k < entries.size() && entries[k].row == i && entries[k].col == j) {
      v += entries[k].value;
      ++k;
    }
    a.col_indices.push_back(j);
    a.values.push_back(v);
    ++a.row_offsets[i + 1];
  }
  for (int i = 0; i < n; ++i) a.row_offsets[i + 1] += a.row_offsets[i];
  return a;
}

namespace {

bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '%') continue;
    return true;
  }
  return false;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

} // namespace

SparseSym load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");

  std::string header;
  if (!std::getline(in, header)) throw ParseError("empty file '" + path + "'");
  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (lower(banner) != "%%matrixmarket" || lower(object) != "matrix")
    throw ParseError("not a Matrix Market file: '" + path + "'");
  if (lower(format) != "coordinate") throw ParseError("only coordinate format is supported");
  field = lower(field);
  symmetry = lower(symmetry);
  if (field == "complex") throw ParseError("complex-valued files are not supported");
  if (field != "real" && field != "integer")
    throw ParseError("unsupported field type '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric")
    throw ParseError("unsupported symmetry qualifier '" + symmetry + "'");
  const bool symmetric = symmetry == "symmetric";

  std::string line;
  if (!next_data_line(in, line)) throw ParseError("missing size line");
  long rows = -1, cols = -1, declared = -1;
  {
    std::istringstream ls(line);
    if (!(ls >> rows >> cols >> declared)) throw ParseError("malformed size line '" + line + "'");
  }
  if (rows != cols) throw ParseError("matrix is not square (" + std::to_string(rows) + "x" + std::to_string(cols) + ")");
  if (rows < 0 || declared < 0) throw ParseError("negative dimensions in size line");

  std::vector<SparseSym::Entry> entries;
  entries.reserve(static_cast<std::size_t>(symmetric ? 2 * declared : declared));
  for (long k = 0; k < declared; ++k) {
    if (!next_data_line(in, line))
      throw ParseError("file declares " + std::to_string(declared) + " entries but contains " + std::to_string(k));
    std::istringstream ls(line);
    long i = 0, j = 0;
    double v = 0.0;
    if (!(ls >> i >> j >> v)) throw ParseError("malformed entry line '" + line + "'");
    if (i < 1 || i > rows || j < 1 || j > cols) throw ParseError("entry index out of range in '" + line + "'");
    entries.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), v});
    if (symmetric && i != j) entries.push_back({static_cast<int>(j - 1), static_cast<int>(i - 1), v});
  }
  if (next_data_line(in, line)) throw ParseError("trailing data beyond declared entry count");

  SparseSym a = SparseSym::from_entries(static_cast<int>(rows), std::move(entries));
  if (max_asymmetry(a) != 0.0) throw ParseError("general file is not symmetric: '" + path + "'");
  return a;
}

void save_matrix_market(const SparseSym& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SolverError("output", "cannot open '" + path + "' for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.n << " " << a.n << " " << a.nnz() << "\n";
  char buf[64];
  for (int i = 0; i < a.n; ++i) {
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i + 1, a.col_indices[k] + 1, a.values[k]);
      out << buf;
    }
  }
  if (!out) throw SolverError("output", "write failure on '" + path + "'");
}

SparseSym gen_fd_laplacian(int nx, int ny) {
  if (nx < 1 || ny < 1) throw SolverError("ingestion", "grid dimensions must be positive");
  const int n = nx * ny;
  std::vector<SparseSym::Entry> entries;
  entries.reserve(static_cast<std::size_t>(5) * n);
  auto idx = [ny](int x, int y) { return x * ny + y; };
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      const int k = idx(x, y);
      entries.push_back({k, k, 4.0});
      if (x > 0) entries.push_back({k, idx(x - 1, y), -1.0});
      if (x + 1 < nx) entries.push_back({k, idx(x + 1, y), -1.0});
      if (y > 0) entries.push_back({k, idx(x, y - 1), -1.0});
      if (y + 1 < ny) entries.push_back({k, idx(x, y + 1), -1.0});
    }
  }
  return SparseSym::from_entries(n, std::move(entries));
}

Eigen::VectorXd spmv(const SparseSym& a, const Eigen::VectorXd& x) {
  if (x.size() != a.n) throw SolverError("ingestion", "dimension mismatch in matrix-vector product");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(a.n);
  for (int i = 0; i < a.n; ++i) {
    double acc = 0.0;
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) acc += a.values[k] * x[a.col_indices[k]];
    y[i] = acc;
  }
  return y;
}

Eigen::MatrixXd to_dense(const SparseSym& a, int cap) {
  if (a.n > cap)
    throw SolverError("ingestion",
                      "dense conversion refused: n=" + std::to_string(a.n) + " exceeds cap " + std::to_string(cap));
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.n, a.n);
  for (int i = 0; i < a.n; ++i)
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) d(i, a.col_indices[k]) = a.values[k];
  return d;
}

DensePencilView to_dense_pencil(const SparseSym& a, const SparseSym& m, int cap) {
  return DensePencilView{to_dense(a, cap), to_dense(m, cap)};
}

double max_asymmetry(const SparseSym& a) {
  double worst = 0.0;
  for (int i = 0; i < a.n; ++i) {
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      const int j = a.col_indices[k];
      worst = std::max(worst, std::abs(a.values[k] - a.coeff(j, i)));
    }
  }
  return worst;
}

double norm1(const SparseSym& a) {
  double worst = 0.0;
  for (int i = 0; i < a.n; ++i) {
    double acc = 0.0;
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) acc += std::abs(a.values[k]);
    worst = std::max(worst, acc);
  }
  return worst;
}

Eigen::SparseMatrix<double> to_eigen(const SparseSym& a) {
  // CSR of a symmetric matrix doubles as CSC.
  Eigen::SparseMatrix<double> s(a.n, a.n);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(a.col_indices.size());
  for (int i = 0; i < a.n; ++i)
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k)
      trips.emplace_back(i, a.col_indices[k], a.values[k]);
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

SparseSym from_dense(const Eigen::MatrixXd& a, double drop_tol) {
  std::vector<SparseSym::Entry> entries;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (std::abs(a(i, j)) > drop_tol) entries.push_back({i, j, a(i, j)});
  return SparseSym::from_entries(static_cast<int>(a.rows()), std::move(entries));
}

} // namespace rfddes
