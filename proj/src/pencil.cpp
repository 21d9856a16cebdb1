#include "rfddes/pencil.hpp"

#include <algorithm>

namespace rfddes {

Eigen::MatrixXd SparseRect::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k) d(i, col_indices[k]) = values[k];
  return d;
}

Eigen::SparseMatrix<double> SparseRect::to_eigen() const {
  Eigen::SparseMatrix<double> s(rows, cols);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(col_indices.size());
  for (int i = 0; i < rows; ++i)
    for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k) trips.emplace_back(i, col_indices[k], values[k]);
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

Eigen::MatrixXd SparseRect::multiply(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(rows, x.cols());
  for (int i = 0; i < rows; ++i)
    for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k) y.row(i) += values[k] * x.row(col_indices[k]);
  return y;
}

namespace {

struct RectBuilder {
  int rows = 0, cols = 0;
  std::vector<std::vector<std::pair<int, double>>> by_row;

  void init(int r, int c) {
    rows = r;
    cols = c;
    by_row.assign(r, {});
  }
  void add(int i, int j, double v) { by_row[i].emplace_back(j, v); }
  SparseRect finish() {
    SparseRect r;
    r.rows = rows;
    r.cols = cols;
    r.row_offsets.assign(rows + 1, 0);
    for (int i = 0; i < rows; ++i) {
      std::sort(by_row[i].begin(), by_row[i].end());
      r.row_offsets[i + 1] = r.row_offsets[i] + static_cast<int>(by_row[i].size());
    }
    r.col_indices.reserve(r.row_offsets[rows]);
    r.values.reserve(r.row_offsets[rows]);
    for (int i = 0; i < rows; ++i)
      for (auto& [j, v] : by_row[i]) {
        r.col_indices.push_back(j);
        r.values.push_back(v);
      }
    return r;
  }
};

} // namespace

DDPencil split_blocks(const SparseSym& a, const SparseSym& m, const PartitionMeta& meta) {
  if (a.n != meta.n || m.n != meta.n) throw SolverError("partition", "partition does not match matrix dimension");
  DDPencil dd;
  dd.meta = meta;
  const int p = meta.p;

  std::vector<std::vector<SparseSym::Entry>> b_entries(p), mb_entries(p);
  std::vector<RectBuilder> e_build(p), me_build(p);
  std::vector<SparseSym::Entry> c_entries, mc_entries;
  for (int j = 0; j < p; ++j) {
    e_build[j].init(meta.d[j], meta.s[j]);
    me_build[j].init(meta.d[j], meta.s[j]);
  }

  auto route = [&](const SparseSym& x, bool is_mass) {
    for (int oi = 0; oi < x.n; ++oi) {
      const int pi = meta.iperm[oi];
      for (int k = x.row_offsets[oi]; k < x.row_offsets[oi + 1]; ++k) {
        const int pj = meta.iperm[x.col_indices[k]];
        const double v = x.values[k];
        if (pi >= meta.d_total) {
          if (pj >= meta.d_total) {
            auto& dst = is_mass ? mc_entries : c_entries;
            dst.push_back({pi - meta.d_total, pj - meta.d_total, v});
          }
          // interior column of an interface row: handled as the mirrored entry
          continue;
        }
        const int sub = meta.labels[oi];
        const int row_local = pi - meta.interior_offsets[sub];
        if (pj < meta.d_total) {
          const int col_local = pj - meta.interior_offsets[sub];
          if (col_local < 0 || col_local >= meta.d[sub])
            throw SolverError("partition", "interior row couples across subdomains; partition is inconsistent");
          auto& dst = is_mass ? mb_entries[sub] : b_entries[sub];
          dst.push_back({row_local, col_local, v});
        } else {
          const int col_local = pj - meta.window_start(sub);
          if (col_local < 0 || col_local >= meta.s[sub])
            throw SolverError("partition", "interior row couples outside its interface window");
          auto& dst = is_mass ? me_build[sub] : e_build[sub];
          dst.add(row_local, col_local, v);
        }
      }
    }
  };
  route(a, false);
  route(m, true);

  dd.B.reserve(p);
  dd.M_B.reserve(p);
  dd.E_hat.reserve(p);
  dd.M_E_hat.reserve(p);
  for (int j = 0; j < p; ++j) {
    dd.B.push_back(SparseSym::from_entries(meta.d[j], std::move(b_entries[j])));
    dd.M_B.push_back(SparseSym::from_entries(meta.d[j], std::move(mb_entries[j])));
    dd.E_hat.push_back(e_build[j].finish());
    dd.M_E_hat.push_back(me_build[j].finish());
  }
  dd.C = SparseSym::from_entries(meta.s_total, std::move(c_entries));
  dd.M_C = SparseSym::from_entries(meta.s_total, std::move(mc_entries));

  dd.m_e_is_zero = true;
  for (const SparseRect& r : dd.M_E_hat)
    for (double v : r.values)
      if (v != 0.0) dd.m_e_is_zero = false;
  return dd;
}

namespace {

SparseComplex shifted(const Eigen::SparseMatrix<double>& x, const Eigen::SparseMatrix<double>& mx, Complex zeta) {
  SparseComplex out = x.cast<Complex>() - zeta * mx.cast<Complex>();
  out.makeCompressed();
  return out;
}

} // namespace

ShiftedBlocks shifted_blocks(const DDPencil& dd, Complex zeta) {
  ShiftedBlocks sb;
  sb.B.reserve(dd.p());
  sb.E.reserve(dd.p());
  for (int j = 0; j < dd.p(); ++j) {
    sb.B.push_back(shifted(to_eigen(dd.B[j]), to_eigen(dd.M_B[j]), zeta));
    sb.E.push_back(shifted(dd.E_hat[j].to_eigen(), dd.M_E_hat[j].to_eigen(), zeta));
  }
  sb.C = shifted(to_eigen(dd.C), to_eigen(dd.M_C), zeta);
  return sb;
}

DenseBlocks dense_blocks(const DDPencil& dd, int cap) {
  if (dd.n() > cap) throw SolverError("ingestion", "dense block extraction exceeds the dense cap");
  DenseBlocks out;
  const int d = dd.d();
  const int s = dd.s();
  out.b = Eigen::MatrixXd::Zero(d, d);
  out.m_b = Eigen::MatrixXd::Zero(d, d);
  out.e = Eigen::MatrixXd::Zero(d, s);
  out.m_e = Eigen::MatrixXd::Zero(d, s);
  for (int j = 0; j < dd.p(); ++j) {
    const int r0 = dd.meta.interior_offsets[j];
    const int c0 = dd.meta.interface_offsets[j];
    out.b.block(r0, r0, dd.meta.d[j], dd.meta.d[j]) = rfddes::to_dense(dd.B[j], cap);
    out.m_b.block(r0, r0, dd.meta.d[j], dd.meta.d[j]) = rfddes::to_dense(dd.M_B[j], cap);
    out.e.block(r0, c0, dd.meta.d[j], dd.meta.s[j]) = dd.E_hat[j].to_dense();
    out.m_e.block(r0, c0, dd.meta.d[j], dd.meta.s[j]) = dd.M_E_hat[j].to_dense();
  }
  out.c = rfddes::to_dense(dd.C, cap);
  out.m_c = rfddes::to_dense(dd.M_C, cap);
  return out;
}

} // namespace rfddes
