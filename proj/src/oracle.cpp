#include "rfddes/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "rfddes/rng.hpp"

namespace rfddes {

FullEigenReference dense_gen_eig(const SparseSym& a, const SparseSym& m, int cap) {
  const Eigen::MatrixXd ad = to_dense(a, cap);
  const Eigen::MatrixXd md = to_dense(m, cap);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(ad, md);
  if (es.info() != Eigen::Success)
    throw SolverError("ingestion", "dense reference decomposition failed; M must be positive definite");
  return FullEigenReference{es.eigenvalues(), es.eigenvectors()};
}

Eigen::MatrixXd interface_components(const FullEigenReference& ref, const PartitionMeta& meta, int count) {
  Eigen::MatrixXd y(meta.s_total, count);
  for (int c = 0; c < count; ++c)
    for (int r = 0; r < meta.s_total; ++r) y(r, c) = ref.vectors(meta.perm[meta.d_total + r], c);
  return y;
}

Eigen::MatrixXd interior_components(const FullEigenReference& ref, const PartitionMeta& meta, int count) {
  Eigen::MatrixXd u(meta.d_total, count);
  for (int c = 0; c < count; ++c)
    for (int r = 0; r < meta.d_total; ++r) u(r, c) = ref.vectors(meta.perm[r], c);
  return u;
}

SingularSpectrum numerical_rank(const Eigen::MatrixXd& x, double rel_tol) {
  SingularSpectrum out;
  if (x.rows() == 0 || x.cols() == 0) {
    out.singular_values.resize(0);
    return out;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x);
  out.singular_values = svd.singularValues();
  const double cutoff = rel_tol * out.singular_values[0];
  for (int i = 0; i < out.singular_values.size(); ++i)
    if (out.singular_values[i] > cutoff) ++out.rank;
  return out;
}

SingularSpectrum rank_filtered_schur(const DDPencil& dd, const RationalFilter& f) {
  if (dd.s() == 0) return SingularSpectrum{};
  SchurSet ss = build_schur_set(dd, f);
  return numerical_rank(filtered_schur_matrix(ss, 1.0));
}

double filtered_schur_identity_error(const DDPencil& dd, const RationalFilter& f,
                                     const FullEigenReference& ref) {
  const int n = dd.n();
  SchurSet ss = build_schur_set(dd, f);
  const Eigen::MatrixXd lhs = filtered_schur_matrix(ss, 2.0);
  const Eigen::MatrixXd y = interface_components(ref, dd.meta, n);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(dd.s(), dd.s());
  for (int i = 0; i < n; ++i) rhs += eval_filter(f, ref.values[i]) * y.col(i) * y.col(i).transpose();
  const double scale = std::max(lhs.norm(), rhs.norm());
  return scale > 0.0 ? (lhs - rhs).norm() / scale : 0.0;
}

double block_inverse_identity_error(const DDPencil& dd, const SparseSym& a, const SparseSym& m, Complex zeta) {
  const int n = dd.n();
  const int d = dd.d();
  const int s = dd.s();
  const DenseBlocks blocks = dense_blocks(dd);
  const Eigen::MatrixXcd b_z = blocks.b.cast<Complex>() - zeta * blocks.m_b.cast<Complex>();
  const Eigen::MatrixXcd e_z = blocks.e.cast<Complex>() - zeta * blocks.m_e.cast<Complex>();
  const Eigen::MatrixXcd c_z = blocks.c.cast<Complex>() - zeta * blocks.m_c.cast<Complex>();

  const Eigen::MatrixXcd b_inv = b_z.partialPivLu().inverse();
  const Eigen::MatrixXcd s_z = c_z - e_z.transpose() * b_inv * e_z;
  const Eigen::MatrixXcd s_inv = s_z.partialPivLu().inverse();

  Eigen::MatrixXcd assembled(n, n);
  assembled.topLeftCorner(d, d) = b_inv + b_inv * e_z * s_inv * e_z.transpose() * b_inv;
  assembled.topRightCorner(d, s) = -b_inv * e_z * s_inv;
  assembled.bottomLeftCorner(s, d) = -s_inv * e_z.transpose() * b_inv;
  assembled.bottomRightCorner(s, s) = s_inv;

  const SparseSym a_perm = permute_matrix(a, dd.meta);
  const SparseSym m_perm = permute_matrix(m, dd.meta);
  const Eigen::MatrixXcd shifted =
      to_dense(a_perm).cast<Complex>() - zeta * to_dense(m_perm).cast<Complex>();
  const Eigen::MatrixXcd direct = shifted.partialPivLu().inverse();
  return (assembled - direct).norm() / direct.norm();
}

double resolvent_expansion_error(const SparseSym& a, const SparseSym& m, const FullEigenReference& ref,
                                 double zeta) {
  const Eigen::MatrixXcd shifted = to_dense(a).cast<Complex>() - Complex(zeta) * to_dense(m).cast<Complex>();
  const Eigen::MatrixXcd direct = shifted.partialPivLu().inverse();
  Eigen::MatrixXd expansion = Eigen::MatrixXd::Zero(a.n, a.n);
  for (int i = 0; i < ref.values.size(); ++i)
    expansion += (ref.vectors.col(i) * ref.vectors.col(i).transpose()) / (ref.values[i] - zeta);
  return (direct - expansion.cast<Complex>()).norm() / direct.norm();
}

namespace {

struct InteriorProblem {
  Eigen::MatrixXd b, m_b, e, m_e;
  Eigen::VectorXd delta;       // eigenvalues of (B, M_B)
  Eigen::MatrixXd v;           // M_B-orthonormal eigenvectors
  Eigen::LLT<Eigen::MatrixXd> m_b_llt;
};

InteriorProblem interior_problem(const DDPencil& dd) {
  InteriorProblem ip;
  const DenseBlocks blocks = dense_blocks(dd);
  ip.b = blocks.b;
  ip.m_b = blocks.m_b;
  ip.e = blocks.e;
  ip.m_e = blocks.m_e;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(ip.b, ip.m_b);
  if (es.info() != Eigen::Success) throw SolverError("interior", "dense interior decomposition failed");
  ip.delta = es.eigenvalues();
  ip.v = es.eigenvectors();
  ip.m_b_llt.compute(ip.m_b);
  return ip;
}

double m_norm(const Eigen::MatrixXd& m, const Eigen::VectorXd& x) {
  return std::sqrt(std::max(0.0, x.dot(m * x)));
}

double m_inv_norm(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::VectorXd& x) {
  return std::sqrt(std::max(0.0, x.dot(llt.solve(x))));
}

// M_B-orthogonal projection residual min_{g in span(W)} ||u - g||_{M_B},
// computed through a robust least-squares solve of the normal equations.
double projection_error(const Eigen::MatrixXd& m_b, const Eigen::MatrixXd& w, const Eigen::VectorXd& u) {
  if (w.cols() == 0) return m_norm(m_b, u);
  const Eigen::MatrixXd mw = m_b * w;
  const Eigen::MatrixXd gram = w.transpose() * mw;
  const Eigen::VectorXd rhs = mw.transpose() * u;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const double cutoff = 1e-13 * std::max(1e-300, es.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::VectorXd c = Eigen::VectorXd::Zero(w.cols());
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] > cutoff)
      c += es.eigenvectors().col(i) * (es.eigenvectors().col(i).dot(rhs) / es.eigenvalues()[i]);
  }
  return m_norm(m_b, u - w * c);
}

} // namespace

double interior_identity_error(const DDPencil& dd, const FullEigenReference& ref, double sigma, int index) {
  const InteriorProblem ip = interior_problem(dd);
  const double lambda = ref.values[index];
  const Eigen::VectorXd u = interior_components(ref, dd.meta, index + 1).col(index);
  const Eigen::VectorXd y = interface_components(ref, dd.meta, index + 1).col(index);

  const Eigen::MatrixXd b_sigma = ip.b - sigma * ip.m_b;
  const Eigen::MatrixXd b_lambda = ip.b - lambda * ip.m_b;
  const Eigen::VectorXd e_sigma_y = (ip.e - sigma * ip.m_e) * y;
  const Eigen::VectorXd u_hat = -b_sigma.partialPivLu().solve(e_sigma_y);
  const Eigen::VectorXd lhs = u - u_hat;
  const Eigen::VectorXd rhs = -(b_lambda.partialPivLu().solve(e_sigma_y) -
                                b_sigma.partialPivLu().solve(e_sigma_y)) +
                              (lambda - sigma) * b_lambda.partialPivLu().solve(ip.m_e * y);
  return (lhs - rhs).norm();
}

std::vector<TheoremBounds> theorem_bound_report(const DDPencil& dd, const FullEigenReference& ref, double sigma,
                                                int psi, int kappa) {
  const InteriorProblem ip = interior_problem(dd);
  const int d = dd.d();
  kappa = std::min(kappa, d);

  // eigenvalue distances from sigma, for the deflation set
  std::vector<int> by_distance(d);
  std::iota(by_distance.begin(), by_distance.end(), 0);
  std::sort(by_distance.begin(), by_distance.end(), [&](int l, int r) {
    return std::abs(ip.delta[l] - sigma) < std::abs(ip.delta[r] - sigma);
  });

  const Eigen::MatrixXd b_sigma = ip.b - sigma * ip.m_b;
  Eigen::PartialPivLU<Eigen::MatrixXd> b_sigma_lu(b_sigma);

  std::vector<TheoremBounds> rows;
  rows.reserve(ref.values.size());
  for (int i = 0; i < ref.values.size(); ++i) {
    TheoremBounds row;
    const double lambda = ref.values[i];
    row.lambda = lambda;
    const Eigen::VectorXd u = interior_components(ref, dd.meta, i + 1).col(i);
    const Eigen::VectorXd y = interface_components(ref, dd.meta, i + 1).col(i);
    const Eigen::VectorXd e_sigma_y = (ip.e - sigma * ip.m_e) * y;
    const Eigen::VectorXd m_e_y = ip.m_e * y;
    const double norm_e = m_inv_norm(ip.m_b_llt, e_sigma_y);
    const double norm_me = m_inv_norm(ip.m_b_llt, m_e_y);

    // bound factors over the (possibly deflated) eigenvalue set
    auto bound_pair = [&](int skip, int power) {
      double worst_first = 0.0, worst_second = 0.0;
      bool degenerate = false;
      for (int t = skip; t < d; ++t) {
        const double delta = ip.delta[by_distance[t]];
        const double dl = std::abs(lambda - delta);
        const double ds = std::abs(sigma - delta);
        if (dl == 0.0 || ds == 0.0) {
          degenerate = true;
          continue;
        }
        const double diff = std::abs(lambda - sigma);
        worst_first = std::max(worst_first, std::pow(diff, power) / (dl * std::pow(ds, power)));
        worst_second = std::max(worst_second, std::pow(diff, power + 1) / (dl * std::pow(ds, power)));
      }
      return std::tuple{worst_first, worst_second, degenerate};
    };

    // basic approximation
    {
      const Eigen::VectorXd u_hat = -b_sigma_lu.solve(e_sigma_y);
      row.lhs_basic = m_norm(ip.m_b, u - u_hat);
      auto [f1, f2, degenerate] = bound_pair(0, 1);
      double worst_plain = 0.0;  // |l - s| / |l - delta| for the mass term
      for (int t = 0; t < d; ++t) {
        const double dl = std::abs(lambda - ip.delta[t]);
        if (dl == 0.0) {
          degenerate = true;
          continue;
        }
        worst_plain = std::max(worst_plain, std::abs(lambda - sigma) / dl);
      }
      row.rhs_basic = f1 * norm_e + worst_plain * norm_me;
      row.flagged = row.flagged || degenerate;
    }

    // expansion subspace [U1 | U2], then the deflated variant with U3
    Eigen::MatrixXd u1(d, psi), u2(d, m_e_y.isZero(0.0) ? 0 : psi);
    {
      Eigen::VectorXd x = b_sigma_lu.solve(e_sigma_y);
      u1.col(0) = x;
      for (int t = 1; t < psi; ++t) {
        x = b_sigma_lu.solve(ip.m_b * x);
        u1.col(t) = x;
      }
      if (u2.cols() > 0) {
        Eigen::VectorXd g = b_sigma_lu.solve(m_e_y);
        u2.col(0) = g;
        for (int t = 1; t < psi; ++t) {
          g = b_sigma_lu.solve(ip.m_b * g);
          u2.col(t) = g;
        }
      }
    }
    Eigen::MatrixXd w(d, u1.cols() + u2.cols());
    w << u1, u2;
    row.lhs_expanded = projection_error(ip.m_b, w, u);
    {
      auto [f1, f2, degenerate] = bound_pair(0, psi);
      row.rhs_expanded = f1 * norm_e + f2 * norm_me;
      row.flagged = row.flagged || degenerate;
    }

    Eigen::MatrixXd u3(d, kappa);
    for (int t = 0; t < kappa; ++t) u3.col(t) = ip.v.col(by_distance[t]);
    Eigen::MatrixXd w3(d, w.cols() + kappa);
    w3 << w, u3;
    row.lhs_deflated = projection_error(ip.m_b, w3, u);
    {
      auto [f1, f2, degenerate] = bound_pair(kappa, psi);
      row.rhs_deflated = f1 * norm_e + f2 * norm_me;
      row.flagged = row.flagged || degenerate;
    }
    rows.push_back(row);
  }
  return rows;
}

std::pair<SparseSym, SparseSym> random_sparse_pencil(int n, int bandwidth, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SparseSym::Entry> a_entries, m_entries;
  Eigen::VectorXd m_offdiag_rowsum = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j <= std::min(n - 1, i + bandwidth); ++j) {
      const double av = 2.0 * rng.uniform() - 1.0;
      a_entries.push_back({i, j, av});
      a_entries.push_back({j, i, av});
      const double mv = 0.2 * (2.0 * rng.uniform() - 1.0);
      m_entries.push_back({i, j, mv});
      m_entries.push_back({j, i, mv});
      m_offdiag_rowsum[i] += std::abs(mv);
      m_offdiag_rowsum[j] += std::abs(mv);
    }
  }
  for (int i = 0; i < n; ++i) {
    a_entries.push_back({i, i, 2.0 * rng.uniform() - 1.0});
    m_entries.push_back({i, i, m_offdiag_rowsum[i] + 0.5 + rng.uniform()});
  }
  return {SparseSym::from_entries(n, std::move(a_entries)), SparseSym::from_entries(n, std::move(m_entries))};
}

MeshModes fd_mesh_modes(int nx, int ny) {
  MeshModes out;
  out.nx = nx;
  out.ny = ny;
  const int n = nx * ny;
  std::vector<std::pair<double, std::pair<int, int>>> all;
  all.reserve(n);
  for (int i = 1; i <= nx; ++i)
    for (int j = 1; j <= ny; ++j) {
      const double value = 4.0 - 2.0 * std::cos(i * std::numbers::pi / (nx + 1)) -
                           2.0 * std::cos(j * std::numbers::pi / (ny + 1));
      all.push_back({value, {i, j}});
    }
  std::sort(all.begin(), all.end());
  out.values.resize(n);
  out.modes.reserve(n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = all[k].first;
    out.modes.push_back(all[k].second);
  }
  return out;
}

Eigen::VectorXd fd_mesh_eigenvector(int nx, int ny, int i, int j) {
  Eigen::VectorXd v(nx * ny);
  for (int x = 1; x <= nx; ++x)
    for (int y = 1; y <= ny; ++y)
      v[(x - 1) * ny + (y - 1)] =
          std::sin(i * x * std::numbers::pi / (nx + 1)) * std::sin(j * y * std::numbers::pi / (ny + 1));
  return v / v.norm();
}

} // namespace rfddes
