#include "rfddes/interior_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rfddes/rng.hpp"

namespace rfddes {

void RealFactorization::factor(const Eigen::SparseMatrix<double>& k, double shift) {
  auto lu = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>>();
  lu->analyzePattern(k);
  lu->factorize(k);
  if (lu->info() != Eigen::Success)
    throw SolverError("interior", "B - sigma M_B is singular; the shift coincides with an eigenvalue of "
                                  "(B, M_B) -- perturb sigma");
  lu_ = std::move(lu);
  n_ = static_cast<int>(k.rows());
  shift_ = shift;
}

Eigen::VectorXd RealFactorization::solve(const Eigen::VectorXd& b) const { return lu_->solve(b); }

Eigen::MatrixXd RealFactorization::solve(const Eigen::MatrixXd& b) const { return lu_->solve(b); }

InteriorEigs smallest_eigs_B(const SparseSym& b, const SparseSym& m_b, double sigma, int nev_b,
                             const InteriorEigOptions& opts) {
  const int d = b.n;
  InteriorEigs out;
  if (nev_b <= 0 || d == 0) {
    out.V.resize(d, 0);
    out.delta.resize(0);
    return out;
  }
  if (nev_b > d) throw SolverError("interior", "requested more interior eigenpairs than the block dimension");

  Eigen::SparseMatrix<double> b_shift = to_eigen(b);
  if (sigma != 0.0) b_shift -= sigma * to_eigen(m_b);
  RealFactorization fact;
  fact.factor(b_shift, sigma);

  const double scale_b = norm1(b);
  const double scale_m = norm1(m_b);
  const int max_iter = std::min(d, opts.max_iter > 0 ? opts.max_iter : 4 * nev_b + 100);

  // Lanczos in the M_B inner product on the operator B_sigma^{-1} M_B.
  // Columns of q are M_B-orthonormal; z caches M_B q for reorthogonalization.
  Rng rng(opts.seed);
  Eigen::MatrixXd q(d, max_iter);
  Eigen::MatrixXd z(d, max_iter);
  Eigen::VectorXd diag(max_iter), offdiag(max_iter);

  auto m_normalize = [&](Eigen::VectorXd& v, Eigen::VectorXd& mv) -> double {
    mv = spmv(m_b, v);
    const double norm = std::sqrt(std::max(0.0, v.dot(mv)));
    if (norm > 0.0) {
      v /= norm;
      mv /= norm;
    }
    return norm;
  };

  {
    Eigen::VectorXd v = rng.gaussian_vector(d);
    Eigen::VectorXd mv;
    m_normalize(v, mv);
    q.col(0) = v;
    z.col(0) = mv;
  }

  auto extract = [&](int mu, InteriorEigs& res) -> bool {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag.head(mu), offdiag.head(std::max(0, mu - 1)));
    // largest |theta| of the shift-inverted operator are closest to sigma
    std::vector<int> order(mu);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int l, int r) {
      return std::abs(es.eigenvalues()[l]) > std::abs(es.eigenvalues()[r]);
    });
    const int k = std::min(nev_b, mu);
    res.V.resize(d, k);
    res.delta.resize(k);
    for (int i = 0; i < k; ++i) {
      const double theta = es.eigenvalues()[order[i]];
      if (theta == 0.0) return false;
      res.delta[i] = sigma + 1.0 / theta;
      res.V.col(i) = q.leftCols(mu) * es.eigenvectors().col(order[i]);
    }
    if (k < nev_b) return false;
    for (int i = 0; i < k; ++i) {
      const double scale = scale_b + std::abs(res.delta[i]) * scale_m;
      const Eigen::VectorXd r =
          spmv(b, res.V.col(i)) - res.delta[i] * spmv(m_b, res.V.col(i));
      if (r.norm() > opts.residual_tol * scale) return false;
    }
    return true;
  };

  double b_prev = 0.0;
  int mu = 0;
  bool done = false;
  while (mu < max_iter && !done) {
    ++mu;
    Eigen::VectorXd w = fact.solve(Eigen::VectorXd(z.col(mu - 1)));
    diag[mu - 1] = w.dot(z.col(mu - 1));
    if (mu > 1) w -= b_prev * q.col(mu - 2);
    for (int pass = 0; pass < 2; ++pass) {
      Eigen::VectorXd mw = spmv(m_b, w);
      for (int k = 0; k < mu; ++k) w -= mw.dot(q.col(k)) * q.col(k);
    }
    Eigen::VectorXd mw;
    double bn = 0.0;
    {
      Eigen::VectorXd tmp = w;
      bn = m_normalize(tmp, mw);
      w = tmp;
    }
    if (mu < max_iter) {
      if (bn <= 1e-13 * std::max(1.0, scale_m)) {
        Eigen::VectorXd v = rng.gaussian_vector(d);
        for (int pass = 0; pass < 2; ++pass) {
          Eigen::VectorXd mv = spmv(m_b, v);
          for (int k = 0; k < mu; ++k) v -= mv.dot(q.col(k)) * q.col(k);
        }
        Eigen::VectorXd mv;
        const double vn = m_normalize(v, mv);
        if (vn <= 1e-12) {
          done = true;  // M_B-orthogonal complement exhausted
        } else {
          q.col(mu) = v;
          z.col(mu) = mv;
        }
        offdiag[mu - 1] = 0.0;
        b_prev = 0.0;
      } else {
        q.col(mu) = w;
        z.col(mu) = mw;
        offdiag[mu - 1] = bn;
        b_prev = bn;
      }
    }
    const bool checkpoint = mu >= nev_b + 2 && ((mu - nev_b) % 25 == 0 || mu == max_iter || mu == d);
    if (checkpoint || (done && mu >= nev_b)) {
      InteriorEigs probe;
      if (extract(mu, probe)) {
        out = std::move(probe);
        out.iterations = mu;
        out.converged = true;
        done = true;
      }
    }
    if (mu == d && !out.converged) {
      // full space reached: the tridiagonal problem is exact
      InteriorEigs probe;
      extract(mu, probe);
      out = std::move(probe);
      out.iterations = mu;
      out.converged = true;
      done = true;
    }
  }
  if (!done || out.V.cols() < nev_b) {
    if (out.V.cols() < nev_b)
      throw SolverError("interior", "interior eigensolver did not converge within the iteration cap");
  }

  // tighten M_B-orthonormality of the returned block
  Eigen::MatrixXd mv(d, out.V.cols());
  for (int i = 0; i < out.V.cols(); ++i) mv.col(i) = spmv(m_b, out.V.col(i));
  Eigen::MatrixXd gram = out.V.transpose() * mv;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() == Eigen::Success) {
    out.V = llt.matrixU().solve<Eigen::OnTheRight>(out.V);
  }
  return out;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> compute_phi_psi(const DDPencil& dd, int j, double sigma,
                                                            const Eigen::MatrixXd& q) {
  const int s_j = dd.meta.s[j];
  const int w0 = dd.meta.interface_offsets[j];
  const Eigen::MatrixXd q_j = q.middleRows(w0, s_j);
  Eigen::MatrixXd phi = dd.E_hat[j].multiply(q_j);
  if (sigma != 0.0 && !dd.m_e_is_zero) phi -= sigma * dd.M_E_hat[j].multiply(q_j);
  Eigen::MatrixXd psi_mat;
  if (dd.m_e_is_zero) {
    psi_mat.resize(dd.meta.d[j], 0);
  } else {
    psi_mat = dd.M_E_hat[j].multiply(q_j);
  }
  return {std::move(phi), std::move(psi_mat)};
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> resolvent_blocks(const RealFactorization& b_sigma,
                                                             const SparseSym& m_b, const Eigen::MatrixXd& phi,
                                                             const Eigen::MatrixXd& psi_mat, int psi) {
  if (psi < 1) throw SolverError("interior", "expansion depth must be at least 1");
  const int d = static_cast<int>(phi.rows());
  auto expand = [&](const Eigen::MatrixXd& seed) {
    const int cols = static_cast<int>(seed.cols());
    Eigen::MatrixXd blocks(d, psi * cols);
    if (cols == 0) return blocks;
    Eigen::MatrixXd x = b_sigma.solve(seed);
    blocks.leftCols(cols) = x;
    for (int t = 1; t < psi; ++t) {
      Eigen::MatrixXd mx(d, cols);
      for (int c = 0; c < cols; ++c) mx.col(c) = spmv(m_b, x.col(c));
      x = b_sigma.solve(mx);
      blocks.middleCols(t * cols, cols) = x;
    }
    return blocks;
  };
  return {expand(phi), expand(psi_mat)};
}

} // namespace rfddes
