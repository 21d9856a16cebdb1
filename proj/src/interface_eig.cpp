#include "rfddes/interface_eig.hpp"

#include <cmath>

#include "rfddes/rng.hpp"

namespace rfddes {

namespace {

double tridiagonal_eigenvalue_sum(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag, int mu) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag.head(mu), offdiag.head(std::max(0, mu - 1)), Eigen::EigenvaluesOnly);
  return es.eigenvalues().sum();
}

} // namespace

InterfaceBasis interface_lanczos(const SchurSet& ss, const InterfaceLanczosOptions& opts) {
  InterfaceBasis basis;
  const int s = ss.s;
  if (s == 0) {
    basis.Q.resize(0, 0);
    return basis;
  }
  int max_iter = opts.max_iter > 0 ? std::min(opts.max_iter, s) : s;

  Rng rng(opts.seed);
  Eigen::MatrixXd q(s, max_iter);
  Eigen::VectorXd diag(max_iter), offdiag(max_iter);
  q.col(0) = rng.gaussian_vector(s).normalized();

  double b_prev = 0.0;
  bool converged = false;
  int mu = 0;
  while (mu < max_iter) {
    ++mu;
    Eigen::VectorXd w = apply_filtered_schur(ss, q.col(mu - 1));
    if (mu > 1) w -= b_prev * q.col(mu - 2);
    diag[mu - 1] = w.dot(q.col(mu - 1));
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k < mu; ++k) w -= w.dot(q.col(k)) * q.col(k);
    const double b = w.norm();
    if (mu < max_iter) {
      if (b <= 1e-13) {
        Eigen::VectorXd v = rng.gaussian_vector(s);
        for (int pass = 0; pass < 2; ++pass)
          for (int k = 0; k < mu; ++k) v -= v.dot(q.col(k)) * q.col(k);
        const double vn = v.norm();
        if (vn <= 1e-13) {  // basis already spans R^s
          converged = true;
          break;
        }
        q.col(mu) = v / vn;
        offdiag[mu - 1] = 0.0;
        b_prev = 0.0;
      } else {
        q.col(mu) = w / b;
        offdiag[mu - 1] = b;
        b_prev = b;
      }
    }
    if (mu % opts.check_every == 0 || mu == max_iter) {
      const double trace = tridiagonal_eigenvalue_sum(diag, offdiag, mu);
      if (!basis.trace_history.empty()) {
        const double prev = basis.trace_history.back();
        if (std::abs(trace - prev) <= opts.tol * std::max(std::abs(trace), 1e-300)) {
          basis.trace_history.push_back(trace);
          converged = true;
          break;
        }
      }
      basis.trace_history.push_back(trace);
    }
  }
  if (mu == s) converged = true;  // full interface space captured

  basis.Q = q.leftCols(mu);
  basis.diag = diag.head(mu);
  basis.offdiag = offdiag.head(std::max(0, mu - 1));
  basis.mu = mu;
  basis.converged = converged;
  return basis;
}

} // namespace rfddes
