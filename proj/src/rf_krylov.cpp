#include "rfddes/rf_krylov.hpp"

#include <algorithm>
#include <cmath>

#include "rfddes/rng.hpp"

namespace rfddes {

namespace {

// Sum of eigenvalues of the leading mu x mu Hessenberg block that are no
// less than 1/2 (real parts; the operator is self-adjoint in the M inner
// product, so imaginary parts are roundoff).
double half_threshold_trace(const Eigen::MatrixXd& h, int mu, int* count = nullptr) {
  const Eigen::MatrixXd hm = h.topLeftCorner(mu, mu);
  Eigen::EigenSolver<Eigen::MatrixXd> es(hm, /*computeEigenvectors=*/false);
  double sum = 0.0;
  int cnt = 0;
  for (int i = 0; i < mu; ++i) {
    const double re = es.eigenvalues()[i].real();
    if (re >= 0.5) {
      sum += re;
      ++cnt;
    }
  }
  if (count) *count = cnt;
  return sum;
}

} // namespace

EigResult rf_krylov_solve(const SparseSym& a, const SparseSym& m, const RationalFilter& f,
                          const RfKrylovOptions& opts, ArnoldiState* state) {
  const int n = a.n;
  if (m.n != n) throw SolverError("ingestion", "pencil matrices have different dimensions");

  // one factorization of A - z_l M per quadrature node
  const Eigen::SparseMatrix<double> ae = to_eigen(a);
  const Eigen::SparseMatrix<double> me = to_eigen(m);
  std::vector<ComplexFactorization> factors(f.poles.size());
  for (std::size_t l = 0; l < f.poles.size(); ++l) {
    SparseComplex k = ae.cast<Complex>() - f.poles[l] * me.cast<Complex>();
    k.makeCompressed();
    factors[l].factor(k, f.poles[l]);
  }

  Rng rng(opts.seed);
  const int max_iter = std::min(opts.max_iter, n);
  Eigen::MatrixXd q(n, max_iter + 1);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(max_iter + 1, max_iter);
  q.col(0) = rng.gaussian_vector(n).normalized();

  std::vector<double> trace_history;
  bool converged = false;
  int mu = 0;
  while (mu < max_iter) {
    ++mu;
    Eigen::VectorXd w = apply_filtered_resolvent_full(factors, f, m, q.col(mu - 1));
    // full orthogonalization, one refinement pass
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < mu; ++k) {
        const double c = w.dot(q.col(k));
        h(k, mu - 1) += c;
        w -= c * q.col(k);
      }
    }
    const double beta = w.norm();
    h(mu, mu - 1) = beta;
    if (beta <= 1e-14) {
      // breakdown: continue with a random direction orthogonal to the basis
      Eigen::VectorXd v = rng.gaussian_vector(n);
      for (int pass = 0; pass < 2; ++pass)
        for (int k = 0; k < mu; ++k) v -= v.dot(q.col(k)) * q.col(k);
      q.col(mu) = v.normalized();
      h(mu, mu - 1) = 0.0;
    } else {
      q.col(mu) = w / beta;
    }
    if (mu % opts.check_every == 0 || mu == max_iter) {
      const double trace = half_threshold_trace(h, mu);
      if (!trace_history.empty()) {
        const double prev = trace_history.back();
        if (std::abs(trace - prev) <= opts.tol * std::max(std::abs(trace), 1e-300)) {
          trace_history.push_back(trace);
          converged = true;
          break;
        }
      }
      trace_history.push_back(trace);
    }
  }
  if (mu == n) converged = true;  // the Krylov space is the whole space

  // Ritz extraction: eigenvectors of H_mu with filtered eigenvalue >= 1/2
  const Eigen::MatrixXd hm = h.topLeftCorner(mu, mu);
  Eigen::EigenSolver<Eigen::MatrixXd> es(hm);
  if (es.info() != Eigen::Success) throw SolverError("projection", "Hessenberg eigenvalue computation failed");

  struct Pair {
    double value;
    Eigen::VectorXd vector;
    double residual;
  };
  std::vector<Pair> pairs;
  const double width = f.beta - f.alpha;
  for (int i = 0; i < mu; ++i) {
    if (es.eigenvalues()[i].real() < 0.5) continue;
    // conjugate roundoff pairs appear twice; keep the upper-half member
    if (es.eigenvalues()[i].imag() < 0.0) continue;
    Eigen::VectorXd g = es.eigenvectors().col(i).real();
    if (g.norm() == 0.0) continue;
    Eigen::VectorXd x = q.leftCols(mu) * g;
    const Eigen::VectorXd mx = spmv(m, x);
    const double xmx = x.dot(mx);
    if (xmx <= 0.0) continue;
    x /= std::sqrt(xmx);
    const Eigen::VectorXd ax = spmv(a, x);
    const double lambda = x.dot(ax) / x.dot(spmv(m, x));
    if (lambda < f.alpha - 1e-8 * width || lambda > f.beta + 1e-8 * width) continue;
    const double res = (ax - lambda * spmv(m, x)).norm();
    pairs.push_back({lambda, std::move(x), res});
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& l, const Pair& r) { return l.value < r.value; });

  EigResult result;
  result.values.resize(pairs.size());
  result.vectors.resize(n, pairs.size());
  result.residuals.resize(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    result.values[static_cast<int>(i)] = pairs[i].value;
    result.vectors.col(static_cast<int>(i)) = pairs[i].vector;
    result.residuals[static_cast<int>(i)] = pairs[i].residual;
  }
  result.meta.iterations = mu;
  result.meta.converged = converged;
  result.meta.dim_subspace = mu;
  result.meta.rank_subspace = mu;
  result.meta.trace_history = trace_history;

  if (state) {
    state->Q = q.leftCols(mu);
    state->H = h.topLeftCorner(mu + 1, mu);
    state->mu = mu;
    state->trace_history = trace_history;
  }
  return result;
}

} // namespace rfddes
