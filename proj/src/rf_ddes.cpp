#include "rfddes/rf_ddes.hpp"

#include <chrono>
#include <cmath>

namespace rfddes {

void RfDdesConfig::validate() const {
  if (!(alpha < beta)) throw SolverError("ingestion", "interval endpoints must satisfy alpha < beta");
  if (p < 1) throw SolverError("ingestion", "subdomain count must be at least 1");
  if (n_c < 1) throw SolverError("ingestion", "quadrature node count must be at least 1");
  if (psi < 1) throw SolverError("ingestion", "expansion depth must be at least 1");
  if (nev_b < 0) throw SolverError("ingestion", "interior eigenpair count must be nonnegative");
}

Eigen::MatrixXd assemble_Z(const PartitionMeta& meta, const std::vector<Eigen::MatrixXd>& v,
                           const std::vector<Eigen::MatrixXd>& sigma_blocks,
                           const std::vector<Eigen::MatrixXd>& gamma_blocks, const Eigen::MatrixXd& q, int psi,
                           bool m_e_is_zero) {
  const int p = meta.p;
  const int n = meta.n;
  const int mu = static_cast<int>(q.cols());
  int kappa_total = 0;
  for (int j = 0; j < p; ++j) {
    if (v[j].rows() != meta.d[j]) throw SolverError("projection", "interior basis has wrong row count");
    kappa_total += static_cast<int>(v[j].cols());
  }
  const int sigma_cols = psi * mu;
  const int gamma_cols = m_e_is_zero ? 0 : psi * mu;
  const int dim = kappa_total + sigma_cols + gamma_cols;

  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, dim);
  int col = 0;
  for (int j = 0; j < p; ++j) {
    z.block(meta.interior_offsets[j], col, meta.d[j], v[j].cols()) = v[j];
    col += static_cast<int>(v[j].cols());
  }
  for (int j = 0; j < p; ++j) {
    if (sigma_blocks[j].cols() != sigma_cols) throw SolverError("projection", "resolvent block has wrong shape");
    z.block(meta.interior_offsets[j], kappa_total, meta.d[j], sigma_cols) = -sigma_blocks[j];
    if (!m_e_is_zero) {
      if (gamma_blocks[j].cols() != gamma_cols) throw SolverError("projection", "mass block has wrong shape");
      z.block(meta.interior_offsets[j], kappa_total + sigma_cols, meta.d[j], gamma_cols) = gamma_blocks[j];
    }
  }
  // interface rows: [Q, 0] under the Sigma column block, zero elsewhere
  z.block(meta.d_total, kappa_total, meta.s_total, mu) = q;
  return z;
}

namespace {

struct Conditioned {
  Eigen::MatrixXd basis;
  bool dropped = false;
};

// Orthonormal basis of range(Z). Columns are normalized first so the rank
// threshold is scale-free.
Conditioned orthonormalize(const Eigen::MatrixXd& z) {
  const int n = static_cast<int>(z.rows());
  const int k = static_cast<int>(z.cols());
  Eigen::MatrixXd scaled(n, k);
  int kept = 0;
  for (int c = 0; c < k; ++c) {
    const double nc = z.col(c).norm();
    if (nc > 0.0) scaled.col(kept++) = z.col(c) / nc;
  }
  Conditioned out;
  out.dropped = kept < k;
  if (kept == 0) {
    out.basis.resize(n, 0);
    return out;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled.leftCols(kept));
  qr.setThreshold(1e-12);
  const int rank = static_cast<int>(qr.rank());
  out.dropped = out.dropped || rank < kept;
  out.basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, rank);
  return out;
}

Eigen::MatrixXd sparse_times_dense(const SparseSym& a, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd y(x.rows(), x.cols());
  for (int c = 0; c < x.cols(); ++c) y.col(c) = spmv(a, x.col(c));
  return y;
}

class PhaseTimer {
public:
  explicit PhaseTimer(std::vector<std::pair<std::string, double>>& sink) : sink_(sink) {}

  template <typename F>
  auto run(const std::string& name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      sink_.emplace_back(name, seconds_since(t0));
    } else {
      auto out = f();
      sink_.emplace_back(name, seconds_since(t0));
      return out;
    }
  }

private:
  static double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  std::vector<std::pair<std::string, double>>& sink_;
};

} // namespace

EigResult rayleigh_ritz(const SparseSym& a, const SparseSym& m, const Eigen::MatrixXd& z, double alpha,
                        double beta, double keep_slack_rel) {
  if (z.rows() != a.n || m.n != a.n) throw SolverError("projection", "subspace and pencil dimensions differ");
  Conditioned cond = orthonormalize(z);
  const Eigen::MatrixXd& basis = cond.basis;
  const int k = static_cast<int>(basis.cols());

  EigResult result;
  result.meta.dim_subspace = static_cast<int>(z.cols());
  result.meta.rank_subspace = k;
  result.meta.dropped_columns = cond.dropped;
  if (k == 0) {
    result.vectors.resize(a.n, 0);
    return result;
  }

  Eigen::MatrixXd ap = basis.transpose() * sparse_times_dense(a, basis);
  Eigen::MatrixXd mp = basis.transpose() * sparse_times_dense(m, basis);
  ap = 0.5 * (ap + ap.transpose()).eval();
  mp = 0.5 * (mp + mp.transpose()).eval();

  Eigen::MatrixXd gvecs;
  Eigen::VectorXd gvals;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(ap, mp);
  if (ges.info() == Eigen::Success) {
    gvals = ges.eigenvalues();
    gvecs = ges.eigenvectors();
  } else {
    // projected mass matrix numerically singular: drop its null directions
    result.meta.dropped_columns = true;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ms(mp);
    const double cutoff = 1e-12 * std::max(1.0, ms.eigenvalues().cwiseAbs().maxCoeff());
    int first = 0;
    while (first < k && ms.eigenvalues()[first] <= cutoff) ++first;
    if (first == k) throw SolverError("projection", "projected mass matrix has no positive directions");
    Eigen::MatrixXd w = ms.eigenvectors().rightCols(k - first);
    Eigen::VectorXd scale = ms.eigenvalues().tail(k - first).cwiseSqrt().cwiseInverse();
    w = w * scale.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w.transpose() * ap * w);
    gvals = es.eigenvalues();
    gvecs = w * es.eigenvectors();
  }

  const double slack = keep_slack_rel * (beta - alpha);
  std::vector<int> keep;
  for (int i = 0; i < gvals.size(); ++i)
    if (gvals[i] >= alpha - slack && gvals[i] <= beta + slack) keep.push_back(i);

  result.values.resize(keep.size());
  result.vectors.resize(a.n, keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    result.values[static_cast<int>(i)] = gvals[keep[i]];
    Eigen::VectorXd x = basis * gvecs.col(keep[i]);
    const double xmx = x.dot(spmv(m, x));
    if (xmx > 0.0) x /= std::sqrt(xmx);
    result.vectors.col(static_cast<int>(i)) = x;
  }
  result.residuals = pencil_residuals(a, m, result.values, result.vectors);
  return result;
}

EigResult rf_ddes_solve(const RfDdesConfig& cfg, const SparseSym& a, const SparseSym& m) {
  cfg.validate();
  if (a.n != m.n) throw SolverError("ingestion", "pencil matrices have different dimensions");

  std::vector<std::pair<std::string, double>> phases;
  PhaseTimer timer(phases);

  PartitionMeta meta = timer.run("partition", [&] {
    Graph g = build_adjacency(a, m);
    return classify_and_permute(g, partition_graph(g, cfg.p, cfg.seed));
  });

  auto [a_perm, m_perm, dd] = timer.run("blocks", [&] {
    SparseSym ap = permute_matrix(a, meta);
    SparseSym mp = permute_matrix(m, meta);
    DDPencil pencil = split_blocks(a, m, meta);
    return std::make_tuple(std::move(ap), std::move(mp), std::move(pencil));
  });

  const RationalFilter filter = midpoint_filter(cfg.alpha, cfg.beta, cfg.n_c);

  SchurSet schur = timer.run("schur", [&] { return build_schur_set(dd, filter, false, cfg.threads); });

  InterfaceBasis interface = timer.run("interface", [&] {
    InterfaceLanczosOptions opts;
    opts.tol = cfg.tol;
    opts.check_every = cfg.check_every;
    opts.max_iter = cfg.max_iter_interface;
    opts.seed = cfg.seed + 1;
    return interface_lanczos(schur, opts);
  });

  struct InteriorData {
    std::vector<Eigen::MatrixXd> v, sigma_blocks, gamma_blocks;
  };
  InteriorData interior = timer.run("interior", [&] {
    InteriorData data;
    data.v.resize(dd.p());
    data.sigma_blocks.resize(dd.p());
    data.gamma_blocks.resize(dd.p());
    for (int j = 0; j < dd.p(); ++j) {
      InteriorEigOptions opts;
      opts.max_iter = cfg.max_iter_interior;
      opts.seed = cfg.seed + 100 + static_cast<std::uint64_t>(j);
      const int want = std::min(cfg.nev_b, dd.meta.d[j]);
      InteriorEigs eigs = smallest_eigs_B(dd.B[j], dd.M_B[j], cfg.sigma, want, opts);
      data.v[j] = std::move(eigs.V);

      Eigen::SparseMatrix<double> b_shift = to_eigen(dd.B[j]);
      if (cfg.sigma != 0.0) b_shift -= cfg.sigma * to_eigen(dd.M_B[j]);
      RealFactorization b_sigma;
      if (dd.meta.d[j] > 0) b_sigma.factor(b_shift, cfg.sigma);
      auto [phi, psi_mat] = compute_phi_psi(dd, j, cfg.sigma, interface.Q);
      auto [sig, gam] = dd.meta.d[j] > 0
                            ? resolvent_blocks(b_sigma, dd.M_B[j], phi, psi_mat, cfg.psi)
                            : std::make_pair(Eigen::MatrixXd::Zero(0, cfg.psi * interface.mu).eval(),
                                             Eigen::MatrixXd::Zero(0, dd.m_e_is_zero ? 0 : cfg.psi * interface.mu)
                                                 .eval());
      data.sigma_blocks[j] = std::move(sig);
      data.gamma_blocks[j] = dd.m_e_is_zero ? Eigen::MatrixXd::Zero(dd.meta.d[j], 0).eval() : std::move(gam);
    }
    return data;
  });

  Eigen::MatrixXd z = timer.run("assemble", [&] {
    return assemble_Z(meta, interior.v, interior.sigma_blocks, interior.gamma_blocks, interface.Q, cfg.psi,
                      dd.m_e_is_zero);
  });

  EigResult projected = timer.run("projection", [&] {
    return rayleigh_ritz(a_perm, m_perm, z, cfg.alpha, cfg.beta, cfg.keep_slack_rel);
  });

  EigResult result = timer.run("finalize", [&] {
    EigResult out;
    out.values = projected.values;
    out.vectors.resize(a.n, projected.vectors.cols());
    for (int r = 0; r < a.n; ++r) out.vectors.row(meta.perm[r]) = projected.vectors.row(r);
    out.residuals = pencil_residuals(a, m, out.values, out.vectors);
    return out;
  });

  result.meta = projected.meta;
  result.meta.iterations = interface.mu;
  result.meta.converged = interface.converged;
  result.meta.s = meta.s_total;
  result.meta.d = meta.d;
  result.meta.trace_history = interface.trace_history;
  result.meta.phase_seconds = phases;
  return result;
}

} // namespace rfddes
