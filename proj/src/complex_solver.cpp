#include "rfddes/complex_solver.hpp"

#include <atomic>
#include <functional>
#include <thread>

namespace rfddes {

void ComplexFactorization::factor(const SparseComplex& k, Complex shift) {
  if (k.rows() != k.cols()) throw FactorizationError("matrix is not square", shift);
  auto lu = std::make_shared<Eigen::SparseLU<SparseComplex, Eigen::COLAMDOrdering<int>>>();
  lu->analyzePattern(k);
  lu->factorize(k);
  if (lu->info() != Eigen::Success) throw FactorizationError("singular pivot during factorization", shift);
  lu_ = std::move(lu);
  n_ = static_cast<int>(k.rows());
  shift_ = shift;
}

Eigen::VectorXcd ComplexFactorization::solve(const Eigen::VectorXcd& b) const {
  return lu_->solve(b);
}

Eigen::MatrixXcd ComplexFactorization::solve(const Eigen::MatrixXcd& b) const {
  return lu_->solve(b);
}

ComplexFactorization factor_complex(const SparseComplex& k, Complex shift) {
  ComplexFactorization f;
  f.factor(k, shift);
  return f;
}

namespace {

// S contribution of one subdomain: E_z^T B_z^{-1} E_z into the window block.
void subtract_subdomain_schur(const DDPencil& dd, int j, const SparseComplex& b_z, const SparseComplex& e_z,
                              Complex zeta, Eigen::MatrixXcd& s_out, ComplexFactorization* keep) {
  if (dd.meta.d[j] == 0 || dd.meta.s[j] == 0) {
    if (keep && dd.meta.d[j] > 0) keep->factor(b_z, zeta);
    return;
  }
  ComplexFactorization fact = factor_complex(b_z, zeta);
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd(e_z);
  Eigen::MatrixXcd x = fact.solve(rhs);
  const int w0 = dd.meta.interface_offsets[j];
  s_out.block(w0, w0, dd.meta.s[j], dd.meta.s[j]) -= e_z.transpose() * x;
  if (keep) *keep = std::move(fact);
}

void run_indexed(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
  };
  std::vector<std::thread> pool;
  const int use = std::min(threads, count);
  pool.reserve(use);
  for (int t = 0; t < use; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

} // namespace

Eigen::MatrixXcd form_schur(const DDPencil& dd, Complex zeta) {
  const int s = dd.s();
  Eigen::MatrixXcd out(s, s);
  if (s == 0) return out;
  ShiftedBlocks sb = shifted_blocks(dd, zeta);
  out = Eigen::MatrixXcd(sb.C);
  for (int j = 0; j < dd.p(); ++j) subtract_subdomain_schur(dd, j, sb.B[j], sb.E[j], zeta, out, nullptr);
  return out;
}

SchurSet build_schur_set(const DDPencil& dd, const RationalFilter& f, bool keep_b_factors, int threads) {
  SchurSet ss;
  ss.s = dd.s();
  ss.nodes.resize(f.poles.size());
  run_indexed(static_cast<int>(f.poles.size()), threads, [&](int l) {
    SchurNode& node = ss.nodes[l];
    node.zeta = f.poles[l];
    node.weight = f.weights[l];
    node.S.resize(ss.s, ss.s);
    if (keep_b_factors) node.b_factors.resize(dd.p());
    if (ss.s > 0) {
      ShiftedBlocks sb = shifted_blocks(dd, node.zeta);
      node.S = Eigen::MatrixXcd(sb.C);
      for (int j = 0; j < dd.p(); ++j)
        subtract_subdomain_schur(dd, j, sb.B[j], sb.E[j], node.zeta, node.S,
                                 keep_b_factors ? &node.b_factors[j] : nullptr);
      node.lu.compute(node.S);
    }
  });
  return ss;
}

Eigen::VectorXd apply_filtered_resolvent_full(const std::vector<ComplexFactorization>& factors,
                                              const RationalFilter& f, const SparseSym& m,
                                              const Eigen::VectorXd& v) {
  if (v.size() != m.n) throw SolverError("factorization", "vector length does not match the pencil");
  const Eigen::VectorXcd mv = spmv(m, v).cast<Complex>();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(v.size());
  for (std::size_t l = 0; l < factors.size(); ++l) {
    w += 2.0 * (f.weights[l] * factors[l].solve(mv).array()).real().matrix();
  }
  return w;
}

Eigen::VectorXd apply_filtered_schur(const SchurSet& ss, const Eigen::VectorXd& q) {
  if (q.size() != ss.s) throw SolverError("interface", "vector length does not match the interface");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(ss.s);
  const Eigen::VectorXcd qc = q.cast<Complex>();
  for (const SchurNode& node : ss.nodes) {
    w += (node.weight * node.lu.solve(qc).array()).real().matrix();
  }
  return w;
}

Eigen::MatrixXd filtered_schur_matrix(const SchurSet& ss, double scale) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(ss.s, ss.s);
  if (ss.s == 0) return out;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(ss.s, ss.s);
  for (const SchurNode& node : ss.nodes) {
    out += scale * (node.weight * node.lu.solve(id).array()).real().matrix();
  }
  return out;
}

double schur_symmetry_defect(const Eigen::MatrixXcd& s) {
  if (s.rows() == 0) return 0.0;
  const double scale = s.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (s - s.transpose()).cwiseAbs().maxCoeff() / scale;
}

} // namespace rfddes
