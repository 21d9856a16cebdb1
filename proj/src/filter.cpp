#include "rfddes/filter.hpp"

#include <cmath>
#include <numbers>

#include "rfddes/errors.hpp"

namespace rfddes {

namespace {

constexpr double kPi = std::numbers::pi;

void check_interval(double alpha, double beta, int n_c) {
  if (!(alpha < beta)) throw SolverError("ingestion", "degenerate filter interval");
  if (n_c < 1) throw SolverError("ingestion", "filter needs at least one quadrature node");
}

/// Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void legendre_rule(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[n - 1 - i] = x;  // ascending
    weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

} // namespace

RationalFilter midpoint_filter(double alpha, double beta, int n_c) {
  check_interval(alpha, beta, n_c);
  RationalFilter f;
  f.alpha = alpha;
  f.beta = beta;
  f.n_c = n_c;
  f.rule = RationalFilter::Rule::midpoint;
  const double c = f.center();
  const double r = f.radius();
  f.poles.reserve(n_c);
  f.weights.reserve(n_c);
  for (int k = 1; k <= n_c; ++k) {
    const double theta = (2.0 * k - 1.0) * kPi / (2.0 * n_c);
    const std::complex<double> e = std::polar(1.0, theta);
    f.poles.push_back(c + r * e);
    f.weights.push_back(-r * e / (2.0 * n_c));
  }
  return f;
}

RationalFilter gauss_legendre_filter(double alpha, double beta, int n_c) {
  check_interval(alpha, beta, n_c);
  RationalFilter f;
  f.alpha = alpha;
  f.beta = beta;
  f.n_c = n_c;
  f.rule = RationalFilter::Rule::gauss_legendre;
  const double c = f.center();
  const double r = f.radius();
  std::vector<double> nodes, weights;
  legendre_rule(n_c, nodes, weights);
  f.poles.reserve(n_c);
  f.weights.reserve(n_c);
  for (int k = 0; k < n_c; ++k) {
    // map [-1, 1] onto the upper arc theta in (0, pi)
    const double theta = 0.5 * kPi * (nodes[k] + 1.0);
    const std::complex<double> e = std::polar(1.0, theta);
    f.poles.push_back(c + r * e);
    f.weights.push_back(-0.25 * r * weights[k] * e);
  }
  return f;
}

double eval_filter(const RationalFilter& f, double zeta) {
  std::complex<double> acc = 0.0;
  for (std::size_t l = 0; l < f.poles.size(); ++l) acc += f.weights[l] / (zeta - f.poles[l]);
  return 2.0 * acc.real();
}

std::complex<double> eval_filter_fullsum(const RationalFilter& f, double zeta) {
  std::complex<double> acc = 0.0;
  for (std::size_t l = 0; l < f.poles.size(); ++l) {
    acc += f.weights[l] / (zeta - f.poles[l]);
    acc += std::conj(f.weights[l]) / (zeta - std::conj(f.poles[l]));
  }
  return acc;
}

} // namespace rfddes
