#pragma once

#include <complex>
#include <vector>

namespace rfddes {

/// Rational approximation of the indicator of [alpha, beta], built by
/// discretizing the Cauchy integral of the indicator over the circle
/// centered at (alpha+beta)/2 with radius (beta-alpha)/2. Only the
/// upper-half-plane pole/weight pairs are stored; the conjugate half is
/// implicit. Immutable value type.
struct RationalFilter {
  enum class Rule { midpoint, gauss_legendre };

  double alpha = 0.0;
  double beta = 0.0;
  int n_c = 0;
  Rule rule = Rule::midpoint;
  std::vector<std::complex<double>> poles;    // Im > 0
  std::vector<std::complex<double>> weights;

  double center() const { return 0.5 * (alpha + beta); }
  double radius() const { return 0.5 * (beta - alpha); }
};

/// Midpoint rule with 2*n_c equispaced angles theta_k = (2k-1)pi/(2 n_c).
/// Discretizing the contour integral gives weight -r e^{i theta_k}/(2 n_c)
/// at pole c + r e^{i theta_k}; the n_c upper-half-plane pairs are kept.
RationalFilter midpoint_filter(double alpha, double beta, int n_c);

/// Gauss-Legendre angles on the two half-arcs (0, pi) and (pi, 2pi); the
/// lower arc is the conjugate image of the upper one, so only the upper
/// nodes are stored. Legendre nodes are found by Newton iteration.
RationalFilter gauss_legendre_filter(double alpha, double beta, int n_c);

/// rho(zeta) = 2 Re{ sum_l w_l / (zeta - z_l) } for real zeta.
double eval_filter(const RationalFilter& f, double zeta);

/// Full 2*n_c-term sum including the conjugate poles; equals eval_filter on
/// the real axis up to roundoff and is used to validate conjugate symmetry.
std::complex<double> eval_filter_fullsum(const RationalFilter& f, double zeta);

} // namespace rfddes
