#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "rfddes/filter.hpp"

using namespace rfddes;

namespace {

// Independent oracle: midpoint discretization of the contour integral of the
// indicator with a very fine node count, evaluated from the definition.
double quadrature_oracle(double alpha, double beta, double zeta, int nodes = 20000) {
  const double c = 0.5 * (alpha + beta);
  const double r = 0.5 * (beta - alpha);
  std::complex<double> acc = 0.0;
  for (int k = 1; k <= nodes; ++k) {
    const double theta = (2.0 * k - 1.0) * std::numbers::pi / nodes;
    const std::complex<double> e = std::polar(1.0, theta);
    const std::complex<double> pole = c + r * e;
    acc += (-r * e / static_cast<double>(nodes)) / (zeta - pole);
  }
  return acc.real();
}

} // namespace

TEST_CASE("midpoint filter evaluates to 1 at the interval center") {
  for (int n_c : {1, 2, 4, 8, 16}) {
    const RationalFilter f = midpoint_filter(-1.0, 1.0, n_c);
    CHECK(std::abs(eval_filter(f, 0.0) - 1.0) <= 1e-13);
  }
  const RationalFilter g = midpoint_filter(0.3, 17.0, 3);
  CHECK(std::abs(eval_filter(g, g.center()) - 1.0) <= 1e-13);
}

TEST_CASE("midpoint filter nodes for n_c = 2") {
  const RationalFilter f = midpoint_filter(-1.0, 1.0, 2);
  REQUIRE(f.poles.size() == 2);
  const std::complex<double> p0 = std::polar(1.0, std::numbers::pi / 4.0);
  const std::complex<double> p1 = std::polar(1.0, 3.0 * std::numbers::pi / 4.0);
  CHECK(std::abs(f.poles[0] - p0) <= 1e-15);
  CHECK(std::abs(f.poles[1] - p1) <= 1e-15);
}

TEST_CASE("poles lie on the circle in the upper half plane") {
  for (auto make : {midpoint_filter, gauss_legendre_filter}) {
    const RationalFilter f = make(2.0, 10.0, 6);
    for (const auto& pole : f.poles) {
      CHECK(pole.imag() > 0.0);
      CHECK(std::abs(std::abs(pole - std::complex<double>(f.center())) - f.radius()) <= 1e-12 * f.radius());
    }
  }
}

TEST_CASE("filter value matches the direct quadrature oracle") {
  const double alpha = -2.5, beta = 0.5;
  const RationalFilter f = midpoint_filter(alpha, beta, 10000);
  for (double zeta : {-1.0, -2.0, 0.2, 1.5, 4.0}) {
    CHECK(eval_filter(f, zeta) == doctest::Approx(quadrature_oracle(alpha, beta, zeta)).epsilon(1e-12));
  }
}

TEST_CASE("full conjugate-pair sum is real and equals the half-sum form") {
  for (auto make : {midpoint_filter, gauss_legendre_filter}) {
    const RationalFilter f = make(-1.0, 3.0, 5);
    for (double zeta : {-2.0, 0.0, 0.9, 1.0, 2.7, 10.0}) {
      const std::complex<double> full = eval_filter_fullsum(f, zeta);
      const double scale = std::max(1.0, std::abs(full.real()));
      CHECK(std::abs(full.imag()) <= 1e-15 * scale);
      CHECK(std::abs(full.real() - eval_filter(f, zeta)) <= 1e-15 * scale);
    }
  }
}

TEST_CASE("symmetry about the center") {
  const RationalFilter f = midpoint_filter(-3.0, 7.0, 4);
  const double c = f.center();
  for (double t : {0.1, 0.5, 1.0, 3.0, 8.0}) {
    CHECK(eval_filter(f, c + t) == doctest::Approx(eval_filter(f, c - t)).epsilon(1e-13));
  }
}

TEST_CASE("decay away from the interval") {
  const RationalFilter f = midpoint_filter(-1.0, 1.0, 2);
  CHECK(std::abs(eval_filter(f, 100.0)) <= 0.02);
}

TEST_CASE("center value dominates exterior values") {
  const RationalFilter f = midpoint_filter(0.0, 1.0, 2);
  for (double outside : {-0.2, 1.3, 2.0, 5.0}) {
    CHECK(eval_filter(f, f.center()) > std::abs(eval_filter(f, outside)));
  }
}

TEST_CASE("midpoint rule sharpens monotonically toward the indicator") {
  double previous = -1.0;
  for (int n_c : {2, 4, 8, 16}) {
    const RationalFilter f = midpoint_filter(-1.0, 1.0, n_c);
    double worst = 0.0;
    for (int k = 0; k <= 400; ++k) {
      const double zeta = -2.0 + k * 0.01;
      if (std::abs(std::abs(zeta) - 1.0) < 0.05) continue;  // skip the jump neighborhoods
      const double indicator = std::abs(zeta) < 1.0 ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(eval_filter(f, zeta) - indicator));
    }
    if (previous >= 0.0) CHECK(worst <= previous + 1e-15);
    previous = worst;
  }
}

TEST_CASE("interior sup error shrinks as the node count doubles") {
  const RationalFilter coarse = midpoint_filter(-1.0, 1.0, 4);
  const RationalFilter fine = midpoint_filter(-1.0, 1.0, 16);
  double worst_coarse = 0.0, worst_fine = 0.0;
  for (int k = 0; k <= 160; ++k) {
    const double t = -0.8 + k * 0.01;
    worst_coarse = std::max(worst_coarse, std::abs(eval_filter(coarse, t) - 1.0));
    worst_fine = std::max(worst_fine, std::abs(eval_filter(fine, t) - 1.0));
  }
  CHECK(worst_fine < worst_coarse);
}

TEST_CASE("gauss-legendre basics") {
  const RationalFilter f1 = gauss_legendre_filter(-1.0, 1.0, 1);
  REQUIRE(f1.poles.size() == 1);
  CHECK(f1.poles[0].imag() > 0.0);
  const double at_center = eval_filter(f1, 0.0);
  CHECK(std::isfinite(at_center));
  CHECK(at_center > 0.0);

  for (int n_c : {4, 8}) {
    const RationalFilter f = gauss_legendre_filter(-1.0, 1.0, n_c);
    CHECK(eval_filter(f, 0.0) >= 0.9);
  }
}

TEST_CASE("invalid construction") {
  CHECK_THROWS(midpoint_filter(1.0, 1.0, 2));
  CHECK_THROWS(midpoint_filter(2.0, 1.0, 2));
  CHECK_THROWS(midpoint_filter(0.0, 1.0, 0));
}
