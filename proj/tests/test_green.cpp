#include "mwi/green.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "mwi/rng.hpp"
#include "mwi/special.hpp"
#include "mwi/tumor.hpp"

namespace {
using cd = std::complex<double>;
constexpr cd kJ{0.0, 1.0};

// Background kernel the matrix entries integrate over a cell.
cd kernel(cd kappa, double dist) {
  return -kJ * (kappa * kappa / 4.0) * mwi::special::hankel2_0(kappa * dist);
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

// Kernel integral over a disc of radius `a`, observer at distance d from
// the disc center (d > a: smooth integrand, polar product rule).
cd disc_integral_external(cd kappa, double a, double d, int nr = 64, int nphi = 96) {
  Eigen::VectorXd xr, wr, xp, wp;
  gauss_legendre(nr, xr, wr);
  gauss_legendre(nphi, xp, wp);
  cd sum = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double rho = 0.5 * a * (xr[i] + 1.0);
    const double wrho = 0.5 * a * wr[i] * rho;
    for (int j = 0; j < nphi; ++j) {
      const double phi = std::numbers::pi * (xp[j] + 1.0);
      const double wphi = std::numbers::pi * wp[j];
      const double dist = std::sqrt(d * d + rho * rho - 2.0 * d * rho * std::cos(phi));
      sum += wrho * wphi * kernel(kappa, dist);
    }
  }
  return sum;
}

// Self integral over the disc: radially symmetric, substitution rho = a t^2
// tames the logarithmic kernel singularity at the center.
cd disc_integral_self(cd kappa, double a, int n = 160) {
  Eigen::VectorXd xt, wt;
  gauss_legendre(n, xt, wt);
  cd sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = 0.5 * (xt[i] + 1.0);
    const double rho = a * t * t;
    sum += 0.5 * wt[i] * kernel(kappa, rho) * (2.0 * a * t) * rho;
  }
  return 2.0 * std::numbers::pi * sum;
}

// Kernel integral over the actual square cell (side h, centered at offset
// from the observer); smooth only when the observer is outside the cell.
cd square_integral(cd kappa, double h, const Eigen::Vector2d& offset, int n = 48) {
  Eigen::VectorXd x, w;
  gauss_legendre(n, x, w);
  cd sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double px = offset.x() + 0.5 * h * x[i];
      const double py = offset.y() + 0.5 * h * x[j];
      sum += 0.25 * h * h * w[i] * w[j] * kernel(kappa, std::hypot(px, py));
    }
  return sum;
}

mwi::ImagingSetup stock_setup() {
  mwi::ImagingSetup setup;
  setup.frequency = 1.3e9;
  setup.eps_b = 22.4;
  setup.sigma_b = 1.26;
  setup.n_views = 16;
  setup.ring_radius = 0.076;
  return setup;
}
}  // namespace

TEST_CASE("closed-form entries equal the equal-area-circle integrals") {
  const cd kappa = mwi::background_wavenumber(stock_setup());
  const double h = 0.003;
  const double a = h / std::sqrt(std::numbers::pi);

  for (double d : {h, 2.0 * h, 5.5 * h, 12.0 * h}) {
    const cd closed = mwi::richmond_offdiag(kappa, h, d);
    const cd quad = disc_integral_external(kappa, a, d);
    CAPTURE(d);
    CHECK(std::abs(closed - quad) / std::abs(quad) < 1e-6);
  }

  // The -1 in the closed form comes out of the integral itself
  // (d/dx [x H1(x)] = x H0(x) and x H1^(2)(x) -> 2j/pi at 0), so the raw
  // quadrature matches the full self entry.
  const cd closed_self = mwi::richmond_self(kappa, h);
  const cd quad_self = disc_integral_self(kappa, a);
  CHECK(std::abs(closed_self - quad_self) / std::abs(quad_self) < 1e-6);
}

TEST_CASE("equal-area circle approximates the true square-cell integral") {
  const cd kappa = mwi::background_wavenumber(stock_setup());
  const double h = 0.003;  // about lambda/11 in the background

  // Approximation quality (not an identity): nearest neighbours are the
  // worst case, the mismatch decays with distance.
  const struct {
    Eigen::Vector2d offset;
    double bound;
  } cases[] = {
      {{0.003, 0.0}, 0.01},
      {{0.003, 0.003}, 0.004},
      {{0.009, 0.003}, 0.0015},
      {{0.018, 0.012}, 0.0015},
  };
  for (const auto& c : cases) {
    const cd closed = mwi::richmond_offdiag(kappa, h, c.offset.norm());
    const cd quad = square_integral(kappa, h, c.offset);
    const double rel = std::abs(closed - quad) / std::abs(quad);
    CAPTURE(c.offset.x());
    CAPTURE(c.offset.y());
    MESSAGE("square-cell relative deviation: " << rel);
    CHECK(rel < c.bound);
  }
}

TEST_CASE("richmond self term vanishes in the static limit") {
  // G_B(n,n) -> 0 as kappa*a -> 0, so the State matrix diagonal -> 1.
  const cd tiny = mwi::richmond_self(cd{1e-4, 0.0}, 0.003);
  CHECK(std::abs(tiny) < 1e-8);
}

TEST_CASE("internal background matrix is symmetric with richmond entries") {
  const cd kappa = mwi::background_wavenumber(stock_setup());
  const mwi::Grid grid{0.024, 8, {0.0, 0.0}};
  const Eigen::MatrixXcd gb = mwi::green_b_internal(grid, kappa);

  CHECK(gb.rows() == 64);
  CHECK((gb - gb.transpose()).norm() == 0.0);

  const double d03 = (grid.cell_center(0) - grid.cell_center(3)).norm();
  CHECK(gb(0, 3) == mwi::richmond_offdiag(kappa, grid.cell_size(), d03));
  const double d0_60 = (grid.cell_center(0) - grid.cell_center(60)).norm();
  CHECK(gb(0, 60) == mwi::richmond_offdiag(kappa, grid.cell_size(), d0_60));
  CHECK(gb(5, 5) == mwi::richmond_self(kappa, grid.cell_size()));
}

TEST_CASE("external background matrix samples receiver positions") {
  const mwi::ImagingSetup setup = stock_setup();
  const cd kappa = mwi::background_wavenumber(setup);
  const mwi::Grid grid{0.024, 6, {0.0, 0.0}};

  const int view = 3;
  const Eigen::MatrixXcd gb = mwi::green_b_external(grid, setup, view, kappa);
  CHECK(gb.rows() == setup.n_receivers());
  CHECK(gb.cols() == grid.cell_count());

  for (int m : {0, 2, 3, 14}) {
    const Eigen::Vector2d rec = setup.antenna_position(setup.receiver_antenna(view, m));
    const double dist = (rec - grid.cell_center(17)).norm();
    CHECK(gb(m, 17) == mwi::richmond_offdiag(kappa, grid.cell_size(), dist));
  }
}

TEST_CASE("inhomogeneous internal matrix satisfies its defining identity") {
  const cd kappa = mwi::background_wavenumber(stock_setup());
  const mwi::Grid grid{0.03, 10, {0.0, 0.0}};
  const Eigen::MatrixXcd gb = mwi::green_b_internal(grid, kappa);

  mwi::Rng rng(42);
  Eigen::VectorXcd tau(grid.cell_count());
  for (int i = 0; i < grid.cell_count(); ++i)
    tau[i] = cd{rng.uniform(-0.5, 2.0), rng.uniform(-1.0, 0.0)};

  const Eigen::MatrixXcd gn = mwi::green_n_internal(gb, tau);
  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(gb.rows(), gb.cols());
  const double residual = ((identity - gb * tau.asDiagonal()) * gn - gb).norm() / gb.norm();
  CHECK(residual < 1e-10);
}

TEST_CASE("external inhomogeneous route matches a direct scattering solve") {
  // The assembled G_N^Theta must radiate any current exactly like the
  // physical reference scenario: solve the State equation for the field
  // scattered off the reference tissue, then radiate current + induced
  // polarization through the background operator.
  const mwi::ImagingSetup setup = stock_setup();
  const cd kappa = mwi::background_wavenumber(setup);
  const mwi::Grid grid{0.036, 12, {0.0, 0.0}};
  const int n = grid.cell_count();

  const Eigen::MatrixXcd gb = mwi::green_b_internal(grid, kappa);
  mwi::Rng rng(7);

  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXcd tau(n);
    for (int i = 0; i < n; ++i) tau[i] = cd{rng.uniform(-0.3, 1.5), rng.uniform(-0.8, 0.0)};
    const Eigen::MatrixXcd gn = mwi::green_n_internal(gb, tau);

    Eigen::VectorXcd j(n);
    for (int i = 0; i < n; ++i) j[i] = cd{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};

    // Direct route: E_sc = [I - G_B tau]^{-1} G_B J by per-current solve.
    const Eigen::MatrixXcd system =
        Eigen::MatrixXcd::Identity(n, n) - gb * tau.asDiagonal();
    const Eigen::VectorXcd e_sc = Eigen::PartialPivLU<Eigen::MatrixXcd>(system).solve(gb * j);

    for (int view : {0, 9}) {
      const Eigen::MatrixXcd gb_ext = mwi::green_b_external(grid, setup, view, kappa);
      const Eigen::MatrixXcd gn_ext = mwi::green_n_external(gb_ext, tau, gn);

      const Eigen::VectorXcd via_operator = gn_ext * j;
      const Eigen::VectorXcd via_solve = gb_ext * (j + tau.cwiseProduct(e_sc)).eval();
      CHECK((via_operator - via_solve).norm() / via_solve.norm() < 1e-10);
    }
  }
}

TEST_CASE("singular reference scenario raises the conditioning error") {
  // Uniform tau = 1/lambda for an eigenvalue lambda of G_B makes the State
  // matrix I - G_B*tau exactly singular.
  const cd kappa = mwi::background_wavenumber(stock_setup());
  const mwi::Grid grid{0.006, 2, {0.0, 0.0}};
  const Eigen::MatrixXcd gb = mwi::green_b_internal(grid, kappa);

  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(gb);
  const Eigen::VectorXcd tau =
      Eigen::VectorXcd::Constant(grid.cell_count(), 1.0 / es.eigenvalues()[0]);
  CHECK_THROWS_AS(mwi::green_n_internal(gb, tau), mwi::IllConditionedError);
}

TEST_CASE("operator bundle has consistent shapes and contrast") {
  const mwi::ImagingSetup setup = stock_setup();
  const mwi::Grid grid{0.036, 12, {0.0, 0.0}};
  const mwi::PermittivityMap reference = mwi::ideal_phantom(grid, setup, 0.012, 16.5, 0.60);

  const mwi::GreenOperators ops = mwi::build_green_operators(reference, setup);
  CHECK(ops.gb_internal.rows() == grid.cell_count());
  CHECK(ops.gn_internal.cols() == grid.cell_count());
  CHECK(ops.gb_external.size() == 16);
  CHECK(ops.gn_external.size() == 16);
  CHECK(ops.gb_external[4].rows() == 15);
  CHECK(ops.gn_external[11].cols() == grid.cell_count());
  CHECK((ops.reference_contrast - mwi::contrast(reference, setup)).norm() == 0.0);
}
