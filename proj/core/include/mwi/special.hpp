#pragma once

#include <complex>

namespace mwi::special {

// Real-argument Bessel values backing the Hankel kernel,
// H0^(2)(x) = J0(x) - j*Y0(x).
struct BesselTriple {
  double j0;
  double y0;
  double j1;
};

// x >= 0; Y0 requires x > 0 (throws std::domain_error at x = 0).
BesselTriple bessel_j0_y0_j1(double x);

// Complex-argument Bessel/Hankel functions of orders 0 and 1 for arguments
// with Re(z) > 0 (the solver only ever evaluates kappa*d with Re(kappa) > 0
// and Im(kappa) <= 0). Power series below |z| = 12, Hankel asymptotic
// expansion above; both branches agree to ~1e-10 relative in the overlap.
std::complex<double> bessel_j0(std::complex<double> z);
std::complex<double> bessel_j1(std::complex<double> z);
std::complex<double> bessel_y0(std::complex<double> z);
std::complex<double> bessel_y1(std::complex<double> z);
std::complex<double> hankel2_0(std::complex<double> z);
std::complex<double> hankel2_1(std::complex<double> z);

}  // namespace mwi::special
