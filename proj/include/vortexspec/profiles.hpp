#pragma once

#include "vortexspec/common.hpp"

// Radial profiles of the Gaussian vortex and the auxiliary functions
// F0..F3. All of them accept complex arguments; the radial ones are
// restricted to the sector |arg r| <= pi/4 and throw std::domain_error
// outside of it.
namespace vortex::profiles {

// Below this |r| (equivalently |z| < 1/16 with z = r^2/4) the removable
// singularities are evaluated from their Taylor series.
inline constexpr double kSeriesRadius = 0.5;

cplx F0(cplx z);  // e^z - z - 1
cplx F1(cplx z);  // (1 - e^{-z}) / z
cplx F2(cplx z);  // e^{-z/2}
cplx F3(cplx z);  // (2z^2/F0 - 3 + 2z) z / F0
cplx F1_prime(cplx z);

// Remainders used by the appendix scans, free of cancellation near 0.
cplx F3_minus_pole(cplx z);    // F3(z) - 2/z
cplx F1_minus_taylor(cplx z);  // F1(z) - 1 + z/2

cplx sigma(cplx r);        // F1(r^2/4)
cplx sigma_prime(cplx r);  // d sigma / dr
cplx g(cplx r);            // e^{-r^2/8}
cplx G(cplx r);            // e^{-r^2/4} / (4 pi)
cplx S(cplx r);            // sigma / (8 pi)
cplx S_prime(cplx r);
cplx f(cplx r);            // F3(r^2/4)

double sigma(double r);
double sigma_prime(double r);
double g(double r);
double G(double r);
double S(double r);
double S_prime(double r);
double f(double r);

}  // namespace vortex::profiles
