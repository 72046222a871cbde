#pragma once

#include <vector>

#include "vortexspec/ops.hpp"

namespace vortex {

// Mode-one wave operators as discrete Volterra operators:
//   T w  = w + a(r) \int_0^r b w,     a = g / (sigma' r^{3/2}), b = r^{3/2} g
//   Tt w = w + b(r) \int_r^R a w
// Cumulative trapezoid on the nodes with virtual end points 0 and R_max. The
// diagonal weight of the lower rule is chosen so that \int_0^{r_i} b^2 =
// -r_i^3 sigma'(r_i) holds exactly, which makes T b = 0.
struct WaveOperatorPair {
  GridPtr grid;
  MatrixXd T, Tt;
  MatrixXd V_projector;  // quadrature-orthogonal projector onto b^perp
  VectorXd constraint;   // b = r^{3/2} g
};

WaveOperatorPair build_wave_operators(const GridPtr& grid);

struct WaveIdentityReport {
  double tt_max = 0.0;        // max |T Tt - I|
  double ttp_max = 0.0;       // max |Tt T - P|
  double tt_outer = 0.0;      // same, rows and columns with r >= r_outer
  double ttp_outer = 0.0;
  double r_outer = 0.5;
  double trace_gap = 0.0;     // tr(Tt T - P) - tr(T Tt - I), = 1 for any square pair
  double kernel_defect = 0.0; // max |T b|
};

WaveIdentityReport wave_identity_check(const WaveOperatorPair& w, double r_outer = 0.5);

struct EquivalenceReport {
  double discrepancy = 0.0;  // max distance of matched eigenvalues
  bool ambiguous = false;
  VectorXcd wave_reduced;    // leading eigenvalues of the wave-reduced operator
  VectorXcd compressed;      // their partners in H_1 compressed to V
  double removed = 0.0;      // Re of the H_1 eigenvalue absent from the compression
};

// Leading m eigenvalues of the wave-reduced operator against H_1 compressed to
// V (orthonormal complement of W^{1/2} b in the unitary frame).
EquivalenceReport verify_spectral_equivalence(const GridPtr& grid, double alpha, int m = 10,
                                              double pair_tol = 1e-8);

}  // namespace vortex
