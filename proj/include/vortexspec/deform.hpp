#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "vortexspec/ops.hpp"
#include "vortexspec/spectral.hpp"

namespace vortex {

enum class SectorTag { S, S4 };

// z in S = {|arg z| < pi/8} or S4 = {pi/16 <= arg z <= pi/8}.
struct DeformationPoint {
  cplx z;
  SectorTag sector = SectorTag::S;

  DeformationPoint(cplx z_, SectorTag tag = SectorTag::S);
};

struct UzResult {
  VectorXd values;
  double lost_mass = 0.0;  // fraction of ||u||^2 carried by nodes with z r > R_max
  bool warning = false;
};

// (U_z u)(r) = z^{1/2} u(z r) for real z > 0, by interpolation on the grid.
UzResult apply_Uz(const VectorXd& u, double z, const RadialGrid& grid);

enum class DeformFamily { Z1, Zk, H, Hscript, L1 };

std::string to_string(DeformFamily f);

OperatorMatrix assemble_family(DeformFamily f, const GridPtr& grid,
                               const ModeParams& p, cplx z);

// Leading m eigenvalues at each z are paired with the nearest eigenvalue at
// every other z. With robust_filter only eigenvalues that survive the grid
// refinement (n -> 1.5n, R_max -> R_max + 2) within 1e-5 relative take part.
struct ZDrift {
  double drift = 0.0;          // max pairwise distance of matched eigenvalues
  bool ambiguous = false;      // some pairing had two candidates within tol
  std::vector<VectorXcd> leading;  // leading m eigenvalues per z
  std::vector<std::string> notes;
};

ZDrift spectrum_z_independence(DeformFamily f, const ModeParams& p,
                               const std::vector<DeformationPoint>& zs,
                               const GridPtr& grid, int m = 5,
                               double pair_tol = 1e-4, bool robust_filter = true);

class ContourError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProjectionCount {
  cplx center;
  double radius = 0.0;
  int n_quad = 0;         // quadrature points actually used
  cplx trace;
  int count = 0;
  double projector_defect = 0.0;  // ||P^2 - P|| / max(1, ||P||^2)
  double tolerance = 1e-6;
};

// Riesz projector of A for the circle |z - c| = rho by the trapezoid rule.
// n_quad is doubled until the trace settles; throws ContourError when an
// eigenvalue sits within 0.05 rho of the contour or the trace never settles.
ProjectionCount riesz_count(const OperatorMatrix& A, cplx center, double radius,
                            int n_quad = 64);

OperatorMatrix inverse_operator(const OperatorMatrix& A);

struct BallCheck {
  double mu = 0.0;
  int multiplicity = 0;
  bool isolated = false;  // ball holds no other mu and not 0
  int count = -1;         // -1: not evaluated
  bool ok = false;
  std::string note;
};

struct Lemma53Report {
  double d = 0.0;      // ||A_alpha - A||
  double delta = 0.0;
  std::string delta_policy;
  bool hypothesis_ok = false;  // d <= delta^2 / 4
  double symmetry_defect = 0.0;
  int escaped = 0;             // eigenvalues of A_alpha outside all balls
  bool part_i = false;
  std::vector<BallCheck> balls;
  bool part_ii = false;
  bool passed = false;
  std::vector<std::string> notes;
};

// A self-adjoint (in the quadrature inner product), both on one grid.
// delta <= 0 selects delta = 2 sqrt(d). Part (ii) is checked on the n_balls
// eigenvalues of A of largest modulus.
Lemma53Report lemma53_certificate(const OperatorMatrix& A_alpha,
                                  const OperatorMatrix& A,
                                  const SpectrumResult& eig_A, double delta = 0.0,
                                  int n_balls = 1);

// Image of the disc |w - c| < rho under w -> 1/w.
struct Disc {
  cplx center;
  double radius = 0.0;
  bool exterior = false;  // 0 was inside: the image is |w - center| > radius
};

Disc invert_disc(cplx c, double rho);

struct LocalizationRegion {
  int mode = 1;
  int index = 0;  // j, 1-based
  cplx center;
  double radius = 0.0;
  bool exterior = false;
  double source_eig = 0.0;
  double delta = 0.0;

  bool contains(cplx z, double slack = 0.0) const;
};

// zeta_k^{-2} (1 / B(1/lambda_j, delta)) - i beta_k + 1/2 for each lambda_j.
LocalizationRegion localization_region(const ModeParams& p, double lambda_j,
                                       int j, double delta);
std::vector<LocalizationRegion> localization_regions(const ModeParams& p,
                                                     const std::vector<double>& eigs,
                                                     double delta);

}  // namespace vortex
