#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "vortexspec/linalg.hpp"
#include "vortexspec/ops.hpp"

namespace vortex {

struct SpectrumResult {
  VectorXcd eigenvalues;   // descending real part
  MatrixXcd eigenvectors;  // aligned columns, empty unless requested
  double abscissa = 0.0;
  std::string operator_label;
  GridMeta grid_meta;
  double residual = 0.0;   // max ||Av - lambda v|| / ||v|| (vectors only)
  double tolerance = 0.0;  // residual bound: 1e-10 ||A||_F

  bool has_vectors() const { return eigenvectors.size() > 0; }
};

SpectrumResult eig(const OperatorMatrix& A, bool want_vectors = false);

// Sorted eigenvalues of a bare matrix.
VectorXcd sorted_eigenvalues(const MatrixXcd& A);

struct ScanWindow {
  double lo = -1.0, hi = 1.0;
};

// [-1.2 beta, 0.2 beta] (numerical-range band plus 20%), or [-1, 1] at beta=0.
ScanWindow default_window(const OperatorMatrix& A);

struct ResolventScan {
  std::vector<double> lambdas;    // ascending, coarse and refinement points
  std::vector<double> inv_norms;  // ||(A - i lambda)^{-1}|| at each point
  double psi = 0.0;               // 1 / max(inv_norms)
  double lambda_star = 0.0;       // argmax
  bool bracket_refined = false;
  std::vector<std::string> warnings;
};

// Resolvent norms along the imaginary axis in the L^2_r norm. A Schur form of
// the weighted matrix is computed once; sigma_min at each point comes from
// inverse iteration on the triangular factor.
ResolventScan resolvent_scan(const OperatorMatrix& A, const ScanWindow& window,
                             int n_coarse = 128);
ResolventScan resolvent_scan(const OperatorMatrix& A, const linalg::SchurForm& s,
                             const ScanWindow& window, int n_coarse = 128);

struct ResolventSpotCheck {
  double via_svd = 0.0;    // 1 / sigma_min from a full SVD
  double via_solve = 0.0;  // largest singular value of the LU inverse
  double via_schur = 0.0;  // triangular inverse iteration
};

ResolventSpotCheck resolvent_spot_check(const OperatorMatrix& A, double lambda);

// Fixed-seed Gaussian vectors smoothed by (I - 0.01 D2)^{-1}, so that they
// stay in the discrete operator domains.
class SmoothRandom {
 public:
  SmoothRandom(const RadialGrid& grid, std::uint64_t seed);
  VectorXd real_sample();
  // blocks copies of the grid stacked (for 2n systems)
  VectorXcd complex_sample(Index blocks = 1);

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> nd_;
  Eigen::PartialPivLU<MatrixXd> lu_;
};

enum class RangeSampler { RandomGaussian, EigvecSeeded };

struct NumericalRangeSample {
  std::vector<cplx> points;
  double hull_re_max = 0.0, hull_im_min = 0.0, hull_im_max = 0.0;
};

// Rayleigh quotients <Au,u>/<u,u> in the quadrature inner product. Random
// vectors are smoothed by (I - 0.01 D2)^{-1}.
NumericalRangeSample numerical_range_sample(const OperatorMatrix& A, int n_samples,
                                            RangeSampler sampler,
                                            std::uint64_t seed = 1);

// Grid selection for a mode with rotation parameter beta. The deformation
// scale beta^{-1/4} and the outer critical radius ~2.5 beta^{1/4} both move
// with beta, so the truncation radius and resolution follow it.
struct GridPolicy {
  int n = 400;
  double r_max = 12.0;
  GridScheme scheme = GridScheme::MappedChebyshev;
  bool adaptive = true;

  GridMeta for_beta(double beta) const;
  // n -> 1.5 n, R_max -> R_max + 2
  static GridMeta refined(const GridMeta& m);
};

struct ModeSolve {
  int k = 0;
  double alpha = 0.0;
  GridMeta grid;
  VectorXcd eigenvalues;  // sorted
  double abscissa = 0.0;
  double psi = 0.0;       // only if requested
  double lambda_star = 0.0;
  bool psi_refined = false;
  double robust_delta = -1.0;  // |abscissa(refined) - abscissa|, -1 if unchecked
  bool robust = true;
};

// k = 1 uses the wave-reduced operator, |k| >= 2 uses H_k.
OperatorMatrix mode_operator(const GridPtr& grid, int k, double alpha);

ModeSolve solve_mode(int k, double alpha, const GridPolicy& policy, bool want_psi,
                     bool check_robust, double robust_tol = 1e-4);

struct SigmaBound {
  double sigma = 0.0;
  int argmax_k = 0;
  std::vector<ModeSolve> per_mode;
  std::vector<std::string> warnings;
};

SigmaBound sigma_bound(double alpha, int k_max, const GridPolicy& policy,
                       bool check_robust = false);

// Spectrum of mode_operator(k, alpha) with per-eigenvalue residuals and the
// grid-robustness flag: present within rtol (relative, floor 1) on the
// refined grid.
struct RobustSpectrum {
  GridMeta grid;
  VectorXcd eigenvalues;  // descending real part
  VectorXd residuals;
  std::vector<bool> robust;

  VectorXcd robust_eigenvalues() const;
};

RobustSpectrum robust_spectrum(int k, double alpha, const GridMeta& m, double rtol = 1e-5);

}  // namespace vortex
