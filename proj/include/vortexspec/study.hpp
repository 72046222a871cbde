#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vortexspec/deform.hpp"
#include "vortexspec/spectral.hpp"

namespace vortex {

// Desk-scale default.
std::vector<double> default_alpha_grid();

struct PowerFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  double r_squared = 0.0;
};

// Least squares on (log x, log y).
PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

// Indices with log x in the upper half of the log range (1e-3 decade slack).
std::vector<size_t> upper_half(const std::vector<double>& x);

struct SweepConfig {
  std::vector<double> alphas = default_alpha_grid();
  int k_max = 8;
  GridPolicy policy;
  bool check_robust = true;
  double robust_tol = 1e-4;
  double alpha0 = 50.0;
  double monotone_tol = 1e-6;
  int workers = 0;  // 0: hardware concurrency
};

struct SweepResult {
  std::vector<double> alphas;
  std::vector<double> sigma;
  std::vector<double> psi;
  double sigma_exponent = 0.0;
  double psi_exponent = 0.0;
  std::pair<double, double> sigma_prefactor_band{0.0, 0.0};  // sigma / alpha^{1/2}
  std::vector<int> per_mode_argmax;  // k attaining Sigma
  std::vector<int> psi_argmin;       // k attaining Psi
  std::vector<bool> flagged;         // robustness gate failed, excluded from fits
  std::vector<double> fit_alphas;
  std::vector<std::vector<ModeSolve>> modes;  // [alpha][k - 1]
  int monotone_violations = 0;
  std::vector<std::string> warnings;

  // sigma_i >= psi_i >= 1 - tol at every alpha
  bool ordering_holds(double tol = 1e-6) const;
};

// Validates the grid (increasing, >= alpha0, >= 1.5 decades) and throws
// std::invalid_argument with the offending field.
void validate_alpha_grid(const std::vector<double>& alphas, double alpha0);

SweepResult run_sweep(const SweepConfig& cfg);

struct GapDecayResult {
  int k = 1;
  std::vector<double> alphas, betas, d;
  std::vector<double> fit_alphas;
  double exponent = 0.0;  // fitted slope of log d against log beta
  double C = 0.0;         // smallest C with d <= C beta^{-1/10} everywhere
  bool monotone = false;  // d decreasing on the fit window
  bool passed = false;    // exponent <= -0.08 and monotone
};

// d(alpha) = ||Lhat_k^{-1} - Zhat_k^{-1}|| in L^2_r.
double resolvent_gap(int k, double alpha, const GridPolicy& policy);
GapDecayResult resolvent_gap_decay(const std::vector<double>& alphas, int k,
                                   const GridPolicy& policy, int workers = 0);

struct CoercivityRow {
  int k = 1;
  double alpha = 0.0;
  std::string quantity;
  double value = 0.0;
};

struct CoercivityReport {
  std::vector<CoercivityRow> rows;
  // grouped bounds: "P54a", "P54b", "P54c" for k = 1, "P57a".."P57d" for k >= 2
  std::vector<CoercivityRow> grouped;
  double max_spread = 0.0;    // max over (k, group) of (max - min) / max on the fit window
  double r2_Z1inv_max = 0.0;  // sup over the sweep of ||r^2 Zhat_1^{-1}||
  bool bounded = false;       // all values finite
  bool stable = false;        // max_spread <= 0.1
};

CoercivityReport coercivity_table(const std::vector<double>& alphas, const std::vector<int>& k_list,
                                  const GridPolicy& policy, std::uint64_t seed = 1,
                                  int n_random = 200, int workers = 0);

enum class LemmaId { A1_f, A1_sigma, A2, A3, P54, P57, P55, P58 };

std::string to_string(LemmaId id);
LemmaId lemma_id_from_string(const std::string& s);

struct InequalityScanReport {
  LemmaId lemma_id = LemmaId::A1_f;
  std::string scan_domain;
  bool lower_bound = false;     // claim is ">~" (constant is an inf) rather than "<~"
  double fitted_constant = 0.0; // sup (or inf) of LHS/RHS over the scan
  long violations = 0;          // non-finite ratios, or ratio <= 0 for ">~"
  double worst_ratio = 0.0;     // ratio farthest from the claim's direction
  long n_points = 0;
  std::vector<std::string> notes;

  bool passed() const { return violations == 0 && std::isfinite(fitted_constant); }
};

struct ScanResolution {
  int n_rays = 9;
  int n_modulus = 30;    // |zeta| samples
  int n_radius = 60;     // r samples
  int n_random = 50;     // random f per (zeta, k), A3 only
  std::vector<int> k_list{2, 3, 4, 6, 8};
  GridMeta grid{200, 12.0, GridScheme::MappedChebyshev};  // A3 quadrature grid
  std::uint64_t seed = 1;
};

// Single-point ratios of the appendix inequalities.
double a1_f_ratio(cplx zeta, double r);      // |zeta^2 f(zeta r) - 8/r^2| / |zeta|^2
double a1_sigma_ratio(cplx zeta, double r);  // |sigma(zeta r) - 1 + zeta^2 r^2/8| / min(..)
double a2_ratio(cplx zeta, double r);        // Im(zeta^2 (1 - sigma)) / min(..)

// P5x ids are not scans; they throw std::invalid_argument (use
// coercivity_table / resolvent_gap_decay).
InequalityScanReport appendix_scan(LemmaId id, const ScanResolution& res = {});

enum class DeltaPolicy { BauerFike, Lemma, Separation, Fixed };

std::string to_string(DeltaPolicy p);
DeltaPolicy delta_policy_from_string(const std::string& s);

struct DeltaChoice {
  DeltaPolicy policy = DeltaPolicy::BauerFike;
  double value = 0.0;  // Fixed only
  int n_separated = 3; // Separation: the first N balls pairwise disjoint
};

struct FigureDataset {
  int k = 1;
  double alpha = 0.0;
  double beta = 0.0;
  double d = 0.0;
  double delta = 0.0;
  std::string delta_policy;
  std::vector<double> source_eigs;  // lambda_j of Zhat_k
  std::vector<LocalizationRegion> regions;
  RobustSpectrum spectrum;
  std::vector<cplx> eigenvalues;   // grid-robust ones
  std::vector<bool> contained;     // in some region and in the box
  std::vector<int> region_counts;  // eigenvalues inside each region
  double box_re_max = 0.0, box_im_min = 0.0, box_im_max = 0.0;
  int n_first = 3;
  bool all_contained = false;
  bool first_regions_hit = false;

  bool passed() const { return all_contained && first_regions_hit; }
};

FigureDataset figure_dataset(int k, double alpha, const DeltaChoice& delta,
                             const GridPolicy& policy, int n_regions = 40, int n_first = 3);

}  // namespace vortex
