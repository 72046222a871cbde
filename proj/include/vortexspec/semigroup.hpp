#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vortexspec/ops.hpp"

namespace vortex {

// Uniform tensor grid on [-L, L]^2 for the Cartesian heat-kernel checks.
struct TensorGrid2D {
  int m = 241;
  double half_width = 12.0;

  VectorXd axis() const { return VectorXd::LinSpaced(m, -half_width, half_width); }
  double step() const { return 2.0 * half_width / (m - 1); }
};

// e^{tau L} f(xi) = (4 pi a)^{-1} \int exp(-|xi - eta e^{-tau/2}|^2 / (4a)) f(eta) d eta,
// a = 1 - e^{-tau}. The kernel factorizes, so this is K F K^T with a 1D
// trapezoid matrix K. f(i, j) is the value at (x_i, y_j).
MatrixXd heat_kernel_apply(const TensorGrid2D& grid, const MatrixXd& f, double tau);

// Oseen profile G = (4 pi)^{-1} e^{-|xi|^2/4} and d_1 G on the tensor grid.
MatrixXd gaussian_G(const TensorGrid2D& grid);
MatrixXd gaussian_dG1(const TensorGrid2D& grid);

struct Trajectory {
  std::vector<double> taus;
  std::vector<VectorXcd> states;  // original frame
  std::vector<double> norms;      // quadrature L^2_r norms
  std::vector<double> log_norms;
  std::string method;             // "eigen" or "expm"
  bool renormalized = false;      // expm path: state rescaled every step
  double eigvec_cond = 0.0;
};

// w(tau_i) = exp(tau_i A) w0. Uses the eigendecomposition when the
// eigenvector matrix has condition number below cond_max, otherwise
// scaling-and-squaring exponentials of the step sizes (renormalized stepping).
Trajectory propagate(const OperatorMatrix& A, const VectorXcd& w0,
                     const std::vector<double>& taus, double cond_max = 1e8);

struct DecayFit {
  std::vector<double> taus;
  std::vector<double> norms;
  double rate = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  double r_squared = 0.0;
  bool accepted = false;    // r_squared >= 0.99
  bool truncated = false;   // noise floor cut the window
  double hump = 1.0;        // max norm / initial norm
};

// Least-squares slope of log ||w|| over the window. With apply_noise_floor,
// points below 1e2 eps of the initial norm end the window.
DecayFit decay_rate(const std::vector<double>& taus, const std::vector<double>& log_norms,
                    std::pair<double, double> window, bool apply_noise_floor = true);
DecayFit decay_rate(const Trajectory& t, std::pair<double, double> window);

struct DuhamelResult {
  std::vector<double> taus;
  std::vector<VectorXcd> f1, f2;
  std::vector<VectorXcd> f1_direct, f2_direct;  // from the 2n x 2n block system
  double discrepancy = 0.0;  // max relative difference to the direct solution
  double envelope = 0.0;     // max ||f(tau)|| e^{tau/2} / ((1 + tau) ||f(0)||)
};

// Lower triangular mode-zero system [[A, 0], [alpha r S', A]]:
// f2(tau) = e^{tau A} f2(0) + alpha \int_0^tau e^{(tau-s)A} r S' e^{sA} f1(0) ds,
// with the integral evaluated in the eigenbasis of A by divided differences.
DuhamelResult duhamel_block0(const GridPtr& grid, double alpha, const VectorXcd& f1_0,
                             const VectorXcd& f2_0, const std::vector<double>& taus);

}  // namespace vortex
