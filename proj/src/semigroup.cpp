#include "vortexspec/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "vortexspec/linalg.hpp"

namespace vortex {

MatrixXd heat_kernel_apply(const TensorGrid2D& grid, const MatrixXd& f, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("heat_kernel_apply: tau must be positive");
  if (f.rows() != grid.m || f.cols() != grid.m)
    throw std::invalid_argument("heat_kernel_apply: field does not match the grid");
  const VectorXd x = grid.axis();
  const double h = grid.step();
  const double a = -std::expm1(-tau);
  const double s = std::exp(-tau / 2);
  MatrixXd K(grid.m, grid.m);
  for (int i = 0; i < grid.m; ++i)
    for (int j = 0; j < grid.m; ++j) {
      const double d = x[i] - s * x[j];
      const double wj = (j == 0 || j == grid.m - 1) ? 0.5 * h : h;
      K(i, j) = std::exp(-d * d / (4 * a)) / std::sqrt(4 * kPi * a) * wj;
    }
  return K * f * K.transpose();
}

MatrixXd gaussian_G(const TensorGrid2D& grid) {
  const VectorXd x = grid.axis();
  MatrixXd G(grid.m, grid.m);
  for (int i = 0; i < grid.m; ++i)
    for (int j = 0; j < grid.m; ++j)
      G(i, j) = std::exp(-(x[i] * x[i] + x[j] * x[j]) / 4) / (4 * kPi);
  return G;
}

MatrixXd gaussian_dG1(const TensorGrid2D& grid) {
  const VectorXd x = grid.axis();
  MatrixXd G = gaussian_G(grid);
  for (int i = 0; i < grid.m; ++i) G.row(i) *= -x[i] / 2;
  return G;
}

Trajectory propagate(const OperatorMatrix& A, const VectorXcd& w0,
                     const std::vector<double>& taus, double cond_max) {
  if (w0.size() != A.size()) throw std::invalid_argument("propagate: size mismatch");
  for (size_t i = 0; i < taus.size(); ++i)
    if (taus[i] < 0.0 || (i > 0 && taus[i] <= taus[i - 1]))
      throw std::invalid_argument("propagate: taus must be increasing and non-negative");

  const VectorXd w = frame_weights(A);
  const VectorXd sw = w.cwiseSqrt();
  const MatrixXcd B = unitary_frame(A);
  const VectorXcd b0 = sw.cast<cplx>().cwiseProduct(w0);

  Trajectory out;
  out.taus = taus;
  auto push = [&](const VectorXcd& b) {
    out.states.push_back(b.cwiseQuotient(sw.cast<cplx>()));
    out.norms.push_back(b.norm());
    out.log_norms.push_back(std::log(b.norm()));
  };

  const auto ep = linalg::eig(B, true);
  const VectorXd sv = linalg::singular_values(ep.vectors);
  out.eigvec_cond = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1]
                                            : std::numeric_limits<double>::infinity();
  if (out.eigvec_cond < cond_max) {
    out.method = "eigen";
    const Eigen::PartialPivLU<MatrixXcd> lu(ep.vectors);
    const VectorXcd c = lu.solve(b0);
    for (double t : taus)
      push(ep.vectors * (ep.values.array() * t).exp().matrix().cwiseProduct(c));
    return out;
  }
  // Renormalize after every step so that the relative precision of the state
  // does not degrade as the norm decays; the log norm is accumulated.
  out.method = "expm";
  out.renormalized = true;
  std::vector<std::pair<double, MatrixXcd>> cache;
  auto step_matrix = [&](double dt) -> const MatrixXcd& {
    for (const auto& [h, E] : cache)
      if (std::abs(h - dt) <= 1e-12 * dt) return E;
    cache.emplace_back(dt, MatrixXcd((B * dt).exp()));
    return cache.back().second;
  };
  VectorXcd b = b0 / b0.norm();
  double log_scale = std::log(b0.norm()), prev = 0.0;
  for (double t : taus) {
    const double dt = t - prev;
    if (dt > 0.0) {
      b = step_matrix(dt) * b;
      const double nb = b.norm();
      if (nb > 0.0) {
        b /= nb;
        log_scale += std::log(nb);
      }
    }
    out.states.push_back(std::exp(log_scale) * b.cwiseQuotient(sw.cast<cplx>()));
    out.norms.push_back(std::exp(log_scale) * b.norm());
    out.log_norms.push_back(log_scale + std::log(b.norm()));
    prev = t;
  }
  return out;
}

DecayFit decay_rate(const std::vector<double>& taus, const std::vector<double>& log_norms,
                    std::pair<double, double> window, bool apply_noise_floor) {
  if (taus.size() != log_norms.size() || taus.empty())
    throw std::invalid_argument("decay_rate: taus and norms must align");
  if (window.first < taus.front() || window.second > taus.back() || window.first >= window.second)
    throw std::invalid_argument("decay_rate: window outside the trajectory");
  DecayFit fit;
  fit.taus = taus;
  for (double l : log_norms) fit.norms.push_back(std::exp(l));
  const double floor = std::log(1e2 * std::numeric_limits<double>::epsilon()) + log_norms.front();
  fit.hump = std::exp(*std::max_element(log_norms.begin(), log_norms.end()) - log_norms.front());
  std::vector<double> x, y;
  for (size_t i = 0; i < taus.size(); ++i) {
    if (taus[i] < window.first || taus[i] > window.second) continue;
    if (apply_noise_floor && !(log_norms[i] > floor)) {
      fit.truncated = true;
      break;
    }
    x.push_back(taus[i]);
    y.push_back(log_norms[i]);
  }
  if (x.size() < 2) throw std::runtime_error("decay_rate: fewer than two usable points in window");
  fit.window = {x.front(), x.back()};
  const double n = x.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  fit.rate = sxy / sxx;
  fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  fit.accepted = fit.r_squared >= 0.99;
  return fit;
}

DecayFit decay_rate(const Trajectory& t, std::pair<double, double> window) {
  return decay_rate(t.taus, t.log_norms, window, !t.renormalized);
}

DuhamelResult duhamel_block0(const GridPtr& grid, double alpha, const VectorXcd& f1_0,
                             const VectorXcd& f2_0, const std::vector<double>& taus) {
  const Index n = grid->size();
  const OperatorMatrix sys = assemble_system_LPi(grid, {0, alpha});
  const MatrixXcd A = sys.entries.topLeftCorner(n, n);
  const VectorXcd c = sys.entries.bottomLeftCorner(n, n).diagonal();  // alpha r S'

  const auto ep = linalg::eig(A, true);
  const Eigen::PartialPivLU<MatrixXcd> lu(ep.vectors);
  const VectorXcd& lam = ep.values;
  const VectorXcd a1 = lu.solve(f1_0), a2 = lu.solve(f2_0);
  const MatrixXcd M = lu.solve(c.asDiagonal() * ep.vectors);

  DuhamelResult out;
  out.taus = taus;
  for (double t : taus) {
    const VectorXcd e = (lam.array() * t).exp();
    // Phi_ij = \int_0^t e^{(t-s) lam_i} e^{s lam_j} ds
    VectorXcd acc = e.cwiseProduct(a2);
    for (Index i = 0; i < n; ++i) {
      cplx s = 0.0;
      for (Index j = 0; j < n; ++j) {
        const cplx d = lam[i] - lam[j];
        const cplx z = d * t;
        cplx phi;
        if (std::abs(z) < 1e-3)
          phi = e[j] * t * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0 + z * z * z * z / 120.0);
        else if (z.real() <= 0.0)
          phi = e[j] * (std::exp(z) - 1.0) / d;
        else
          phi = e[i] * (1.0 - std::exp(-z)) / d;
        s += phi * M(i, j) * a1[j];
      }
      acc[i] += s;
    }
    out.f1.push_back(ep.vectors * e.cwiseProduct(a1));
    out.f2.push_back(ep.vectors * acc);
  }

  VectorXcd w0(2 * n);
  w0 << f1_0, f2_0;
  const Trajectory direct = propagate(sys, w0, taus);
  const VectorXd w = grid->weights();
  auto wnorm = [&w](const VectorXcd& v) { return std::sqrt((w.array() * v.array().abs2()).sum()); };
  const double n0 = std::sqrt(std::pow(wnorm(f1_0), 2) + std::pow(wnorm(f2_0), 2));
  for (size_t i = 0; i < taus.size(); ++i) {
    out.f1_direct.push_back(direct.states[i].head(n));
    out.f2_direct.push_back(direct.states[i].tail(n));
    const double err = std::sqrt(std::pow(wnorm(out.f1[i] - out.f1_direct[i]), 2) +
                                 std::pow(wnorm(out.f2[i] - out.f2_direct[i]), 2));
    const double nrm = std::sqrt(std::pow(wnorm(out.f1[i]), 2) + std::pow(wnorm(out.f2[i]), 2));
    out.discrepancy = std::max(out.discrepancy, err / std::max(nrm, 1e-300));
    out.envelope = std::max(out.envelope, nrm * std::exp(taus[i] / 2) / ((1 + taus[i]) * n0));
  }
  return out;
}

}  // namespace vortex
