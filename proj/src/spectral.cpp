#include "vortexspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace vortex {

namespace {

std::vector<Index> order_desc_real(const VectorXcd& v) {
  std::vector<Index> idx(v.size());
  std::iota(idx.begin(), idx.end(), Index(0));
  std::stable_sort(idx.begin(), idx.end(), [&v](Index a, Index b) {
    if (v[a].real() != v[b].real()) return v[a].real() > v[b].real();
    return v[a].imag() > v[b].imag();
  });
  return idx;
}

VectorXcd permute(const VectorXcd& v, const std::vector<Index>& idx) {
  VectorXcd out(v.size());
  for (size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
  return out;
}

}  // namespace

VectorXcd sorted_eigenvalues(const MatrixXcd& A) {
  const VectorXcd v = linalg::eig(A, false).values;
  return permute(v, order_desc_real(v));
}

SpectrumResult eig(const OperatorMatrix& A, bool want_vectors) {
  SpectrumResult out;
  const auto ep = linalg::eig(A.entries, want_vectors);
  const auto idx = order_desc_real(ep.values);
  out.eigenvalues = permute(ep.values, idx);
  out.abscissa = out.eigenvalues.size() ? out.eigenvalues[0].real() : 0.0;
  out.operator_label = A.label;
  if (A.grid) out.grid_meta = A.grid->meta();
  out.tolerance = 1e-10 * A.entries.norm();
  if (want_vectors) {
    out.eigenvectors.resize(A.size(), A.size());
    double res = 0.0;
    for (size_t i = 0; i < idx.size(); ++i) {
      out.eigenvectors.col(i) = ep.vectors.col(idx[i]);
      const VectorXcd& v = out.eigenvectors.col(i);
      res = std::max(res, (A.entries * v - out.eigenvalues[i] * v).norm() / v.norm());
    }
    out.residual = res;
  }
  return out;
}

ScanWindow default_window(const OperatorMatrix& A) {
  const double b = A.params ? std::abs(A.params->beta()) : 0.0;
  if (b == 0.0) return {-1.0, 1.0};
  return {-1.2 * b, 0.2 * b};
}

ResolventScan resolvent_scan(const OperatorMatrix& A, const ScanWindow& window,
                             int n_coarse) {
  return resolvent_scan(A, linalg::schur(unitary_frame(A)), window, n_coarse);
}

ResolventScan resolvent_scan(const OperatorMatrix& A, const linalg::SchurForm& s,
                             const ScanWindow& window, int n_coarse) {
  if (n_coarse < 2) throw std::invalid_argument("resolvent_scan: n_coarse too small");
  ResolventScan out;
  if (A.params && A.params->beta() != 0.0) {
    const double b = std::abs(A.params->beta());
    if (window.lo > -b || window.hi < 0.0)
      out.warnings.push_back("scan window does not cover the numerical-range band [-beta, 0]");
  }
  auto inv_norm = [&s](double lam) {
    const double sm = linalg::smin_shifted_triangular(s.T, cplx(0.0, lam));
    return sm > 0.0 ? 1.0 / sm : std::numeric_limits<double>::infinity();
  };
  std::vector<std::pair<double, double>> pts;
  const double h = (window.hi - window.lo) / (n_coarse - 1);
  for (int i = 0; i < n_coarse; ++i) {
    const double lam = window.lo + i * h;
    pts.emplace_back(lam, inv_norm(lam));
  }
  size_t jmax = 0;
  for (size_t i = 1; i < pts.size(); ++i)
    if (pts[i].second > pts[jmax].second) jmax = i;

  // golden section on the bracket around the coarse maximum
  double a = pts[jmax > 0 ? jmax - 1 : 0].first;
  double b = pts[std::min(jmax + 1, pts.size() - 1)].first;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = inv_norm(c), fd = inv_norm(d);
  pts.emplace_back(c, fc);
  pts.emplace_back(d, fd);
  for (int it = 0; it < 80; ++it) {
    const double scale = std::max(std::abs(0.5 * (a + b)), 1e-2 * (window.hi - window.lo));
    if (b - a <= 1e-3 * scale) {
      out.bracket_refined = true;
      break;
    }
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = inv_norm(c);
      pts.emplace_back(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = inv_norm(d);
      pts.emplace_back(d, fd);
    }
  }
  std::sort(pts.begin(), pts.end());
  double best = 0.0;
  for (const auto& [lam, v] : pts) {
    out.lambdas.push_back(lam);
    out.inv_norms.push_back(v);
    if (v > best) {
      best = v;
      out.lambda_star = lam;
    }
  }
  out.psi = 1.0 / best;
  return out;
}

ResolventSpotCheck resolvent_spot_check(const OperatorMatrix& A, double lambda) {
  MatrixXcd B = unitary_frame(A);
  B.diagonal().array() -= cplx(0.0, lambda);
  ResolventSpotCheck out;
  const VectorXd sv = linalg::singular_values(B);
  out.via_svd = 1.0 / sv[sv.size() - 1];
  out.via_solve = linalg::norm2(linalg::inverse(B));
  const auto s = linalg::schur(unitary_frame(A));
  out.via_schur = 1.0 / linalg::smin_shifted_triangular(s.T, cplx(0.0, lambda), 200, 1e-14);
  return out;
}

SmoothRandom::SmoothRandom(const RadialGrid& grid, std::uint64_t seed) : rng_(seed) {
  MatrixXd smooth = -0.01 * grid.d2();
  smooth.diagonal().array() += 1.0;
  lu_.compute(smooth);
}

VectorXd SmoothRandom::real_sample() {
  VectorXd x(lu_.rows());
  for (Index i = 0; i < x.size(); ++i) x[i] = nd_(rng_);
  return lu_.solve(x);
}

VectorXcd SmoothRandom::complex_sample(Index blocks) {
  const Index m = lu_.rows();
  VectorXcd x(m * blocks);
  for (Index i = 0; i < x.size(); ++i) x[i] = cplx(nd_(rng_), nd_(rng_));
  for (Index b = 0; b < x.size(); b += m) {
    x.segment(b, m) = lu_.solve(x.segment(b, m).real()).cast<cplx>() +
                      kI * lu_.solve(x.segment(b, m).imag()).cast<cplx>();
  }
  return x;
}

NumericalRangeSample numerical_range_sample(const OperatorMatrix& A, int n_samples,
                                            RangeSampler sampler, std::uint64_t seed) {
  if (n_samples < 100) throw std::invalid_argument("numerical_range_sample: n_samples >= 100");
  const Index n = A.size();
  const VectorXd w = frame_weights(A);
  SmoothRandom source(*A.grid, seed);
  auto random_vec = [&]() { return source.complex_sample(n / A.grid->size()); };
  MatrixXcd seeds;
  if (sampler == RangeSampler::EigvecSeeded) seeds = eig(A, true).eigenvectors;

  NumericalRangeSample out;
  out.hull_re_max = -std::numeric_limits<double>::infinity();
  out.hull_im_min = std::numeric_limits<double>::infinity();
  out.hull_im_max = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_samples; ++s) {
    VectorXcd u = random_vec();
    if (sampler == RangeSampler::EigvecSeeded) {
      const Index j = s % std::min<Index>(seeds.cols(), 40);
      const VectorXcd v = seeds.col(j);
      u = v / std::sqrt((w.array() * v.array().abs2()).sum()) +
          0.1 * u / std::sqrt((w.array() * u.array().abs2()).sum());
    }
    const VectorXcd Au = A.entries * u;
    const cplx num = (w.array().cast<cplx>() * u.array().conjugate() * Au.array()).sum();
    const double den = (w.array() * u.array().abs2()).sum();
    const cplx q = num / den;
    out.points.push_back(q);
    out.hull_re_max = std::max(out.hull_re_max, q.real());
    out.hull_im_min = std::min(out.hull_im_min, q.imag());
    out.hull_im_max = std::max(out.hull_im_max, q.imag());
  }
  return out;
}

GridMeta GridPolicy::for_beta(double beta) const {
  GridMeta m{n, r_max, scheme};
  if (!adaptive) return m;
  const double q = std::pow(std::abs(beta), 0.25);
  m.r_max = std::max(r_max, 2.5 * q + 8.0);
  const int want = static_cast<int>(std::ceil(8.0 * q * m.r_max / 50.0)) * 50;
  m.n = std::max(n, want);
  return m;
}

GridMeta GridPolicy::refined(const GridMeta& m) {
  return {static_cast<int>(std::lround(1.5 * m.n)), m.r_max + 2.0, m.scheme};
}

OperatorMatrix mode_operator(const GridPtr& grid, int k, double alpha) {
  if (k == 1) return assemble_L1_wavereduced(grid, {1, alpha});
  return assemble_Hk(grid, {k, alpha});
}

ModeSolve solve_mode(int k, double alpha, const GridPolicy& policy, bool want_psi,
                     bool check_robust, double robust_tol) {
  ModeSolve out;
  out.k = k;
  out.alpha = alpha;
  const double beta = k * alpha / (8.0 * kPi);
  out.grid = policy.for_beta(beta);
  const GridPtr grid = build_grid(out.grid);
  const OperatorMatrix A = mode_operator(grid, k, alpha);
  if (want_psi) {
    const auto s = linalg::schur(unitary_frame(A));
    out.eigenvalues = s.T.diagonal();
    std::sort(out.eigenvalues.data(), out.eigenvalues.data() + out.eigenvalues.size(),
              [](cplx a, cplx b) { return a.real() > b.real(); });
    const ResolventScan scan = resolvent_scan(A, s, default_window(A));
    out.psi = scan.psi;
    out.lambda_star = scan.lambda_star;
    out.psi_refined = scan.bracket_refined;
  } else {
    out.eigenvalues = sorted_eigenvalues(A.entries);
  }
  out.abscissa = out.eigenvalues[0].real();
  if (check_robust) {
    const GridPtr fine = build_grid(GridPolicy::refined(out.grid));
    const double a2 = sorted_eigenvalues(mode_operator(fine, k, alpha).entries)[0].real();
    out.robust_delta = std::abs(a2 - out.abscissa);
    out.robust = out.robust_delta < robust_tol;
  }
  return out;
}

SigmaBound sigma_bound(double alpha, int k_max, const GridPolicy& policy,
                       bool check_robust) {
  if (k_max < 2) throw std::invalid_argument("sigma_bound: k_max must be >= 2");
  SigmaBound out;
  double best = -std::numeric_limits<double>::infinity();
  // negative modes are complex conjugates of positive ones
  for (int k = 1; k <= k_max; ++k) {
    ModeSolve m = solve_mode(k, alpha, policy, false, check_robust);
    if (m.abscissa > best) {
      best = m.abscissa;
      out.argmax_k = k;
    }
    out.per_mode.push_back(std::move(m));
  }
  out.sigma = -best;
  if (out.argmax_k == k_max)
    out.warnings.push_back("spectral bound attained at k_max; mode truncation suspect");
  return out;
}

RobustSpectrum robust_spectrum(int k, double alpha, const GridMeta& m, double rtol) {
  RobustSpectrum out;
  out.grid = m;
  const OperatorMatrix A = mode_operator(build_grid(m), k, alpha);
  const SpectrumResult e = eig(A, true);
  out.eigenvalues = e.eigenvalues;
  out.residuals.resize(e.eigenvalues.size());
  for (Index i = 0; i < e.eigenvalues.size(); ++i) {
    const VectorXcd& v = e.eigenvectors.col(i);
    out.residuals[i] = (A.entries * v - e.eigenvalues[i] * v).norm() / v.norm();
  }
  const VectorXcd ef = sorted_eigenvalues(mode_operator(build_grid(GridPolicy::refined(m)), k, alpha).entries);
  out.robust.resize(e.eigenvalues.size());
  for (Index i = 0; i < e.eigenvalues.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < ef.size(); ++j) best = std::min(best, std::abs(e.eigenvalues[i] - ef[j]));
    out.robust[i] = best <= rtol * std::max(1.0, std::abs(e.eigenvalues[i]));
  }
  return out;
}

VectorXcd RobustSpectrum::robust_eigenvalues() const {
  std::vector<cplx> keep;
  for (Index i = 0; i < eigenvalues.size(); ++i)
    if (robust[i]) keep.push_back(eigenvalues[i]);
  return Eigen::Map<VectorXcd>(keep.data(), static_cast<Index>(keep.size()));
}

}  // namespace vortex
