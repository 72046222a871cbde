#include "vortexspec/deform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vortex {

DeformationPoint::DeformationPoint(cplx z_, SectorTag tag) : z(z_), sector(tag) {
  const double th = std::arg(z);
  bool ok = std::abs(z) > 0.0;
  if (tag == SectorTag::S)
    ok = ok && std::abs(th) < kPi / 8;
  else
    ok = ok && th >= kPi / 16 - 1e-15 && th <= kPi / 8 + 1e-15;
  if (!ok) throw std::domain_error("deformation point outside its sector");
}

UzResult apply_Uz(const VectorXd& u, double z, const RadialGrid& grid) {
  if (!(z > 0.0)) throw std::invalid_argument("apply_Uz: z must be real positive");
  const VectorXd& r = grid.nodes();
  const VectorXd& w = grid.weights();
  UzResult out;
  out.values.resize(u.size());
  for (Index i = 0; i < u.size(); ++i)
    out.values[i] = std::sqrt(z) * grid.interpolate(u, z * r[i]);
  const double total = (w.array() * u.array().square()).sum();
  double lost = 0.0;
  for (Index i = 0; i < u.size(); ++i)
    if (r[i] > grid.r_max() / z) lost += w[i] * u[i] * u[i];
  out.lost_mass = total > 0.0 ? lost / total : 0.0;
  out.warning = out.lost_mass > 1e-12;
  return out;
}

std::string to_string(DeformFamily f) {
  switch (f) {
    case DeformFamily::Z1: return "Z1";
    case DeformFamily::Zk: return "Zk";
    case DeformFamily::H: return "H";
    case DeformFamily::Hscript: return "Hscript";
    case DeformFamily::L1: return "L1";
  }
  return "?";
}

OperatorMatrix assemble_family(DeformFamily f, const GridPtr& grid,
                               const ModeParams& p, cplx z) {
  switch (f) {
    case DeformFamily::Z1: return assemble_Z1(grid, p, z);
    case DeformFamily::Zk: return assemble_Zk(grid, p, z);
    case DeformFamily::H: return assemble_Hk(grid, p, z);
    case DeformFamily::Hscript: return assemble_Hscript(grid, p, z);
    case DeformFamily::L1: return assemble_L1_wavereduced(grid, p, z);
  }
  throw std::invalid_argument("unknown family");
}

namespace {

// Eigenvalues of A that reappear on the refined grid. Dirichlet truncation of
// the rotated operators produces boundary modes that move with R_max.
VectorXcd robust_eigenvalues(DeformFamily f, const GridPtr& grid, const ModeParams& p,
                             cplx z, double rtol) {
  const VectorXcd e = sorted_eigenvalues(assemble_family(f, grid, p, z).entries);
  const GridPtr fine = build_grid(GridPolicy::refined(grid->meta()));
  const VectorXcd ef = sorted_eigenvalues(assemble_family(f, fine, p, z).entries);
  std::vector<cplx> keep;
  for (Index i = 0; i < e.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < ef.size(); ++j) best = std::min(best, std::abs(e[i] - ef[j]));
    if (best <= rtol * std::max(1.0, std::abs(e[i]))) keep.push_back(e[i]);
  }
  return Eigen::Map<VectorXcd>(keep.data(), static_cast<Index>(keep.size()));
}

}  // namespace

ZDrift spectrum_z_independence(DeformFamily f, const ModeParams& p,
                               const std::vector<DeformationPoint>& zs,
                               const GridPtr& grid, int m, double pair_tol,
                               bool robust_filter) {
  ZDrift out;
  std::vector<VectorXcd> full;
  for (const auto& dp : zs) {
    full.push_back(robust_filter ? robust_eigenvalues(f, grid, p, dp.z, 1e-5)
                                 : sorted_eigenvalues(assemble_family(f, grid, p, dp.z).entries));
    if (full.back().size() < m)
      out.notes.push_back("fewer than m grid-robust eigenvalues at one z");
    out.leading.push_back(full.back().head(std::min<Index>(m, full.back().size())));
  }
  for (size_t a = 0; a < zs.size(); ++a) {
    for (size_t b = 0; b < zs.size(); ++b) {
      if (a == b) continue;
      for (Index i = 0; i < out.leading[a].size(); ++i) {
        double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
        for (Index j = 0; j < full[b].size(); ++j) {
          const double d = std::abs(out.leading[a][i] - full[b][j]);
          if (d < d1) {
            d2 = d1;
            d1 = d;
          } else if (d < d2) {
            d2 = d;
          }
        }
        out.drift = std::max(out.drift, d1);
        if (d2 < pair_tol) {
          out.ambiguous = true;
          out.notes.push_back("ambiguous pairing near " + std::to_string(out.leading[a][i].real()) +
                              std::to_string(out.leading[a][i].imag()) + "i");
        }
      }
    }
  }
  return out;
}

ProjectionCount riesz_count(const OperatorMatrix& A, cplx center, double radius,
                            int n_quad) {
  if (n_quad < 32) throw std::invalid_argument("riesz_count: n_quad must be >= 32");
  if (!(radius > 0.0)) throw std::invalid_argument("riesz_count: radius must be positive");
  // Work on the Schur factor: (z - B)^{-1} = Z (z - T)^{-1} Z^H.
  const linalg::SchurForm sf = linalg::schur(A.grid ? unitary_frame(A) : A.entries);
  const Index n = sf.T.rows();
  const VectorXcd ev = sf.T.diagonal();
  for (Index i = 0; i < n; ++i) {
    if (std::abs(std::abs(ev[i] - center) - radius) < 0.05 * radius)
      throw ContourError("riesz_count: eigenvalue " + std::to_string(ev[i].real()) + "+" +
                         std::to_string(ev[i].imag()) + "i within 0.05 radius of the contour");
  }
  // (1/2 pi i) \oint (z - T)^{-1} dz with z = c + rho e^{i t}
  auto node_sum = [&](int N, int parity, int step) {
    MatrixXcd S = MatrixXcd::Zero(n, n);
    for (int j = parity; j < N; j += step) {
      const cplx e = std::exp(cplx(0.0, 2.0 * kPi * j / N));
      MatrixXcd M = -sf.T;
      M.diagonal().array() += center + radius * e;
      S += radius * e * linalg::triangular_inverse(M);
    }
    return S;
  };
  ProjectionCount out;
  out.center = center;
  out.radius = radius;
  int N = n_quad;
  MatrixXcd sum = node_sum(N, 0, 1);
  cplx tr_prev = sum.trace() / double(N);
  const int n_max = 4096;
  while (true) {
    sum += node_sum(2 * N, 1, 2);
    N *= 2;
    const cplx tr = sum.trace() / double(N);
    if (std::abs(tr - tr_prev) < 1e-9 * std::max(1.0, std::abs(tr)) &&
        std::lround(tr.real()) == std::lround(tr_prev.real()))
      break;
    if (N >= n_max)
      throw ContourError("riesz_count: contour quadrature did not converge");
    tr_prev = tr;
  }
  const MatrixXcd P = sf.Z * (sum / double(N)) * sf.Z.adjoint();
  out.n_quad = N;
  out.trace = P.trace();
  out.count = static_cast<int>(std::lround(out.trace.real()));
  const double pn = linalg::norm2(P);
  out.projector_defect = linalg::norm2(P * P - P) / std::max(1.0, pn * pn);
  return out;
}

OperatorMatrix inverse_operator(const OperatorMatrix& A) {
  OperatorMatrix out = A;
  out.entries = linalg::inverse(A.entries);
  out.label = "inv(" + A.label + ")";
  return out;
}

Lemma53Report lemma53_certificate(const OperatorMatrix& A_alpha, const OperatorMatrix& A,
                                  const SpectrumResult& eig_A, double delta, int n_balls) {
  if (A_alpha.size() != A.size() || A_alpha.grid != A.grid)
    throw std::invalid_argument("lemma53_certificate: operators on different grids");
  Lemma53Report rep;
  const MatrixXcd Ba = unitary_frame(A_alpha);
  const MatrixXcd B = unitary_frame(A);
  rep.symmetry_defect = (B - B.adjoint()).norm() / B.norm();
  if (rep.symmetry_defect > 1e-8)
    throw std::invalid_argument("lemma53_certificate: reference operator is not self-adjoint");

  rep.d = linalg::norm2(Ba - B);
  if (delta > 0.0) {
    rep.delta = delta;
    rep.delta_policy = "given";
  } else {
    rep.delta = 2.0 * std::sqrt(rep.d);
    rep.delta_policy = "2 sqrt(d)";
  }
  rep.hypothesis_ok = rep.d <= rep.delta * rep.delta / 4.0 * (1.0 + 1e-12);
  if (!rep.hypothesis_ok) {
    rep.notes.push_back("lemma not applicable at this alpha: d > delta^2/4");
    return rep;
  }

  std::vector<double> mu;
  for (Index i = 0; i < eig_A.eigenvalues.size(); ++i) mu.push_back(eig_A.eigenvalues[i].real());
  const VectorXcd ev = linalg::eig(Ba, false).values;
  const double slack = 1e-10 * std::max(1.0, rep.delta);
  for (Index i = 0; i < ev.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (double m : mu) best = std::min(best, std::abs(ev[i] - m));
    if (best > rep.delta + slack) ++rep.escaped;
  }
  rep.part_i = rep.escaped == 0;

  if (rep.delta == 0.0) {
    rep.notes.push_back("delta = 0: ball counts undefined");
    return rep;
  }

  std::vector<double> order = mu;
  std::sort(order.begin(), order.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
  rep.part_ii = true;
  size_t pos = 0;
  for (int b = 0; b < n_balls && pos < order.size(); ++b) {
    BallCheck bc;
    bc.mu = order[pos];
    const double tol = 1e-8 * std::abs(bc.mu);
    bc.multiplicity = 0;
    for (double m : mu)
      if (std::abs(m - bc.mu) <= tol) ++bc.multiplicity;
    pos += bc.multiplicity;
    bool other_inside = false;
    for (double m : mu)
      if (std::abs(m - bc.mu) > tol && std::abs(m - bc.mu) < rep.delta) other_inside = true;
    bc.isolated = !other_inside && std::abs(bc.mu) > rep.delta;
    if (!bc.isolated) {
      bc.note = "ball B(mu, delta) also holds other eigenvalues of A or 0; count not verifiable";
      rep.part_ii = false;
      rep.balls.push_back(bc);
      continue;
    }
    try {
      const ProjectionCount pc = riesz_count(A_alpha, bc.mu, rep.delta);
      bc.count = pc.count;
      bc.ok = pc.count == bc.multiplicity;
      if (!bc.ok) bc.note = "count differs from multiplicity";
    } catch (const ContourError& e) {
      bc.note = e.what();
    }
    rep.part_ii = rep.part_ii && bc.ok;
    rep.balls.push_back(bc);
  }
  rep.passed = rep.hypothesis_ok && rep.part_i && rep.part_ii;
  return rep;
}

Disc invert_disc(cplx c, double rho) {
  const double q = std::norm(c) - rho * rho;
  if (std::abs(q) <= 1e-14 * std::max(1.0, std::norm(c)))
    throw std::domain_error("invert_disc: 0 on the boundary, image is a half plane");
  return {std::conj(c) / q, rho / std::abs(q), q < 0.0};
}

bool LocalizationRegion::contains(cplx z, double slack) const {
  const double d = std::abs(z - center);
  return exterior ? d >= radius - slack : d <= radius + slack;
}

LocalizationRegion localization_region(const ModeParams& p, double lambda_j, int j,
                                       double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("localization_region: delta must be positive");
  if (lambda_j == 0.0) throw std::invalid_argument("localization_region: lambda_j = 0");
  const double beta = p.beta();
  const cplx zi2 = std::pow(zeta(beta), -2.0);
  const Disc d = invert_disc(1.0 / lambda_j, delta);
  LocalizationRegion reg;
  reg.mode = p.k;
  reg.index = j;
  reg.center = zi2 * d.center - kI * beta + 0.5;
  reg.radius = std::abs(zi2) * d.radius;
  reg.exterior = d.exterior;
  reg.source_eig = lambda_j;
  reg.delta = delta;
  return reg;
}

std::vector<LocalizationRegion> localization_regions(const ModeParams& p,
                                                     const std::vector<double>& eigs,
                                                     double delta) {
  for (size_t i = 1; i < eigs.size(); ++i)
    if (eigs[i] > eigs[i - 1]) throw std::invalid_argument("localization_regions: eigs not descending");
  std::vector<LocalizationRegion> out;
  for (size_t j = 0; j < eigs.size(); ++j)
    out.push_back(localization_region(p, eigs[j], static_cast<int>(j) + 1, delta));
  return out;
}

}  // namespace vortex
