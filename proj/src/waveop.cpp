#include "vortexspec/waveop.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "vortexspec/linalg.hpp"
#include "vortexspec/profiles.hpp"
#include "vortexspec/spectral.hpp"

namespace vortex {

namespace pf = profiles;

WaveOperatorPair build_wave_operators(const GridPtr& grid) {
  const Index n = grid->size();
  const VectorXd& r = grid->nodes();
  VectorXd full(n + 2);
  full[0] = 0.0;
  full.segment(1, n) = r;
  full[n + 1] = grid->r_max();

  VectorXd a(n), b(n), B2(n), om(n), lo(n), up(n);
  for (Index i = 0; i < n; ++i) {
    const double s = r[i], sp = pf::sigma_prime(s);
    assert(sp < 0.0);
    a[i] = pf::g(s) / (sp * std::pow(s, 1.5));
    b[i] = std::pow(s, 1.5) * pf::g(s);
    B2[i] = -s * s * s * sp;
    om[i] = 0.5 * (full[i + 2] - full[i]);
    up[i] = 0.5 * (full[i + 2] - full[i + 1]);
  }
  double cum = 0.0;
  for (Index i = 0; i < n; ++i) {
    lo[i] = (B2[i] - cum) / (b[i] * b[i]);
    cum += om[i] * b[i] * b[i];
  }
  MatrixXd L = MatrixXd::Zero(n, n), U = MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < i; ++j) L(i, j) = om[j];
    L(i, i) = lo[i];
    for (Index j = i + 1; j < n; ++j) U(i, j) = om[j];
    U(i, i) = up[i];
  }
  WaveOperatorPair out;
  out.grid = grid;
  out.constraint = b;
  out.T = MatrixXd::Identity(n, n) + a.asDiagonal() * L * b.asDiagonal();
  out.Tt = MatrixXd::Identity(n, n) + b.asDiagonal() * U * a.asDiagonal();
  const VectorXd wb = grid->weights().cwiseProduct(b);
  out.V_projector = MatrixXd::Identity(n, n) - b * wb.transpose() / wb.dot(b);
  return out;
}

WaveIdentityReport wave_identity_check(const WaveOperatorPair& w, double r_outer) {
  const Index n = w.T.rows();
  const MatrixXd E1 = w.T * w.Tt - MatrixXd::Identity(n, n);
  const MatrixXd E2 = w.Tt * w.T - w.V_projector;
  WaveIdentityReport rep;
  rep.r_outer = r_outer;
  rep.tt_max = E1.cwiseAbs().maxCoeff();
  rep.ttp_max = E2.cwiseAbs().maxCoeff();
  const VectorXd& r = w.grid->nodes();
  Index i0 = 0;
  while (i0 < n && r[i0] < r_outer) ++i0;
  if (i0 < n) {
    rep.tt_outer = E1.bottomRightCorner(n - i0, n - i0).cwiseAbs().maxCoeff();
    rep.ttp_outer = E2.bottomRightCorner(n - i0, n - i0).cwiseAbs().maxCoeff();
  }
  rep.trace_gap = E2.trace() - E1.trace();
  rep.kernel_defect = (w.T * w.constraint).cwiseAbs().maxCoeff();
  return rep;
}

EquivalenceReport verify_spectral_equivalence(const GridPtr& grid, double alpha, int m,
                                              double pair_tol) {
  const ModeParams p{1, alpha};
  const OperatorMatrix H = assemble_Hk(grid, p);
  const OperatorMatrix L = assemble_L1_wavereduced(grid, p);
  const Index n = grid->size();

  VectorXcd bb = grid->weights().cwiseSqrt().cwiseProduct(build_wave_operators(grid).constraint).cast<cplx>();
  bb.normalize();
  const Eigen::HouseholderQR<MatrixXcd> qr(bb);
  const MatrixXcd Q = MatrixXcd(qr.householderQ()).rightCols(n - 1);
  const MatrixXcd C = Q.adjoint() * unitary_frame(H) * Q;

  EquivalenceReport rep;
  const VectorXcd el = sorted_eigenvalues(L.entries);
  const VectorXcd ec = sorted_eigenvalues(C);
  const VectorXcd eh = sorted_eigenvalues(H.entries);
  rep.wave_reduced = el.head(std::min<Index>(m, el.size()));
  rep.compressed.resize(rep.wave_reduced.size());
  for (Index i = 0; i < rep.wave_reduced.size(); ++i) {
    double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
    for (Index j = 0; j < ec.size(); ++j) {
      const double d = std::abs(rep.wave_reduced[i] - ec[j]);
      if (d < d1) {
        d2 = d1;
        d1 = d;
        rep.compressed[i] = ec[j];
      } else if (d < d2) {
        d2 = d;
      }
    }
    rep.discrepancy = std::max(rep.discrepancy, d1);
    if (d2 < pair_tol) rep.ambiguous = true;
  }
  // the H_1 eigenvalue with no partner in the compression
  double worst = -1.0;
  for (Index j = 0; j < std::min<Index>(eh.size(), m + 1); ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < ec.size(); ++i) best = std::min(best, std::abs(eh[j] - ec[i]));
    if (best > worst) {
      worst = best;
      rep.removed = eh[j].real();
    }
  }
  return rep;
}

}  // namespace vortex
