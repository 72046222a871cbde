#include "vortexspec/ops.hpp"

#include <cmath>
#include <stdexcept>

#include "vortexspec/profiles.hpp"

namespace vortex {

namespace pf = profiles;

std::string to_string(SpaceTag t) {
  switch (t) {
    case SpaceTag::L2r: return "L2r";
    case SpaceTag::Yk: return "Yk";
    case SpaceTag::V: return "V";
    case SpaceTag::L2rPair: return "L2r_pair";
  }
  return "?";
}

cplx zeta(double beta) {
  const cplx z = std::pow(cplx(1.0 / 16.0, -beta / 8.0), -0.25);
  if (!in_sector_S(z)) throw std::logic_error("zeta left the sector S");
  return z;
}

bool in_sector_S(cplx z) {
  return std::abs(z) > 0.0 && std::abs(std::arg(z)) < kPi / 8.0;
}

double kernel_value(int k, double r, double s) {
  if (k == 0) throw std::invalid_argument("kernel: k = 0 has no kernel");
  const int a = std::abs(k);
  const double m = std::min(r / s, s / r);
  return std::pow(m, a) * std::sqrt(r * s) / (2.0 * a);
}

namespace {

void require_k(int k) {
  if (k == 0) throw std::invalid_argument("mode k must be nonzero");
}

void require_S(cplx z) {
  if (!in_sector_S(z))
    throw std::invalid_argument("deformation parameter outside the sector |arg z| < pi/8");
}

MatrixXd kernel_real(const RadialGrid& grid, int k, KernelScheme scheme) {
  require_k(k);
  const int a = std::abs(k);
  const int n = grid.size();
  const VectorXd& r = grid.nodes();
  const VectorXd& w = grid.weights();
  MatrixXd K(n, n);
  if (scheme == KernelScheme::Quadrature) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) K(i, j) = kernel_value(a, r[i], r[j]) * w[j];
    return K;
  }
  MatrixXd Lt = grid.d2();
  Lt.diagonal().array() -= (a * a - 0.25) / r.array().square();
  K = -Lt.partialPivLu().inverse();
  const double R = grid.r_max();
  const VectorXd p = (r / R).array().pow(a + 0.5) * std::sqrt(R);
  // Dirichlet Green function of (0,R) -> half-line kernel
  K.noalias() += (p * (p.array() * w.array()).matrix().transpose()) / (2.0 * a);
  return K;
}

MatrixXd d2_of(const RadialGrid& grid, const AssemblyOptions& o) {
  return o.symmetrize ? w_symmetrize(grid, grid.d2()) : grid.d2();
}

MatrixXd kernel_of(const RadialGrid& grid, int k, const AssemblyOptions& o) {
  MatrixXd K = kernel_real(grid, k, o.kernel);
  return o.symmetrize ? w_symmetrize(grid, K) : K;
}

template <typename F>
VectorXcd sample(const RadialGrid& grid, F fn) {
  const VectorXd& r = grid.nodes();
  VectorXcd v(r.size());
  for (Index i = 0; i < r.size(); ++i) v[i] = fn(r[i]);
  return v;
}

OperatorMatrix make(const GridPtr& grid, MatrixXcd M, std::string label,
                    std::optional<ModeParams> p, std::optional<cplx> z,
                    SpaceTag tag = SpaceTag::L2r) {
  OperatorMatrix op;
  op.entries = std::move(M);
  op.grid = grid;
  op.space = tag;
  op.label = std::move(label);
  op.params = p;
  op.deformation = z;
  return op;
}

// z^{-2}(D2 - c/r^2)
MatrixXcd radial_part(const RadialGrid& grid, double c, cplx z,
                      const AssemblyOptions& o) {
  MatrixXcd M = d2_of(grid, o).cast<cplx>();
  M.diagonal().array() -= c / grid.nodes().array().square();
  return M / (z * z);
}

}  // namespace

OperatorMatrix kernel_matrix(const GridPtr& grid, int k, KernelScheme scheme) {
  return make(grid, kernel_real(*grid, k, scheme).cast<cplx>(),
              "K_" + std::to_string(k), std::nullopt, std::nullopt);
}

MatrixXd w_symmetrize(const RadialGrid& grid, const MatrixXd& M) {
  const VectorXd& w = grid.weights();
  const MatrixXd adj = w.cwiseInverse().asDiagonal() * M.transpose() * w.asDiagonal();
  return 0.5 * (M + adj);
}

VectorXd frame_weights(const OperatorMatrix& A) {
  const VectorXd& w = A.grid->weights();
  if (A.space != SpaceTag::L2rPair) return w;
  VectorXd ww(2 * w.size());
  ww << w, w;
  return ww;
}

MatrixXcd unitary_frame(const OperatorMatrix& A) {
  const VectorXd sw = frame_weights(A).cwiseSqrt();
  return sw.asDiagonal() * A.entries * sw.cwiseInverse().asDiagonal();
}

MatrixXcd unitary_frame(const RadialGrid& grid, const MatrixXcd& A) {
  const VectorXd sw = grid.weights().cwiseSqrt();
  return sw.asDiagonal() * A * sw.cwiseInverse().asDiagonal();
}

OperatorMatrix assemble_Hk(const GridPtr& grid, const ModeParams& p, cplx z,
                           const AssemblyOptions& o) {
  require_k(p.k);
  require_S(z);
  const int k = p.k;
  const double b = p.beta();
  const VectorXd& r = grid->nodes();
  MatrixXcd M = radial_part(*grid, k * k - 0.25, z, o);
  const VectorXcd sig = sample(*grid, [z](double x) { return pf::sigma(z * x); });
  M.diagonal().array() += -z * z * r.array().square().cast<cplx>() / 16.0 + 0.5 -
                          kI * b * sig.array();
  if (b != 0.0) {
    const VectorXcd gz = sample(*grid, [z](double x) { return pf::g(z * x); });
    const MatrixXd K = kernel_of(*grid, k, o);
    M.noalias() += (kI * b * z * z) *
                   (gz.asDiagonal() * K.cast<cplx>() * gz.asDiagonal());
  }
  return make(grid, std::move(M), "H_k", p, z);
}

OperatorMatrix assemble_L1_wavereduced(const GridPtr& grid, const ModeParams& p,
                                       cplx z, const AssemblyOptions& o) {
  if (p.k != 1) throw std::invalid_argument("wave-reduced operator needs k = 1");
  require_S(z);
  const double b = p.beta();
  const VectorXd& r = grid->nodes();
  MatrixXcd M = radial_part(*grid, 0.75, z, o);
  const VectorXcd ff = sample(*grid, [z](double x) { return pf::f(z * x); });
  const VectorXcd sig = sample(*grid, [z](double x) { return pf::sigma(z * x); });
  M.diagonal().array() += -z * z * r.array().square().cast<cplx>() / 16.0 -
                          ff.array() + 0.5 - kI * b * sig.array();
  return make(grid, std::move(M), "L1", p, z);
}

OperatorMatrix assemble_Z1(const GridPtr& grid, const ModeParams& p, cplx z,
                           const AssemblyOptions& o) {
  require_S(z);
  const double b = p.beta();
  const VectorXd& r = grid->nodes();
  MatrixXcd M = radial_part(*grid, 35.0 / 4.0, z, o);
  const cplx c = z * z * cplx(1.0 / 16.0, -b / 8.0);
  M.diagonal().array() += -c * r.array().square().cast<cplx>() - kI * b + 0.5;
  return make(grid, std::move(M), "Z1", p, z);
}

OperatorMatrix assemble_Zk(const GridPtr& grid, const ModeParams& p, cplx z,
                           const AssemblyOptions& o) {
  require_k(p.k);
  require_S(z);
  const int k = p.k;
  const double b = p.beta();
  const VectorXd& r = grid->nodes();
  MatrixXcd M = radial_part(*grid, k * k - 0.25, z, o);
  const cplx c = z * z * cplx(1.0 / 16.0, -b / 8.0);
  M.diagonal().array() += -c * r.array().square().cast<cplx>() - kI * b + 0.5;
  if (b != 0.0) M.noalias() += (kI * b * z * z) * kernel_of(*grid, k, o).cast<cplx>();
  return make(grid, std::move(M), "Zk", p, z);
}

OperatorMatrix assemble_Z1_hat(const GridPtr& grid, const AssemblyOptions& o) {
  MatrixXcd M = radial_part(*grid, 35.0 / 4.0, 1.0, o);
  M.diagonal().array() -= grid->nodes().array().square().cast<cplx>();
  return make(grid, std::move(M), "Z1hat", std::nullopt, std::nullopt);
}

OperatorMatrix assemble_Zk_hat(const GridPtr& grid, int k,
                               const AssemblyOptions& o) {
  if (std::abs(k) < 2) throw std::invalid_argument("Zk_hat needs |k| >= 2");
  MatrixXcd M = radial_part(*grid, k * k - 0.25, 1.0, o);
  M.diagonal().array() -= grid->nodes().array().square().cast<cplx>();
  M.noalias() -= 8.0 * kernel_of(*grid, k, o).cast<cplx>();
  return make(grid, std::move(M), "Zkhat", ModeParams{k, 0.0}, std::nullopt);
}

OperatorMatrix assemble_Lhat(const GridPtr& grid, const ModeParams& p,
                             LhatKind which, const AssemblyOptions& o) {
  require_k(p.k);
  const double b = p.beta();
  const cplx zt = zeta(b);
  const cplx z2 = zt * zt, z4 = z2 * z2;
  const VectorXd& r = grid->nodes();
  const VectorXcd sig = sample(*grid, [zt](double x) { return pf::sigma(zt * x); });
  MatrixXcd M;
  if (which == LhatKind::K1) {
    if (p.k != 1) throw std::invalid_argument("L1hat needs k = 1");
    M = radial_part(*grid, 0.75, 1.0, o);
    const VectorXcd ff = sample(*grid, [zt](double x) { return pf::f(zt * x); });
    M.diagonal().array() += -z2 * ff.array() -
                            z4 * r.array().square().cast<cplx>() / 16.0 +
                            kI * b * z2 * (1.0 - sig.array());
    return make(grid, std::move(M), "L1hat", p, zt);
  }
  const int k = p.k;
  M = radial_part(*grid, k * k - 0.25, 1.0, o);
  M.diagonal().array() += -z4 * r.array().square().cast<cplx>() / 16.0 +
                          kI * b * z2 * (1.0 - sig.array());
  const VectorXcd gz = sample(*grid, [zt](double x) { return pf::g(zt * x); });
  M.noalias() += (kI * b * z4) * (gz.asDiagonal() * kernel_of(*grid, k, o).cast<cplx>() *
                                  gz.asDiagonal());
  return make(grid, std::move(M), "Lkhat", p, zt);
}

OperatorMatrix assemble_Hscript(const GridPtr& grid, const ModeParams& p,
                                cplx z, const AssemblyOptions& o) {
  require_k(p.k);
  require_S(z);
  const int k = p.k;
  const VectorXd& r = grid->nodes();
  MatrixXcd M = radial_part(*grid, k * k - 0.25, z, o);
  const VectorXcd sig = sample(*grid, [z](double x) { return pf::sigma(z * x); });
  M.diagonal().array() += -z * z * r.array().square().cast<cplx>() / 16.0 + 0.5 -
                          kI * (p.alpha * k / (8.0 * kPi)) * sig.array();
  return make(grid, std::move(M), "Hscript", p, z);
}

OperatorMatrix assemble_system_LPi(const GridPtr& grid, const ModeParams& p,
                                   const AssemblyOptions& o) {
  const int k = p.k;
  const int n = grid->size();
  const VectorXd& r = grid->nodes();
  MatrixXcd A = radial_part(*grid, k * k + 0.75, 1.0, o);
  VectorXcd diag(n), rsp(n);
  for (int i = 0; i < n; ++i) {
    diag[i] = -r[i] * r[i] / 16.0 + 0.5 - kI * (p.alpha * k) * pf::S(r[i]);
    rsp[i] = p.alpha * r[i] * pf::S_prime(r[i]);
  }
  A.diagonal() += diag;
  const VectorXcd c = (2.0 * kI * double(k)) * r.array().square().inverse().cast<cplx>();
  MatrixXcd M = MatrixXcd::Zero(2 * n, 2 * n);
  M.topLeftCorner(n, n) = A;
  M.bottomRightCorner(n, n) = A;
  M.topRightCorner(n, n).diagonal() = -c;
  M.bottomLeftCorner(n, n).diagonal() = c + rsp;
  return make(grid, std::move(M), "LPi", p, std::nullopt, SpaceTag::L2rPair);
}

OperatorMatrix assemble_fdiv_scalar(const GridPtr& grid, const ModeParams& p) {
  OperatorMatrix op = assemble_Hscript(grid, p, 1.0);
  op.entries.diagonal().array() += 0.5;
  op.label = "fdiv";
  op.deformation.reset();
  return op;
}

FdivResult fdiv_reduce(const VectorXcd& pair, const RadialGrid& grid, int k,
                       double null_tol) {
  const int n = grid.size();
  if (pair.size() != 2 * n) throw std::invalid_argument("fdiv_reduce: expected a 2n vector");
  const VectorXd& r = grid.nodes();
  const VectorXcd u1 = pair.head(n), u2 = pair.tail(n);
  FdivResult out;
  out.f_div = grid.d1().cast<cplx>() * u1;
  for (int i = 0; i < n; ++i)
    out.f_div[i] += (0.5 / r[i] - 0.25 * r[i]) * u1[i] + kI * double(k) / r[i] * u2[i];
  const VectorXd w = grid.weights();
  auto wnorm = [&w](const VectorXcd& v) {
    return std::sqrt((w.array() * v.array().abs2()).sum());
  };
  const double np = std::sqrt(wnorm(u1) * wnorm(u1) + wnorm(u2) * wnorm(u2));
  out.relative_norm = np > 0.0 ? wnorm(out.f_div) / np : 0.0;
  out.is_null = out.relative_norm < null_tol;
  return out;
}

OperatorMatrix assemble_Yframe(const GridPtr& grid, const ModeParams& p) {
  require_k(p.k);
  const int k = p.k;
  const int n = grid->size();
  const VectorXd& r = grid->nodes();
  MatrixXcd M = grid->d2().cast<cplx>();
  const MatrixXcd D1 = grid->d1().cast<cplx>();
  for (int i = 0; i < n; ++i) {
    M.row(i) += (1.0 / r[i] + 0.5 * r[i]) * D1.row(i);
    M(i, i) += -double(k * k) / (r[i] * r[i]) + 1.0 - kI * (p.alpha * k) * pf::S(r[i]);
  }
  if (p.alpha != 0.0) {
    // -alpha Lambda_k carries -i alpha k (d_r G / r) Delta_k^{-1}, with
    // d_r G / r = -G/2 and Delta_k^{-1} = -r^{-1/2} K_k r^{1/2}
    const MatrixXd K = kernel_real(*grid, k, KernelScheme::GreenInverse);
    VectorXd left(n), right(n);
    for (int i = 0; i < n; ++i) {
      left[i] = 0.5 * pf::G(r[i]) / std::sqrt(r[i]);
      right[i] = std::sqrt(r[i]);
    }
    M.noalias() += (kI * (p.alpha * k)) *
                   (left.asDiagonal() * K * right.asDiagonal()).cast<cplx>();
  }
  return make(grid, std::move(M), "Y", p, std::nullopt, SpaceTag::Yk);
}

}  // namespace vortex
