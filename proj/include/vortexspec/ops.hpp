#pragma once

#include <optional>
#include <string>

#include "vortexspec/grid.hpp"

namespace vortex {

struct ModeParams {
  int k = 1;
  double alpha = 0.0;
  // always recomputed from (k, alpha)
  double beta() const { return k * alpha / (8.0 * kPi); }
};

enum class SpaceTag { L2r, Yk, V, L2rPair };

std::string to_string(SpaceTag t);

struct OperatorMatrix {
  MatrixXcd entries;
  GridPtr grid;
  SpaceTag space = SpaceTag::L2r;
  std::string label;
  std::optional<ModeParams> params;
  std::optional<cplx> deformation;

  Index size() const { return entries.rows(); }
};

// How the nonlocal block is discretized.
//   GreenInverse: -(D2 - (k^2-1/4)/r^2)^{-1} plus the rank-one term that turns
//                 the Dirichlet Green function of (0, R_max) into the
//                 half-line kernel. Spectrally accurate.
//   Quadrature:   K_k(r_i, r_j) w_j. Entrywise positive, but only algebraically
//                 accurate because of the kink of K_k on the diagonal.
enum class KernelScheme { GreenInverse, Quadrature };

struct AssemblyOptions {
  // Replace D2 and the kernel by their W-symmetric parts, so that the
  // alpha-independent part is self-adjoint in the quadrature inner product.
  bool symmetrize = false;
  KernelScheme kernel = KernelScheme::GreenInverse;
};

// zeta_k = (1/16 - i beta/8)^{-1/4}, principal branch.
cplx zeta(double beta);

// True if |arg z| < pi/8.
bool in_sector_S(cplx z);

double kernel_value(int k, double r, double s);

OperatorMatrix kernel_matrix(const GridPtr& grid, int k,
                             KernelScheme scheme = KernelScheme::GreenInverse);

// (M + W^{-1} M^T W) / 2
MatrixXd w_symmetrize(const RadialGrid& grid, const MatrixXd& M);

// Quadrature weights matching the operator's block layout.
VectorXd frame_weights(const OperatorMatrix& A);

// W^{1/2} A W^{-1/2}: the 2-norm of this matrix is the discrete L^2_r norm.
MatrixXcd unitary_frame(const OperatorMatrix& A);
MatrixXcd unitary_frame(const RadialGrid& grid, const MatrixXcd& A);

// H_k^z; z = 1 gives H_k.
OperatorMatrix assemble_Hk(const GridPtr& grid, const ModeParams& p,
                           cplx z = 1.0, const AssemblyOptions& o = {});

// Wave-reduced mode-one operator (deformed by z when z != 1).
OperatorMatrix assemble_L1_wavereduced(const GridPtr& grid, const ModeParams& p,
                                       cplx z = 1.0,
                                       const AssemblyOptions& o = {});

// Complex oscillator models Z_1^z and Z_k^z.
OperatorMatrix assemble_Z1(const GridPtr& grid, const ModeParams& p,
                           cplx z = 1.0, const AssemblyOptions& o = {});
OperatorMatrix assemble_Zk(const GridPtr& grid, const ModeParams& p,
                           cplx z = 1.0, const AssemblyOptions& o = {});

OperatorMatrix assemble_Z1_hat(const GridPtr& grid,
                               const AssemblyOptions& o = {});
OperatorMatrix assemble_Zk_hat(const GridPtr& grid, int k,
                               const AssemblyOptions& o = {});

enum class LhatKind { K1, KGeneral };

OperatorMatrix assemble_Lhat(const GridPtr& grid, const ModeParams& p,
                             LhatKind which, const AssemblyOptions& o = {});

// Local operator with the deformed rotation term -i(alpha k / 8 pi) sigma(z r).
OperatorMatrix assemble_Hscript(const GridPtr& grid, const ModeParams& p,
                                cplx z, const AssemblyOptions& o = {});

// 2x2 block system for the mode-k velocity-type pair; k = 0 is allowed and
// gives the lower triangular block form.
OperatorMatrix assemble_system_LPi(const GridPtr& grid, const ModeParams& p,
                                   const AssemblyOptions& o = {});

// Scalar operator governing the divergence: L_k + 1/2 - i alpha k S.
OperatorMatrix assemble_fdiv_scalar(const GridPtr& grid, const ModeParams& p);

struct FdivResult {
  VectorXcd f_div;
  double relative_norm = 0.0;  // ||f_div|| / ||pair||
  bool is_null = false;
};

FdivResult fdiv_reduce(const VectorXcd& pair, const RadialGrid& grid, int k,
                       double null_tol = 1e-4);

// L_k - alpha Lambda_k in the exponentially weighted frame. Only meant for
// low-resolution cross checks (the weights overflow for large R_max).
OperatorMatrix assemble_Yframe(const GridPtr& grid, const ModeParams& p);

}  // namespace vortex
