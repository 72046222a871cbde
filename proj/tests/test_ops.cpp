#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "vortexspec/linalg.hpp"
#include "vortexspec/ops.hpp"
#include "vortexspec/profiles.hpp"

using namespace vortex;
namespace pf = vortex::profiles;

namespace {

VectorXcd sorted_eigs(const MatrixXcd& A) {
  VectorXcd v = linalg::eig(A, false).values;
  std::sort(v.data(), v.data() + v.size(),
            [](cplx a, cplx b) { return a.real() > b.real(); });
  return v;
}

GridPtr default_grid() {
  static GridPtr g = build_grid(400, 12.0);
  return g;
}

}  // namespace

TEST_CASE("kernel values") {
  CHECK(kernel_value(2, 1.0, 1.0) == doctest::Approx(0.25));
  CHECK(kernel_value(1, 1.0, 4.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(kernel_value(0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(kernel_matrix(build_grid(20, 8.0), 0), std::invalid_argument);
}

TEST_CASE("kernel inverts the mode Laplacian") {
  // K (-Lt u) = u for u vanishing (with its derivative) at both ends
  auto g = default_grid();
  const VectorXd& r = g->nodes();
  const VectorXd u = (r.array().pow(2.5) * (-r.array().square() / 2).exp()).matrix();
  MatrixXd Lt = g->d2();
  Lt.diagonal().array() -= 3.75 / r.array().square();
  const VectorXd lu = -Lt * u;
  for (auto s : {KernelScheme::GreenInverse, KernelScheme::Quadrature}) {
    const MatrixXd K = kernel_matrix(g, 2, s).entries.real();
    const double err = (K * lu - u).cwiseAbs().maxCoeff();
    if (s == KernelScheme::GreenInverse) {
      CHECK(err < 1e-4);
    } else {
      // plain K(r_i,r_j) w_j loses accuracy at the diagonal kink
      CHECK(err < 1e-3);
    }
  }
}

TEST_CASE("kernel schemes agree on smooth data") {
  auto g = default_grid();
  const VectorXd& r = g->nodes();
  const VectorXd fv = (r.array() * (-r.array().square() / 4).exp()).matrix();
  for (int k : {1, 2, 5}) {
    const VectorXd a = kernel_matrix(g, k, KernelScheme::GreenInverse).entries.real() * fv;
    const VectorXd b = kernel_matrix(g, k, KernelScheme::Quadrature).entries.real() * fv;
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-3 * a.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("kernel positivity and monotonicity in k") {
  auto g = build_grid(80, 12.0);
  const MatrixXd K2 = kernel_matrix(g, 2, KernelScheme::Quadrature).entries.real();
  CHECK(K2.minCoeff() > 0.0);
  for (int k = 3; k <= 8; ++k) {
    const MatrixXd Kk = kernel_matrix(g, k, KernelScheme::Quadrature).entries.real();
    CHECK(Kk.minCoeff() > 0.0);
    CHECK((K2 - Kk).minCoeff() >= 0.0);
  }
}

TEST_CASE("H_k ladder at alpha = 0") {
  auto g = default_grid();
  const VectorXcd e1 = sorted_eigs(assemble_Hk(g, {1, 0.0}).entries);
  CHECK(std::abs(e1[0] + 0.5) < 1e-8);
  const VectorXcd e2 = sorted_eigs(assemble_Hk(g, {2, 0.0}).entries);
  CHECK(std::abs(e2[0] + 1.0) < 1e-8);
  CHECK(std::abs(e2[1] + 2.0) < 1e-8);

  // eigenvector of -1/2 is r^{3/2} e^{-r^2/8}
  const auto ep = linalg::eig(assemble_Hk(g, {1, 0.0}).entries, true);
  Index i0 = 0;
  (ep.values.real()).maxCoeff(&i0);
  const VectorXd& r = g->nodes();
  VectorXcd v = (r.array().pow(1.5) * (-r.array().square() / 8).exp()).matrix().cast<cplx>();
  v.normalize();
  const cplx c = v.dot(ep.vectors.col(i0));
  CHECK((ep.vectors.col(i0) - c * v).norm() < 1e-6);
}

TEST_CASE("skew part of H_k is the rotation term") {
  auto g = build_grid(60, 10.0);
  const ModeParams p{3, 250.0};
  AssemblyOptions o;
  o.kernel = KernelScheme::Quadrature;
  const MatrixXcd A = assemble_Hk(g, p, 1.0, o).entries - assemble_Hk(g, {3, 0.0}, 1.0, o).entries;
  const VectorXd& r = g->nodes();
  const VectorXd& w = g->weights();
  double err = 0.0;
  for (int i = 0; i < 60; ++i)
    for (int j = 0; j < 60; ++j) {
      const cplx want = -kI * p.beta() *
                        ((i == j ? pf::sigma(r[i]) : 0.0) -
                         pf::g(r[i]) * kernel_value(3, r[i], r[j]) * w[j] * pf::g(r[j]));
      err = std::max(err, std::abs(A(i, j) - want));
    }
  CHECK(err < 1e-12);
}

TEST_CASE("alpha part is anti-Hermitian in the weighted product") {
  auto g = build_grid(120, 12.0);
  AssemblyOptions o;
  o.symmetrize = true;
  for (int k : {1, 2, 4}) {
    const MatrixXcd A = unitary_frame(*g, assemble_Hk(g, {k, 300.0}, 1.0, o).entries -
                                              assemble_Hk(g, {k, 0.0}, 1.0, o).entries);
    CHECK((A + A.adjoint()).norm() < 1e-10 * A.norm());
  }
}

TEST_CASE("conjugate symmetry in k") {
  auto g = build_grid(120, 12.0);
  const VectorXcd a = sorted_eigs(assemble_Hk(g, {2, 150.0}).entries);
  const VectorXcd b = sorted_eigs(assemble_Hk(g, {-2, 150.0}).entries);
  for (int i = 0; i < 5; ++i) {
    double best = 1e300;
    for (Index j = 0; j < b.size(); ++j) best = std::min(best, std::abs(std::conj(a[i]) - b[j]));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("wave-reduced operator") {
  auto g = default_grid();
  const ModeParams p{1, 8 * kPi};
  const MatrixXcd A = assemble_L1_wavereduced(g, p).entries - assemble_L1_wavereduced(g, {1, 0.0}).entries;
  const VectorXd& r = g->nodes();
  for (int i : {10, 200, 390})
    CHECK(std::abs(A(i, i) + kI * p.beta() * pf::sigma(r[i])) < 1e-12);
  AssemblyOptions o;
  o.symmetrize = true;
  const MatrixXcd B = unitary_frame(*g, assemble_L1_wavereduced(g, {1, 0.0}, 1.0, o).entries);
  CHECK(B.imag().norm() == 0.0);
  CHECK((B - B.transpose()).norm() < 1e-10 * B.norm());
}

TEST_CASE("Z1 hat spectrum") {
  auto g = default_grid();
  const auto ep = linalg::eig(assemble_Z1_hat(g).entries, true);
  std::vector<Index> idx(ep.values.size());
  for (Index i = 0; i < ep.values.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](Index a, Index b) { return ep.values[a].real() > ep.values[b].real(); });
  CHECK(std::abs(ep.values[idx[0]] + 8.0) < 8e-6);
  CHECK(std::abs(ep.values[idx[1]] + 12.0) < 1.2e-4);
  CHECK(std::abs(ep.values[idx[2]] + 16.0) < 1.6e-4);
  const VectorXd& r = g->nodes();
  VectorXcd v = (r.array().pow(3.5) * (-r.array().square() / 2).exp()).matrix().cast<cplx>();
  v.normalize();
  const VectorXcd u = ep.vectors.col(idx[0]);
  CHECK((u - v.dot(u) * v).norm() < 1e-7);
}

TEST_CASE("Zk hat") {
  auto g = default_grid();
  for (int k : {2, 3}) {
    AssemblyOptions o;
    o.symmetrize = true;
    const OperatorMatrix Z = assemble_Zk_hat(g, k, o);
    const MatrixXcd B = unitary_frame(Z);
    CHECK((B - B.adjoint()).norm() < 1e-10 * B.norm());
    MatrixXcd bare = g->d2().cast<cplx>();
    bare.diagonal().array() -= ((k * k - 0.25) / g->nodes().array().square() +
                                g->nodes().array().square()).cast<cplx>();
    const double top_bare = sorted_eigs(bare)[0].real();
    CHECK(top_bare == doctest::Approx(-2.0 * (k + 1)).epsilon(1e-8));
    const double top = sorted_eigs(assemble_Zk_hat(g, k).entries)[0].real();
    CHECK(top < top_bare);
  }
}

TEST_CASE("zeta") {
  const cplx z = zeta(1.0);
  CHECK(std::arg(z) > 0.0);
  CHECK(std::arg(z) < kPi / 8);
  CHECK(std::abs(std::pow(z, 4) * cplx(1.0 / 16, -1.0 / 8) - 1.0) < 1e-14);
  const cplx z4 = std::pow(zeta(2.0), 4);
  const cplx want = cplx(1.0 / 16, 0.25) / (1.0 / 256 + 1.0 / 16);
  CHECK(std::abs(z4 - want) < 1e-13);
  CHECK(std::abs(zeta(0.0) * zeta(0.0) - 4.0) < 1e-14);
  // large beta asymptotics
  const double b = 1e6;
  CHECK(std::abs(zeta(b) - std::pow(2.0, 0.75) * std::pow(b, -0.25) * std::polar(1.0, kPi / 8)) <
        1e-3 * std::abs(zeta(b)));
}

TEST_CASE("Hscript") {
  auto g = build_grid(200, 12.0);
  for (int k : {1, 3}) {
    const VectorXcd e = sorted_eigs(assemble_Hscript(g, {k, 0.0}, 1.0).entries);
    for (int l = 0; l < 3; ++l) CHECK(std::abs(e[l] + (k / 2.0 + l)) < 5e-6);
  }
  const ModeParams p{2, 400.0};
  const MatrixXcd d = assemble_Hscript(g, p, 1.0).entries - assemble_Hk(g, p).entries;
  const MatrixXd K = kernel_matrix(g, 2).entries.real();
  const VectorXd gg = g->nodes().unaryExpr([](double x) { return pf::g(x); });
  const MatrixXcd want = -kI * p.beta() * (gg.asDiagonal() * K * gg.asDiagonal()).cast<cplx>();
  CHECK((d - want).norm() < 1e-10 * want.norm());
  CHECK_THROWS_AS(assemble_Hscript(g, p, std::polar(1.0, 0.5)), std::invalid_argument);
}

TEST_CASE("block system") {
  auto g = build_grid(200, 12.0);
  const OperatorMatrix s0 = assemble_system_LPi(g, {0, 300.0});
  CHECK(s0.space == SpaceTag::L2rPair);
  CHECK(s0.entries.rows() == 400);
  CHECK(s0.entries.topRightCorner(200, 200).norm() == 0.0);
  const VectorXd& r = g->nodes();
  double mx = 0.0;
  for (int i = 0; i < 200; ++i) mx = std::max(mx, std::abs(r[i] * pf::S_prime(r[i])));
  CHECK(mx < 1.0 / (2 * kPi));

  // alpha = 0: spectrum of the pair is that of modes k-1 and k+1
  const VectorXcd e = sorted_eigs(assemble_system_LPi(g, {2, 0.0}).entries);
  CHECK(std::abs(e[0] + 0.5) < 1e-7);
  CHECK(std::abs(e[1] + 1.5) < 1e-7);
  CHECK(std::abs(e[2] + 1.5) < 1e-7);
}

TEST_CASE("fdiv reduction") {
  auto g = build_grid(160, 12.0);
  const VectorXd& r = g->nodes();
  const int n = 160;
  VectorXcd pair(2 * n);
  for (int i = 0; i < n; ++i) {
    pair[i] = 0.0;
    pair[n + i] = std::pow(r[i], 1.5) * std::exp(-r[i] * r[i] / 8);
  }
  const int k = 2;
  const FdivResult a = fdiv_reduce(pair, *g, k);
  for (int i = 0; i < n; i += 17)
    CHECK(std::abs(a.f_div[i] - kI * double(k) * std::sqrt(r[i]) * std::exp(-r[i] * r[i] / 8)) < 1e-10);
  const cplx c(0.3, -2.0);
  const FdivResult b = fdiv_reduce(c * pair, *g, k);
  CHECK((b.f_div - c * a.f_div).norm() < 1e-12 * b.f_div.norm());
  CHECK(fdiv_reduce(VectorXcd::Zero(2 * n), *g, k).is_null);
}

TEST_CASE("fdiv eigen relation") {
  // outer modes at this alpha feel a Dirichlet wall at R = 12
  auto g = build_grid(300, 16.0);
  const ModeParams p{2, 200.0};
  const auto ep = linalg::eig(assemble_system_LPi(g, p).entries, true);
  const MatrixXcd Ldiv = assemble_fdiv_scalar(g, p).entries;
  std::vector<Index> idx(ep.values.size());
  for (Index i = 0; i < ep.values.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](Index a, Index b) { return ep.values[a].real() > ep.values[b].real(); });
  int tested = 0;
  for (int t = 0; t < 8; ++t) {
    const Index j = idx[t];
    const FdivResult fd = fdiv_reduce(ep.vectors.col(j), *g, p.k);
    if (fd.is_null) continue;
    const VectorXcd es = linalg::eig(Ldiv, false).values;
    double best = 1e300;
    for (Index m = 0; m < es.size(); ++m) best = std::min(best, std::abs(es[m] - ep.values[j]));
    CHECK(best < 1e-6);
    ++tested;
  }
  CHECK(tested > 0);
}

TEST_CASE("Y frame agrees with the weighted frame") {
  auto g = build_grid(90, 10.0);
  for (const ModeParams p : {ModeParams{2, 0.0}, ModeParams{2, 100.0}, ModeParams{3, 300.0}}) {
    const VectorXcd a = sorted_eigs(assemble_Hk(g, p).entries);
    const VectorXcd b = sorted_eigs(assemble_Yframe(g, p).entries);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-6);
  }
}
