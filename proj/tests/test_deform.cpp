#include <cmath>

#include "doctest.h"
#include "vortexspec/deform.hpp"

using namespace vortex;

namespace {

OperatorMatrix bare(const MatrixXcd& M) {
  OperatorMatrix A;
  A.entries = M;
  A.label = "bare";
  return A;
}

}  // namespace

TEST_CASE("deformation points respect their sector") {
  CHECK_NOTHROW(DeformationPoint(std::polar(0.9, kPi / 10)));
  CHECK_THROWS_AS(DeformationPoint(std::polar(1.0, kPi / 7)), std::domain_error);
  CHECK_NOTHROW(DeformationPoint(std::polar(2.0, kPi / 8), SectorTag::S4));
  CHECK_THROWS_AS(DeformationPoint(std::polar(2.0, kPi / 20), SectorTag::S4), std::domain_error);
  CHECK_THROWS_AS(DeformationPoint(0.0), std::domain_error);
}

TEST_CASE("U_z is an isometry with inverse U_{1/z}") {
  auto g = build_grid(300, 16.0);
  const VectorXd& r = g->nodes();
  const VectorXd u = (r.array().square() * (-r.array().square() / 2).exp()).matrix();
  const auto id = apply_Uz(u, 1.0, *g);
  CHECK((id.values - u).norm() == 0.0);
  const double nu = g->integrate(VectorXd(u.array().square()));
  for (double z : {0.5, 0.8, 1.3, 2.0}) {
    const auto v = apply_Uz(u, z, *g);
    CHECK_FALSE(v.warning);
    CHECK(std::abs(g->integrate(VectorXd(v.values.array().square())) - nu) < 1e-8 * nu);
    const auto back = apply_Uz(v.values, 1.0 / z, *g);
    CHECK((back.values - u).cwiseAbs().maxCoeff() < 1e-8);
  }
  const VectorXd wide = (-(r.array() - 10.0).square()).exp().matrix();
  CHECK(apply_Uz(wide, 2.0, *g).warning);
  CHECK_THROWS_AS(apply_Uz(u, -1.0, *g), std::invalid_argument);
}

TEST_CASE("Z1 spectrum does not depend on z") {
  std::vector<DeformationPoint> zs{cplx(1.0), std::polar(1.0, kPi / 16),
                                   std::polar(0.8, -kPi / 16)};
  const auto d = spectrum_z_independence(DeformFamily::Z1, {1, 100.0}, zs, build_grid(400, 20.0));
  CHECK(d.drift < 1e-5);
  CHECK_FALSE(d.ambiguous);
  CHECK(d.leading.size() == 3);
  CHECK(d.leading[0].size() == 5);

  const auto one = spectrum_z_independence(DeformFamily::Z1, {1, 100.0}, {cplx(1.0)},
                                           build_grid(200, 16.0));
  CHECK(one.drift == 0.0);
}

TEST_CASE("deformed Hscript ladder at alpha = 0") {
  auto g = build_grid(400, 20.0);
  const int k = 2;
  for (cplx z : {cplx(1.0), std::polar(1.0, kPi / 16), std::polar(0.9, -kPi / 10)}) {
    const VectorXcd e = sorted_eigenvalues(assemble_Hscript(g, {k, 0.0}, z).entries);
    for (int l = 0; l < 4; ++l) CHECK(std::abs(e[l] - cplx(-k / 2.0 - l, 0.0)) < 1e-6);
  }
}

TEST_CASE("riesz count on trivial matrices") {
  MatrixXcd D = MatrixXcd::Zero(3, 3);
  D.diagonal() << 1.0, 1.0, 5.0;
  const auto pc = riesz_count(bare(D), 1.0, 0.5);
  CHECK(pc.count == 2);
  CHECK(std::abs(pc.trace - cplx(2.0, 0.0)) < pc.tolerance);
  CHECK(pc.projector_defect < pc.tolerance);

  MatrixXcd J = MatrixXcd::Zero(3, 3);
  J << 1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 5.0;
  CHECK(riesz_count(bare(J), 1.0, 0.5).count == 2);

  CHECK_THROWS_AS(riesz_count(bare(D), 1.0, 4.1), ContourError);
  CHECK_THROWS_AS(riesz_count(bare(D), 1.0, 0.5, 8), std::invalid_argument);
}

TEST_CASE("riesz count: full enclosure and radius independence") {
  std::srand(3);
  const MatrixXcd M = MatrixXcd::Random(12, 12);
  const double big = 2.0 * linalg::norm2(M) + 1.0;
  CHECK(riesz_count(bare(M), 0.0, big).count == 12);
  const VectorXcd ev = sorted_eigenvalues(M);
  const auto a = riesz_count(bare(M), ev[0], 0.3 * std::abs(ev[0] - ev[1]));
  const auto b = riesz_count(bare(M), ev[0], 0.6 * std::abs(ev[0] - ev[1]));
  CHECK(a.count == 1);
  CHECK(std::abs(a.trace - b.trace) < 1e-6);
}

TEST_CASE("riesz count: leading eigenvalue of Z1hat and Lhat inverses") {
  auto g = build_grid(400, 14.3);
  const auto Zi = inverse_operator(assemble_Z1_hat(g));
  CHECK(riesz_count(Zi, -1.0 / 8, 0.01).count == 1);
  const auto Li = inverse_operator(assemble_Lhat(g, {1, 1000.0}, LhatKind::K1));
  CHECK(riesz_count(Li, -1.0 / 8, 0.02).count == 1);
}

TEST_CASE("perturbation-ball certificate: trivial cases") {
  auto g = build_grid(200, 12.0);
  AssemblyOptions o;
  o.symmetrize = true;
  const auto Zi = inverse_operator(assemble_Z1_hat(g, o));
  const auto eZ = eig(Zi);
  const auto same = lemma53_certificate(Zi, Zi, eZ, 0.01, 2);
  CHECK(same.d == 0.0);
  CHECK(same.hypothesis_ok);
  CHECK(same.part_i);
  REQUIRE(same.balls.size() == 2);
  CHECK(same.balls[0].mu == doctest::Approx(-1.0 / 8));
  CHECK(same.balls[0].count == 1);
  CHECK(same.balls[1].count == 1);
  CHECK(same.passed);

  const double delta = 0.01;
  OperatorMatrix pert = Zi;
  MatrixXcd E = MatrixXcd::Zero(Zi.size(), Zi.size());
  E(0, 0) = 1.0;  // unit norm in any diagonal-weight frame
  pert.entries += (delta * delta / 2) * E;
  const auto bad = lemma53_certificate(pert, Zi, eZ, delta);
  CHECK(bad.d == doctest::Approx(delta * delta / 2));
  CHECK_FALSE(bad.hypothesis_ok);
  CHECK_FALSE(bad.passed);
  CHECK_FALSE(bad.notes.empty());

  const auto auto_delta = lemma53_certificate(Zi, Zi, eZ);
  CHECK(auto_delta.delta_policy == "2 sqrt(d)");
  CHECK(auto_delta.part_i);
  CHECK_FALSE(auto_delta.passed);
  CHECK_THROWS_AS(lemma53_certificate(Zi, inverse_operator(assemble_Lhat(g, {1, 100.0}, LhatKind::K1)), eZ),
                  std::invalid_argument);
}

TEST_CASE("disc inversion") {
  for (auto [c, rho] : {std::pair{cplx(0.3, -0.2), 0.1}, {cplx(-0.125, 0.0), 0.02},
                        {cplx(0.05, 0.01), 0.2}}) {
    const Disc d = invert_disc(c, rho);
    CHECK(d.exterior == (std::abs(c) < rho));
    for (int j = 0; j < 64; ++j) {
      const cplx w = 1.0 / (c + rho * std::exp(cplx(0.0, 2 * kPi * j / 64)));
      CHECK(std::abs(std::abs(w - d.center) - d.radius) < 1e-12 * d.radius);
    }
    const cplx inner = 1.0 / c;  // image of the disc center lies in the image
    CHECK((std::abs(inner - d.center) < d.radius) != d.exterior);
  }
  CHECK_THROWS_AS(invert_disc(0.1, 0.1), std::domain_error);
}

TEST_CASE("localization regions") {
  // beta = 0: w -> w/4 + 1/2, sending the top eigenvalue -8 to the mode-one ladder top -3/2
  const auto r0 = localization_region({1, 0.0}, -8.0, 1, 1e-9);
  CHECK(std::abs(r0.center - cplx(-1.5, 0.0)) < 1e-6);
  CHECK(r0.radius < 1e-6);
  CHECK_FALSE(r0.exterior);
  CHECK(r0.contains(cplx(-1.5, 0.0), 1e-6));

  for (double beta : {10.0, 100.0, 1e3, 1e4}) {
    const double alpha = 8 * kPi * beta;
    const auto r = localization_region({1, alpha}, -8.0, 1, 1e-9);
    const double ratio = r.center.real() / std::sqrt(beta);
    CHECK(ratio < 0.0);
    CHECK(ratio > -3.0);
  }

  const std::vector<double> lam{-8.0, -12.0, -16.0, -400.0};
  const auto regs = localization_regions({1, 1000.0}, lam, 0.01);
  REQUIRE(regs.size() == 4);
  CHECK(regs[1].index == 2);
  CHECK_FALSE(regs[0].exterior);
  CHECK(regs[3].exterior);  // 1/400 < delta: 0 lies in the disc
  CHECK_THROWS_AS(localization_regions({1, 1000.0}, {-12.0, -8.0}, 0.01), std::invalid_argument);
}
