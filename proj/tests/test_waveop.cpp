#include <cmath>

#include "doctest.h"
#include "vortexspec/waveop.hpp"

using namespace vortex;

namespace {

// (Tt w)(r) for w = r^{3/2} g, from a 40-digit quadrature
constexpr double kTtw1 = -2.321538256424234802;
constexpr double kTtw2 = -0.5676565904841097486;

double outer_max(const RadialGrid& g, const VectorXcd& v, double rc) {
  double m = 0.0;
  for (Index i = 0; i < v.size(); ++i)
    if (g.nodes()[i] >= rc) m = std::max(m, std::abs(v[i]));
  return m;
}

}  // namespace

TEST_CASE("wave operators: structure") {
  auto g = build_grid(200, 12.0);
  const auto w = build_wave_operators(g);
  CHECK(w.T.rows() == 200);
  // T is lower and Tt upper triangular
  CHECK(w.T.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().cwiseAbs().maxCoeff() == 0.0);
  CHECK(w.Tt.triangularView<Eigen::StrictlyLower>().toDenseMatrix().cwiseAbs().maxCoeff() == 0.0);
  const auto rep = wave_identity_check(w);
  CHECK(rep.kernel_defect < 1e-12);
  // tr(Tt T) = tr(T Tt) while tr P = n - 1
  CHECK(rep.trace_gap == doctest::Approx(1.0).epsilon(1e-9));
  const MatrixXd P2 = w.V_projector * w.V_projector;
  CHECK((P2 - w.V_projector).cwiseAbs().maxCoeff() < 1e-12);
  const VectorXd wb = g->weights().cwiseProduct(w.constraint);
  CHECK(std::abs(wb.dot(w.V_projector * VectorXd::Ones(200))) < 1e-12);
}

TEST_CASE("wave operators: identities converge away from the origin") {
  double prev_tt = 0.0, prev_ttp = 0.0;
  for (int n : {200, 400, 800}) {
    const auto rep = wave_identity_check(build_wave_operators(build_grid(n, 12.0)));
    if (n > 200) {
      CHECK(rep.tt_outer < prev_tt / 3.0);
      CHECK(rep.ttp_outer < prev_ttp / 3.0);
    }
    prev_tt = rep.tt_outer;
    prev_ttp = rep.ttp_outer;
  }
  CHECK(prev_tt < 2e-3);
}

TEST_CASE("wave operators act as inverses on smooth functions") {
  auto g = build_grid(400, 12.0);
  const auto w = build_wave_operators(g);
  const VectorXd& r = g->nodes();
  const VectorXd u = (r.array().pow(1.5) * (-r.array().square() / 4).exp()).matrix();
  CHECK((w.T * (w.Tt * u) - u).cwiseAbs().maxCoeff() < 1e-3);
  const VectorXd v = w.V_projector * (r.array().pow(3.5) * (-r.array().square() / 3).exp()).matrix();
  CHECK((w.Tt * (w.T * v) - v).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("Tt regression values") {
  double prev = 1.0;
  for (int n : {200, 400, 800}) {
    auto g = build_grid(n, 12.0);
    const auto w = build_wave_operators(g);
    const VectorXd t = w.Tt * w.constraint;
    const double e1 = std::abs(g->interpolate(t, 1.0) - kTtw1);
    const double e2 = std::abs(g->interpolate(t, 2.0) - kTtw2);
    CHECK(e1 < prev / 3.0);
    CHECK(e2 < 5.0 * e1 + 1e-6);
    prev = e1;
  }
  CHECK(prev < 2e-4);
}

TEST_CASE("wave-reduced operator is T H1 Tt") {
  double prev = 1.0;
  for (int n : {400, 800}) {
    auto g = build_grid(n, 12.0);
    const auto w = build_wave_operators(g);
    const VectorXd& r = g->nodes();
    const ModeParams p{1, 100.0};
    const VectorXcd u =
        (r.array().pow(1.5) * (-r.array().square() / 4).exp() * (1 + r.array())).matrix().cast<cplx>();
    const VectorXcd lhs = assemble_L1_wavereduced(g, p).entries * u;
    const VectorXcd rhs = w.T.cast<cplx>() * (assemble_Hk(g, p).entries * (w.Tt.cast<cplx>() * u));
    const double e = outer_max(*g, lhs - rhs, 0.5);
    CHECK(e < prev / 3.0);
    prev = e;
  }
  CHECK(prev < 5e-3);
}

TEST_CASE("spectral equivalence of the wave-reduced operator") {
  // ten ladder states need R_max beyond 12
  const auto e0 = verify_spectral_equivalence(build_grid(400, 24.0), 0.0);
  for (int l = 0; l < 10; ++l) CHECK(std::abs(e0.wave_reduced[l] - cplx(-1.5 - l, 0.0)) < 1e-6);
  CHECK(e0.removed == doctest::Approx(-0.5).epsilon(1e-8));
  auto g = build_grid(400, 12.0);
  for (double alpha : {8 * kPi, 80 * kPi}) {
    const auto e = verify_spectral_equivalence(g, alpha);
    CHECK(e.discrepancy < 1e-4);
    CHECK_FALSE(e.ambiguous);
  }
}
