#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "vortexspec/profiles.hpp"
#include "vortexspec/study.hpp"

using namespace vortex;

TEST_CASE("power-law fit and window") {
  std::vector<double> x{1, 10, 100, 1000}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 0.4));
  const auto f = fit_power_law(x, y);
  CHECK(f.exponent == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(std::exp(f.log_prefactor) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));
  const auto idx = upper_half(default_alpha_grid());
  REQUIRE(idx.size() == 4);
  CHECK(idx.front() == 3);  // 562
  CHECK_THROWS_AS(fit_power_law({1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("alpha grid validation") {
  CHECK_NOTHROW(validate_alpha_grid(default_alpha_grid(), 50.0));
  CHECK_THROWS_AS(validate_alpha_grid({100, 1000}, 50.0), std::invalid_argument);
  CHECK_THROWS_AS(validate_alpha_grid({40, 4000}, 50.0), std::invalid_argument);
  CHECK_THROWS_AS(validate_alpha_grid({100, 5000, 4000}, 50.0), std::invalid_argument);
  SweepConfig c;
  c.k_max = 1;
  CHECK_THROWS_AS(run_sweep(c), std::invalid_argument);
}

TEST_CASE("appendix ratios: series limits") {
  // F1(z) - 1 + z/2 ~ z^2/6 and min(16|z|^2, 4|z|) = 16|z|^2 for small z
  CHECK(a1_sigma_ratio(1.0, 1e-3) == doctest::Approx(1.0 / 96.0).epsilon(1e-5));
  CHECK(a1_sigma_ratio(std::polar(2.0, 0.3), 1e-3) == doctest::Approx(1.0 / 96.0).epsilon(1e-5));
  for (double th : {kPi / 16, 3 * kPi / 32, kPi / 8}) {
    const cplx z = std::polar(1.0, th);
    // F0(-z) ~ z^2/2 near 0, so the ratio tends to sin(4 theta)/8
    CHECK(a2_ratio(z, 1e-3) == doctest::Approx(std::sin(4 * th) / 8).epsilon(1e-5));
    // h(x)/x -> c: the ratio tends to sin(2 theta)
    CHECK(a2_ratio(z, 1e3) == doctest::Approx(std::sin(2 * th)).epsilon(1e-5));
  }
  // F3(z) - 2/z is finite at 0
  CHECK(std::isfinite(a1_f_ratio(1.0, 1e-4)));
  CHECK(std::abs(profiles::F1(cplx(1e-12, 0.0)) - 1.0) < 1e-12);
  CHECK(std::abs(profiles::F2(0.0) - 1.0) == 0.0);
  CHECK(std::abs(profiles::F0(0.0)) == 0.0);
}

TEST_CASE("appendix scans: A1 and A2") {
  for (LemmaId id : {LemmaId::A1_f, LemmaId::A1_sigma, LemmaId::A2}) {
    const auto rep = appendix_scan(id);
    CAPTURE(to_string(id));
    CHECK(rep.n_points >= 10000);
    CHECK(rep.violations == 0);
    CHECK(rep.passed());
  }
  // the small-z limit is interior to the range, so sup >= 1/96
  CHECK(appendix_scan(LemmaId::A1_sigma).fitted_constant >= 1.0 / 96.0);
  CHECK(appendix_scan(LemmaId::A2).lower_bound);
  CHECK_THROWS_AS(appendix_scan(LemmaId::P54), std::invalid_argument);
  CHECK(lemma_id_from_string("A3") == LemmaId::A3);
  CHECK_THROWS_AS(lemma_id_from_string("A9"), std::invalid_argument);
}

TEST_CASE("appendix scan: A3 at low resolution") {
  ScanResolution res;
  res.n_rays = 3;
  res.n_modulus = 4;
  res.n_random = 10;
  res.k_list = {2, 5};
  res.grid = {120, 10.0, GridScheme::MappedChebyshev};
  const auto rep = appendix_scan(LemmaId::A3, res);
  CHECK(rep.n_points == 3 * 4 * 10 * 2);
  CHECK(rep.violations == 0);
  // the exact infimum bounds every random ratio from below
  CHECK(rep.worst_ratio > 0.0);
  CHECK(rep.worst_ratio <= rep.fitted_constant + 1e-12);
}

TEST_CASE("coercivity: unit bound for r^2 Z1hat^{-1} and P57a consistency") {
  const auto rep = coercivity_table({100, 1000}, {1, 2}, GridPolicy{}, 7, 50, 1);
  CHECK(rep.bounded);
  CHECK(rep.r2_Z1inv_max <= 1.0 + 1e-6);
  CHECK(rep.r2_Z1inv_max > 0.99);
  for (const auto& a : rep.rows) {
    if (a.quantity != "k2_K_over_r2_random") continue;
    for (const auto& b : rep.rows)
      if (b.quantity == "k2_K_over_r2" && b.k == a.k && b.alpha == a.alpha)
        CHECK(a.value <= b.value * (1 + 1e-12));
  }
  int groups = 0;
  for (const auto& g : rep.grouped) groups += g.alpha == 100 ? 1 : 0;
  CHECK(groups == 3 + 4);
}

TEST_CASE("resolvent gap shrinks with alpha") {
  const double d1 = resolvent_gap(1, 300.0, GridPolicy{});
  const double d2 = resolvent_gap(1, 3000.0, GridPolicy{});
  CHECK(d2 < d1);
  CHECK(d1 < 0.2);
}

TEST_CASE("figure dataset: containment and negative control") {
  const auto fd = figure_dataset(1, 1000.0, {}, GridPolicy{});
  CHECK(fd.delta == doctest::Approx(fd.d));
  CHECK(fd.source_eigs[0] == doctest::Approx(-8.0).epsilon(1e-6));
  CHECK_FALSE(fd.regions[0].exterior);
  CHECK(fd.eigenvalues.size() >= 3);
  CHECK(fd.all_contained);
  CHECK(fd.first_regions_hit);

  DeltaChoice tiny;
  tiny.policy = DeltaPolicy::Fixed;
  tiny.value = 1e-6;
  const auto neg = figure_dataset(1, 1000.0, tiny, GridPolicy{});
  CHECK_FALSE(neg.passed());

  DeltaChoice lemma;
  lemma.policy = DeltaPolicy::Lemma;
  const auto lem = figure_dataset(1, 1000.0, lemma, GridPolicy{});
  // 2 sqrt(d) exceeds 1/8: every ball holds 0
  CHECK(lem.regions[0].exterior);
  CHECK(delta_policy_from_string("separation") == DeltaPolicy::Separation);
}

TEST_CASE("sweep on two modes") {
  SweepConfig c;
  c.alphas = {100, 3162};
  c.k_max = 2;
  c.workers = 1;
  const auto s = run_sweep(c);
  REQUIRE(s.sigma.size() == 2);
  CHECK(s.ordering_holds());
  CHECK(s.sigma[1] > s.sigma[0]);
  CHECK(s.per_mode_argmax[1] == 1);
  CHECK(s.fit_alphas.size() == 1);
  CHECK(std::isnan(s.sigma_exponent));
}
