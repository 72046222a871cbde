#include <cmath>

#include "doctest.h"
#include "vortexspec/profiles.hpp"

using namespace vortex;
namespace pf = vortex::profiles;

TEST_CASE("F values at zero") {
  CHECK(pf::F1(cplx(1e-300)).real() == doctest::Approx(1.0));
  CHECK(std::abs(pf::F2(0.0) - 1.0) == 0.0);
  CHECK(std::abs(pf::F0(0.0)) == 0.0);
}

TEST_CASE("sigma near zero") {
  for (double r : {1e-4, 0.01, 0.2, 0.49, 0.51}) {
    const double s = pf::sigma(r);
    CHECK(std::abs(s - 1.0 + r * r / 8.0) < std::pow(r, 4) / 90.0 + 1e-16);
  }
  CHECK(pf::sigma(2.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("S is sigma over 8 pi") {
  for (double r : {0.1, 1.0, 3.0, 7.0})
    CHECK(pf::S(r) == doctest::Approx((1 - std::exp(-r * r / 4)) / (2 * kPi * r * r)).epsilon(1e-14));
}

TEST_CASE("f regression values from a 40-digit oracle") {
  CHECK(pf::f(0.1) == doctest::Approx(800.6662498842930428).epsilon(1e-13));
  CHECK(pf::f(0.01) == doctest::Approx(80000.66666249998843).epsilon(1e-13));
  CHECK(pf::f(1.0) == doctest::Approx(8.623878935364410081).epsilon(1e-13));
  CHECK(pf::f(3.0) == doctest::Approx(1.126557248850008146).epsilon(1e-13));
}

TEST_CASE("f matches its definition through sigma' and g") {
  for (double r : {0.7, 1.3, 2.5, 4.0}) {
    const double sp = pf::sigma_prime(r), gg = pf::g(r);
    const double direct = 2 * std::pow(gg, 4) / (sp * sp) + gg * gg / sp * (6 / r - r);
    CHECK(pf::f(r) == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("complex branches") {
  const cplx z(2.0, 1.5);
  const cplx f3 = pf::F3(z);
  CHECK(f3.real() == doctest::Approx(0.90989188918009165).epsilon(1e-13));
  CHECK(f3.imag() == doctest::Approx(-0.79287884304924984).epsilon(1e-13));
  const cplx d = pf::F1_prime(z);
  CHECK(d.real() == doctest::Approx(-0.09444221284123999).epsilon(1e-13));
  CHECK(d.imag() == doctest::Approx(0.10058533500831613).epsilon(1e-13));

  const cplx w(0.3, 0.2);
  CHECK(pf::F3_minus_pole(w).real() == doctest::Approx(0.61571342458714020).epsilon(1e-13));
  CHECK(pf::F3_minus_pole(w).imag() == doctest::Approx(-0.03544821664817711).epsilon(1e-12));
  CHECK(pf::F1_minus_taylor(w).real() == doctest::Approx(0.008617065576417571).epsilon(1e-12));
  CHECK(pf::F1_minus_taylor(w).imag() == doctest::Approx(0.018181490094471175).epsilon(1e-12));
  const cplx s(1e-3, 1e-3);
  CHECK(pf::F3_minus_pole(s).real() == doctest::Approx(0.66649999999567637).epsilon(1e-13));
  CHECK(pf::F3_minus_pole(s).imag() == doctest::Approx(-1.667036993827161e-4).epsilon(1e-10));
}

TEST_CASE("series and closed forms agree at the switch") {
  for (double t : {-0.3, 0.0, 0.35}) {
    const double rho = profiles::kSeriesRadius;
    const cplx a = std::polar(rho * (1 - 1e-9), t), b = std::polar(rho * (1 + 1e-9), t);
    CHECK(std::abs(pf::f(a) - pf::f(b)) < 1e-6 * std::abs(pf::f(a)));
    CHECK(std::abs(pf::sigma(a) - pf::sigma(b)) < 1e-9);
    CHECK(std::abs(pf::sigma_prime(a) - pf::sigma_prime(b)) < 1e-9);
  }
}

TEST_CASE("large arguments do not overflow") {
  const cplx r = std::polar(40.0, kPi / 8);
  CHECK(std::isfinite(std::abs(pf::f(r))));
  CHECK(std::isfinite(std::abs(pf::sigma(r))));
  CHECK(std::abs(pf::f(r)) < 1e-10);
}

TEST_CASE("sector is enforced") {
  CHECK_THROWS_AS(pf::sigma(std::polar(1.0, 1.0)), std::domain_error);
  CHECK_NOTHROW(pf::sigma(std::polar(1.0, kPi / 4)));
}
