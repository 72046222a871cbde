#include "vortexspec/profiles.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace vortex::profiles {
namespace {

constexpr double kZSeries = kSeriesRadius * kSeriesRadius / 4.0;
constexpr int kTerms = 14;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

template <typename Coef>
cplx horner(cplx z, int terms, Coef c) {
  cplx s = 0.0;
  for (int m = terms - 1; m >= 0; --m) s = s * z + c(m);
  return s;
}

// E(z) = 2 F0(z) / z^2 = sum 2 z^m / (m+2)!
cplx E_series(cplx z) {
  return horner(z, kTerms, [](int m) { return 2.0 / factorial(m + 2); });
}

// q(z) = z / F0(z), written with e^{-z} so that large Re z cannot overflow
cplx q_of(cplx z) {
  if (std::abs(z) < kZSeries) return 2.0 / (z * E_series(z));
  if (z.real() > 0.0) {
    const cplx em = std::exp(-z);
    return z * em / (1.0 - (1.0 + z) * em);
  }
  return z / (std::exp(z) - z - 1.0);
}

// Coefficients c_m with F3(z) - 2/z = (sum c_m z^m) / E(z).
const std::array<double, kTerms>& pole_free_coefs() {
  static const std::array<double, kTerms> c = [] {
    constexpr int M = kTerms + 1;
    std::array<double, M + 1> e{}, b{};
    for (int m = 0; m <= M; ++m) e[m] = 2.0 / factorial(m + 2);
    b[0] = 1.0;  // series of 1/E
    for (int m = 1; m <= M; ++m) {
      double s = 0.0;
      for (int j = 1; j <= m; ++j) s += e[j] * b[m - j];
      b[m] = -s;
    }
    std::array<double, kTerms> out{};
    for (int m = 0; m < kTerms; ++m)
      out[m] = 8.0 * b[m + 1] - 2.0 * e[m + 1] + (m == 0 ? 4.0 : 0.0);
    return out;
  }();
  return c;
}

void check_sector(cplx r) {
  if (r == 0.0) return;
  if (std::abs(std::arg(r)) > kPi / 4 + 1e-12)
    throw std::domain_error("profile argument outside the sector |arg r| <= pi/4");
}

}  // namespace

cplx F0(cplx z) {
  if (std::abs(z) < kZSeries) return 0.5 * z * z * E_series(z);
  return std::exp(z) - z - 1.0;
}

cplx F1(cplx z) {
  if (std::abs(z) < kZSeries) {
    return horner(z, kTerms, [](int m) {
      return ((m % 2) ? -1.0 : 1.0) / factorial(m + 1);
    });
  }
  return (1.0 - std::exp(-z)) / z;
}

cplx F2(cplx z) { return std::exp(-0.5 * z); }

cplx F3(cplx z) {
  const cplx q = q_of(z);
  return (2.0 * z * q - 3.0 + 2.0 * z) * q;
}

cplx F1_prime(cplx z) {
  if (std::abs(z) < kZSeries) {
    // sum_{n>=1} n (-1)^n z^{n-1} / (n+1)!
    return horner(z, kTerms, [](int m) {
      const int n = m + 1;
      return ((n % 2) ? -1.0 : 1.0) * n / factorial(n + 1);
    });
  }
  return ((1.0 + z) * std::exp(-z) - 1.0) / (z * z);
}

cplx F3_minus_pole(cplx z) {
  if (std::abs(z) < 0.5) {
    const auto& c = pole_free_coefs();
    const cplx num = horner(z, kTerms, [&c](int m) { return c[m]; });
    return num / E_series(z);
  }
  return F3(z) - 2.0 / z;
}

cplx F1_minus_taylor(cplx z) {
  if (std::abs(z) < 0.5) {
    // sum_{m>=2} (-z)^m / (m+1)!
    const cplx t = horner(z, kTerms, [](int m) {
      const int p = m + 2;
      return ((p % 2) ? -1.0 : 1.0) / factorial(p + 1);
    });
    return z * z * t;
  }
  return F1(z) - 1.0 + 0.5 * z;
}

cplx sigma(cplx r) {
  check_sector(r);
  return F1(0.25 * r * r);
}

cplx sigma_prime(cplx r) {
  check_sector(r);
  return F1_prime(0.25 * r * r) * 0.5 * r;
}

cplx g(cplx r) {
  check_sector(r);
  return std::exp(-0.125 * r * r);
}

cplx G(cplx r) {
  check_sector(r);
  return std::exp(-0.25 * r * r) / (4.0 * kPi);
}

cplx S(cplx r) { return sigma(r) / (8.0 * kPi); }
cplx S_prime(cplx r) { return sigma_prime(r) / (8.0 * kPi); }

cplx f(cplx r) {
  check_sector(r);
  return F3(0.25 * r * r);
}

double sigma(double r) { return sigma(cplx(r)).real(); }
double sigma_prime(double r) { return sigma_prime(cplx(r)).real(); }
double g(double r) { return std::exp(-0.125 * r * r); }
double G(double r) { return std::exp(-0.25 * r * r) / (4.0 * kPi); }
double S(double r) { return sigma(r) / (8.0 * kPi); }
double S_prime(double r) { return sigma_prime(r) / (8.0 * kPi); }
double f(double r) { return f(cplx(r)).real(); }

}  // namespace vortex::profiles
