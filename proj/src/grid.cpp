#include "vortexspec/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vortex {

std::string to_string(GridScheme s) {
  return s == GridScheme::MappedChebyshev ? "mapped-chebyshev"
                                          : "uniform-interior";
}

GridScheme grid_scheme_from_string(const std::string& s) {
  if (s == "mapped-chebyshev" || s == "chebyshev")
    return GridScheme::MappedChebyshev;
  if (s == "uniform-interior" || s == "uniform")
    return GridScheme::UniformInterior;
  throw std::invalid_argument("unknown grid scheme '" + s + "'");
}

void chebyshev_matrix(int N, VectorXd& x, MatrixXd& D) {
  x.resize(N + 1);
  for (int j = 0; j <= N; ++j) x[j] = std::sin(kPi * (N - 2.0 * j) / (2.0 * N));
  D.setZero(N + 1, N + 1);
  auto c = [N](int i) { return (i == 0 || i == N) ? 2.0 : 1.0; };
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j <= N; ++j) {
      if (i == j) continue;
      // x_i - x_j through the product formula avoids cancellation
      const double dx =
          2.0 * std::sin(kPi * (i + j) / (2.0 * N)) * std::sin(kPi * (j - i) / (2.0 * N));
      const double sgn = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      D(i, j) = c(i) / c(j) * sgn / dx;
    }
  }
  // negative sum trick
  for (int i = 0; i <= N; ++i) D(i, i) = -D.row(i).sum();
}

VectorXd clenshaw_curtis_weights(int N) {
  VectorXd w(N + 1);
  for (int j = 0; j <= N; ++j) {
    const double theta = kPi * j / N;
    double s = 0.0;
    for (int k = 0; k <= N / 2; ++k) {
      const double b = (k == 0 || 2 * k == N) ? 1.0 : 2.0;
      s += b / (1.0 - 4.0 * k * k) * std::cos(2.0 * k * theta);
    }
    w[j] = s / N * ((j == 0 || j == N) ? 1.0 : 2.0);
  }
  return w;
}

RadialGrid::RadialGrid(GridMeta meta, VectorXd nodes, VectorXd weights,
                       MatrixXd d1, MatrixXd d2)
    : meta_(meta),
      nodes_(std::move(nodes)),
      weights_(std::move(weights)),
      d1_(std::move(d1)),
      d2_(std::move(d2)) {
  const int n = meta_.n;
  full_.resize(n + 2);
  full_[0] = 0.0;
  full_.segment(1, n) = nodes_;
  full_[n + 1] = meta_.r_max;
  if (meta_.scheme == GridScheme::MappedChebyshev) {
    bary_.resize(n + 2);
    for (int j = 0; j < n + 2; ++j)
      bary_[j] = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == n + 1) ? 0.5 : 1.0);
  }
}

cplx RadialGrid::integrate(const VectorXcd& f) const {
  return (weights_.cast<cplx>().array() * f.array()).sum();
}

namespace {

template <typename V>
typename V::Scalar interp_impl(const VectorXd& full, const VectorXd& bary,
                               GridScheme scheme, const V& u, double r) {
  using S = typename V::Scalar;
  const Index n = u.size();
  if (r <= 0.0 || r >= full[n + 1]) return S(0);
  auto val = [&](Index j) -> S {
    return (j == 0 || j == n + 1) ? S(0) : u[j - 1];
  };
  if (scheme == GridScheme::UniformInterior) {
    const double h = full[1];
    const Index j = std::min<Index>(static_cast<Index>(r / h), n);
    const double t = (r - full[j]) / h;
    return (1.0 - t) * val(j) + t * val(j + 1);
  }
  S num(0);
  double den = 0.0;
  for (Index j = 0; j < n + 2; ++j) {
    const double d = r - full[j];
    if (d == 0.0) return val(j);
    const double c = bary[j] / d;
    num += c * val(j);
    den += c;
  }
  return num / den;
}

}  // namespace

double RadialGrid::interpolate(const VectorXd& u, double r) const {
  return interp_impl(full_, bary_, meta_.scheme, u, r);
}

cplx RadialGrid::interpolate(const VectorXcd& u, double r) const {
  return interp_impl(full_, bary_, meta_.scheme, u, r);
}

GridPtr build_grid(int n, double r_max, GridScheme scheme) {
  if (n < 8)
    throw std::invalid_argument("grid: n must be >= 8 (got " +
                                std::to_string(n) + ")");
  if (!(r_max >= 4.0))
    throw std::invalid_argument("grid: R_max must be >= 4 (got " +
                                std::to_string(r_max) + ")");
  GridMeta meta{n, r_max, scheme};
  VectorXd r(n), w(n);
  MatrixXd d1(n, n), d2(n, n);

  if (scheme == GridScheme::UniformInterior) {
    const double h = r_max / (n + 1);
    for (int i = 0; i < n; ++i) r[i] = (i + 1) * h;
    w.setConstant(h);
    d1.setZero();
    for (int i = 0; i < n; ++i) {
      if (i > 0) d1(i, i - 1) = -0.5 / h;
      if (i + 1 < n) d1(i, i + 1) = 0.5 / h;
    }
    d2 = d1 * d1;
  } else {
    const int N = n + 1;
    VectorXd x;
    MatrixXd D;
    chebyshev_matrix(N, x, D);
    const MatrixXd DD = D * D;
    const VectorXd cc = clenshaw_curtis_weights(N);
    // x_j decreases in j; node i (ascending r) is CGL index N - 1 - i
    for (int i = 0; i < n; ++i) {
      const int a = N - 1 - i;
      r[i] = 0.5 * r_max * (x[a] + 1.0);
      w[i] = 0.5 * r_max * cc[a];
      for (int j = 0; j < n; ++j) {
        const int b = N - 1 - j;
        d1(i, j) = D(a, b) * 2.0 / r_max;
        d2(i, j) = DD(a, b) * 4.0 / (r_max * r_max);
      }
    }
  }
  return std::make_shared<const RadialGrid>(meta, std::move(r), std::move(w),
                                            std::move(d1), std::move(d2));
}

double second_derivative_check(const RadialGrid& grid,
                               const std::function<double(double)>& u,
                               const std::function<double(double)>& u_dd) {
  const int n = grid.size();
  const VectorXd& r = grid.nodes();
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(r[i]);
  const VectorXd dv = grid.d2() * v;
  // the wide D1*D1 stencil sees the zero ghost values two nodes deep
  const int skip = grid.scheme() == GridScheme::UniformInterior ? 2 : 0;
  double err = 0.0;
  for (int i = skip; i < n - skip; ++i)
    err = std::max(err, std::abs(dv[i] - u_dd(r[i])));
  return err;
}

}  // namespace vortex
