#pragma once

#include <functional>
#include <memory>
#include <string>

#include "vortexspec/common.hpp"

namespace vortex {

enum class GridScheme { MappedChebyshev, UniformInterior };

std::string to_string(GridScheme s);
GridScheme grid_scheme_from_string(const std::string& s);

struct GridMeta {
  int n = 0;
  double r_max = 0.0;
  GridScheme scheme = GridScheme::MappedChebyshev;
};

// Interior collocation grid on (0, R_max). Both endpoints carry homogeneous
// Dirichlet data and are not part of the node set.
class RadialGrid {
 public:
  RadialGrid(GridMeta meta, VectorXd nodes, VectorXd weights, MatrixXd d1,
             MatrixXd d2);

  const GridMeta& meta() const { return meta_; }
  int size() const { return meta_.n; }
  double r_max() const { return meta_.r_max; }
  GridScheme scheme() const { return meta_.scheme; }
  const VectorXd& nodes() const { return nodes_; }
  const VectorXd& weights() const { return weights_; }
  const MatrixXd& d1() const { return d1_; }
  const MatrixXd& d2() const { return d2_; }

  // Integral of sampled f over (0, R_max).
  double integrate(const VectorXd& f) const { return weights_.dot(f); }
  cplx integrate(const VectorXcd& f) const;

  // Evaluates the grid function (with zero endpoint values) at r.
  double interpolate(const VectorXd& u, double r) const;
  cplx interpolate(const VectorXcd& u, double r) const;

 private:
  GridMeta meta_;
  VectorXd nodes_, weights_;
  MatrixXd d1_, d2_;
  VectorXd bary_;  // barycentric weights incl. endpoints (chebyshev only)
  VectorXd full_;  // nodes incl. endpoints, ascending
};

using GridPtr = std::shared_ptr<const RadialGrid>;

// Throws std::invalid_argument if n < 8 or r_max < 4.
GridPtr build_grid(int n, double r_max,
                   GridScheme scheme = GridScheme::MappedChebyshev);
inline GridPtr build_grid(const GridMeta& m) {
  return build_grid(m.n, m.r_max, m.scheme);
}

// max |(D2 u)(r_i) - u''(r_i)| over nodes outside the boundary layers.
double second_derivative_check(const RadialGrid& grid,
                               const std::function<double(double)>& u,
                               const std::function<double(double)>& u_dd);

// Chebyshev points x_j = cos(pi j / N) and the differentiation matrix on them.
void chebyshev_matrix(int N, VectorXd& x, MatrixXd& D);

// Clenshaw-Curtis weights on [-1, 1] for the points above.
VectorXd clenshaw_curtis_weights(int N);

}  // namespace vortex
