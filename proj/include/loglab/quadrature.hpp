#ifndef LOGLAB_QUADRATURE_HPP
#define LOGLAB_QUADRATURE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace loglab {

// Nodes and weights for E[f(g)], g ~ N(0,1): weights sum to 1.
struct QuadratureGrid {
  int order = 0;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

namespace detail {
// Golub-Welsch: eigen-decompose the symmetric tridiagonal Jacobi matrix of
// the orthogonal polynomial family.
inline void golub_welsch(const Eigen::VectorXd& offdiag, double weight_total,
                         Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  const int m = int(offdiag.size()) + 1;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i + 1 < m; ++i) {
    jacobi(i, i + 1) = offdiag[i];
    jacobi(i + 1, i) = offdiag[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  nodes = es.eigenvalues();
  weights.resize(m);
  for (int i = 0; i < m; ++i) {
    double v0 = es.eigenvectors()(0, i);
    weights[i] = weight_total * v0 * v0;
  }
}
}  // namespace detail

// Gauss-Hermite rescaled to the standard normal weight.
inline QuadratureGrid gauss_hermite(int order) {
  if (order < 8) throw std::invalid_argument("gauss_hermite: order below 8 rejected");
  Eigen::VectorXd offdiag(order - 1);
  for (int i = 1; i < order; ++i) offdiag[i - 1] = std::sqrt(double(i) / 2.0);
  QuadratureGrid grid;
  grid.order = order;
  detail::golub_welsch(offdiag, 1.0, grid.nodes, grid.weights);
  grid.nodes *= std::sqrt(2.0);  // physicists' nodes -> N(0,1) nodes
  return grid;
}

// Gauss-Legendre on [a, b], weights sum to b - a.
inline QuadratureGrid gauss_legendre(int order, double a, double b) {
  if (order < 2) throw std::invalid_argument("gauss_legendre: order too small");
  Eigen::VectorXd offdiag(order - 1);
  for (int i = 1; i < order; ++i) offdiag[i - 1] = double(i) / std::sqrt(4.0 * i * i - 1.0);
  QuadratureGrid grid;
  grid.order = order;
  detail::golub_welsch(offdiag, 2.0, grid.nodes, grid.weights);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < order; ++i) {
    grid.nodes[i] = mid + half * grid.nodes[i];
    grid.weights[i] *= half;
  }
  return grid;
}

}  // namespace loglab

#endif  // LOGLAB_QUADRATURE_HPP
