#include "vbma/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vbma {

std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t sub_seed(std::uint64_t master, std::uint64_t key) {
  return splitmix64(master + (key + 1) * 0x9E3779B97F4A7C15ull);
}

double Rng::log_uniform(double lo, double hi) {
  if (!(lo > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("vbma::Rng::log_uniform: requires 0 < lo < hi");
  }
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // 1 - uniform01() lies in (0, 1], keeping the logarithm finite.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

Eigen::VectorXcd Rng::cgauss_vector(int dim) {
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cgauss();
  return v;
}

Eigen::MatrixXcd Rng::cgauss_matrix(int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = cgauss();
  }
  return m;
}

Eigen::MatrixXcd Rng::hermitian(int dim) {
  Eigen::MatrixXcd g = cgauss_matrix(dim, dim);
  return 0.5 * (g + g.adjoint());
}

Eigen::MatrixXcd Rng::hermitian_pd(int dim, double ridge) {
  Eigen::MatrixXcd g = cgauss_matrix(dim, dim);
  Eigen::MatrixXcd out = g * g.adjoint();
  out += ridge * Eigen::MatrixXcd::Identity(dim, dim);
  return out;
}

}  // namespace vbma
