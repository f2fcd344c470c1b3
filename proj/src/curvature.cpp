#include "vbma/curvature.hpp"

#include <stdexcept>
#include <string>

namespace vbma {

namespace {
const Complex kI(0.0, 1.0);
}

Curvature::Curvature(int n, int r) : form_(n, r, 1, 1) {}

Curvature Curvature::from_blocks(int n, const std::vector<std::vector<Mat>>& blocks) {
  if (static_cast<int>(blocks.size()) != n)
    throw std::invalid_argument("vbma::Curvature::from_blocks: expected n block rows");
  int r = -1;
  for (const auto& row : blocks) {
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("vbma::Curvature::from_blocks: expected n block columns");
    for (const auto& h : row) {
      if (h.rows() != h.cols())
        throw std::invalid_argument("vbma::Curvature::from_blocks: blocks must be square");
      if (r == -1) r = static_cast<int>(h.rows());
      if (h.rows() != r)
        throw std::invalid_argument("vbma::Curvature::from_blocks: blocks must share one rank");
    }
  }
  double scale = 0.0;
  for (const auto& row : blocks)
    for (const auto& h : row) scale = std::max(scale, h.cwiseAbs().maxCoeff());
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) {
      double dev = (blocks[mu][nu] - blocks[nu][mu].adjoint()).cwiseAbs().maxCoeff();
      if (dev > 1e-12 * std::max(1.0, scale))
        throw std::invalid_argument(
            "vbma::Curvature::from_blocks: Hermitian symmetry violated at block (" +
            std::to_string(mu + 1) + "," + std::to_string(nu + 1) + ")");
    }
  Curvature out(n, r);
  for (int mu = 1; mu <= n; ++mu)
    for (int nu = 1; nu <= n; ++nu) out.set_block(mu, nu, blocks[mu - 1][nu - 1]);
  return out;
}

Mat Curvature::block(int mu, int nu) const {
  FormKey key{1u << (mu - 1), 1u << (nu - 1)};
  return form_.at(key) / kI;
}

void Curvature::set_block(int mu, int nu, const Mat& h) {
  FormKey key{1u << (mu - 1), 1u << (nu - 1)};
  form_.set(key, kI * h);
}

EndForm curvature_power(const Curvature& theta, int k) {
  if (k < 0) throw std::invalid_argument("vbma::curvature_power: negative exponent");
  EndForm acc(theta.n(), theta.r(), 0, 0);
  acc.set(FormKey{0, 0}, Mat::Identity(theta.r(), theta.r()));
  for (int j = 0; j < k; ++j) acc = wedge(acc, theta.form());
  return acc;
}

double vbma_residual(const Curvature& theta, const VolumeDensity& eta) {
  Mat top = top_over_vol(curvature_power(theta, theta.n()));
  Mat dev = top - eta.scalar * Mat::Identity(theta.r(), theta.r());
  return dev.cwiseAbs().maxCoeff();
}

EndForm commutator_sum(const Curvature& theta, const Mat& g) {
  int n = theta.n();
  int r = theta.r();
  if (g.rows() != r || g.cols() != r)
    throw std::invalid_argument("vbma::commutator_sum: g must be r x r");
  EndForm bracket(n, r, 1, 1);
  for (const auto& [key, value] : theta.form().coeffs())
    bracket.set(key, value * g - g * value);
  EndForm out(n, r, n, n);
  for (int k = 0; k <= n - 1; ++k) {
    EndForm term = wedge(curvature_power(theta, k), bracket);
    term = wedge(term, curvature_power(theta, n - 1 - k));
    out += term;
  }
  return out;
}

double commutator_identity_check(const Curvature& theta, const Mat& g) {
  EndForm lhs = commutator_sum(theta, g);
  EndForm power = curvature_power(theta, theta.n());
  EndForm rhs(theta.n(), theta.r(), theta.n(), theta.n());
  for (const auto& [key, value] : power.coeffs()) rhs.set(key, value * g - g * value);
  return (lhs - rhs).max_norm();
}

}  // namespace vbma
