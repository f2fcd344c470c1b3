#include "vbma/vortex_threefold.hpp"

#include "vbma/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vbma {

namespace {

const Complex kI(0.0, 1.0);

double real_checked(Complex value, const char* where) {
  const double scale = std::max(1.0, std::abs(value.real()));
  if (std::abs(value.imag()) > 1e-10 * scale) {
    throw std::logic_error(std::string(where) + ": value is not real (imag = " +
                           std::to_string(value.imag()) + ")");
  }
  return value.real();
}

void check_hermitian(const Mat& m, const char* where) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument(std::string(where) + ": matrix is not Hermitian");
  }
}

// Scalar (1,1)-form with i-absorbed coefficient matrix h, supported on the
// first h.rows() base directions of an n-dimensional base.
EndForm scalar_one_one(int n, const Mat& h) {
  EndForm out(n, 1, 1, 1);
  for (int mu = 0; mu < h.rows(); ++mu) {
    for (int nu = 0; nu < h.cols(); ++nu) {
      if (h(mu, nu) != Complex(0.0, 0.0)) {
        Mat coeff(1, 1);
        coeff(0, 0) = kI * h(mu, nu);
        out.set(FormKey{static_cast<IndexMask>(1u << mu),
                        static_cast<IndexMask>(1u << nu)},
                coeff);
      }
    }
  }
  return out;
}

EndForm scalar_unit(int n) {
  EndForm out(n, 1, 0, 0);
  Mat one(1, 1);
  one(0, 0) = Complex(1.0, 0.0);
  out.set(FormKey{0u, 0u}, one);
  return out;
}

EndForm scalar_power(const EndForm& f, int k) {
  EndForm acc = scalar_unit(f.n());
  for (int j = 0; j < k; ++j) acc = wedge(acc, f);
  return acc;
}

// The two-block vortex curvature on C^{nsub+1} with rank 2.
Curvature assemble_two_block(int nsub, const Mat& t1, const Mat& t2, double a,
                             double b, const Eigen::VectorXcd& ell) {
  const int dim = nsub + 1;
  std::vector<std::vector<Mat>> blocks(dim,
                                       std::vector<Mat>(dim, Mat::Zero(2, 2)));
  for (int mu = 0; mu < nsub; ++mu) {
    for (int nu = 0; nu < nsub; ++nu) {
      blocks[mu][nu](0, 0) = t1(mu, nu);
      blocks[mu][nu](1, 1) = t2(mu, nu);
    }
  }
  blocks[nsub][nsub](0, 0) = a;
  blocks[nsub][nsub](1, 1) = b;
  for (int mu = 0; mu < nsub; ++mu) {
    blocks[mu][nsub](0, 1) = ell(mu);
    blocks[nsub][mu](1, 0) = std::conj(ell(mu));
  }
  return Curvature::from_blocks(dim, blocks);
}

// Extracts bundle entry (bi, bj) of an End-valued form as a scalar form.
EndForm block_entry(const EndForm& f, int bi, int bj) {
  EndForm out(f.n(), 1, f.p(), f.q());
  for (const auto& [key, value] : f.coeffs()) {
    if (value(bi, bj) != Complex(0.0, 0.0)) {
      Mat coeff(1, 1);
      coeff(0, 0) = value(bi, bj);
      out.set(key, coeff);
    }
  }
  return out;
}

Eigen::VectorXcd factor_rank_one_nsd(const Mat& g, const char* where) {
  check_hermitian(g, where);
  const int n = static_cast<int>(g.rows());
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  const Eigen::VectorXd eigs = es.eigenvalues();
  const double scale = std::max(1.0, std::abs(eigs(0)));
  const double tol = 1e-10 * scale;
  if (eigs(n - 1) > tol) {
    throw std::invalid_argument(std::string(where) +
                                ": matrix is not negative semidefinite");
  }
  if (n >= 2 && eigs(1) < -tol) {
    throw std::invalid_argument(std::string(where) +
                                ": matrix has rank greater than one");
  }
  Eigen::VectorXcd ell =
      std::sqrt(std::max(0.0, -eigs(0))) * es.eigenvectors().col(0);
  if ((g + ell * ell.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw std::invalid_argument(std::string(where) +
                                ": matrix does not factor as -ell ell^*");
  }
  return ell;
}

void check_instance(const ThreefoldInstance& inst, const char* where) {
  if (!(inst.a > 0.0) || !(inst.b > 0.0) || !(inst.lambda1 > 0.0) ||
      !(inst.lambda2 > 0.0)) {
    throw std::invalid_argument(std::string(where) +
                                ": a, b, lambda1, lambda2 must be positive");
  }
}

}  // namespace

ThetaPowerBlocks theta_powers(const Mat& theta1, const Mat& theta2, double a,
                              double b, const Mat& g, int k) {
  const int n = static_cast<int>(theta1.rows());
  if (theta1.cols() != n || theta2.rows() != n || theta2.cols() != n ||
      g.rows() != n || g.cols() != n || n < 1) {
    throw std::invalid_argument(
        "vbma::theta_powers: matrices must be square and of equal size");
  }
  if (n + 1 > kMaxDim) {
    throw std::invalid_argument("vbma::theta_powers: base dimension exceeds " +
                                std::to_string(kMaxDim));
  }
  if (k < 1 || k > n + 1) {
    throw std::invalid_argument("vbma::theta_powers: k must lie in [1, n+1]");
  }
  check_hermitian(theta1, "vbma::theta_powers");
  check_hermitian(theta2, "vbma::theta_powers");
  const Eigen::VectorXcd ell = factor_rank_one_nsd(g, "vbma::theta_powers");

  const Curvature curv = assemble_two_block(n, theta1, theta2, a, b, ell);
  const EndForm power = curvature_power(curv, k);

  const int dim = n + 1;
  const EndForm x = scalar_one_one(dim, theta1);
  const EndForm y = scalar_one_one(dim, theta2);
  const EndForm ghat = scalar_one_one(dim, g);
  EndForm omega_hat(dim, 1, 1, 1);
  {
    Mat coeff(1, 1);
    coeff(0, 0) = kI;
    omega_hat.set(FormKey{static_cast<IndexMask>(1u << n),
                          static_cast<IndexMask>(1u << n)},
                  coeff);
  }
  EndForm cross(dim, 1, 1, 1);
  for (int mu = 0; mu < n; ++mu) {
    if (ell(mu) != Complex(0.0, 0.0)) {
      Mat coeff(1, 1);
      coeff(0, 0) = kI * ell(mu);
      cross.set(FormKey{static_cast<IndexMask>(1u << mu),
                        static_cast<IndexMask>(1u << n)},
                coeff);
    }
  }

  auto mixed_sum = [&](const EndForm& u, const EndForm& v, int top) {
    // sum_{j=0}^{top} (j+1) u^j v^{top-j}, a (top, top)-form.
    EndForm acc(dim, 1, top, top);
    for (int j = 0; j <= top; ++j) {
      acc += static_cast<double>(j + 1) *
             wedge(scalar_power(u, j), scalar_power(v, top - j));
    }
    return acc;
  };

  ThetaPowerBlocks out{EndForm(dim, 1, k, k), EndForm(dim, 1, k, k),
                       EndForm(dim, 1, k, k), EndForm(dim, 1, k, k)};
  {
    EndForm p1 = (k * a) * scalar_power(x, k - 1);
    if (k >= 2) p1 += wedge(ghat, mixed_sum(x, y, k - 2));
    out.tl = scalar_power(x, k) + wedge(p1, omega_hat);
  }
  {
    EndForm p2 = (k * b) * scalar_power(y, k - 1);
    if (k >= 2) p2 += wedge(ghat, mixed_sum(y, x, k - 2));
    out.br = scalar_power(y, k) + wedge(p2, omega_hat);
  }
  {
    EndForm qk(dim, 1, k - 1, k - 1);
    for (int j = 0; j <= k - 1; ++j) {
      qk += wedge(scalar_power(x, j), scalar_power(y, k - 1 - j));
    }
    out.tr = wedge(qk, cross);
  }
  out.bl = out.tr.adjoint();

  const EndForm actual_tl = block_entry(power, 0, 0);
  const EndForm actual_tr = block_entry(power, 0, 1);
  const EndForm actual_bl = block_entry(power, 1, 0);
  const EndForm actual_br = block_entry(power, 1, 1);
  out.scale = std::max({actual_tl.max_norm(), actual_tr.max_norm(),
                        actual_bl.max_norm(), actual_br.max_norm()});
  out.residual = std::max({(out.tl - actual_tl).max_norm(),
                           (out.tr - actual_tr).max_norm(),
                           (out.bl - actual_bl).max_norm(),
                           (out.br - actual_br).max_norm()});
  return out;
}

ThreefoldInstance make_instance(double a, double b, double lambda1,
                                double lambda2, double t, std::uint64_t seed) {
  if (!(a > 0.0) || !(b > 0.0) || !(lambda1 > 0.0) || !(lambda2 > 0.0)) {
    throw std::invalid_argument(
        "vbma::make_instance: a, b, lambda1, lambda2 must be positive");
  }
  if (!(t >= 0.0) || !(t <= 1.0)) {
    throw std::invalid_argument("vbma::make_instance: t must lie in [0, 1]");
  }
  const double num = 2.0 * a * lambda1 * lambda2 - 2.0 * b;
  const double denom = b - a * (lambda1 * (1.0 - t) + lambda2 * t);
  const double scale =
      std::max({1.0, b, a * lambda1, a * lambda2, a * lambda1 * lambda2});
  double s = 0.0;
  if (std::abs(denom) <= 1e-12 * scale) {
    if (std::abs(num) > 1e-12 * scale) {
      throw std::invalid_argument(
          "vbma::make_instance: constraint has no solution for these "
          "parameters");
    }
    Rng rng(seed);
    s = rng.log_uniform(0.25, 4.0);
  } else {
    s = num / denom;
  }
  if (s < 0.0) {
    throw std::invalid_argument(
        "vbma::make_instance: constraint forces a negative |ell|^2");
  }
  const double l1 = t * s;
  const double l2 = (1.0 - t) * s;
  return make_instance_from_ell(a, b, lambda1, lambda2,
                                Complex(std::sqrt(l1), 0.0),
                                Complex(std::sqrt(l2), 0.0));
}

ThreefoldInstance make_instance_from_ell(double a, double b, double lambda1,
                                         double lambda2, Complex ell1,
                                         Complex ell2) {
  if (!(a > 0.0) || !(b > 0.0) || !(lambda1 > 0.0) || !(lambda2 > 0.0)) {
    throw std::invalid_argument(
        "vbma::make_instance_from_ell: a, b, lambda1, lambda2 must be "
        "positive");
  }
  const DetCoefficients dc = det_coefficients(a, b, lambda1, lambda2,
                                              std::norm(ell1), std::norm(ell2));
  const double scale = std::max({1.0, std::abs(dc.c1), std::abs(dc.c2)});
  if (std::abs(dc.c1 - dc.c2) > 1e-9 * scale) {
    throw std::invalid_argument(
        "vbma::make_instance_from_ell: ell does not satisfy the vbMA "
        "constraint c1 = c2");
  }
  if (!(dc.c1 > 0.0)) {
    throw std::invalid_argument(
        "vbma::make_instance_from_ell: rejected, c must be positive");
  }
  return ThreefoldInstance{a, b, lambda1, lambda2, ell1, ell2, dc.c1};
}

Curvature assemble_threefold(const ThreefoldInstance& inst) {
  check_instance(inst, "vbma::assemble_threefold");
  Eigen::VectorXcd ell(2);
  ell << inst.ell1, inst.ell2;
  const Mat g = -(ell * ell.adjoint());
  Mat lam = Mat::Zero(2, 2);
  lam(0, 0) = inst.lambda1;
  lam(1, 1) = inst.lambda2;
  const Mat t1 = (Mat::Identity(2, 2) - g) / (3.0 * inst.a);
  const Mat t2 = (lam - g) / (3.0 * inst.b);
  return assemble_two_block(2, t1, t2, inst.a, inst.b, ell);
}

double threefold_residual(const ThreefoldInstance& inst) {
  const Curvature theta = assemble_threefold(inst);
  const Mat top = top_over_vol(curvature_power(theta, 3));
  double dev = std::abs(top(0, 1));
  dev = std::max(dev, std::abs(top(1, 0)));
  dev = std::max(dev, std::abs(top(0, 0) - top(1, 1)));
  dev = std::max(dev, std::abs(top(0, 0).imag()));
  return dev;
}

Subspace threefold_subspace(const ThreefoldInstance& inst) {
  check_instance(inst, "vbma::threefold_subspace");
  Subspace w;
  w.basis.push_back((3.0 * inst.a * inst.b) * basis_form(3, 2, 3, 2, 1));
  w.basis.push_back(basis_form(3, 2, 1, 1, 1));
  w.basis.push_back(basis_form(3, 2, 2, 1, 1));
  w.basis.push_back(basis_form(3, 2, 1, 2, 2));
  w.basis.push_back(basis_form(3, 2, 2, 2, 2));
  return w;
}

RestrictedData build_x(const ThreefoldInstance& inst) {
  check_instance(inst, "vbma::build_x");
  const double a = inst.a;
  const double b = inst.b;
  const double l1 = std::norm(inst.ell1);
  const double l2 = std::norm(inst.ell2);

  Eigen::VectorXcd ell(2);
  ell << inst.ell1, inst.ell2;
  const Mat g = -(ell * ell.adjoint());
  Mat lam = Mat::Zero(2, 2);
  lam(0, 0) = inst.lambda1;
  lam(1, 1) = inst.lambda2;

  const EndForm xt = scalar_one_one(2, Mat::Identity(2, 2));
  const EndForm yt = scalar_one_one(2, lam);
  const EndForm ghat = scalar_one_one(2, g);
  const EndForm expr = (b * b) * wedge(xt, xt) + (a * a) * wedge(yt, yt) +
                       (a * b) * wedge(xt, yt) -
                       wedge(ghat, (b * (2.0 * b + a)) * xt +
                                       (a * (2.0 * a + b)) * yt);

  RestrictedData out;
  out.delta = real_checked(top_over_vol(expr)(0, 0), "vbma::build_x");
  if (!(out.delta > 0.0)) {
    throw std::logic_error("vbma::build_x: Delta is not positive");
  }

  out.m = Eigen::MatrixXcd::Zero(4, 4);
  out.m(0, 0) = 2.0;
  out.m(1, 1) = 2.0;
  out.m(2, 2) = 2.0 * inst.lambda2;
  out.m(3, 3) = 2.0 * inst.lambda1;
  out.m(0, 2) = -l2;
  out.m(2, 0) = -l2;
  out.m(1, 3) = -l1;
  out.m(3, 1) = -l1;
  out.m(0, 3) = inst.ell1 * std::conj(inst.ell2);
  out.m(3, 0) = inst.ell2 * std::conj(inst.ell1);
  out.m(1, 2) = inst.ell2 * std::conj(inst.ell1);
  out.m(2, 1) = inst.ell1 * std::conj(inst.ell2);

  out.w = Eigen::VectorXcd(4);
  out.w(0) = inst.ell1 * (2.0 * b + a * inst.lambda2);
  out.w(1) = inst.ell2 * (2.0 * b + a * inst.lambda1);
  out.w(2) = inst.ell1 * (b + 2.0 * a * inst.lambda2);
  out.w(3) = inst.ell2 * (b + 2.0 * a * inst.lambda1);

  out.x = out.delta * out.m - out.w * out.w.adjoint();
  return out;
}

DetCoefficients det_coefficients(double a, double b, double lambda1,
                                 double lambda2, double l1, double l2) {
  DetCoefficients dc;
  const double ellsq = l1 + l2;
  dc.c1 = 2.0 * b - a * (lambda1 * l2 + lambda2 * l1);
  dc.c2 = 2.0 * a * lambda1 * lambda2 - b * ellsq;
  dc.c3 = 2.0 * dc.c2 / a + dc.c1 * ellsq / a;
  dc.f = 4.0 * lambda1 * lambda2 * b * b +
         4.0 * lambda1 * lambda1 * lambda2 * lambda2 * a * a +
         2.0 * a * b * lambda1 * lambda2 *
             (lambda1 + lambda2 - ellsq - lambda1 * l2 - lambda2 * l1) -
         a * a * lambda1 * lambda2 *
             (lambda1 * lambda1 * l2 + lambda2 * lambda2 * l1) -
         b * b * (lambda1 * l1 + lambda2 * l2);
  const double gap = (lambda1 - lambda2) * (lambda1 - lambda2) * l1 * l2;
  dc.g2 = 2.0 * dc.f + a * b * gap;
  dc.g1 = dc.f * ellsq + a * a * lambda1 * lambda2 * gap;
  return dc;
}

DetDecomposition det_decomposition(const ThreefoldInstance& inst) {
  const RestrictedData rd = build_x(inst);
  const DetCoefficients dc =
      det_coefficients(inst.a, inst.b, inst.lambda1, inst.lambda2,
                       std::norm(inst.ell1), std::norm(inst.ell2));
  DetDecomposition out;
  out.c1 = dc.c1;
  out.c2 = dc.c2;
  out.c3 = dc.c3;
  out.f = dc.f;
  out.g1 = dc.g1;
  out.g2 = dc.g2;
  out.det_x = real_checked(rd.x.determinant(), "vbma::det_decomposition");
  out.det_identity = 2.0 * std::pow(rd.delta, 3) *
                     (dc.c2 * out.g2 + dc.c1 * out.g1) /
                     (inst.a * inst.lambda1 * inst.lambda2);
  out.det_a_block = real_checked(rd.x.topLeftCorner(2, 2).determinant(),
                                 "vbma::det_decomposition");
  const double w1sq =
      std::norm(inst.ell1) * std::pow(2.0 * inst.b + inst.a * inst.lambda2, 2) +
      std::norm(inst.ell2) * std::pow(2.0 * inst.b + inst.a * inst.lambda1, 2);
  out.det_a_identity = 2.0 * rd.delta * (2.0 * rd.delta - w1sq);
  return out;
}

Eigen::Vector2d corner_point(double a, double b, double lambda1,
                             double lambda2) {
  if (lambda1 == lambda2) {
    throw std::invalid_argument(
        "vbma::corner_point: requires lambda1 != lambda2");
  }
  Eigen::Vector2d out;
  out(0) = 2.0 * (b * b - a * a * lambda1 * lambda1 * lambda2) /
           (a * b * (lambda2 - lambda1));
  out(1) = 2.0 * (b * b - a * a * lambda1 * lambda2 * lambda2) /
           (a * b * (lambda1 - lambda2));
  return out;
}

RegionSweepReport region_p_sweep(double a, double b, double lambda1,
                                 double lambda2, int trials,
                                 std::uint64_t seed) {
  if (!(a > 0.0) || !(b > 0.0) || !(lambda1 > 0.0) || !(lambda2 > 0.0)) {
    throw std::invalid_argument(
        "vbma::region_p_sweep: a, b, lambda1, lambda2 must be positive");
  }
  if (trials < 1) {
    throw std::invalid_argument("vbma::region_p_sweep: trials must be >= 1");
  }
  const double box1 =
      std::min(2.0 * a * lambda1 * lambda2 / b, 2.0 * b / (a * lambda2));
  const double box2 =
      std::min(2.0 * a * lambda1 * lambda2 / b, 2.0 * b / (a * lambda1));
  Rng rng(seed);
  RegionSweepReport report;
  report.requested = trials;
  bool first = true;
  for (int t = 0; t < trials; ++t) {
    const double l1 = rng.uniform(0.0, box1);
    const double l2 = rng.uniform(0.0, box2);
    const DetCoefficients dc = det_coefficients(a, b, lambda1, lambda2, l1, l2);
    if (!(dc.c1 > 0.0) || !(dc.c2 > 0.0)) continue;
    ++report.accepted;
    if (first || dc.g1 < report.min_g1) report.min_g1 = dc.g1;
    if (first || dc.g2 < report.min_g2) report.min_g2 = dc.g2;
    first = false;
    if (dc.g1 <= 0.0) ++report.nonpositive_g1;
    if (dc.g2 <= 0.0) ++report.nonpositive_g2;

    const double delta = 2.0 * b * b + 2.0 * a * a * lambda1 * lambda2 +
                         a * b * (lambda1 + lambda2) +
                         b * (2.0 * b + a) * (l1 + l2) +
                         a * (2.0 * a + b) * (lambda2 * l1 + lambda1 * l2);
    Eigen::VectorXcd w(4);
    const double e1 = std::sqrt(l1);
    const double e2 = std::sqrt(l2);
    w(0) = e1 * (2.0 * b + a * lambda2);
    w(1) = e2 * (2.0 * b + a * lambda1);
    w(2) = e1 * (b + 2.0 * a * lambda2);
    w(3) = e2 * (b + 2.0 * a * lambda1);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    m(0, 0) = 2.0;
    m(1, 1) = 2.0;
    m(2, 2) = 2.0 * lambda2;
    m(3, 3) = 2.0 * lambda1;
    m(0, 2) = m(2, 0) = -l2;
    m(1, 3) = m(3, 1) = -l1;
    m(0, 3) = m(3, 0) = e1 * e2;
    m(1, 2) = m(2, 1) = e1 * e2;
    const Eigen::MatrixXcd x = delta * m - w * w.adjoint();
    const double det_direct = x.determinant().real();
    const double det_ident = 2.0 * std::pow(delta, 3) *
                             (dc.c2 * dc.g2 + dc.c1 * dc.g1) /
                             (a * lambda1 * lambda2);
    const double rel = std::abs(det_direct - det_ident) /
                       std::max(1.0, std::abs(det_ident));
    report.max_det_rel_residual = std::max(report.max_det_rel_residual, rel);
  }
  return report;
}

TwoFormSquare two_form_square(const EndForm& eta, const EndForm& p,
                              const EndForm& q, double a_coef, double b_coef,
                              Complex cc) {
  if (eta.n() != 2 || eta.r() != 1 || eta.p() != 1 || eta.q() != 1) {
    throw std::invalid_argument(
        "vbma::two_form_square: eta must be a scalar (1,1)-form on C^2");
  }
  auto check_one_zero = [](const EndForm& f, const char* name) {
    if (f.n() != 2 || f.r() != 1 || f.p() != 1 || f.q() != 0) {
      throw std::invalid_argument(std::string("vbma::two_form_square: ") +
                                  name + " must be a scalar (1,0)-form on C^2");
    }
  };
  check_one_zero(p, "p");
  check_one_zero(q, "q");

  const EndForm ppbar = kI * wedge(p, p.adjoint());
  const EndForm qqbar = kI * wedge(q, q.adjoint());
  const EndForm pqbar = kI * wedge(p, q.adjoint());
  const EndForm qpbar = kI * wedge(q, p.adjoint());

  const EndForm omega = eta + a_coef * ppbar + b_coef * qqbar + cc * pqbar +
                        std::conj(cc) * qpbar;
  const EndForm diff = omega - eta;

  const Complex direct = top_over_vol(wedge(omega, omega))(0, 0) / 2.0;
  const Complex ident =
      top_over_vol(wedge(eta, eta))(0, 0) / 2.0 +
      top_over_vol(wedge(eta, diff))(0, 0) +
      (a_coef * b_coef - std::norm(cc)) * top_over_vol(wedge(ppbar, qqbar))(0, 0);

  TwoFormSquare out;
  out.value_direct = direct.real();
  out.value_identity = ident.real();
  out.discrepancy = std::abs(direct - ident);
  return out;
}

}  // namespace vbma
