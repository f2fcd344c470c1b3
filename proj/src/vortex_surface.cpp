#include "vbma/vortex_surface.hpp"

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

void check_instance(const VortexSurfaceInstance& inst, const char* where) {
  if (inst.n < 1 || inst.c.size() != inst.n || inst.b.size() != inst.n ||
      inst.a.rows() != inst.n || inst.a.cols() != inst.n) {
    throw std::invalid_argument(std::string(where) + ": malformed instance");
  }
}

}  // namespace

VortexSurfaceInstance solve_curvature(int n, int r, double k, double t_norm_sq,
                                      const Eigen::VectorXcd& c) {
  if (n < 1) {
    throw std::invalid_argument("vbma::solve_curvature: n must be >= 1");
  }
  if (r < 1) {
    throw std::invalid_argument("vbma::solve_curvature: r must be >= 1");
  }
  if (!(k > 0.0)) {
    throw std::invalid_argument("vbma::solve_curvature: k must be positive");
  }
  if (!(t_norm_sq >= 0.0) || !(t_norm_sq < 2.0 * r + 2.0)) {
    throw std::invalid_argument(
        "vbma::solve_curvature: t_norm_sq must lie in [0, 2r + 2)");
  }
  if (c.size() != n) {
    throw std::invalid_argument("vbma::solve_curvature: c must have size n");
  }
  VortexSurfaceInstance inst;
  inst.n = n;
  inst.r = r;
  inst.k = k;
  inst.t_norm_sq = t_norm_sq;
  inst.c = c;
  inst.b = Eigen::VectorXd::Constant(n, 2.0 * r);
  inst.b(0) += t_norm_sq;
  inst.b_prime = 2.0 * r + 2.0 - t_norm_sq;
  inst.a = Mat(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex num = c(i) * std::conj(c(j));
      if (i == j) num += k;
      inst.a(i, j) = num / (inst.b(i) + inst.b(j));
    }
  }
  inst.a_prime = (k + c.squaredNorm()) / (2.0 * inst.b_prime);
  return inst;
}

VortexSurfaceInstance counterexample_instance(int n) {
  if (n < 2) {
    throw std::invalid_argument("vbma::counterexample_instance: n must be >= 2");
  }
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
  c(n - 1) = Complex(2.0 * std::sqrt(3.0), 0.0);
  return solve_curvature(n, 1, 4.0, 0.0, c);
}

double vortex_residual(const VortexSurfaceInstance& inst) {
  check_instance(inst, "vbma::vortex_residual");
  double res = 0.0;
  for (int i = 0; i < inst.n; ++i) {
    for (int j = 0; j < inst.n; ++j) {
      Complex lhs = inst.a(i, j) * (inst.b(i) + inst.b(j)) -
                    inst.c(i) * std::conj(inst.c(j));
      if (i == j) lhs -= inst.k;
      res = std::max(res, std::abs(lhs));
    }
  }
  const double scalar = 2.0 * inst.a_prime * inst.b_prime -
                        inst.c.squaredNorm() - inst.k;
  return std::max(res, std::abs(scalar));
}

Curvature assemble_curvature(const VortexSurfaceInstance& inst) {
  check_instance(inst, "vbma::assemble_curvature");
  const int rk = inst.n + 1;
  Mat h11 = Mat::Zero(rk, rk);
  h11.topLeftCorner(inst.n, inst.n) = inst.a;
  h11(inst.n, inst.n) = inst.a_prime;
  Mat h22 = Mat::Zero(rk, rk);
  for (int i = 0; i < inst.n; ++i) h22(i, i) = inst.b(i);
  h22(inst.n, inst.n) = inst.b_prime;
  Mat h12 = Mat::Zero(rk, rk);
  h12.col(inst.n).head(inst.n) = inst.c;
  return Curvature::from_blocks(2, {{h11, h12}, {Mat(h12.adjoint()), h22}});
}

BForms b_forms(const VortexSurfaceInstance& inst) {
  check_instance(inst, "vbma::b_forms");
  const int n = inst.n;
  const int rk = n + 1;
  BForms out;

  // B1 over (alpha dz^1, gamma dz^2, delta dz^1).
  {
    const int dim = n * n + n + 1;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    std::vector<EndForm> basis;
    basis.reserve(dim);
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) basis.push_back(basis_form(2, rk, 1, i, j));
    }
    for (int j = 1; j <= n; ++j) basis.push_back(basis_form(2, rk, 2, rk, j));
    basis.push_back(basis_form(2, rk, 1, rk, rk));

    const int goff = n * n;
    const int didx = n * n + n;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const int p = i * n + j;
        h(p, p) = inst.b(i) + inst.b(j);
        h(p, goff + j) = -inst.c(i);
        h(goff + j, p) = -std::conj(inst.c(i));
      }
    }
    h.block(goff, goff, n, n) = inst.a.conjugate();
    for (int i = 0; i < n; ++i) h(goff + i, goff + i) += inst.a_prime;
    h(didx, didx) = 2.0 * inst.b_prime;
    for (int i = 0; i < n; ++i) {
      h(didx, goff + i) = -inst.c(i);
      h(goff + i, didx) = -std::conj(inst.c(i));
    }
    out.b1 = MaGram{std::move(h), std::move(basis)};
  }

  // B2 over (alpha dz^2, beta dz^1, delta dz^2).
  {
    const int dim = n * n + n + 1;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    std::vector<EndForm> basis;
    basis.reserve(dim);
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) basis.push_back(basis_form(2, rk, 2, i, j));
    }
    for (int i = 1; i <= n; ++i) basis.push_back(basis_form(2, rk, 1, i, rk));
    basis.push_back(basis_form(2, rk, 2, rk, rk));

    const int boff = n * n;
    const int didx = n * n + n;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int kk = 0; kk < n; ++kk) {
          for (int l = 0; l < n; ++l) {
            Complex value(0.0, 0.0);
            if (j == l) value += inst.a(i, kk);
            if (i == kk) value += inst.a(l, j);
            if (value != Complex(0.0, 0.0)) h(i * n + j, kk * n + l) = value;
          }
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      h(boff + i, boff + i) = inst.b(i) + inst.b_prime;
      h(didx, boff + i) = -std::conj(inst.c(i));
      h(boff + i, didx) = -inst.c(i);
      for (int j = 0; j < n; ++j) {
        h(boff + i, i * n + j) = -inst.c(j);
        h(i * n + j, boff + i) = -std::conj(inst.c(j));
      }
    }
    h(didx, didx) = 2.0 * inst.a_prime;
    out.b2 = MaGram{std::move(h), std::move(basis)};
  }

  // B3 over beta dz^2.
  {
    Eigen::MatrixXcd h = inst.a;
    for (int i = 0; i < n; ++i) h(i, i) += inst.a_prime;
    std::vector<EndForm> basis;
    for (int i = 1; i <= n; ++i) basis.push_back(basis_form(2, rk, 2, i, rk));
    out.b3 = MaGram{std::move(h), std::move(basis)};
  }

  // B4 over gamma dz^1.
  {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) h(j, j) = inst.b(j) + inst.b_prime;
    std::vector<EndForm> basis;
    for (int j = 1; j <= n; ++j) basis.push_back(basis_form(2, rk, 1, rk, j));
    out.b4 = MaGram{std::move(h), std::move(basis)};
  }

  return out;
}

SchurChain schur_chain(const VortexSurfaceInstance& inst) {
  check_instance(inst, "vbma::schur_chain");
  const int n = inst.n;
  const int dim = n * n + n + 1;
  const int goff = n * n;
  const int didx = n * n + n;

  SchurChain chain;
  // M carries B1 in conjugated coordinates: the value of the form on a
  // coefficient vector u is u^T M conj(u).
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int p = i * n + j;
      m(p, p) = inst.b(i) + inst.b(j);
      m(goff + j, p) = -inst.c(i);
      m(p, goff + j) = -std::conj(inst.c(i));
    }
  }
  m.block(goff, goff, n, n) = inst.a;
  for (int i = 0; i < n; ++i) m(goff + i, goff + i) += inst.a_prime;
  for (int i = 0; i < n; ++i) {
    m(goff + i, didx) = -inst.c(i);
    m(didx, goff + i) = -std::conj(inst.c(i));
  }
  m(didx, didx) = 2.0 * inst.b_prime;
  chain.mcal = m;

  // Eliminate the alpha coordinates; their block is diagonal.
  Eigen::MatrixXcd p = m.block(goff, goff, n + 1, n + 1);
  for (int a = 0; a < n * n; ++a) {
    const double piv = m(a, a).real();
    for (int x = 0; x < n + 1; ++x) {
      for (int y = 0; y < n + 1; ++y) {
        p(x, y) -= m(goff + x, a) * m(a, goff + y) / piv;
      }
    }
  }
  chain.pcal = p;

  // Eliminate delta, the last coordinate.
  Eigen::MatrixXcd rmat = p.topLeftCorner(n, n);
  const double dpiv = p(n, n).real();
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      rmat(x, y) -= p(x, n) * p(n, y) / dpiv;
    }
  }
  chain.rcal = rmat;

  chain.v = inst.c.tail(n - 1);
  const double b1 = inst.b(0);
  const double br = 2.0 * inst.r;
  const double vsq = chain.v.squaredNorm();
  const double c1sq = std::norm(inst.c(0));
  chain.pprime = inst.k / (2.0 * b1) + inst.a_prime - vsq / (b1 + br) -
                 c1sq / (2.0 * inst.b_prime);
  chain.qprime = std::conj(inst.c(0)) *
                 (1.0 / (b1 + br) - 1.0 / (2.0 * inst.b_prime));
  chain.rprime = inst.k / (2.0 * br) + inst.a_prime - vsq / (2.0 * br) -
                 c1sq / (b1 + br);
  chain.sprime = 1.0 / (2.0 * br) - 1.0 / (2.0 * inst.b_prime);

  Eigen::MatrixXcd closed = Eigen::MatrixXcd::Zero(n, n);
  closed(0, 0) = chain.pprime;
  for (int i = 1; i < n; ++i) {
    closed(i, 0) = chain.qprime * chain.v(i - 1);
    closed(0, i) = std::conj(closed(i, 0));
    for (int j = 1; j < n; ++j) {
      closed(i, j) = chain.sprime * chain.v(i - 1) * std::conj(chain.v(j - 1));
      if (i == j) closed(i, j) += chain.rprime;
    }
  }
  chain.structure_residual = (rmat - closed).cwiseAbs().maxCoeff();
  return chain;
}

const char* to_string(SemidefCase value) {
  switch (value) {
    case SemidefCase::Positive:
      return "Positive";
    case SemidefCase::Case1:
      return "Case1";
    case SemidefCase::Case2:
      return "Case2";
    case SemidefCase::Indefinite:
      return "Indefinite";
  }
  return "Unknown";
}

SemidefCase classify_semidef_case(const SchurChain& chain, double tol) {
  const int n = static_cast<int>(chain.rcal.rows());
  const Verdict verdict = classify(chain.rcal, tol);
  if (verdict.kind == VerdictKind::Positive) return SemidefCase::Positive;
  if (verdict.kind == VerdictKind::Indefinite) return SemidefCase::Indefinite;

  const double teff = verdict.tol;
  const int nv = n - 1;
  const Eigen::MatrixXcd vv = chain.v * chain.v.adjoint();
  const Eigen::MatrixXcd tail_block =
      chain.rprime * Eigen::MatrixXcd::Identity(nv, nv) + chain.sprime * vv;

  const double qv_norm =
      nv > 0 ? (chain.qprime * chain.v).cwiseAbs().maxCoeff() : 0.0;
  if (std::abs(chain.pprime) <= teff && qv_norm <= teff &&
      classify(tail_block, teff).kind != VerdictKind::Indefinite) {
    return SemidefCase::Case1;
  }
  if (chain.pprime > teff) {
    const double shift = chain.sprime - std::norm(chain.qprime) / chain.pprime;
    const Eigen::MatrixXcd compl_block =
        chain.rprime * Eigen::MatrixXcd::Identity(nv, nv) + shift * vv;
    if (classify(compl_block, teff).kind == VerdictKind::StrictlySemiPositive) {
      return SemidefCase::Case2;
    }
  }
  throw std::logic_error(
      "vbma::classify_semidef_case: degenerate semipositive end matrix fits "
      "neither expected case");
}

SemidefCase classify_semidef_case(const VortexSurfaceInstance& inst, double tol) {
  return classify_semidef_case(schur_chain(inst), tol);
}

bool case1_characteristic(const VortexSurfaceInstance& inst, double tol) {
  const double target = inst.k * (2.0 * inst.r + 1.0);
  return std::abs(inst.t_norm_sq) <= tol &&
         std::abs(inst.c.squaredNorm() - target) <= tol * std::max(1.0, target);
}

LiftedInstance lift(const VortexSurfaceInstance& inst, int m) {
  if (m < 1 || 2 + m > kMaxDim) {
    throw std::invalid_argument("vbma::lift: m must satisfy 1 <= m <= " +
                                std::to_string(kMaxDim - 2));
  }
  const Curvature base = assemble_curvature(inst);
  const int rk = inst.n + 1;
  const int dim = 2 + m;
  std::vector<std::vector<Mat>> blocks(
      dim, std::vector<Mat>(dim, Mat::Zero(rk, rk)));
  for (int mu = 1; mu <= 2; ++mu) {
    for (int nu = 1; nu <= 2; ++nu) blocks[mu - 1][nu - 1] = base.block(mu, nu);
  }
  for (int j = 2; j < dim; ++j) blocks[j][j] = Mat::Identity(rk, rk);
  return LiftedInstance{inst, m, Curvature::from_blocks(dim, blocks)};
}

double lift_power_residual(const LiftedInstance& lifted) {
  const int dim = 2 + lifted.m;
  double factorial = 1.0;
  for (int j = 2; j <= dim; ++j) factorial *= j;
  const double target = lifted.base.k * factorial / 2.0;
  Mat top = top_over_vol(curvature_power(lifted.phi, dim));
  top -= target * Mat::Identity(top.rows(), top.cols());
  return top.cwiseAbs().maxCoeff();
}

double theta_d_wedge_trace(const Curvature& theta, const Mat& d) {
  if (theta.n() != 2) {
    throw std::invalid_argument(
        "vbma::theta_d_wedge_trace: base dimension must be 2");
  }
  if (d.rows() != theta.r() || d.cols() != theta.r()) {
    throw std::invalid_argument(
        "vbma::theta_d_wedge_trace: endomorphism size must match the rank");
  }
  const EndForm fd = theta.form().right_mul(d);
  const EndForm fdstar = theta.form().right_mul(d.adjoint());
  const Complex value = top_over_vol(wedge(fd, fdstar).trace())(0, 0);
  return real_checked(value, "vbma::theta_d_wedge_trace");
}

double sufficient_positivity_value(const Curvature& theta, const Mat& d) {
  if (theta.n() != 2) {
    throw std::invalid_argument(
        "vbma::sufficient_positivity_value: base dimension must be 2");
  }
  if (d.rows() != theta.r() || d.cols() != theta.r()) {
    throw std::invalid_argument(
        "vbma::sufficient_positivity_value: endomorphism size must match the "
        "rank");
  }
  const Mat s = top_over_vol(curvature_power(theta, 2));
  const Complex quad = (s * (d * d.adjoint() + d.adjoint() * d)).trace();
  return real_checked(quad, "vbma::sufficient_positivity_value") +
         theta_d_wedge_trace(theta, d);
}

}  // namespace vbma
