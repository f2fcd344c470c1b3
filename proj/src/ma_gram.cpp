#include "vbma/ma_gram.hpp"

#include "vbma/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vbma {

namespace {

const Complex kI(0.0, 1.0);

void check_one_form(const Curvature& theta, const EndForm& a, const char* where) {
  if (a.n() != theta.n() || a.r() != theta.r()) {
    throw std::invalid_argument(std::string(where) +
                                ": form does not match the curvature shape");
  }
  if (a.p() != 1 || a.q() != 0) {
    throw std::invalid_argument(std::string(where) +
                                ": expected an End-valued (1,0)-form");
  }
}

double real_checked(Complex value, const char* where) {
  const double scale = std::max(1.0, std::abs(value.real()));
  if (std::abs(value.imag()) > 1e-10 * scale) {
    throw std::logic_error(std::string(where) + ": value is not real (imag = " +
                           std::to_string(value.imag()) + ")");
  }
  return value.real();
}

// Frobenius pairing <f, g> = sum over coefficients of conj(f) * g.
Complex frobenius(const EndForm& f, const EndForm& g) {
  Complex acc(0.0, 0.0);
  for (const auto& [key, mf] : f.coeffs()) {
    const Mat mg = g.at(key);
    acc += (mf.conjugate().cwiseProduct(mg)).sum();
  }
  return acc;
}

}  // namespace

const char* to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Positive:
      return "Positive";
    case VerdictKind::StrictlySemiPositive:
      return "StrictlySemiPositive";
    case VerdictKind::Indefinite:
      return "Indefinite";
    case VerdictKind::Zero:
      return "Zero";
  }
  return "Unknown";
}

EndForm basis_form(int n, int r, int mu, int i, int j) {
  if (mu < 1 || mu > n || i < 1 || i > r || j < 1 || j > r) {
    throw std::invalid_argument("vbma::basis_form: index out of range");
  }
  EndForm e(n, r, 1, 0);
  Mat unit = Mat::Zero(r, r);
  unit(i - 1, j - 1) = Complex(1.0, 0.0);
  e.set(FormKey{static_cast<IndexMask>(1u << (mu - 1)), 0u}, unit);
  return e;
}

std::vector<EndForm> full_basis(int n, int r) {
  std::vector<EndForm> basis;
  basis.reserve(static_cast<std::size_t>(n) * r * r);
  for (int mu = 1; mu <= n; ++mu) {
    for (int i = 1; i <= r; ++i) {
      for (int j = 1; j <= r; ++j) {
        basis.push_back(basis_form(n, r, mu, i, j));
      }
    }
  }
  return basis;
}

double ma_quadratic_form(const Curvature& theta, const EndForm& a) {
  check_one_form(theta, a, "vbma::ma_quadratic_form");
  const int n = theta.n();
  std::vector<EndForm> powers;
  powers.reserve(n);
  for (int k = 0; k < n; ++k) powers.push_back(curvature_power(theta, k));

  const EndForm ia = kI * a;
  const EndForm astar = a.adjoint();
  Complex acc(0.0, 0.0);
  for (int k = 0; k < n; ++k) {
    const EndForm term =
        wedge(wedge(ia, powers[k]), wedge(astar, powers[n - 1 - k]));
    acc += top_over_vol(term.trace())(0, 0);
  }
  return real_checked(acc, "vbma::ma_quadratic_form");
}

namespace {

MaGram polarize(const Curvature& theta, std::vector<EndForm> basis) {
  const int d = static_cast<int>(basis.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  auto q = [&theta](const EndForm& a) { return ma_quadratic_form(theta, a); };
  for (int p = 0; p < d; ++p) {
    h(p, p) = Complex(q(basis[p]), 0.0);
    for (int s = p + 1; s < d; ++s) {
      const double q_plus = q(basis[p] + basis[s]);
      const double q_minus = q(basis[p] - basis[s]);
      const double q_iplus = q(basis[p] + kI * basis[s]);
      const double q_iminus = q(basis[p] - kI * basis[s]);
      const Complex value = Complex(0.25 * (q_plus - q_minus), 0.0) -
                            0.25 * kI * Complex(q_iplus - q_iminus, 0.0);
      h(p, s) = value;
      h(s, p) = std::conj(value);
    }
  }
  return MaGram{std::move(h), std::move(basis)};
}

}  // namespace

MaGram gram_matrix(const Curvature& theta) {
  return polarize(theta, full_basis(theta.n(), theta.r()));
}

MaGram gram_matrix(const Curvature& theta, const Subspace& w) {
  if (w.basis.empty()) {
    throw std::invalid_argument("vbma::gram_matrix: empty subspace basis");
  }
  for (const EndForm& e : w.basis) {
    check_one_form(theta, e, "vbma::gram_matrix");
  }
  const int d = static_cast<int>(w.basis.size());
  Eigen::MatrixXcd frob(d, d);
  for (int p = 0; p < d; ++p) {
    for (int s = 0; s < d; ++s) frob(p, s) = frobenius(w.basis[p], w.basis[s]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(frob);
  const double top = es.eigenvalues()(d - 1);
  if (!(es.eigenvalues()(0) > 1e-12 * std::max(1.0, top))) {
    throw std::invalid_argument(
        "vbma::gram_matrix: subspace basis is linearly dependent");
  }
  return polarize(theta, w.basis);
}

Verdict classify(const Eigen::MatrixXcd& h, double tol) {
  if (h.rows() != h.cols()) {
    throw std::invalid_argument("vbma::classify: matrix is not square");
  }
  const int d = static_cast<int>(h.rows());
  Verdict out;
  if (d == 0) {
    out.kind = VerdictKind::Zero;
    out.tol = tol >= 0.0 ? tol : 1e-12;
    return out;
  }
  const double scale = h.cwiseAbs().maxCoeff();
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale)) {
    throw std::invalid_argument("vbma::classify: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXd eigs = es.eigenvalues();
  const double spectral = std::max(std::abs(eigs(0)), std::abs(eigs(d - 1)));
  const double tol_eff = tol >= 0.0 ? tol : std::max(1e-12, 1e-8 * spectral);

  out.tol = tol_eff;
  out.min_eigenvalue = eigs(0);
  out.witness = es.eigenvectors().col(0);
  out.kernel_dimension = 0;
  for (int k = 0; k < d; ++k) {
    if (std::abs(eigs(k)) <= tol_eff) ++out.kernel_dimension;
  }
  if (spectral <= tol_eff) {
    out.kind = VerdictKind::Zero;
    out.kernel_dimension = d;
  } else if (eigs(0) > tol_eff) {
    out.kind = VerdictKind::Positive;
  } else if (eigs(0) >= -tol_eff) {
    out.kind = VerdictKind::StrictlySemiPositive;
  } else {
    out.kind = VerdictKind::Indefinite;
  }
  return out;
}

Verdict classify(const MaGram& gram, double tol) { return classify(gram.matrix, tol); }

double monte_carlo_min(const Curvature& theta, const std::vector<EndForm>& basis,
                       int trials, std::uint64_t seed) {
  if (basis.empty()) {
    throw std::invalid_argument("vbma::monte_carlo_min: empty basis");
  }
  if (trials < 1) {
    throw std::invalid_argument("vbma::monte_carlo_min: trials must be >= 1");
  }
  for (const EndForm& e : basis) check_one_form(theta, e, "vbma::monte_carlo_min");
  const int d = static_cast<int>(basis.size());
  Rng rng(seed);
  double best = 0.0;
  bool first = true;
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd v = rng.cgauss_vector(d);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    v /= norm;
    EndForm a(theta.n(), theta.r(), 1, 0);
    for (int p = 0; p < d; ++p) a += v(p) * basis[p];
    const double value = ma_quadratic_form(theta, a);
    if (first || value < best) {
      best = value;
      first = false;
    }
  }
  return best;
}

double monte_carlo_min(const Curvature& theta, int trials, std::uint64_t seed) {
  return monte_carlo_min(theta, full_basis(theta.n(), theta.r()), trials, seed);
}

double monte_carlo_min(const Curvature& theta, const Subspace& w, int trials,
                       std::uint64_t seed) {
  return monte_carlo_min(theta, w.basis, trials, seed);
}

DecoupledBlocks decoupling_blocks(const Curvature& theta, int sub_rank) {
  if (theta.n() != 2) {
    throw std::invalid_argument("vbma::decoupling_blocks: base dimension must be 2");
  }
  if (sub_rank < 1 || theta.r() != sub_rank + 1) {
    throw std::invalid_argument(
        "vbma::decoupling_blocks: rank must equal sub_rank + 1");
  }
  const int s = sub_rank;
  const int r = theta.r();

  const Mat h11 = theta.block(1, 1);
  const Mat h22 = theta.block(2, 2);
  const Mat h12 = theta.block(1, 2);
  double scale = 1.0;
  scale = std::max(scale, h11.cwiseAbs().maxCoeff());
  scale = std::max(scale, h22.cwiseAbs().maxCoeff());
  scale = std::max(scale, h12.cwiseAbs().maxCoeff());
  const double tol_sparse = 1e-12 * scale;

  for (int i = 0; i < s; ++i) {
    if (std::abs(h11(i, r - 1)) > tol_sparse || std::abs(h11(r - 1, i)) > tol_sparse ||
        std::abs(h22(i, r - 1)) > tol_sparse || std::abs(h22(r - 1, i)) > tol_sparse) {
      throw std::invalid_argument(
          "vbma::decoupling_blocks: diagonal blocks must not couple the last "
          "bundle direction");
    }
  }
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      const bool allowed = (i < s && j == r - 1);
      if (!allowed && std::abs(h12(i, j)) > tol_sparse) {
        throw std::invalid_argument(
            "vbma::decoupling_blocks: off-diagonal block must be supported on "
            "the last column");
      }
    }
  }

  const MaGram full = gram_matrix(theta);
  const int d = full.dim();

  // Group ids follow the header comment; indices into the full basis use the
  // layout (mu-1)*r*r + (i-1)*r + (j-1).
  std::vector<int> group(d, 0);
  for (int mu = 1; mu <= 2; ++mu) {
    for (int i = 1; i <= r; ++i) {
      for (int j = 1; j <= r; ++j) {
        const int idx = (mu - 1) * r * r + (i - 1) * r + (j - 1);
        int g = 0;
        if (i <= s && j <= s) {
          g = (mu == 1) ? 1 : 2;
        } else if (i <= s && j == r) {
          g = (mu == 1) ? 2 : 3;
        } else if (i == r && j <= s) {
          g = (mu == 1) ? 4 : 1;
        } else {
          g = (mu == 1) ? 1 : 2;
        }
        group[idx] = g;
      }
    }
  }

  DecoupledBlocks out;
  const double gram_scale = std::max(1.0, full.matrix.cwiseAbs().maxCoeff());
  for (int p = 0; p < d; ++p) {
    for (int q = 0; q < d; ++q) {
      if (group[p] != group[q]) {
        out.off_block_max = std::max(out.off_block_max, std::abs(full.matrix(p, q)));
      }
    }
  }
  if (out.off_block_max > 1e-12 * gram_scale) {
    throw std::logic_error(
        "vbma::decoupling_blocks: Gram matrix mixes the four groups");
  }

  for (int g = 1; g <= 4; ++g) {
    std::vector<int> idx;
    for (int p = 0; p < d; ++p) {
      if (group[p] == g) idx.push_back(p);
    }
    MaGram block;
    block.matrix = Eigen::MatrixXcd(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) {
      block.basis.push_back(full.basis[idx[a]]);
      for (std::size_t b = 0; b < idx.size(); ++b) {
        block.matrix(a, b) = full.matrix(idx[a], idx[b]);
      }
    }
    out.blocks.push_back(std::move(block));
  }
  return out;
}

}  // namespace vbma
