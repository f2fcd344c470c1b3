#include "vbma/end_form.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace vbma {

namespace {

void check_capacity(int n, int r) {
  if (n < 1 || n > kMaxDim)
    throw std::invalid_argument("vbma::EndForm: dimension n = " + std::to_string(n) +
                                " outside supported range [1, " + std::to_string(kMaxDim) + "]");
  if (r < 1 || r > kMaxRank)
    throw std::invalid_argument("vbma::EndForm: rank r = " + std::to_string(r) +
                                " outside supported range [1, " + std::to_string(kMaxRank) + "]");
}

void check_same_shape(const EndForm& f, const EndForm& g, const char* op) {
  if (f.n() != g.n() || f.r() != g.r())
    throw std::invalid_argument(std::string("vbma::EndForm: ") + op +
                                " requires matching dimension and rank");
}

}  // namespace

int mask_degree(IndexMask m) { return std::popcount(m); }

std::vector<int> mask_indices(IndexMask m) {
  std::vector<int> out;
  for (int i = 0; m != 0; ++i, m >>= 1)
    if (m & 1u) out.push_back(i + 1);
  return out;
}

int merge_sign(IndexMask a, IndexMask b) {
  // Parity of the number of pairs (x in a, y in b) with x > y: each such pair
  // is an inversion when the concatenation (a, b) is sorted.
  int inversions = 0;
  IndexMask rest = b;
  while (rest != 0) {
    IndexMask low = rest & (~rest + 1u);
    IndexMask above = a & ~((low << 1) - 1u);
    inversions += std::popcount(above);
    rest ^= low;
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

EndForm::EndForm(int n, int r, int p, int q) : n_(n), r_(r), p_(p), q_(q) {
  check_capacity(n, r);
  if (p < 0 || q < 0)
    throw std::invalid_argument("vbma::EndForm: negative form degree");
}

void EndForm::set(FormKey key, const Mat& value) {
  IndexMask full = (n_ >= 32) ? ~0u : ((1u << n_) - 1u);
  if ((key.hol & ~full) != 0 || (key.anti & ~full) != 0)
    throw std::invalid_argument("vbma::EndForm::set: index outside {1..n}");
  if (mask_degree(key.hol) != p_ || mask_degree(key.anti) != q_)
    throw std::invalid_argument("vbma::EndForm::set: key degree does not match form bidegree");
  if (value.rows() != r_ || value.cols() != r_)
    throw std::invalid_argument("vbma::EndForm::set: coefficient must be r x r");
  coeffs_[key] = value;
}

void EndForm::add_to(FormKey key, const Mat& value) {
  auto it = coeffs_.find(key);
  if (it == coeffs_.end())
    set(key, value);
  else
    it->second += value;
}

Mat EndForm::at(FormKey key) const {
  auto it = coeffs_.find(key);
  if (it == coeffs_.end()) return Mat::Zero(r_, r_);
  return it->second;
}

EndForm& EndForm::operator+=(const EndForm& other) {
  check_same_shape(*this, other, "addition");
  if (p_ != other.p_ || q_ != other.q_)
    throw std::invalid_argument("vbma::EndForm: addition requires matching bidegree");
  for (const auto& [key, value] : other.coeffs_) add_to(key, value);
  return *this;
}

EndForm& EndForm::operator-=(const EndForm& other) {
  check_same_shape(*this, other, "subtraction");
  if (p_ != other.p_ || q_ != other.q_)
    throw std::invalid_argument("vbma::EndForm: subtraction requires matching bidegree");
  for (const auto& [key, value] : other.coeffs_) add_to(key, -value);
  return *this;
}

EndForm& EndForm::operator*=(Complex scalar) {
  for (auto& [key, value] : coeffs_) value *= scalar;
  return *this;
}

EndForm EndForm::adjoint() const {
  EndForm out(n_, r_, q_, p_);
  double sign = ((p_ * q_) % 2 == 0) ? 1.0 : -1.0;
  for (const auto& [key, value] : coeffs_)
    out.coeffs_[FormKey{key.anti, key.hol}] = sign * value.adjoint();
  return out;
}

EndForm EndForm::left_mul(const Mat& m) const {
  if (m.rows() != r_ || m.cols() != r_)
    throw std::invalid_argument("vbma::EndForm::left_mul: endomorphism must be r x r");
  EndForm out(n_, r_, p_, q_);
  for (const auto& [key, value] : coeffs_) out.coeffs_[key] = m * value;
  return out;
}

EndForm EndForm::right_mul(const Mat& m) const {
  if (m.rows() != r_ || m.cols() != r_)
    throw std::invalid_argument("vbma::EndForm::right_mul: endomorphism must be r x r");
  EndForm out(n_, r_, p_, q_);
  for (const auto& [key, value] : coeffs_) out.coeffs_[key] = value * m;
  return out;
}

EndForm EndForm::trace() const {
  EndForm out(n_, 1, p_, q_);
  for (const auto& [key, value] : coeffs_) {
    Mat t(1, 1);
    t(0, 0) = value.trace();
    out.coeffs_[key] = t;
  }
  return out;
}

double EndForm::max_norm() const {
  double m = 0.0;
  for (const auto& [key, value] : coeffs_)
    m = std::max(m, value.cwiseAbs().maxCoeff());
  return m;
}

EndForm wedge(const EndForm& f, const EndForm& g) {
  check_same_shape(f, g, "wedge");
  EndForm out(f.n(), f.r(), f.p() + g.p(), f.q() + g.q());
  // Moving g's holomorphic block left across f's antiholomorphic block costs
  // one sign per crossing of two odd-degree factors.
  double cross = ((f.q() * g.p()) % 2 == 0) ? 1.0 : -1.0;
  for (const auto& [kf, vf] : f.coeffs()) {
    for (const auto& [kg, vg] : g.coeffs()) {
      if ((kf.hol & kg.hol) != 0 || (kf.anti & kg.anti) != 0) continue;
      double s = cross * merge_sign(kf.hol, kg.hol) * merge_sign(kf.anti, kg.anti);
      out.add_to(FormKey{kf.hol | kg.hol, kf.anti | kg.anti}, s * (vf * vg));
    }
  }
  return out;
}

Complex vol_unit(int n) {
  static const Complex i_pow[4] = {Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)};
  Complex u = i_pow[n % 4];
  if ((n * (n - 1) / 2) % 2 != 0) u = -u;
  return u;
}

Mat top_over_vol(const EndForm& f) {
  if (f.p() != f.n() || f.q() != f.n())
    throw std::invalid_argument("vbma::top_over_vol: form is not of top bidegree (n,n)");
  IndexMask full = (1u << f.n()) - 1u;
  return f.at(FormKey{full, full}) / vol_unit(f.n());
}

}  // namespace vbma
