#pragma once

#include <Eigen/Dense>

#include <compare>
#include <complex>
#include <map>
#include <vector>

// Endomorphism-valued (p,q)-forms on C^n with exact coefficient bookkeeping.
//
// Conventions used throughout the library:
//  * A multi-index is a strictly increasing tuple over {1..n}, stored as a
//    bitmask (bit i-1 set means dz^i, resp. dz-bar^i, is present).
//  * coefficient(I, J) is the raw coefficient of dz^I wedge dzbar^J, with
//    both factors written in increasing order and all holomorphic factors
//    to the left of all antiholomorphic ones.
//  * Factors of i are stored literally inside the coefficients. A curvature
//    form i*Theta = sum i H_{mu,nu} dz^mu wedge dzbar^nu therefore carries
//    the raw coefficient i*H_{mu,nu} at key ({mu},{nu}).
//  * The reference volume form is vol = prod_i (i dz^i wedge dzbar^i)
//    = i^n (-1)^{n(n-1)/2} dz^{1..n} wedge dzbar^{1..n}.

namespace vbma {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline constexpr int kMaxDim = 4;
inline constexpr int kMaxRank = 8;

using IndexMask = unsigned int;

// Number of indices in the mask.
int mask_degree(IndexMask m);

// Indices of the mask as a 1-based increasing list.
std::vector<int> mask_indices(IndexMask m);

// Sign of the shuffle that merges two disjoint increasing index tuples into
// one increasing tuple, left tuple first. Requires a & b == 0.
int merge_sign(IndexMask a, IndexMask b);

struct FormKey {
  IndexMask hol = 0;
  IndexMask anti = 0;
  auto operator<=>(const FormKey&) const = default;
};

class EndForm {
 public:
  EndForm(int n, int r, int p, int q);

  int n() const { return n_; }
  int r() const { return r_; }
  int p() const { return p_; }
  int q() const { return q_; }

  const std::map<FormKey, Mat>& coeffs() const { return coeffs_; }

  // Overwrites the coefficient at key. The key must consist of p holomorphic
  // and q antiholomorphic indices within {1..n}; value must be r x r.
  void set(FormKey key, const Mat& value);
  void add_to(FormKey key, const Mat& value);

  // Coefficient at key, or the zero matrix if absent.
  Mat at(FormKey key) const;

  EndForm& operator+=(const EndForm& other);
  EndForm& operator-=(const EndForm& other);
  EndForm& operator*=(Complex scalar);

  friend EndForm operator+(EndForm lhs, const EndForm& rhs) { return lhs += rhs; }
  friend EndForm operator-(EndForm lhs, const EndForm& rhs) { return lhs -= rhs; }
  friend EndForm operator*(Complex scalar, EndForm f) { return f *= scalar; }

  // Conjugate-transpose form: a (q,p)-form with (f*)_{J,I} = (-1)^{pq} (f_{I,J})^dag.
  EndForm adjoint() const;

  // Coefficients multiplied by a constant endomorphism on the given side.
  EndForm left_mul(const Mat& m) const;
  EndForm right_mul(const Mat& m) const;

  // Fibrewise trace; the result is a scalar-valued (r = 1) form.
  EndForm trace() const;

  // Largest absolute value over all coefficient entries.
  double max_norm() const;

 private:
  int n_, r_, p_, q_;
  std::map<FormKey, Mat> coeffs_;
};

// Graded wedge product; coefficients multiply as matrices in the given order.
EndForm wedge(const EndForm& f, const EndForm& g);

// Unit relating the raw top coefficient to the reference volume form:
// vol = vol_unit(n) * dz^{1..n} wedge dzbar^{1..n}.
Complex vol_unit(int n);

// Top coefficient of an (n,n)-form expressed as a multiple of vol.
Mat top_over_vol(const EndForm& f);

}  // namespace vbma
