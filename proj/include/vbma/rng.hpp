#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>

// Deterministic random source for the randomized suites and golden tests.
//
// Fixed algorithms (do not change without regenerating golden values):
//  * engine: std::mt19937_64 seeded directly with the 64-bit seed;
//  * uniform01: (next_u64() >> 11) * 2^-53, giving values in [0, 1);
//  * normal: Box-Muller on uniform01 pairs, second variate cached;
//  * sub-seed split: splitmix64(master + (key + 1) * 0x9E3779B97F4A7C15).

namespace vbma {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t sub_seed(std::uint64_t master, std::uint64_t key);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Log-uniform over [lo, hi]; requires 0 < lo < hi.
  double log_uniform(double lo, double hi);

  double normal();

  // Standard complex Gaussian with independent N(0,1) real and imaginary parts.
  std::complex<double> cgauss() { return {normal(), normal()}; }

  Eigen::VectorXcd cgauss_vector(int dim);
  Eigen::MatrixXcd cgauss_matrix(int rows, int cols);

  // Random Hermitian matrix (G + G^dag)/2 with G complex Gaussian.
  Eigen::MatrixXcd hermitian(int dim);

  // Random Hermitian positive-definite matrix G G^dag + ridge * Id.
  Eigen::MatrixXcd hermitian_pd(int dim, double ridge = 0.1);

 private:
  std::mt19937_64 engine_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace vbma
