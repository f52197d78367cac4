#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace grassmu::rng {

// Seeded sampler with hand-rolled distributions.  std::mt19937_64 output is
// fixed by the standard but the std distributions are not, so every
// transformation here is spelled out to keep streams identical across
// platforms and library versions.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Box-Muller; draws exactly two uniforms per call.
  double gaussian() {
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  Eigen::VectorXd gaussian_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = gaussian();
    return v;
  }

  Eigen::MatrixXd gaussian_matrix(int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = gaussian();
    return m;
  }

  // Uniform over the solid ball of the given radius in R^4.
  Eigen::Vector4d in_ball(const Eigen::Vector4d& center, double radius) {
    Eigen::Vector4d dir;
    double norm = 0.0;
    do {
      for (int i = 0; i < 4; ++i) dir(i) = gaussian();
      norm = dir.norm();
    } while (norm == 0.0);
    const double r = radius * std::pow(uniform01(), 0.25);
    return center + (r / norm) * dir;
  }

  // Uniform over SO(3) via a normalized quaternion.
  Eigen::Matrix3d rotation() {
    Eigen::Vector4d q;
    double norm = 0.0;
    do {
      for (int i = 0; i < 4; ++i) q(i) = gaussian();
      norm = q.norm();
    } while (norm == 0.0);
    q /= norm;
    const double w = q(0), x = q(1), y = q(2), z = q(3);
    Eigen::Matrix3d r;
    r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
        2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
        2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return r;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace grassmu::rng
