#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace multitime {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

// Kronecker product of dense complex matrices (column vectors included).
template <class A, class B>
Mat kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Least-squares slope of y against x.
inline double fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_slope: need at least two matched samples");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

// Slope of log|y| vs log(x), for convergence-order estimates.
inline double fit_loglog_slope(std::span<const double> h, std::span<const double> err) {
  std::vector<double> lx(h.size()), ly(err.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    lx[i] = std::log(h[i]);
    ly[i] = std::log(std::abs(err[i]));
  }
  return fit_slope(lx, ly);
}

// Richardson limit estimate from samples r(h), r(h/2), r(h/4) assuming
// r(h) = r0 + C h^p. Returns the extrapolated r0.
inline double richardson_limit(double r_h, double r_h2, double r_h4) {
  const double d1 = r_h2 - r_h;
  const double d2 = r_h4 - r_h2;
  if (std::abs(d1) < 1e-300) return r_h4;
  const double q = d2 / d1;  // = 2^{-p}
  if (std::abs(1.0 - q) < 1e-12) return r_h4;
  return r_h4 + d2 * q / (1.0 - q);
}

// Deterministic RNG shared by samplers; every stochastic routine takes one.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  Complex cnormal() { return {normal(), normal()}; }
  std::uint64_t integer(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(gen_);
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace multitime
