#pragma once

#include <cmath>
#include <complex>

#include "multitime/common.hpp"

namespace multitime {

// Normalized Gaussian wave packet (pi w^2)^{-1/4} exp(-(z-c)^2/(2w^2) + i k z).
struct GaussianPacket {
  double center = 0.0;
  double width = 1.0;
  double momentum = 0.0;

  Complex operator()(double z) const {
    const double u = (z - center) / width;
    const double amp = std::pow(kPi * width * width, -0.25) * std::exp(-0.5 * u * u);
    return amp * std::exp(kI * momentum * z);
  }
};

// Exact overlap integral of conj(a) * b over the line.
inline Complex gaussian_overlap(const GaussianPacket& a, const GaussianPacket& b) {
  const double alpha = 0.5 / (a.width * a.width) + 0.5 / (b.width * b.width);
  const Complex beta = a.center / (a.width * a.width) + b.center / (b.width * b.width) +
                       kI * (b.momentum - a.momentum);
  const double gamma = -0.5 * a.center * a.center / (a.width * a.width) -
                       0.5 * b.center * b.center / (b.width * b.width);
  const double norm = std::pow(kPi * a.width * a.width, -0.25) *
                      std::pow(kPi * b.width * b.width, -0.25);
  return norm * std::sqrt(kPi / alpha) * std::exp(beta * beta / (4.0 * alpha) + gamma);
}

}  // namespace multitime
