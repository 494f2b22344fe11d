#pragma once

// Numerical evaluation of the multi-time consistency condition
// [i d_{t_j} - H_j, i d_{t_k} - H_k] = 0 for fixed particle number, with
// H_j = free 1+1 Dirac part on particle j plus a matrix-valued potential.
// Time and space derivatives use 5-point central stencils; every report
// carries an (h, h/2, h/4) sweep with a Richardson limit so that true
// non-commutativity can be told apart from discretization noise.

#include <array>
#include <functional>
#include <utility>

#include "multitime/common.hpp"
#include "multitime/spacetime.hpp"

namespace multitime {

// A smooth multi-time test function: times and positions -> spinor value.
using MultiTimeFunction =
    std::function<Vec(const std::vector<double>& t, const std::vector<double>& z)>;

struct MultiTimeOperatorSpec {
  int particle = 0;  // slot index j
  double mass = 0.0;
  // Full matrix potential V_j(x_1..x_N) acting on the tensor spinor space;
  // empty means V_j = 0. May depend on all times and positions.
  std::function<Mat(const std::vector<double>& t, const std::vector<double>& z)> potential;
};

namespace fd {

// 5-point central first derivative, O(h^4).
template <class F>
auto derivative5(F&& f, double x, double h) -> decltype(f(x)) {
  return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h);
}

}  // namespace fd

namespace detail_ops {

// sigma3 and sigma1 acting on the spinor slot of particle j in a 2^N space.
inline void apply_slot_matrix(Vec& v, const Mat2& m, int particles, int slot) {
  const Eigen::Index stride = Eigen::Index{1} << (particles - 1 - slot);
  Vec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const Eigen::Index bit = (i / stride) % 2;
    const Eigen::Index base = i - bit * stride;
    out(i) = m(bit, 0) * v(base) + m(bit, 1) * v(base + stride);
  }
  v.swap(out);
}

}  // namespace detail_ops

// H_j f as a multi-time function: -i sigma3^{(j)} d_{z_j} f + m sigma1^{(j)} f + V_j f.
inline MultiTimeFunction apply_hamiltonian(const MultiTimeOperatorSpec& spec, int particles,
                                           MultiTimeFunction f, double h) {
  return [spec, particles, f = std::move(f), h](const std::vector<double>& t,
                                                const std::vector<double>& z) -> Vec {
    Vec dz = fd::derivative5(
        [&](double zj) {
          std::vector<double> zz = z;
          zz[spec.particle] = zj;
          return f(t, zz);
        },
        z[spec.particle], h);
    detail_ops::apply_slot_matrix(dz, SpinorConventions::sigma3(), particles, spec.particle);
    Vec out = -kI * dz;
    if (spec.mass != 0.0) {
      Vec mv = f(t, z);
      detail_ops::apply_slot_matrix(mv, SpinorConventions::sigma1(), particles, spec.particle);
      out += spec.mass * mv;
    }
    if (spec.potential) out += spec.potential(t, z) * f(t, z);
    return out;
  };
}

// (i d_{t_j} - H_j) f.
inline MultiTimeFunction apply_evolution_operator(const MultiTimeOperatorSpec& spec,
                                                  int particles, MultiTimeFunction f, double h) {
  MultiTimeFunction hf = apply_hamiltonian(spec, particles, f, h);
  return [spec, f = std::move(f), hf = std::move(hf), h](const std::vector<double>& t,
                                                         const std::vector<double>& z) -> Vec {
    const Vec dt = fd::derivative5(
        [&](double tj) {
          std::vector<double> tt = t;
          tt[spec.particle] = tj;
          return f(tt, z);
        },
        t[spec.particle], h);
    return kI * dt - hf(t, z);
  };
}

// Smooth Gaussian x polynomial x spinor probe with a small set of base
// configurations around a center.
class TestFunctionBundle {
 public:
  TestFunctionBundle(int particles, std::uint64_t seed) : particles_(particles) {
    Rng rng(seed);
    spinor_ = Vec(Eigen::Index{1} << particles);
    for (Eigen::Index i = 0; i < spinor_.size(); ++i) spinor_(i) = rng.cnormal();
    spinor_ /= spinor_.lpNorm<Eigen::Infinity>();
    for (int j = 0; j < particles; ++j) {
      centers_.push_back(rng.uniform(-1.0, 1.0));
      lin_z_.push_back(rng.uniform(-0.3, 0.3));
      lin_t_.push_back(rng.uniform(-0.3, 0.3));
    }
    cross_ = rng.uniform(-0.2, 0.2);
    // Base configurations: center and two spacelike-shifted companions.
    std::vector<double> t0(particles, 0.0), z0 = centers_;
    base_.push_back({t0, z0});
    std::vector<double> z1 = z0;
    for (auto& zz : z1) zz += 0.4;
    base_.push_back({t0, z1});
    std::vector<double> t2(particles);
    for (int j = 0; j < particles; ++j) t2[j] = 0.1 * (j + 1);
    base_.push_back({t2, z0});
  }

  int particles() const { return particles_; }
  const std::vector<std::pair<std::vector<double>, std::vector<double>>>& base_points() const {
    return base_;
  }

  MultiTimeFunction function() const {
    return [*this](const std::vector<double>& t, const std::vector<double>& z) -> Vec {
      double expo = 0.0;
      Complex poly = 1.0;
      for (int j = 0; j < particles_; ++j) {
        const double u = z[j] - centers_[j];
        expo += -0.5 * u * u / (sigma_ * sigma_) - 0.5 * t[j] * t[j] / (tau_ * tau_);
        poly += lin_z_[j] * z[j] + lin_t_[j] * t[j];
      }
      if (particles_ >= 2) poly += cross_ * z[0] * z[1];
      return (std::exp(expo) * poly) * spinor_;
    };
  }

  // Sup of |f| over the base points, used to normalize residuals.
  double scale() const {
    const auto f = function();
    double s = 0.0;
    for (const auto& [t, z] : base_)
      s = std::max(s, f(t, z).lpNorm<Eigen::Infinity>());
    return s;
  }

 private:
  int particles_;
  Vec spinor_;
  std::vector<double> centers_, lin_z_, lin_t_;
  double cross_ = 0.0;
  double sigma_ = 1.1, tau_ = 1.4;
};

// Commutator [i d_{t_j} - H_j, i d_{t_k} - H_k] applied to the probe at one
// configuration.
inline Vec commutator_apply(const MultiTimeOperatorSpec& hj, const MultiTimeOperatorSpec& hk,
                            int particles, const MultiTimeFunction& f,
                            const std::vector<double>& t, const std::vector<double>& z,
                            double h) {
  if (hj.particle == hk.particle)
    throw std::invalid_argument("commutator_apply: operators must act on distinct particles");
  MultiTimeFunction akf = apply_evolution_operator(hk, particles, f, h);
  MultiTimeFunction ajf = apply_evolution_operator(hj, particles, f, h);
  MultiTimeFunction ajakf = apply_evolution_operator(hj, particles, std::move(akf), h);
  MultiTimeFunction akajf = apply_evolution_operator(hk, particles, std::move(ajf), h);
  return ajakf(t, z) - akajf(t, z);
}

// Max-norm of the commutator over the probe's base points, divided by the
// probe scale.
inline double commutator_residual(const MultiTimeOperatorSpec& hj,
                                  const MultiTimeOperatorSpec& hk,
                                  const TestFunctionBundle& probe, double h) {
  const MultiTimeFunction f = probe.function();
  double r = 0.0;
  for (const auto& [t, z] : probe.base_points())
    r = std::max(r,
                 commutator_apply(hj, hk, probe.particles(), f, t, z, h).lpNorm<Eigen::Infinity>());
  return r / probe.scale();
}

struct CommutatorReport {
  std::array<double, 3> h;
  std::array<double, 3> residual;
  double limit;  // Richardson-extrapolated h -> 0 value
};

// Residual at h, h/2, h/4 with the extrapolated limit.
inline CommutatorReport commutator_residual_report(const MultiTimeOperatorSpec& hj,
                                                   const MultiTimeOperatorSpec& hk,
                                                   const TestFunctionBundle& probe, double h) {
  CommutatorReport rep;
  rep.h = {h, h / 2, h / 4};
  for (int i = 0; i < 3; ++i) rep.residual[i] = commutator_residual(hj, hk, probe, rep.h[i]);
  rep.limit = richardson_limit(rep.residual[0], rep.residual[1], rep.residual[2]);
  return rep;
}

// Fixture potentials for the no-go demonstration.
inline MultiTimeOperatorSpec free_dirac(int particle, double mass = 0.0) {
  return {particle, mass, nullptr};
}

// V_j = v(z_j) * identity, a single-particle potential on slot j.
inline MultiTimeOperatorSpec single_particle_potential(int particle, double mass,
                                                       std::function<double(double)> v,
                                                       int particles) {
  MultiTimeOperatorSpec spec{particle, mass, nullptr};
  const Eigen::Index dim = Eigen::Index{1} << particles;
  spec.potential = [v = std::move(v), particle, dim](const std::vector<double>&,
                                                     const std::vector<double>& z) -> Mat {
    return v(z[particle]) * Mat::Identity(dim, dim);
  };
  return spec;
}

// Scalar pair potential V_j = v(z_1 - z_2) * identity on both slots.
inline MultiTimeOperatorSpec pair_potential(int particle, double mass,
                                            std::function<double(double)> v, int particles) {
  MultiTimeOperatorSpec spec{particle, mass, nullptr};
  const Eigen::Index dim = Eigen::Index{1} << particles;
  spec.potential = [v = std::move(v), dim](const std::vector<double>&,
                                           const std::vector<double>& z) -> Mat {
    return v(z[0] - z[1]) * Mat::Identity(dim, dim);
  };
  return spec;
}

inline double smoothed_coulomb(double r) { return 1.0 / std::sqrt(1.0 + r * r); }
inline double gaussian_pair(double r) { return std::exp(-r * r); }

}  // namespace multitime
