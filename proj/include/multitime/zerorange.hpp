#pragma once

// Exact two-particle massless Dirac system in 1+1 dimensions with zero-range
// interaction. The multi-time solution is obtained by tracing each spin
// component backward along its characteristics; a backward trace that crosses
// the coincidence set picks up the boundary-condition phase and exchanges
// components 2 and 3. An independent single-time lattice evolution serves as
// the oracle for the exact solver.
//
// Component order in the sigma_3 x sigma_3 eigenbasis (velocity pairs):
//   1 = (+,+), 2 = (+,-), 3 = (-,+), 4 = (-,-).

#include <array>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "multitime/common.hpp"
#include "multitime/gaussian.hpp"
#include "multitime/spacetime.hpp"

namespace multitime {

// Initial datum psi0 at t1 = t2 = 0: four complex functions of (z1, z2),
// either a sum of Gaussian product terms (evaluated in closed form), grid
// samples with bilinear interpolation, or a generic callable (used for data
// derived from another solution, e.g. restriction to a boosted frame).
class InitialData2P {
 public:
  struct Term {
    Complex coeff;
    int component;  // 0..3
    GaussianPacket packet1;
    GaussianPacket packet2;
  };

  struct Options {
    bool check_normalization = true;
    bool check_boundary_condition = true;
    double tolerance = 1e-7;
    double theta = 0.0;           // boundary-condition phase to check against
    double window = 12.0;         // sweep half-width for the diagonal check
  };

  static InitialData2P from_terms(std::vector<Term> terms, const Options& opt) {
    InitialData2P d;
    d.terms_ = std::move(terms);
    d.validate(opt);
    return d;
  }

  // Product spinor u (x) v with spatial packets f(z1) g(z2).
  static InitialData2P product(const Vec2& u, const Vec2& v, const GaussianPacket& f,
                               const GaussianPacket& g, const Options& opt) {
    std::vector<Term> terms;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (std::abs(u(i) * v(j)) > 0.0) terms.push_back({u(i) * v(j), 2 * i + j, f, g});
    return from_terms(std::move(terms), opt);
  }

  static InitialData2P from_grid(std::vector<double> grid, std::array<Mat, 4> samples,
                                 const Options& opt) {
    InitialData2P d;
    d.grid_ = std::move(grid);
    d.samples_ = std::make_shared<std::array<Mat, 4>>(std::move(samples));
    d.validate(opt);
    return d;
  }

  static InitialData2P from_function(std::function<Vec(double, double)> f, const Options& opt) {
    InitialData2P d;
    d.callable_ = std::move(f);
    d.validate(opt);
    return d;
  }

  Complex component(int c, double z1, double z2) const {
    if (callable_) return callable_(z1, z2)(c);
    if (samples_) return interpolate(c, z1, z2);
    Complex v = 0.0;
    for (const auto& t : terms_)
      if (t.component == c) v += t.coeff * t.packet1(z1) * t.packet2(z2);
    return v;
  }

  Vec value(double z1, double z2) const {
    if (callable_) return callable_(z1, z2);
    Vec v = Vec::Zero(4);
    for (int c = 0; c < 4; ++c) v(c) = component(c, z1, z2);
    return v;
  }

  // Exact L^2 norm^2 for Gaussian terms, quadrature otherwise.
  double squared_norm() const {
    if (!terms_.empty() && !callable_ && !samples_) {
      Complex total = 0.0;
      for (const auto& s : terms_)
        for (const auto& t : terms_) {
          if (s.component != t.component) continue;
          total += std::conj(s.coeff) * t.coeff * gaussian_overlap(s.packet1, t.packet1) *
                   gaussian_overlap(s.packet2, t.packet2);
        }
      return total.real();
    }
    // Midpoint quadrature over the sampling window.
    const int n = 220;
    const double lo = -14.0, hi = 14.0, dz = (hi - lo) / n;
    double total = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Vec v = value(lo + (i + 0.5) * dz, lo + (j + 0.5) * dz);
        total += dz * dz * v.squaredNorm();
      }
    return total;
  }

 private:
  void validate(const Options& opt) {
    if (opt.check_normalization) {
      const double n2 = squared_norm();
      if (std::abs(n2 - 1.0) > 100 * opt.tolerance)
        throw std::invalid_argument("InitialData2P: datum is not normalized");
    }
    if (opt.check_boundary_condition) {
      // Both one-sided limits coincide for continuous data, so both lines of
      // the boundary condition must hold with the same values.
      const Complex em = std::exp(-kI * opt.theta);
      const Complex ep = std::exp(kI * opt.theta);
      for (int i = 0; i <= 48; ++i) {
        const double z = -opt.window + 2.0 * opt.window * i / 48.0;
        const Complex p2 = component(1, z, z);
        const Complex p3 = component(2, z, z);
        if (std::abs(p2 - em * p3) + std::abs(p2 - ep * p3) > opt.tolerance)
          throw std::invalid_argument(
              "InitialData2P: datum violates the boundary condition on the diagonal");
      }
    }
  }

  Complex interpolate(int c, double z1, double z2) const {
    const auto& g = grid_;
    if (z1 <= g.front() || z1 >= g.back() || z2 <= g.front() || z2 >= g.back()) return 0.0;
    const double dz = g[1] - g[0];
    const auto idx = [&](double z) {
      auto i = static_cast<Eigen::Index>((z - g.front()) / dz);
      return std::min<Eigen::Index>(i, static_cast<Eigen::Index>(g.size()) - 2);
    };
    const Eigen::Index i = idx(z1), j = idx(z2);
    const double s = (z1 - g[i]) / dz, t = (z2 - g[j]) / dz;
    const Mat& m = (*samples_)[c];
    return (1 - s) * (1 - t) * m(i, j) + s * (1 - t) * m(i + 1, j) + (1 - s) * t * m(i, j + 1) +
           s * t * m(i + 1, j + 1);
  }

  std::vector<Term> terms_;
  std::vector<double> grid_;
  std::shared_ptr<const std::array<Mat, 4>> samples_;
  std::function<Vec(double, double)> callable_;
};

struct ZeroRangeModel {
  double theta = 0.0;  // in (-pi, pi]
  InitialData2P initial;

  ZeroRangeModel(double th, InitialData2P data) : theta(th), initial(std::move(data)) {
    if (th <= -kPi || th > kPi)
      throw std::invalid_argument("ZeroRangeModel: theta outside (-pi, pi]");
  }
};

namespace detail2p {

// Component 2 or 3 value by backward characteristic tracing. region > 0 means
// z1 > z2. Arguments w1, w2 are the free-transport initial positions of the
// traced component; crossing the coincidence set exchanges 2 <-> 3, swaps the
// arguments, and applies the boundary phase.
inline Complex traced_component(const ZeroRangeModel& m, int comp, double region, double w1,
                                double w2) {
  const bool crossed = (w1 != w2) && ((w1 > w2) != (region > 0.0));
  if (!crossed) return m.initial.component(comp, w1, w2);
  const int other = (comp == 1) ? 2 : 1;
  const bool plus_phase = (comp == 1) ? (region > 0.0) : (region < 0.0);
  const Complex phase = std::exp((plus_phase ? kI : -kI) * m.theta);
  return phase * m.initial.component(other, w2, w1);
}

inline Vec evaluate_with_region(const ZeroRangeModel& m, double t1, double z1, double t2,
                                double z2, double region) {
  Vec phi(4);
  phi(0) = m.initial.component(0, z1 - t1, z2 - t2);
  phi(1) = traced_component(m, 1, region, z1 - t1, z2 + t2);
  phi(2) = traced_component(m, 2, region, z1 + t1, z2 - t2);
  phi(3) = m.initial.component(3, z1 + t1, z2 + t2);
  return phi;
}

}  // namespace detail2p

// Multi-time evaluation at a spacelike configuration. Lightlike separations
// are evaluated as one-sided limits on the side given by sign(z1 - z2);
// timelike separations and exact collisions are outside the domain (use
// evaluate_collision_limit for the latter).
inline Vec evaluate(const ZeroRangeModel& m, double t1, double z1, double t2, double z2) {
  const double dt = t1 - t2, dz = z1 - z2;
  if (std::abs(dt) > std::abs(dz))
    throw std::domain_error("zerorange: phi is not defined at non-spacelike configurations");
  if (dz == 0.0 && dt == 0.0)
    throw std::domain_error("zerorange: collision configurations have two one-sided limits");
  return detail2p::evaluate_with_region(m, t1, z1, t2, z2, dz);
}

inline Vec evaluate(const ZeroRangeModel& m, const SpacetimeConfiguration& q) {
  if (q.size() != 2) throw std::invalid_argument("zerorange: two-particle model");
  return evaluate(m, q[0].t, q[0].z, q[1].t, q[1].z);
}

// One-sided limit on the coincidence set, side = below for z1 < z2.
inline Vec evaluate_collision_limit(const ZeroRangeModel& m, double t, double z, Side side) {
  return detail2p::evaluate_with_region(m, t, z, t, z, side == Side::above ? 1.0 : -1.0);
}

// Equal-time slice psi(t, z1, z2) sampled on grid x grid. Diagonal entries
// hold the z1 < z2 limit.
inline std::vector<Vec> equal_time_slice(const ZeroRangeModel& m, double t,
                                         const std::vector<double>& grid) {
  std::vector<Vec> out;
  out.reserve(grid.size() * grid.size());
  for (double z1 : grid)
    for (double z2 : grid) {
      if (z1 == z2)
        out.push_back(evaluate_collision_limit(m, t, z1, Side::below));
      else
        out.push_back(evaluate(m, t, z1, t, z2));
    }
  return out;
}

// Single-time lattice evolution with unit-CFL transport. Components shift one
// cell per step along their characteristics; a component-2/3 value whose shift
// would carry it across the coincidence diagonal instead converts to the other
// component at the same cell with the boundary phase. The two position grids
// are staggered by half a cell so no lattice point sits on the diagonal.
class LatticeOracle2P {
 public:
  LatticeOracle2P(const ZeroRangeModel& m, double z_lo, double z_hi, double dz)
      : theta_(m.theta), dz_(dz) {
    const int n = static_cast<int>(std::round((z_hi - z_lo) / dz));
    grid1_.resize(n);
    grid2_.resize(n);
    for (int i = 0; i < n; ++i) {
      grid1_[i] = z_lo + i * dz;
      grid2_[i] = z_lo + (i + 0.5) * dz;
    }
    for (auto& c : comp_) c = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int c = 0; c < 4; ++c) comp_[c](i, j) = m.initial.component(c, grid1_[i], grid2_[j]);
    time_ = 0.0;
  }

  double time() const { return time_; }
  double dz() const { return dz_; }
  const std::vector<double>& grid1() const { return grid1_; }
  const std::vector<double>& grid2() const { return grid2_; }
  const Mat& component(int c) const { return comp_[c]; }

  double total_probability() const {
    double p = 0.0;
    for (const auto& c : comp_) p += c.squaredNorm();
    return p * dz_ * dz_;
  }

  // One step of size dt = dz.
  void step() {
    const Eigen::Index n = comp_[0].rows();
    const Complex phase = std::exp(kI * theta_);
    std::array<Mat, 4> next;
    for (auto& c : next) c = Mat::Zero(n, n);
    auto at = [&](const Mat& m, Eigen::Index i, Eigen::Index j) -> Complex {
      if (i < 0 || j < 0 || i >= n || j >= n) return 0.0;
      return m(i, j);
    };
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double d = grid1_[i] - grid2_[j];
        next[0](i, j) = at(comp_[0], i - 1, j - 1);
        next[3](i, j) = at(comp_[3], i + 1, j + 1);
        // Conversion bands: the incoming value would cross z1 = z2 this step.
        if (d > 0.0 && d < 2.0 * dz_)
          next[1](i, j) = phase * comp_[2](i, j);
        else
          next[1](i, j) = at(comp_[1], i - 1, j + 1);
        if (d < 0.0 && d > -2.0 * dz_)
          next[2](i, j) = phase * comp_[1](i, j);
        else
          next[2](i, j) = at(comp_[2], i + 1, j - 1);
      }
    }
    comp_ = std::move(next);
    time_ += dz_;
  }

  void evolve_to(double t_final) {
    const int steps = static_cast<int>(std::round((t_final - time_) / dz_));
    for (int s = 0; s < steps; ++s) step();
  }

 private:
  double theta_;
  double dz_;
  double time_ = 0.0;
  std::vector<double> grid1_, grid2_;
  std::array<Mat, 4> comp_;
};

// Max-norm difference between the exact solver and the oracle at the oracle's
// grid points and current time.
inline double oracle_deviation(const ZeroRangeModel& m, const LatticeOracle2P& oracle) {
  double dev = 0.0;
  const double t = oracle.time();
  for (std::size_t i = 0; i < oracle.grid1().size(); ++i)
    for (std::size_t j = 0; j < oracle.grid2().size(); ++j) {
      const Vec exact = evaluate(m, t, oracle.grid1()[i], t, oracle.grid2()[j]);
      for (int c = 0; c < 4; ++c)
        dev = std::max(dev, std::abs(exact(c) - oracle.component(c)(i, j)));
    }
  return dev;
}

struct TensorCurrent {
  Eigen::Matrix2d j;  // j(mu, nu)
};

// j^{mu nu} = phibar gamma^mu (x) gamma^nu phi.
inline TensorCurrent tensor_current(const ZeroRangeModel& m, double t1, double z1, double t2,
                                    double z2) {
  const Vec phi = evaluate(m, t1, z1, t2, z2);
  const Mat2 g0 = SpinorConventions::gamma0();
  const Mat2 g1 = SpinorConventions::gamma1();
  const Mat gg = kron(g0, g0);
  TensorCurrent out;
  for (int mu = 0; mu < 2; ++mu)
    for (int nu = 0; nu < 2; ++nu) {
      const Mat op = gg * kron(mu == 0 ? g0 : g1, nu == 0 ? g0 : g1);
      out.j(mu, nu) = phi.dot(op * phi).real();
    }
  return out;
}

// Central-difference residual of the two conservation laws
// d_{x1^mu} j^{mu nu} = 0 and d_{x2^nu} j^{mu nu} = 0.
inline double current_conservation_residual(const ZeroRangeModel& m, double t1, double z1,
                                            double t2, double z2, double h) {
  const auto j = [&](double a, double b, double c, double d) {
    return tensor_current(m, a, b, c, d).j;
  };
  const Eigen::Matrix2d dt1 = (j(t1 + h, z1, t2, z2) - j(t1 - h, z1, t2, z2)) / (2 * h);
  const Eigen::Matrix2d dz1 = (j(t1, z1 + h, t2, z2) - j(t1, z1 - h, t2, z2)) / (2 * h);
  const Eigen::Matrix2d dt2 = (j(t1, z1, t2 + h, z2) - j(t1, z1, t2 - h, z2)) / (2 * h);
  const Eigen::Matrix2d dz2 = (j(t1, z1, t2, z2 + h) - j(t1, z1, t2, z2 - h)) / (2 * h);
  double r = 0.0;
  for (int nu = 0; nu < 2; ++nu) r += std::abs(dt1(0, nu) + dz1(1, nu));
  for (int mu = 0; mu < 2; ++mu) r += std::abs(dt2(mu, 0) + dz2(mu, 1));
  return r;
}

// Residual of the free multi-time equations i d_{t_j} phi = -i sigma3^{(j)} d_{z_j} phi
// via 3-point central differences (valid away from the coincidence set).
inline double free_equation_residual(const ZeroRangeModel& m, double t1, double z1, double t2,
                                     double z2, double h) {
  const auto phi = [&](double a, double b, double c, double d) { return evaluate(m, a, b, c, d); };
  const Vec dt1 = (phi(t1 + h, z1, t2, z2) - phi(t1 - h, z1, t2, z2)) / (2 * h);
  const Vec dz1 = (phi(t1, z1 + h, t2, z2) - phi(t1, z1 - h, t2, z2)) / (2 * h);
  const Vec dt2 = (phi(t1, z1, t2 + h, z2) - phi(t1, z1, t2 - h, z2)) / (2 * h);
  const Vec dz2 = (phi(t1, z1, t2, z2 + h) - phi(t1, z1, t2, z2 - h)) / (2 * h);
  // sigma3 acts as +1 on components with the particle's upper spin index.
  Vec r1(4), r2(4);
  const double s1[4] = {1, 1, -1, -1};
  const double s2[4] = {1, -1, 1, -1};
  for (int c = 0; c < 4; ++c) {
    r1(c) = std::abs(kI * dt1(c) + kI * s1[c] * dz1(c));
    r2(c) = std::abs(kI * dt2(c) + kI * s2[c] * dz2(c));
  }
  return std::max(r1.lpNorm<Eigen::Infinity>(), r2.lpNorm<Eigen::Infinity>());
}

// Purity Tr(rho_1^2) of the reduced one-particle density matrix of the
// equal-time slice discretized on the grid (spin (x) position).
inline double entanglement_purity(const ZeroRangeModel& m, double t,
                                  const std::vector<double>& grid) {
  const auto slice = equal_time_slice(m, t, grid);
  const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
  Mat psi(2 * n, 2 * n);  // rows: (s1, z1), cols: (s2, z2)
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Vec& v = slice[i * n + j];
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2) psi(s1 * n + i, s2 * n + j) = v(2 * s1 + s2);
    }
  const Mat rho = psi * psi.adjoint();
  const double tr = rho.trace().real();
  return (rho * rho).trace().real() / (tr * tr);
}

// Norm^2 of the solution restricted to a spacelike hypersurface.
inline double surface_norm(const ZeroRangeModel& m, const Hypersurface& sigma, double z_lo,
                           double z_hi, int cells) {
  return surface_norm_2p(sigma, z_lo, z_hi, cells, [&](double z1, double z2, Side side) {
    if (z1 == z2) return evaluate_collision_limit(m, sigma.time(z1), z1, side);
    return evaluate(m, sigma.time(z1), z1, sigma.time(z2), z2);
  });
}

// Builds the boosted model and returns the max deviation between evaluating it
// directly and boosting the original solution, over the given configurations.
// The solution map is phi'(x) = S(beta) (x) S(beta) phi(Lambda(beta) x), the
// pairing under which S^{-1} gamma^mu S = Lambda(-beta)^mu_nu gamma^nu and
// hypersurface norms are preserved.
inline double boost_covariance_check(const ZeroRangeModel& m, double beta,
                                     const std::vector<SpacetimeConfiguration>& configs) {
  const Boost b(beta);
  const Mat s2 = kron(b.spinor_matrix(), b.spinor_matrix());

  const auto boosted_data = [&](double z1, double z2) -> Vec {
    const SpacetimePoint p1 = b.apply({0.0, z1});
    const SpacetimePoint p2 = b.apply({0.0, z2});
    if (p1.t == p2.t && p1.z == p2.z)
      return s2 * evaluate_collision_limit(m, p1.t, p1.z, Side::below);
    return s2 * evaluate(m, p1.t, p1.z, p2.t, p2.z);
  };
  InitialData2P::Options opt;
  opt.theta = m.theta;
  opt.tolerance = 1e-4;  // numeric quadrature backs the norm check here
  const ZeroRangeModel boosted(m.theta, InitialData2P::from_function(boosted_data, opt));

  double dev = 0.0;
  for (const auto& q : configs) {
    const Vec lhs = evaluate(boosted, q);
    const SpacetimeConfiguration qb = {b.apply(q[0]), b.apply(q[1])};
    const Vec rhs = s2 * evaluate(m, qb);
    dev = std::max(dev, (lhs - rhs).lpNorm<Eigen::Infinity>());
  }
  return dev;
}

}  // namespace multitime
