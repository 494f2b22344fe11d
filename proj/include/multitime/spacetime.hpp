#pragma once

// Geometry of 1+1-dimensional Minkowski space-time: spacelike configurations,
// boosts and their spinor representation, piecewise-linear spacelike
// hypersurfaces, and the hypersurface probability density/norm.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>

#include <json.hpp>

#include "multitime/common.hpp"

namespace multitime {

struct SpacetimePoint {
  double t = 0.0;
  double z = 0.0;

  friend bool operator==(const SpacetimePoint&, const SpacetimePoint&) = default;
};

// Minkowski interval t^2 - z^2 of the separation (signature +,-).
inline double interval(const SpacetimePoint& a, const SpacetimePoint& b) {
  const double dt = a.t - b.t;
  const double dz = a.z - b.z;
  return dt * dt - dz * dz;
}

inline bool spacelike_separated(const SpacetimePoint& a, const SpacetimePoint& b) {
  return interval(a, b) < 0.0;
}

using SpacetimeConfiguration = std::vector<SpacetimePoint>;

enum class ConfigClass { Spacelike, Collision, NonSpacelike };

// Spacelike iff every pair is spacelike separated or identical; Collision if
// additionally at least one pair coincides.
inline ConfigClass classify_configuration(const SpacetimeConfiguration& q) {
  bool coincidence = false;
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t j = i + 1; j < q.size(); ++j) {
      if (q[i] == q[j]) {
        coincidence = true;
      } else if (!spacelike_separated(q[i], q[j])) {
        return ConfigClass::NonSpacelike;
      }
    }
  }
  return coincidence ? ConfigClass::Collision : ConfigClass::Spacelike;
}

// Spinor conventions of the 1+1-dimensional massless Dirac system:
// gamma^0 = sigma_1, gamma^1 = sigma_1 sigma_3. The sigma_3 eigenbasis
// diagonalizes the free Hamiltonian; the upper component moves right.
struct SpinorConventions {
  static Mat2 gamma0() {
    Mat2 g;
    g << 0, 1, 1, 0;
    return g;
  }
  static Mat2 gamma1() {
    Mat2 g;
    g << 0, -1, 1, 0;
    return g;
  }
  static Mat2 sigma1() { return gamma0(); }
  static Mat2 sigma3() {
    Mat2 g;
    g << 1, 0, 0, -1;
    return g;
  }
};

struct MultiTimeAmplitude {
  int particles = 0;
  Vec value;  // dimension 2^particles

  MultiTimeAmplitude() = default;
  MultiTimeAmplitude(int n, Vec v) : particles(n), value(std::move(v)) {
    if (value.size() != (Eigen::Index{1} << particles))
      throw std::invalid_argument("MultiTimeAmplitude: dimension does not match sector");
  }
};

class Boost {
 public:
  explicit Boost(double rapidity) : beta_(rapidity) {}

  double rapidity() const { return beta_; }

  // Matrix of the point map on (t, z).
  Eigen::Matrix2d point_matrix() const {
    Eigen::Matrix2d m;
    m << std::cosh(beta_), -std::sinh(beta_), -std::sinh(beta_), std::cosh(beta_);
    return m;
  }

  // Spinor representation in the sigma_3 eigenbasis.
  Mat2 spinor_matrix() const {
    Mat2 s = Mat2::Zero();
    s(0, 0) = std::exp(beta_ / 2.0);
    s(1, 1) = std::exp(-beta_ / 2.0);
    return s;
  }

  SpacetimePoint apply(const SpacetimePoint& p) const {
    const double ch = std::cosh(beta_), sh = std::sinh(beta_);
    return {p.t * ch - p.z * sh, p.z * ch - p.t * sh};
  }

  Boost inverse() const { return Boost(-beta_); }

 private:
  double beta_;
};

inline SpacetimePoint boost_point(const Boost& b, const SpacetimePoint& p) {
  return b.apply(p);
}

// Applies S(beta)^{(x) n} to the tensor-product spinor value.
inline MultiTimeAmplitude boost_spinor(const Boost& b, const MultiTimeAmplitude& a) {
  const Mat2 s = b.spinor_matrix();
  Vec out = a.value;
  // Apply the one-particle matrix slot by slot.
  for (int slot = 0; slot < a.particles; ++slot) {
    Vec next(out.size());
    const Eigen::Index stride = Eigen::Index{1} << (a.particles - 1 - slot);
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      const Eigen::Index bit = (i / stride) % 2;
      const Eigen::Index base = i - bit * stride;
      next(i) = s(bit, 0) * out(base) + s(bit, 1) * out(base + stride);
    }
    out.swap(next);
  }
  return MultiTimeAmplitude(a.particles, std::move(out));
}

// Piecewise-linear spacelike Cauchy surface t = tau(z), graph over a bounded
// window with constant extension outside. Every segment slope is strictly
// below 1 in magnitude.
class Hypersurface {
 public:
  struct Node {
    double z;
    double t;
  };

  explicit Hypersurface(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw std::invalid_argument("Hypersurface: no nodes");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
      const double dz = nodes_[i + 1].z - nodes_[i].z;
      const double dt = nodes_[i + 1].t - nodes_[i].t;
      if (dz <= 0.0)
        throw std::invalid_argument("Hypersurface: nodes must have strictly increasing z");
      if (std::abs(dt) >= dz)
        throw std::invalid_argument("Hypersurface: segment slope must be strictly spacelike");
    }
  }

  static Hypersurface flat(double t) { return Hypersurface({{0.0, t}}); }

  const std::vector<Node>& nodes() const { return nodes_; }

  double time(double z) const {
    if (z <= nodes_.front().z) return nodes_.front().t;
    if (z >= nodes_.back().z) return nodes_.back().t;
    const auto seg = segment_index(z);
    const Node& a = nodes_[seg];
    const Node& b = nodes_[seg + 1];
    const double s = (z - a.z) / (b.z - a.z);
    return a.t + s * (b.t - a.t);
  }

  // Right-continuous slope d tau/dz (0 on the constant extensions).
  double slope(double z) const {
    if (z < nodes_.front().z || z >= nodes_.back().z) return 0.0;
    const auto seg = segment_index(z);
    const Node& a = nodes_[seg];
    const Node& b = nodes_[seg + 1];
    return (b.t - a.t) / (b.z - a.z);
  }

  // Future unit covariant normal n_mu at surface point above z.
  Eigen::Vector2d normal_covariant(double z) const {
    const double s = slope(z);
    const double c = 1.0 / std::sqrt(1.0 - s * s);
    return {c, -s * c};
  }

  // Induced length measure d ell / dz.
  double length_measure(double z) const {
    const double s = slope(z);
    return std::sqrt(1.0 - s * s);
  }

  // gamma^0 gamma^mu n_mu at z: positive diagonal matrix in the sigma_3 basis.
  Mat2 born_weight(double z) const {
    const Eigen::Vector2d n = normal_covariant(z);
    Mat2 w = Mat2::Zero();
    w(0, 0) = n(0) + n(1);
    w(1, 1) = n(0) - n(1);
    return w;
  }

  bool contains(const SpacetimePoint& p, double tol = 1e-9) const {
    return std::abs(time(p.z) - p.t) <= tol;
  }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& n : nodes_) j.push_back({n.z, n.t});
    return j;
  }

  static Hypersurface from_json(const nlohmann::json& j) {
    std::vector<Node> nodes;
    for (const auto& p : j) nodes.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return Hypersurface(std::move(nodes));
  }

 private:
  std::size_t segment_index(double z) const {
    std::size_t lo = 0, hi = nodes_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (nodes_[mid].z <= z)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  }

  std::vector<Node> nodes_;
};

// Curved Born density at a configuration on the surface,
// phibar [ (x)_j gamma^mu n_mu(x_j) ] phi.
inline double born_density(const MultiTimeAmplitude& amp, const Hypersurface& sigma,
                           const SpacetimeConfiguration& q, double tol = 1e-9) {
  if (static_cast<int>(q.size()) != amp.particles)
    throw std::invalid_argument("born_density: configuration size does not match sector");
  for (const auto& p : q)
    if (!sigma.contains(p, tol))
      throw std::domain_error("born_density: configuration point off the surface");
  Vec v = amp.value;
  for (int slot = 0; slot < amp.particles; ++slot) {
    const Mat2 w = sigma.born_weight(q[slot].z);
    const Eigen::Index stride = Eigen::Index{1} << (amp.particles - 1 - slot);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const Eigen::Index bit = (i / stride) % 2;
      v(i) *= w(bit, bit).real();
    }
  }
  return amp.value.dot(v).real();  // Eigen dot conjugates the left argument
}

enum class Side { below, above };  // z1 < z2 vs z1 > z2

namespace detail {

// 3-point Gauss-Legendre on [-1, 1].
inline constexpr double kGaussNode[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
inline constexpr double kGaussWeight[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

// Dunavant degree-5 rule on a triangle, barycentric points and area weights.
struct TrianglePoint {
  double b0, b1, b2, w;
};
inline const std::array<TrianglePoint, 7>& triangle_rule() {
  static const std::array<TrianglePoint, 7> rule = {{
      {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
      {0.059715871789770, 0.470142064105115, 0.470142064105115, 0.132394152788506},
      {0.470142064105115, 0.059715871789770, 0.470142064105115, 0.132394152788506},
      {0.470142064105115, 0.470142064105115, 0.059715871789770, 0.132394152788506},
      {0.797426985353087, 0.101286507323456, 0.101286507323456, 0.125939180544827},
      {0.101286507323456, 0.797426985353087, 0.101286507323456, 0.125939180544827},
      {0.101286507323456, 0.101286507323456, 0.797426985353087, 0.125939180544827},
  }};
  return rule;
}

// Cell edges: uniform grid over [lo, hi] refined with the surface node z's so
// surface kinks land on cell boundaries.
inline std::vector<double> cell_edges(const Hypersurface& s, double lo, double hi, int cells) {
  std::vector<double> edges;
  edges.reserve(cells + 1 + s.nodes().size());
  for (int i = 0; i <= cells; ++i)
    edges.push_back(lo + (hi - lo) * static_cast<double>(i) / cells);
  for (const auto& n : s.nodes())
    if (n.z > lo && n.z < hi) edges.push_back(n.z);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              edges.end());
  return edges;
}

}  // namespace detail

// Integral over Sigma of a scalar density rho(z) d ell, with rho given per
// unit surface length at the point above z.
template <class Density>
double surface_integral_1p(const Hypersurface& sigma, double z_lo, double z_hi, int cells,
                           Density&& rho) {
  const auto edges = detail::cell_edges(sigma, z_lo, z_hi, cells);
  double total = 0.0;
  for (std::size_t c = 0; c + 1 < edges.size(); ++c) {
    const double a = edges[c], b = edges[c + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int g = 0; g < 3; ++g) {
      const double z = mid + half * detail::kGaussNode[g];
      total += half * detail::kGaussWeight[g] * rho(z) * sigma.length_measure(z);
    }
  }
  return total;
}

// Hypersurface norm^2 of a one-particle section phi_Sigma(z) in C^2.
// The evaluator returns the spinor at the surface point above z.
template <class Evaluator>
double surface_norm_1p(const Hypersurface& sigma, double z_lo, double z_hi, int cells,
                       Evaluator&& phi) {
  return surface_integral_1p(sigma, z_lo, z_hi, cells, [&](double z) {
    const Vec2 v = phi(z);
    const Mat2 w = sigma.born_weight(z);
    return (w(0, 0).real() * std::norm(v(0)) + w(1, 1).real() * std::norm(v(1)));
  });
}

// Hypersurface norm^2 of a two-particle section over Sigma^2. The evaluator
// receives (z1, z2, side) and returns the 4-component amplitude at the
// configuration ((tau(z1), z1), (tau(z2), z2)); side selects the one-sided
// limit for cells split along the coincidence diagonal.
template <class Evaluator>
double surface_norm_2p(const Hypersurface& sigma, double z_lo, double z_hi, int cells,
                       Evaluator&& phi) {
  const auto edges = detail::cell_edges(sigma, z_lo, z_hi, cells);
  const auto density = [&](double z1, double z2, Side side) {
    const Vec v = phi(z1, z2, side);
    const Mat2 w1 = sigma.born_weight(z1);
    const Mat2 w2 = sigma.born_weight(z2);
    double rho = 0.0;
    for (int i = 0; i < 4; ++i)
      rho += w1(i / 2, i / 2).real() * w2(i % 2, i % 2).real() * std::norm(v(i));
    return rho;
  };

  double total = 0.0;
  const std::size_t ncell = edges.size() - 1;
  for (std::size_t ci = 0; ci < ncell; ++ci) {
    const double a1 = edges[ci], b1 = edges[ci + 1];
    const double half1 = 0.5 * (b1 - a1), mid1 = 0.5 * (a1 + b1);
    for (std::size_t cj = 0; cj < ncell; ++cj) {
      const double a2 = edges[cj], b2 = edges[cj + 1];
      if (ci == cj) {
        // The coincidence set cuts this square corner to corner; integrate the
        // two triangles with one-sided limits.
        const double area = 0.5 * (b1 - a1) * (b2 - a2);
        const double vx[3] = {a1, b1, a1};  // upper triangle: z1 < z2
        const double vy[3] = {a2, b2, b2};
        const double ux[3] = {a1, b1, b1};  // lower triangle: z1 > z2
        const double uy[3] = {a2, a2, b2};
        for (const auto& p : detail::triangle_rule()) {
          const double zu1 = p.b0 * vx[0] + p.b1 * vx[1] + p.b2 * vx[2];
          const double zu2 = p.b0 * vy[0] + p.b1 * vy[1] + p.b2 * vy[2];
          total += area * p.w * density(zu1, zu2, Side::below) * sigma.length_measure(zu1) *
                   sigma.length_measure(zu2);
          const double zl1 = p.b0 * ux[0] + p.b1 * ux[1] + p.b2 * ux[2];
          const double zl2 = p.b0 * uy[0] + p.b1 * uy[1] + p.b2 * uy[2];
          total += area * p.w * density(zl1, zl2, Side::above) * sigma.length_measure(zl1) *
                   sigma.length_measure(zl2);
        }
        continue;
      }
      const Side side = (a1 >= b2) ? Side::above : Side::below;
      const double half2 = 0.5 * (b2 - a2), mid2 = 0.5 * (a2 + b2);
      for (int g1 = 0; g1 < 3; ++g1) {
        const double z1 = mid1 + half1 * detail::kGaussNode[g1];
        for (int g2 = 0; g2 < 3; ++g2) {
          const double z2 = mid2 + half2 * detail::kGaussNode[g2];
          total += half1 * half2 * detail::kGaussWeight[g1] * detail::kGaussWeight[g2] *
                   density(z1, z2, side) * sigma.length_measure(z1) * sigma.length_measure(z2);
        }
      }
    }
  }
  return total;
}

// First-order norm from equally spaced samples of phi_Sigma over the window
// (one- and two-particle forms). Samples are taken at grid midpoints.
inline double hypersurface_norm_sampled(const Hypersurface& sigma,
                                        const std::vector<double>& grid_z,
                                        const std::vector<Vec2>& samples) {
  if (grid_z.size() != samples.size())
    throw std::invalid_argument("hypersurface_norm_sampled: size mismatch");
  if (grid_z.size() < 2) throw std::invalid_argument("hypersurface_norm_sampled: short grid");
  const double dz = grid_z[1] - grid_z[0];
  double total = 0.0;
  for (std::size_t i = 0; i < grid_z.size(); ++i) {
    const Mat2 w = sigma.born_weight(grid_z[i]);
    total += dz * sigma.length_measure(grid_z[i]) *
             (w(0, 0).real() * std::norm(samples[i](0)) + w(1, 1).real() * std::norm(samples[i](1)));
  }
  return total;
}

}  // namespace multitime
