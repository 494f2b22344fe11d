#pragma once

// Truncated Fock space over a 1-dimensional periodic lattice for fermionic
// x-particles and bosonic y-particles (statistics are switchable for the
// consistency experiments). Provides creation/annihilation operators, the
// emission-absorption Hamiltonian with a UV cutoff profile, exact evolution
// through a cached dense eigendecomposition, exact-dispersion one-particle
// free Hamiltonians and propagators, and sector-wise second quantization of
// one-particle maps.
//
// Mode convention: mode = 2*site + spin, spin 0 = upper sigma_3 component
// (right-mover). Position-space operators carry 1/sqrt(a) against the
// canonical ladder operators so that {a_r(x), a^dag_r'(x')} = delta/a.

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "multitime/common.hpp"

namespace multitime::fock {

using SpMat = Eigen::SparseMatrix<Complex>;

struct LatticeSpec {
  int sites = 8;
  double spacing = 1.0;
  bool periodic = true;

  LatticeSpec() = default;
  LatticeSpec(int l, double a, bool per = true) : sites(l), spacing(a), periodic(per) {
    if (l < 2) throw std::invalid_argument("LatticeSpec: need at least 2 sites");
    if (a <= 0) throw std::invalid_argument("LatticeSpec: spacing must be positive");
  }

  int modes() const { return 2 * sites; }
  int mode(int site, int spin) const { return 2 * site + spin; }
  int wrap(int site) const { return ((site % sites) + sites) % sites; }
  // Minimal site distance (periodic when enabled).
  int distance(int i, int j) const {
    int d = std::abs(i - j);
    if (periodic) d = std::min(d, sites - d);
    return d;
  }
};

struct CouplingSpec {
  Vec2 g = Vec2::Zero();
  double mass_x = 0.0;
  double mass_y = 0.0;
};

// Nonnegative kernel on site offsets, normalized to sum a * kernel = 1,
// supported within |offset * a| <= radius.
struct CutoffProfile {
  Eigen::VectorXd kernel;  // indexed by wrapped offset
  double radius = 0.0;

  static CutoffProfile delta(const LatticeSpec& lat) {
    CutoffProfile c;
    c.kernel = Eigen::VectorXd::Zero(lat.sites);
    c.kernel(0) = 1.0 / lat.spacing;
    c.radius = 0.0;
    return c;
  }

  static CutoffProfile gaussian(const LatticeSpec& lat, double radius) {
    CutoffProfile c;
    c.kernel = Eigen::VectorXd::Zero(lat.sites);
    const double w = radius / 2.0;
    for (int d = 0; d < lat.sites; ++d) {
      const double dist = lat.distance(0, d) * lat.spacing;
      if (dist <= radius) c.kernel(d) = std::exp(-0.5 * dist * dist / (w * w));
    }
    c.kernel /= c.kernel.sum() * lat.spacing;
    c.radius = radius;
    return c;
  }
};

enum class Statistics { fermionic, bosonic };

struct ModelSpec {
  LatticeSpec lattice;
  CouplingSpec coupling;
  CutoffProfile cutoff;
  int max_x = 1;  // x-sector budget (x-number is conserved)
  int max_y = 2;  // bosonic truncation
  Statistics x_statistics = Statistics::fermionic;
  Statistics y_statistics = Statistics::bosonic;
  Eigen::Index dimension_budget = 6000;
};

namespace detail {

inline std::uint64_t pack_occupation(const std::vector<std::uint8_t>& occ) {
  std::uint64_t key = 0;
  for (std::size_t m = 0; m < occ.size(); ++m) key |= std::uint64_t(occ[m] & 0x3) << (2 * m);
  return key;
}

// All occupation vectors over `modes` modes with given total and per-mode cap.
inline void enumerate_occupations(int modes, int total, int cap,
                                  std::vector<std::vector<std::uint8_t>>& out) {
  std::vector<std::uint8_t> occ(modes, 0);
  const auto rec = [&](auto&& self, int mode, int left) -> void {
    if (mode == modes) {
      if (left == 0) out.push_back(occ);
      return;
    }
    for (int n = 0; n <= std::min(cap, left); ++n) {
      occ[mode] = static_cast<std::uint8_t>(n);
      self(self, mode + 1, left - n);
      occ[mode] = 0;
    }
  };
  rec(rec, 0, total);
}

}  // namespace detail

// Occupation basis: every x-sector 0..max_x times every y-sector 0..max_y,
// ordered by sector then lexicographically. The x-major layout makes the
// state index = x_index * y_count + y_index.
class FockBasis {
 public:
  explicit FockBasis(const ModelSpec& spec) : spec_(spec) {
    const int xcap = spec.x_statistics == Statistics::fermionic ? 1 : spec.max_x;
    const int ycap = spec.y_statistics == Statistics::fermionic ? 1 : spec.max_y;
    if (spec.max_x > 3 || spec.max_y > 3)
      throw std::invalid_argument("FockBasis: occupation packing supports totals <= 3");
    for (int n = 0; n <= spec.max_x; ++n)
      detail::enumerate_occupations(spec.lattice.modes(), n, xcap, x_states_);
    for (int n = 0; n <= spec.max_y; ++n)
      detail::enumerate_occupations(spec.lattice.modes(), n, ycap, y_states_);
    for (std::size_t i = 0; i < x_states_.size(); ++i)
      x_index_[detail::pack_occupation(x_states_[i])] = i;
    for (std::size_t i = 0; i < y_states_.size(); ++i)
      y_index_[detail::pack_occupation(y_states_[i])] = i;
    if (dimension() > spec.dimension_budget)
      throw std::runtime_error("FockBasis: state dimension " + std::to_string(dimension()) +
                               " exceeds the resource budget " +
                               std::to_string(spec.dimension_budget));
  }

  const ModelSpec& spec() const { return spec_; }
  Eigen::Index dimension() const {
    return static_cast<Eigen::Index>(x_states_.size() * y_states_.size());
  }
  std::size_t x_count() const { return x_states_.size(); }
  std::size_t y_count() const { return y_states_.size(); }
  const std::vector<std::uint8_t>& x_occupation(std::size_t i) const { return x_states_[i]; }
  const std::vector<std::uint8_t>& y_occupation(std::size_t i) const { return y_states_[i]; }

  Eigen::Index index(std::size_t xi, std::size_t yi) const {
    return static_cast<Eigen::Index>(xi * y_states_.size() + yi);
  }
  std::size_t x_part(Eigen::Index state) const { return state / y_states_.size(); }
  std::size_t y_part(Eigen::Index state) const { return state % y_states_.size(); }

  std::optional<std::size_t> find_x(const std::vector<std::uint8_t>& occ) const {
    const auto it = x_index_.find(detail::pack_occupation(occ));
    if (it == x_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::size_t> find_y(const std::vector<std::uint8_t>& occ) const {
    const auto it = y_index_.find(detail::pack_occupation(occ));
    if (it == y_index_.end()) return std::nullopt;
    return it->second;
  }

  Eigen::Index vacuum() const { return index(*find_x(zero_occ()), *find_y(zero_occ())); }

  int x_total(Eigen::Index state) const {
    int n = 0;
    for (auto o : x_states_[x_part(state)]) n += o;
    return n;
  }
  int y_total(Eigen::Index state) const {
    int n = 0;
    for (auto o : y_states_[y_part(state)]) n += o;
    return n;
  }

 private:
  std::vector<std::uint8_t> zero_occ() const {
    return std::vector<std::uint8_t>(spec_.lattice.modes(), 0);
  }

  ModelSpec spec_;
  std::vector<std::vector<std::uint8_t>> x_states_, y_states_;
  std::unordered_map<std::uint64_t, std::size_t> x_index_, y_index_;
};

enum class Species { x, y };

// Canonical ladder operators on the truncated basis. Annihilators of a
// fermionic species carry the Jordan-Wigner sign over that species' own
// modes; x- and y-operators commute.
class LadderOperators {
 public:
  explicit LadderOperators(const FockBasis& basis) : basis_(&basis) {}

  // Canonical annihilator c_m or d_m.
  const SpMat& annihilate(Species sp, int mode) const {
    auto& cache = sp == Species::x ? ann_x_ : ann_y_;
    auto it = cache.find(mode);
    if (it != cache.end()) return it->second;
    return cache.emplace(mode, build_annihilator(sp, mode)).first->second;
  }

  SpMat create(Species sp, int mode) const {
    return SpMat(annihilate(sp, mode).adjoint());
  }

 private:
  SpMat build_annihilator(Species sp, int mode) const {
    const FockBasis& b = *basis_;
    const bool fermionic = (sp == Species::x ? b.spec().x_statistics : b.spec().y_statistics) ==
                           Statistics::fermionic;
    std::vector<Eigen::Triplet<Complex>> trip;
    const std::size_t nx = b.x_count(), ny = b.y_count();
    if (sp == Species::x) {
      for (std::size_t xi = 0; xi < nx; ++xi) {
        auto occ = b.x_occupation(xi);
        if (occ[mode] == 0) continue;
        double amp = fermionic ? 1.0 : std::sqrt(double(occ[mode]));
        if (fermionic) {
          int below = 0;
          for (int m = 0; m < mode; ++m) below += occ[m];
          if (below % 2) amp = -amp;
        }
        occ[mode] -= 1;
        const auto ti = b.find_x(occ);
        if (!ti) continue;
        for (std::size_t yi = 0; yi < ny; ++yi)
          trip.emplace_back(b.index(*ti, yi), b.index(xi, yi), amp);
      }
    } else {
      for (std::size_t yi = 0; yi < ny; ++yi) {
        auto occ = b.y_occupation(yi);
        if (occ[mode] == 0) continue;
        double amp = fermionic ? 1.0 : std::sqrt(double(occ[mode]));
        if (fermionic) {
          int below = 0;
          for (int m = 0; m < mode; ++m) below += occ[m];
          if (below % 2) amp = -amp;
        }
        occ[mode] -= 1;
        const auto ti = b.find_y(occ);
        if (!ti) continue;
        for (std::size_t xi = 0; xi < nx; ++xi)
          trip.emplace_back(b.index(xi, *ti), b.index(xi, yi), amp);
      }
    }
    SpMat m(b.dimension(), b.dimension());
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
  }

  const FockBasis* basis_;
  mutable std::map<int, SpMat> ann_x_, ann_y_;
};

// One-particle free Dirac Hamiltonian on the lattice, 2L x 2L. Periodic
// lattices use the exact dispersion k sigma3 + m sigma1 over the Brillouin
// zone (no fermion doubling); open lattices fall back to central differences.
inline Mat one_particle_hamiltonian(const LatticeSpec& lat, double mass) {
  const int l = lat.sites;
  Mat h = Mat::Zero(2 * l, 2 * l);
  if (lat.periodic) {
    std::vector<double> k(l);
    for (int n = 0; n < l; ++n) {
      const int signed_n = n <= l / 2 ? n : n - l;
      k[n] = 2.0 * kPi * signed_n / (l * lat.spacing);
    }
    for (int x = 0; x < l; ++x)
      for (int xp = 0; xp < l; ++xp) {
        Mat2 block = Mat2::Zero();
        for (int n = 0; n < l; ++n) {
          const Complex ph = std::exp(kI * (k[n] * lat.spacing * (x - xp))) / double(l);
          block(0, 0) += ph * k[n];
          block(1, 1) -= ph * k[n];
          block(0, 1) += ph * mass;
          block(1, 0) += ph * mass;
        }
        h.block<2, 2>(2 * x, 2 * xp) = block;
      }
  } else {
    for (int x = 0; x < l; ++x) {
      if (x + 1 < l) {
        const Complex v = -kI / (2.0 * lat.spacing);
        h(2 * x, 2 * (x + 1)) += v;          // sigma3 = +1 on spin 0
        h(2 * (x + 1), 2 * x) += -v;
        h(2 * x + 1, 2 * (x + 1) + 1) += -v; // sigma3 = -1 on spin 1
        h(2 * (x + 1) + 1, 2 * x + 1) += v;
      }
      h(2 * x, 2 * x + 1) += mass;
      h(2 * x + 1, 2 * x) += mass;
    }
  }
  return h;
}

// Cached dense spectral decomposition with exp(-iHt) application.
class Spectral {
 public:
  explicit Spectral(const Mat& h) {
    Eigen::SelfAdjointEigenSolver<Mat> solver(h);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("Spectral: eigendecomposition failed");
    vectors_ = solver.eigenvectors();
    values_ = solver.eigenvalues();
  }

  Eigen::Index dimension() const { return values_.size(); }
  const Mat& vectors() const { return vectors_; }
  const Eigen::VectorXd& values() const { return values_; }

  Vec to_eigenbasis(const Vec& v) const { return vectors_.adjoint() * v; }
  Vec from_eigenbasis(const Vec& v) const { return vectors_ * v; }

  Vec evolve(const Vec& v, double t) const {
    if (t == 0.0) return v;
    Vec w = vectors_.adjoint() * v;
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) *= std::exp(-kI * values_(i) * t);
    return vectors_ * w;
  }

 private:
  Mat vectors_;
  Eigen::VectorXd values_;
};

// One-particle propagator exp(-i h0 t). Massless periodic evolution over an
// integer number of lattice spacings is an exact chirality shift (strict
// light cone, no acausal tails); everything else goes through the spectrum.
class FreePropagator {
 public:
  FreePropagator(const LatticeSpec& lat, double mass)
      : lattice_(lat), mass_(mass), h0_(one_particle_hamiltonian(lat, mass)) {}

  const Mat& hamiltonian() const { return h0_; }

  Mat matrix(double t) const {
    const int l = lattice_.sites;
    if (mass_ == 0.0 && lattice_.periodic) {
      const double steps = t / lattice_.spacing;
      const long n = std::lround(steps);
      if (std::abs(steps - double(n)) < 1e-9) {
        Mat p = Mat::Zero(2 * l, 2 * l);
        for (int x = 0; x < l; ++x) {
          p(2 * lattice_.wrap(x + n), 2 * x) = 1.0;          // right-mover
          p(2 * lattice_.wrap(x - n) + 1, 2 * x + 1) = 1.0;  // left-mover
        }
        return p;
      }
    }
    if (!spectral_) spectral_ = std::make_shared<Spectral>(h0_);
    Mat p(2 * l, 2 * l);
    Vec phases(2 * l);
    for (Eigen::Index i = 0; i < 2 * l; ++i)
      phases(i) = std::exp(-kI * spectral_->values()(i) * t);
    p = spectral_->vectors() * phases.asDiagonal() * spectral_->vectors().adjoint();
    return p;
  }

 private:
  LatticeSpec lattice_;
  double mass_;
  Mat h0_;
  mutable std::shared_ptr<Spectral> spectral_;
};

// The emission-absorption model on the truncated lattice Fock space.
class EmissionAbsorptionModel {
 public:
  explicit EmissionAbsorptionModel(const ModelSpec& spec)
      : spec_(spec),
        basis_(spec),
        ops_(basis_),
        prop_x_(spec.lattice, spec.coupling.mass_x),
        prop_y_(spec.lattice, spec.coupling.mass_y) {
    if (!spec.lattice.periodic)
      throw std::invalid_argument("EmissionAbsorptionModel: periodic lattices only");
    build_hamiltonian();
  }

  const ModelSpec& spec() const { return spec_; }
  const FockBasis& basis() const { return basis_; }
  const LadderOperators& ops() const { return ops_; }
  const SpMat& hamiltonian() const { return h_; }
  const FreePropagator& propagator(Species sp) const {
    return sp == Species::x ? prop_x_ : prop_y_;
  }

  // Interaction density at a site: N_site (g* . b_cut + g . b_cut^dag).
  const SpMat& interaction_density(int site) const { return h_int_site_.at(site); }

  const Spectral& spectral() const {
    if (!spectral_) spectral_ = std::make_shared<Spectral>(Mat(h_));
    return *spectral_;
  }

  // Spectral decomposition of the free part H_x + H_y.
  const Spectral& free_spectral() const {
    if (!free_spectral_) free_spectral_ = std::make_shared<Spectral>(Mat(h_free_));
    return *free_spectral_;
  }

  Vec evolve(const Vec& state, double t) const { return spectral().evolve(state, t); }
  Vec free_evolve(const Vec& state, double t) const { return free_spectral().evolve(state, t); }

  // Smeared annihilator b_cut,s(site) = sqrt(a) sum_q kernel(q - site) d_{q,s}.
  SpMat smeared_annihilator(int site, int spin) const {
    const auto& lat = spec_.lattice;
    SpMat out(basis_.dimension(), basis_.dimension());
    for (int q = 0; q < lat.sites; ++q) {
      const double w = spec_.cutoff.kernel(lat.wrap(q - site));
      if (w == 0.0) continue;
      out = out + SpMat(std::sqrt(lat.spacing) * w *
                        ops_.annihilate(Species::y, lat.mode(q, spin)));
    }
    return out;
  }

  // Free Green function with the cutoff datum: G_cut(t) = e^{-i h0_y t} (g phi_cut),
  // returned as the spinor at the given site offset.
  Vec2 green_cut(double dt, int site_offset) const {
    const auto key = dt;
    auto it = green_cache_.find(key);
    if (it == green_cache_.end()) {
      Vec v0 = Vec::Zero(2 * spec_.lattice.sites);
      for (int d = 0; d < spec_.lattice.sites; ++d)
        for (int s = 0; s < 2; ++s)
          v0(2 * d + s) = spec_.coupling.g(s) * spec_.cutoff.kernel(d);
      Vec g = prop_y_.matrix(dt) * v0;
      it = green_cache_.emplace(key, std::move(g)).first;
    }
    const int d = spec_.lattice.wrap(site_offset);
    return Vec2(it->second(2 * d), it->second(2 * d + 1));
  }

  // Total x-number operator (conserved).
  SpMat x_number() const {
    SpMat n(basis_.dimension(), basis_.dimension());
    std::vector<Eigen::Triplet<Complex>> trip;
    for (Eigen::Index i = 0; i < basis_.dimension(); ++i)
      trip.emplace_back(i, i, double(basis_.x_total(i)));
    n.setFromTriplets(trip.begin(), trip.end());
    return n;
  }

  // Norm^2 sitting in the top y-sector (monitors truncation quality).
  double truncation_leak(const Vec& state) const {
    double leak = 0.0;
    for (Eigen::Index i = 0; i < basis_.dimension(); ++i)
      if (basis_.y_total(i) == spec_.max_y) leak += std::norm(state(i));
    return leak;
  }

  // Fock-space coefficient vector of a single occupation configuration.
  Vec basis_state(const std::vector<std::uint8_t>& x_occ,
                  const std::vector<std::uint8_t>& y_occ) const {
    const auto xi = basis_.find_x(x_occ);
    const auto yi = basis_.find_y(y_occ);
    if (!xi || !yi) throw std::invalid_argument("basis_state: occupation outside the basis");
    Vec v = Vec::Zero(basis_.dimension());
    v(basis_.index(*xi, *yi)) = 1.0;
    return v;
  }

  Vec random_state(Rng& rng) const {
    Vec v(basis_.dimension());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.cnormal();
    v.normalize();
    return v;
  }

 private:
  void build_hamiltonian() {
    const auto& lat = spec_.lattice;
    const Eigen::Index dim = basis_.dimension();
    const Mat h0x = prop_x_.hamiltonian();
    const Mat h0y = prop_y_.hamiltonian();

    h_free_ = SpMat(dim, dim);
    for (int m = 0; m < lat.modes(); ++m)
      for (int mp = 0; mp < lat.modes(); ++mp) {
        if (h0x(m, mp) != 0.0)
          h_free_ = h_free_ + SpMat(h0x(m, mp) * (ops_.create(Species::x, m) *
                                                  ops_.annihilate(Species::x, mp)));
        if (h0y(m, mp) != 0.0)
          h_free_ = h_free_ + SpMat(h0y(m, mp) * (ops_.create(Species::y, m) *
                                                  ops_.annihilate(Species::y, mp)));
      }

    SpMat h_int(dim, dim);
    for (int site = 0; site < lat.sites; ++site) {
      SpMat nsite(dim, dim);
      for (int s = 0; s < 2; ++s)
        nsite = nsite + SpMat(ops_.create(Species::x, lat.mode(site, s)) *
                              ops_.annihilate(Species::x, lat.mode(site, s)));
      SpMat coupling(dim, dim);
      for (int s = 0; s < 2; ++s) {
        const SpMat b = smeared_annihilator(site, s);
        coupling = coupling + SpMat(std::conj(spec_.coupling.g(s)) * b) +
                   SpMat(spec_.coupling.g(s) * SpMat(b.adjoint()));
      }
      SpMat piece = SpMat(nsite * coupling);
      h_int_site_[site] = piece;
      h_int = h_int + piece;
    }
    h_ = h_free_ + h_int;
  }

  ModelSpec spec_;
  FockBasis basis_;
  LadderOperators ops_;
  FreePropagator prop_x_, prop_y_;
  SpMat h_, h_free_;
  std::map<int, SpMat> h_int_site_;
  mutable std::shared_ptr<Spectral> spectral_;
  mutable std::shared_ptr<Spectral> free_spectral_;
  mutable std::map<double, Vec> green_cache_;
};

namespace detail {

inline Complex small_determinant(const Mat& m) {
  switch (m.rows()) {
    case 0: return 1.0;
    case 1: return m(0, 0);
    case 2: return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    default: throw std::invalid_argument("small_determinant: order > 3");
  }
}

inline Complex small_permanent(const Mat& m) {
  switch (m.rows()) {
    case 0: return 1.0;
    case 1: return m(0, 0);
    case 2: return m(0, 0) * m(1, 1) + m(0, 1) * m(1, 0);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) + m(1, 2) * m(2, 1)) +
             m(0, 1) * (m(1, 0) * m(2, 2) + m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) + m(1, 1) * m(2, 0));
    default: throw std::invalid_argument("small_permanent: order > 3");
  }
}

inline std::vector<int> occupied_modes(const std::vector<std::uint8_t>& occ) {
  std::vector<int> modes;
  for (std::size_t m = 0; m < occ.size(); ++m)
    for (int k = 0; k < occ[m]; ++k) modes.push_back(static_cast<int>(m));
  return modes;
}

inline double occupation_factorial(const std::vector<std::uint8_t>& occ) {
  double f = 1.0;
  for (auto n : occ)
    for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace detail

// Second quantization of one-particle maps: the matrix whose element between
// occupation states is det (fermions) or perm/normalization (bosons) of the
// corresponding submatrix of r. Sectors with different particle number do not
// mix.
inline Mat second_quantize_species(const FockBasis& basis, Species sp, const Mat& r) {
  const bool fermionic = (sp == Species::x ? basis.spec().x_statistics
                                           : basis.spec().y_statistics) == Statistics::fermionic;
  const std::size_t n = sp == Species::x ? basis.x_count() : basis.y_count();
  const auto occ_of = [&](std::size_t i) -> const std::vector<std::uint8_t>& {
    return sp == Species::x ? basis.x_occupation(i) : basis.y_occupation(i);
  };
  Mat out = Mat::Zero(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    const auto src = detail::occupied_modes(occ_of(col));
    for (std::size_t row = 0; row < n; ++row) {
      const auto dst = detail::occupied_modes(occ_of(row));
      if (dst.size() != src.size()) continue;
      Mat sub(dst.size(), src.size());
      for (std::size_t i = 0; i < dst.size(); ++i)
        for (std::size_t j = 0; j < src.size(); ++j) sub(i, j) = r(dst[i], src[j]);
      if (fermionic) {
        out(row, col) = detail::small_determinant(sub);
      } else {
        out(row, col) = detail::small_permanent(sub) /
                        std::sqrt(detail::occupation_factorial(occ_of(row)) *
                                  detail::occupation_factorial(occ_of(col)));
      }
    }
  }
  return out;
}

// Full second quantization Gamma(r_x, r_y) on the Fock coefficient space.
inline Mat second_quantize(const FockBasis& basis, const Mat& r_x, const Mat& r_y) {
  const Mat gx = second_quantize_species(basis, Species::x, r_x);
  const Mat gy = second_quantize_species(basis, Species::y, r_y);
  return kron(gx, gy);  // matches the x-major state layout
}

}  // namespace multitime::fock
