#pragma once

// The multi-time emission-absorption model: phi is constructed from the
// Heisenberg-picture formula
//   phi(x^M, y^N) = (-1)^{M(M-1)/2}/sqrt(M! N!) <vac| a(x_1)..a(x_M) b(y_1)..b(y_N) |Psi>
// and the multi-time evolution equations are verified as residuals on it.
// Chains are evaluated with suffix caching in the eigenbasis of H, so a
// single amplitude costs O(dim) once its suffix vectors exist.
//
// Equation residuals use 3-point central time derivatives: their O(dt^2)
// truncation is the quantity the convergence checks measure (the exact
// lattice solution satisfies the equations identically at on-grid massless
// configurations, so sharper stencils would only expose rounding noise).

#include <bit>
#include <cstring>
#include <functional>
#include <string>
#include <unordered_map>

#include "multitime/fock.hpp"

namespace multitime::qft {

using fock::EmissionAbsorptionModel;
using fock::Species;

struct LatticePoint {
  double t = 0.0;
  int site = 0;
  int spin = 0;
};

// Pairwise lattice-spacelike test: |dt| < a * d(site_i, site_j), with equal
// points admitted as collisions.
inline bool lattice_spacelike(const fock::LatticeSpec& lat, const std::vector<LatticePoint>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double dt = std::abs(pts[i].t - pts[j].t);
      const double dz = lat.spacing * lat.distance(pts[i].site, pts[j].site);
      if (dt == 0.0 && dz == 0.0) continue;
      if (dt >= dz) return false;
    }
  return true;
}

struct ChainOp {
  Species species;
  int mode;
  double time;
};

// Evaluates vacuum expectation chains of Heisenberg annihilators against a
// fixed state.
class HeisenbergPhi {
 public:
  HeisenbergPhi(const EmissionAbsorptionModel& model, Vec state)
      : model_(&model), psi_(std::move(state)) {
    const auto& spec = model.spectral();
    psi_eig_ = spec.to_eigenbasis(psi_);
  }

  const EmissionAbsorptionModel& model() const { return *model_; }
  const Vec& state() const { return psi_; }

  // <vac| O_1(t_1) ... O_n(t_n) |Psi> with canonical (not position-scaled)
  // annihilators.
  Complex braket(const std::vector<ChainOp>& ops) const {
    const auto& spec = model_->spectral();
    if (ops.empty()) return psi_(model_->basis().vacuum());
    const Vec& suffix = ops.size() > 1 ? suffix_eig(ops, 1) : psi_eig_;
    // Head: <O_1^dag vac| e^{-iH(t_1 - t_2)} |suffix>.
    const Eigen::Index head = head_index(ops.front());
    if (head < 0) return 0.0;
    const double t2 = ops.size() > 1 ? ops[1].time : 0.0;
    const double gap = ops.front().time - t2;
    Complex value = 0.0;
    const auto& v = spec.vectors();
    const auto& lam = spec.values();
    for (Eigen::Index al = 0; al < v.cols(); ++al)
      value += v(head, al) * std::exp(-kI * lam(al) * gap) * suffix(al);
    return value;
  }

  // Multi-time Fock function amplitude for the given x- and y-points.
  Complex phi(const std::vector<LatticePoint>& xs, const std::vector<LatticePoint>& ys) const {
    const int m = static_cast<int>(xs.size());
    const int n = static_cast<int>(ys.size());
    std::vector<ChainOp> ops;
    ops.reserve(m + n);
    const auto& lat = model_->spec().lattice;
    for (const auto& p : xs) ops.push_back({Species::x, lat.mode(p.site, p.spin), p.t});
    for (const auto& p : ys) ops.push_back({Species::y, lat.mode(p.site, p.spin), p.t});
    double fact = 1.0;
    for (int k = 2; k <= m; ++k) fact *= k;
    for (int k = 2; k <= n; ++k) fact *= k;
    const double sign = (m * (m - 1) / 2) % 2 ? -1.0 : 1.0;
    const double scale = std::pow(lat.spacing, -0.5 * (m + n));
    return sign / std::sqrt(fact) * scale * braket(ops);
  }

  void clear_cache() const { suffix_cache_.clear(); }
  std::size_t cache_size() const { return suffix_cache_.size(); }

 private:
  Eigen::Index head_index(const ChainOp& op) const {
    // O^dag |vac> is the one-particle basis state of the op's mode.
    const auto& b = model_->basis();
    std::vector<std::uint8_t> x(b.spec().lattice.modes(), 0), y(x);
    (op.species == Species::x ? x : y)[op.mode] = 1;
    const auto xi = b.find_x(x);
    const auto yi = b.find_y(y);
    if (!xi || !yi) return -1;
    return b.index(*xi, *yi);
  }

  static void append_key(std::string& key, const ChainOp& op) {
    key.push_back(op.species == Species::x ? 'x' : 'y');
    key.push_back(static_cast<char>(op.mode));
    const auto bits = std::bit_cast<std::uint64_t>(op.time);
    key.append(reinterpret_cast<const char*>(&bits), sizeof(bits));
  }

  // Suffix C_k = O_k e^{-iH(t_k - t_{k+1})} C_{k+1}, C_{n+1} = Psi (t=0),
  // stored in the eigenbasis.
  const Vec& suffix_eig(const std::vector<ChainOp>& ops, std::size_t k) const {
    std::string key;
    for (std::size_t i = k; i < ops.size(); ++i) append_key(key, ops[i]);
    auto it = suffix_cache_.find(key);
    if (it != suffix_cache_.end()) return it->second;

    if (suffix_cache_.size() > 30000) suffix_cache_.clear();

    const auto& spec = model_->spectral();
    Vec below_eig;
    double t_next = 0.0;
    if (k + 1 <= ops.size() - 1) {
      below_eig = suffix_eig(ops, k + 1);
      t_next = ops[k + 1].time;
    } else {
      below_eig = psi_eig_;
      t_next = 0.0;
    }
    Vec w = below_eig;
    const double gap = ops[k].time - t_next;
    if (gap != 0.0)
      for (Eigen::Index i = 0; i < w.size(); ++i)
        w(i) *= std::exp(-kI * spec.values()(i) * gap);
    Vec pos = spec.from_eigenbasis(w);
    pos = model_->ops().annihilate(ops[k].species, ops[k].mode) * pos;
    Vec eig = spec.to_eigenbasis(pos);
    return suffix_cache_.emplace(std::move(key), std::move(eig)).first->second;
  }

  const EmissionAbsorptionModel* model_;
  Vec psi_;
  Vec psi_eig_;
  mutable std::unordered_map<std::string, Vec> suffix_cache_;
};

// A multi-time sector function: amplitude at given x- and y-points. The
// Heisenberg phi provides the base instance; operator appliers return new
// ones, so consistency commutators can be nested.
using SectorFn =
    std::function<Complex(const std::vector<LatticePoint>&, const std::vector<LatticePoint>&)>;

inline SectorFn as_sector_fn(const HeisenbergPhi& phi) {
  return [&phi](const std::vector<LatticePoint>& xs, const std::vector<LatticePoint>& ys) {
    return phi.phi(xs, ys);
  };
}

namespace detail {

template <class F>
Complex central3(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace detail

// H_{x_j} phi per the multi-time equations: free Dirac part, creation term
// (reads sector N+1 at the smeared x_j point), annihilation term with the
// cutoff Green function (reads sector N-1). `alt` drops the annihilation
// term (it moves to the y-equations in the alternative splitting).
inline Complex apply_h_x(const EmissionAbsorptionModel& model, const SectorFn& fn,
                         const std::vector<LatticePoint>& xs, const std::vector<LatticePoint>& ys,
                         std::size_t j, bool alt = false) {
  const auto& lat = model.spec().lattice;
  const Mat& h0 = model.propagator(Species::x).hamiltonian();
  Complex out = 0.0;
  // Free part.
  const int row = lat.mode(xs[j].site, xs[j].spin);
  for (int q = 0; q < lat.sites; ++q)
    for (int s = 0; s < 2; ++s) {
      const Complex w = h0(row, lat.mode(q, s));
      if (w == 0.0) continue;
      auto shifted = xs;
      shifted[j].site = q;
      shifted[j].spin = s;
      out += w * fn(shifted, ys);
    }
  // Creation term: sqrt(N+1) sum_s g*_s phi^{(N+1)}(..., (t_j, x_j smeared)).
  const int n = static_cast<int>(ys.size());
  if (n < model.spec().max_y) {
    for (int s = 0; s < 2; ++s) {
      const Complex gs = std::conj(model.spec().coupling.g(s));
      if (gs == 0.0) continue;
      for (int q = 0; q < lat.sites; ++q) {
        const double w = model.spec().cutoff.kernel(lat.wrap(q - xs[j].site));
        if (w == 0.0) continue;
        auto extended = ys;
        extended.push_back({xs[j].t, q, s});
        out += std::sqrt(double(n + 1)) * gs * lat.spacing * w * fn(xs, extended);
      }
    }
  }
  // Annihilation term: (1/sqrt(N)) sum_k G_cut(y_k - x_j)_{s_k} phi^{(N-1)}.
  if (!alt && n > 0) {
    for (int k = 0; k < n; ++k) {
      const Vec2 green =
          model.green_cut(ys[k].t - xs[j].t, ys[k].site - xs[j].site);
      if (green(ys[k].spin) == 0.0) continue;
      auto reduced = ys;
      reduced.erase(reduced.begin() + k);
      out += green(ys[k].spin) / std::sqrt(double(n)) * fn(xs, reduced);
    }
  }
  return out;
}

// H_{y_k} phi: free Dirac part; with `alt`, additionally the relocated
// annihilation term summed over x-particles.
inline Complex apply_h_y(const EmissionAbsorptionModel& model, const SectorFn& fn,
                         const std::vector<LatticePoint>& xs, const std::vector<LatticePoint>& ys,
                         std::size_t k, bool alt = false) {
  const auto& lat = model.spec().lattice;
  const Mat& h0 = model.propagator(Species::y).hamiltonian();
  Complex out = 0.0;
  const int row = lat.mode(ys[k].site, ys[k].spin);
  for (int q = 0; q < lat.sites; ++q)
    for (int s = 0; s < 2; ++s) {
      const Complex w = h0(row, lat.mode(q, s));
      if (w == 0.0) continue;
      auto shifted = ys;
      shifted[k].site = q;
      shifted[k].spin = s;
      out += w * fn(xs, shifted);
    }
  if (alt) {
    const int n = static_cast<int>(ys.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const Vec2 green = model.green_cut(ys[k].t - xs[j].t, ys[k].site - xs[j].site);
      if (green(ys[k].spin) == 0.0) continue;
      auto reduced = ys;
      reduced.erase(reduced.begin() + k);
      out += green(ys[k].spin) / std::sqrt(double(n)) * fn(xs, reduced);
    }
  }
  return out;
}

struct Slot {
  Species species;
  std::size_t index;
};

// (i d_t - H) phi at the configuration, as a composable SectorFn.
inline SectorFn apply_evolution_operator(const EmissionAbsorptionModel& model, SectorFn fn,
                                         Slot slot, double dt, bool alt = false) {
  return [&model, fn = std::move(fn), slot, dt, alt](const std::vector<LatticePoint>& xs,
                                                     const std::vector<LatticePoint>& ys) {
    const Complex deriv = detail::central3(
        [&](double t) {
          auto xs2 = xs;
          auto ys2 = ys;
          (slot.species == Species::x ? xs2[slot.index] : ys2[slot.index]).t = t;
          return fn(xs2, ys2);
        },
        (slot.species == Species::x ? xs[slot.index] : ys[slot.index]).t, dt);
    const Complex h = slot.species == Species::x ? apply_h_x(model, fn, xs, ys, slot.index, alt)
                                                 : apply_h_y(model, fn, xs, ys, slot.index, alt);
    return kI * deriv - h;
  };
}

// Residual of one multi-time equation on the Heisenberg-constructed phi.
inline double multitime_equation_residual(const EmissionAbsorptionModel& model,
                                          const HeisenbergPhi& phi,
                                          const std::vector<LatticePoint>& xs,
                                          const std::vector<LatticePoint>& ys, Slot slot,
                                          double dt) {
  return std::abs(apply_evolution_operator(model, as_sector_fn(phi), slot, dt)(xs, ys));
}

// |H phi - H_alt phi| summed over all equations: exactly the relocated
// G-terms, which vanish where the cutoff Green function does.
inline double splitting_equivalence_residual(const EmissionAbsorptionModel& model,
                                             const HeisenbergPhi& phi,
                                             const std::vector<LatticePoint>& xs,
                                             const std::vector<LatticePoint>& ys) {
  const SectorFn fn = as_sector_fn(phi);
  double total = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j)
    total += std::abs(apply_h_x(model, fn, xs, ys, j, false) -
                      apply_h_x(model, fn, xs, ys, j, true));
  for (std::size_t k = 0; k < ys.size(); ++k)
    total += std::abs(apply_h_y(model, fn, xs, ys, k, true) -
                      apply_h_y(model, fn, xs, ys, k, false));
  return total;
}

// Position representation of a state: same normalization as phi, evaluated
// by plain operator application (no Heisenberg evolution).
inline Complex position_representation(const EmissionAbsorptionModel& model, const Vec& state,
                                       const std::vector<LatticePoint>& xs,
                                       const std::vector<LatticePoint>& ys) {
  const auto& lat = model.spec().lattice;
  Vec v = state;
  for (auto it = ys.rbegin(); it != ys.rend(); ++it)
    v = model.ops().annihilate(Species::y, lat.mode(it->site, it->spin)) * v;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it)
    v = model.ops().annihilate(Species::x, lat.mode(it->site, it->spin)) * v;
  const int m = static_cast<int>(xs.size()), n = static_cast<int>(ys.size());
  double fact = 1.0;
  for (int k = 2; k <= m; ++k) fact *= k;
  for (int k = 2; k <= n; ++k) fact *= k;
  const double sign = (m * (m - 1) / 2) % 2 ? -1.0 : 1.0;
  return sign / std::sqrt(fact) * std::pow(lat.spacing, -0.5 * (m + n)) *
         v(model.basis().vacuum());
}

// Max deviation between phi at equal times t and the position representation
// of e^{-iHt} Psi, over every configuration drawn from the occupation basis.
inline double equal_time_reduction_check(const EmissionAbsorptionModel& model,
                                         const HeisenbergPhi& phi, double t) {
  const auto& basis = model.basis();
  const auto& lat = model.spec().lattice;
  const Vec evolved = model.evolve(phi.state(), t);
  double dev = 0.0;
  for (Eigen::Index st = 0; st < basis.dimension(); ++st) {
    std::vector<LatticePoint> xs, ys;
    const auto& xo = basis.x_occupation(basis.x_part(st));
    const auto& yo = basis.y_occupation(basis.y_part(st));
    for (int m = 0; m < lat.modes(); ++m) {
      for (int c = 0; c < xo[m]; ++c) xs.push_back({t, m / 2, m % 2});
      for (int c = 0; c < yo[m]; ++c) ys.push_back({t, m / 2, m % 2});
    }
    const Complex lhs = phi.phi(xs, ys);
    const Complex rhs = position_representation(model, evolved, xs, ys);
    dev = std::max(dev, std::abs(lhs - rhs));
  }
  return dev;
}

// Consistency commutator [i d_a - H_a, i d_b - H_b] applied to phi at the
// configuration; the probe is the Heisenberg-constructed phi itself.
inline double qft_commutator_check(const EmissionAbsorptionModel& model, const HeisenbergPhi& phi,
                                   const std::vector<LatticePoint>& xs,
                                   const std::vector<LatticePoint>& ys, Slot a, Slot b,
                                   double dt) {
  const SectorFn base = as_sector_fn(phi);
  const SectorFn ab = apply_evolution_operator(
      model, apply_evolution_operator(model, base, b, dt), a, dt);
  const SectorFn ba = apply_evolution_operator(
      model, apply_evolution_operator(model, base, a, dt), b, dt);
  return std::abs(ab(xs, ys) - ba(xs, ys));
}

enum class StatisticsVariant { y_bosonic, y_fermionic, x_bosonic };

struct StatisticsReport {
  struct Entry {
    StatisticsVariant variant;
    double max_residual = 0.0;
    std::vector<LatticePoint> witness_xs, witness_ys;
  };
  std::vector<Entry> entries;
};

// Runs the x-x consistency commutator over a sweep of spacelike
// configurations for each statistics variant. The paper's model (bosonic y)
// and the x-bosonic variant commute; fermionic y breaks consistency.
inline StatisticsReport statistics_consistency_experiment(
    const fock::LatticeSpec& lattice, const fock::CouplingSpec& coupling, int max_y, double dt,
    std::uint64_t seed) {
  StatisticsReport report;
  for (auto variant : {StatisticsVariant::y_bosonic, StatisticsVariant::y_fermionic,
                       StatisticsVariant::x_bosonic}) {
    fock::ModelSpec spec;
    spec.lattice = lattice;
    spec.coupling = coupling;
    spec.cutoff = fock::CutoffProfile::delta(lattice);
    spec.max_x = 2;
    spec.max_y = max_y;
    spec.x_statistics = variant == StatisticsVariant::x_bosonic ? fock::Statistics::bosonic
                                                                : fock::Statistics::fermionic;
    spec.y_statistics = variant == StatisticsVariant::y_fermionic ? fock::Statistics::fermionic
                                                                  : fock::Statistics::bosonic;
    EmissionAbsorptionModel model(spec);
    Rng rng(seed);
    HeisenbergPhi phi(model, model.random_state(rng));

    StatisticsReport::Entry entry;
    entry.variant = variant;
    const double a = lattice.spacing;
    // Spacelike (2,1) configurations: x-pair separations exceed their time
    // offsets; the y-particle sits elsewhere.
    const std::vector<std::pair<double, double>> time_offsets = {
        {0.0, 0.0}, {0.3 * a, 0.0}, {0.0, -0.4 * a}, {0.25 * a, 0.25 * a}};
    for (const auto& [dtx1, dtx2] : time_offsets) {
      for (int sep = 1; sep <= lattice.sites / 2; ++sep) {
        std::vector<LatticePoint> xs = {{dtx1, 0, 0}, {dtx2, sep, 1}};
        std::vector<LatticePoint> ys = {{0.1 * a, lattice.sites / 2, 0}};
        if (!lattice_spacelike(lattice, {xs[0], xs[1], ys[0]})) continue;
        const double r =
            qft_commutator_check(model, phi, xs, ys, {Species::x, 0}, {Species::x, 1}, dt);
        if (r > entry.max_residual) {
          entry.max_residual = r;
          entry.witness_xs = xs;
          entry.witness_ys = ys;
        }
      }
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace multitime::qft
