#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "multitime/common.hpp"
#include "multitime/gaussian.hpp"
#include "multitime/spacetime.hpp"

using namespace multitime;
using Catch::Matchers::WithinAbs;

namespace {

// Independent boost oracle: series exponential of the boost generator.
Eigen::Matrix2d boost_matrix_series(double beta) {
  Eigen::Matrix2d gen;
  gen << 0, 1, 1, 0;  // Lambda(beta) = exp(-beta * gen)
  Eigen::Matrix2d term = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d sum = term;
  for (int n = 1; n < 60; ++n) {
    term = term * (-beta / n) * gen;
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("classify_configuration on the reference examples") {
  CHECK(classify_configuration({{0, 0}, {0, 1}}) == ConfigClass::Spacelike);
  CHECK(classify_configuration({{0, 0}, {1, 0.5}}) == ConfigClass::NonSpacelike);
  CHECK(classify_configuration({{2, 3}, {2, 3}}) == ConfigClass::Collision);
  CHECK(classify_configuration({}) == ConfigClass::Spacelike);
  // Lightlike pairs are not spacelike under the strict definition.
  CHECK(classify_configuration({{0, 0}, {1, 1}}) == ConfigClass::NonSpacelike);
}

TEST_CASE("classify_configuration is permutation- and boost-invariant") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    SpacetimeConfiguration q;
    for (int i = 0; i < 3; ++i) q.push_back({rng.uniform(-2, 2), rng.uniform(-3, 3)});
    const auto cls = classify_configuration(q);

    SpacetimeConfiguration perm = {q[2], q[0], q[1]};
    CHECK(classify_configuration(perm) == cls);

    const Boost b(rng.uniform(-1.5, 1.5));
    SpacetimeConfiguration boosted;
    for (const auto& p : q) boosted.push_back(b.apply(p));
    CHECK(classify_configuration(boosted) == cls);
  }
}

TEST_CASE("boost_point basics and oracle cross-check") {
  const Boost id(0.0);
  const SpacetimePoint p{1, 2};
  CHECK(id.apply(p) == p);

  const Boost b(std::log(2.0));
  CHECK(b.apply({0, 0}) == SpacetimePoint{0, 0});

  // Interval preservation and agreement with the series exponential.
  const SpacetimePoint q = b.apply({0, 1});
  CHECK_THAT(q.t * q.t - q.z * q.z, WithinAbs(-1.0, 1e-12));
  const Eigen::Matrix2d oracle = boost_matrix_series(std::log(2.0));
  CHECK_THAT(q.t, WithinAbs(oracle(0, 1), 1e-12));
  CHECK_THAT(q.z, WithinAbs(oracle(1, 1), 1e-12));

  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Boost bb(rng.uniform(-2, 2));
    const SpacetimePoint a{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const SpacetimePoint c{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    CHECK_THAT(interval(bb.apply(a), bb.apply(c)), WithinAbs(interval(a, c), 1e-10));
  }
}

TEST_CASE("spinor representation intertwines with the point map") {
  Rng rng(11);
  const Mat2 g[2] = {SpinorConventions::gamma0(), SpinorConventions::gamma1()};
  for (int trial = 0; trial < 20; ++trial) {
    const double beta = rng.uniform(-1.5, 1.5);
    const Boost b(beta);
    const Mat2 s = b.spinor_matrix();
    const Eigen::Matrix2d lam = b.point_matrix();
    for (int mu = 0; mu < 2; ++mu) {
      const Mat2 lhs = s * g[mu] * s.inverse();
      const Mat2 rhs = lam(mu, 0) * g[0] + lam(mu, 1) * g[1];
      CHECK((lhs - rhs).norm() < 1e-12);
    }
  }
}

TEST_CASE("boost group law for points and spinors") {
  const double b1 = 0.37, b2 = -0.9;
  const Eigen::Matrix2d lhs = Boost(b1).point_matrix() * Boost(b2).point_matrix();
  const Eigen::Matrix2d rhs = Boost(b1 + b2).point_matrix();
  CHECK((lhs - rhs).norm() < 1e-14);

  const Mat2 sl = Boost(b1).spinor_matrix() * Boost(b2).spinor_matrix();
  const Mat2 sr = Boost(b1 + b2).spinor_matrix();
  CHECK((sl - sr).norm() < 1e-14);
}

TEST_CASE("boost_spinor on one- and two-particle amplitudes") {
  Vec v1(2);
  v1 << 1, 0;
  const auto a1 = boost_spinor(Boost(1.0), MultiTimeAmplitude(1, v1));
  CHECK_THAT(std::abs(a1.value(0) - std::exp(0.5)), WithinAbs(0.0, 1e-14));
  CHECK_THAT(std::abs(a1.value(1)), WithinAbs(0.0, 1e-14));

  Vec v2(4);
  v2 << 0.2, 0.5, -0.3, 0.1;
  const auto id = boost_spinor(Boost(0.0), MultiTimeAmplitude(2, v2));
  CHECK((id.value - v2).norm() < 1e-14);

  // Mixed components scale by exp(beta/2) exp(-beta/2) = 1 under S (x) S.
  const auto b = boost_spinor(Boost(0.8), MultiTimeAmplitude(2, v2));
  CHECK_THAT(std::abs(b.value(1) - v2(1)), WithinAbs(0.0, 1e-14));
  CHECK_THAT(std::abs(b.value(2) - v2(2)), WithinAbs(0.0, 1e-14));
  // Against the explicit Kronecker product.
  const Mat s2 = kron(Boost(0.8).spinor_matrix(), Boost(0.8).spinor_matrix());
  CHECK((b.value - s2 * v2).norm() < 1e-13);
}

TEST_CASE("hypersurface validation and queries") {
  CHECK_THROWS_AS(Hypersurface({{0, 0}, {1, 1}}), std::invalid_argument);   // lightlike
  CHECK_THROWS_AS(Hypersurface({{0, 0}, {1, 1.5}}), std::invalid_argument); // timelike
  CHECK_THROWS_AS(Hypersurface({{1, 0}, {0, 0}}), std::invalid_argument);   // unordered

  const Hypersurface s({{-1, 0}, {1, 1}});  // slope 1/2
  CHECK_THAT(s.time(-5), WithinAbs(0.0, 1e-15));
  CHECK_THAT(s.time(0), WithinAbs(0.5, 1e-15));
  CHECK_THAT(s.time(5), WithinAbs(1.0, 1e-15));
  CHECK_THAT(s.slope(0), WithinAbs(0.5, 1e-15));
  CHECK_THAT(s.slope(5), WithinAbs(0.0, 1e-15));

  const Eigen::Vector2d n = s.normal_covariant(0.0);
  CHECK_THAT(n(0) * n(0) - n(1) * n(1), WithinAbs(1.0, 1e-13));  // unit timelike
  CHECK(n(0) > 0);                                               // future-pointing
}

TEST_CASE("hypersurface JSON round trip") {
  const Hypersurface s({{-2, 0.3}, {0, -0.2}, {3, 1.1}});
  const auto j = s.to_json();
  const Hypersurface back = Hypersurface::from_json(j);
  REQUIRE(back.nodes().size() == s.nodes().size());
  for (std::size_t i = 0; i < s.nodes().size(); ++i) {
    CHECK(back.nodes()[i].z == s.nodes()[i].z);
    CHECK(back.nodes()[i].t == s.nodes()[i].t);
  }
}

TEST_CASE("born_density: flat-surface reduction and domain check") {
  const Hypersurface flat = Hypersurface::flat(0.7);
  Vec v(4);
  v << 0.1, Complex(0.2, 0.4), -0.3, 0.5;
  const MultiTimeAmplitude amp(2, v);
  const SpacetimeConfiguration q = {{0.7, -1.0}, {0.7, 2.0}};
  CHECK_THAT(born_density(amp, flat, q), WithinAbs(v.squaredNorm(), 1e-14));

  CHECK_THAT(born_density(MultiTimeAmplitude(2, Vec::Zero(4)), flat, q), WithinAbs(0.0, 1e-15));

  const SpacetimeConfiguration off = {{0.7, -1.0}, {0.0, 2.0}};
  CHECK_THROWS_AS(born_density(amp, flat, off), std::domain_error);
}

TEST_CASE("born_density on a tilted segment matches the matrix oracle") {
  // Slope 1/2 everywhere around z = 0.
  const Hypersurface s({{-10, -5}, {10, 5}});
  Vec v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const MultiTimeAmplitude amp(1, v);
  const SpacetimeConfiguration q = {{s.time(0.4), 0.4}};

  // Brute-force 2x2 oracle: phi^dag gamma^0 (gamma^0 n_0 + gamma^1 n_1) phi.
  Mat2 g0, g1;
  g0 << 0, 1, 1, 0;
  g1 << 0, -1, 1, 0;
  const double n0 = 2.0 / std::sqrt(3.0), n1 = -1.0 / std::sqrt(3.0);
  const Complex expected = (v.adjoint() * g0 * (n0 * g0 + n1 * g1) * v)(0);
  CHECK_THAT(born_density(amp, s, q), WithinAbs(expected.real(), 1e-13));
  // Frozen value 2/sqrt(3) for this spinor and slope.
  CHECK_THAT(born_density(amp, s, q), WithinAbs(1.1547005383792515, 1e-12));
}

TEST_CASE("born_density is nonnegative for random spinors and spacelike slopes") {
  Rng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const double slope = rng.uniform(-0.95, 0.95);
    const Hypersurface s({{-20, -20 * slope}, {20, 20 * slope}});
    Vec v(4);
    for (int i = 0; i < 4; ++i) v(i) = rng.cnormal();
    const double z1 = rng.uniform(-10, 10);
    double z2 = rng.uniform(-10, 10);
    if (z1 == z2) z2 += 0.5;
    const SpacetimeConfiguration q = {{s.time(z1), z1}, {s.time(z2), z2}};
    CHECK(born_density(MultiTimeAmplitude(2, v), s, q) >= -1e-12);
  }
}

TEST_CASE("surface norm of a normalized packet: flat, tilted, quadratic scaling") {
  const GaussianPacket f{0.0, 0.8, 1.3};
  // Right-moving chirality on the flat surface t = 0.
  const auto section = [&](double z) {
    Vec2 v;
    v << f(z), 0.0;
    return v;
  };
  const double flat = surface_norm_1p(Hypersurface::flat(0.0), -10, 10, 200, section);
  CHECK_THAT(flat, WithinAbs(1.0, 1e-9));

  // Same free solution restricted to a tilted surface: phi(t, z) = (f(z - t), 0).
  const Hypersurface tilted({{-12, -4.8}, {12, 4.8}});  // slope 0.4
  const auto section_tilted = [&](double z) {
    Vec2 v;
    v << f(z - tilted.time(z)), 0.0;
    return v;
  };
  CHECK_THAT(surface_norm_1p(tilted, -14, 14, 280, section_tilted), WithinAbs(1.0, 1e-9));

  const auto doubled = [&](double z) { return Vec2(2.0 * section(z)); };
  CHECK_THAT(surface_norm_1p(Hypersurface::flat(0.0), -10, 10, 200, doubled),
             WithinAbs(4.0, 1e-8));
}

TEST_CASE("sampled hypersurface norm converges at first order") {
  const GaussianPacket f{0.0, 0.9, 0.0};
  const Hypersurface s({{-8, -2.4}, {8, 2.4}});
  const auto make_norm = [&](int n) {
    std::vector<double> grid(n);
    std::vector<Vec2> samples(n);
    for (int i = 0; i < n; ++i) {
      grid[i] = -12.0 + 24.0 * (i + 0.5) / n;
      Vec2 v;
      v << f(grid[i] - s.time(grid[i])), 0.0;
      samples[i] = v;
    }
    return hypersurface_norm_sampled(s, grid, samples);
  };
  const double e1 = std::abs(make_norm(200) - 1.0);
  CHECK(e1 < 2e-3);
  CHECK(std::abs(make_norm(400) - 1.0) < std::max(e1, 1e-12));
}
