#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "multitime/operators.hpp"

using namespace multitime;
using Catch::Matchers::WithinAbs;

namespace {
const TestFunctionBundle& probe2() {
  static TestFunctionBundle p(2, 99);
  return p;
}
}  // namespace

TEST_CASE("free Dirac operators on distinct particles commute") {
  const auto h1 = free_dirac(0, 0.0);
  const auto h2 = free_dirac(1, 0.0);
  CHECK(commutator_residual(h1, h2, probe2(), 1e-3) < 1e-8);

  const auto m1 = free_dirac(0, 0.7);
  const auto m2 = free_dirac(1, 1.1);
  CHECK(commutator_residual(m1, m2, probe2(), 1e-3) < 1e-8);
}

TEST_CASE("single-particle potentials keep the system consistent") {
  const auto v1 = single_particle_potential(0, 0.5, [](double z) { return std::sin(z); }, 2);
  const auto v2 = single_particle_potential(1, 0.5, [](double z) { return 1.0 / (1 + z * z); }, 2);
  CHECK(commutator_residual(v1, v2, probe2(), 1e-3) < 1e-8);
}

TEST_CASE("pair potentials violate the consistency condition") {
  for (auto v : {&smoothed_coulomb, &gaussian_pair}) {
    const auto h1 = pair_potential(0, 0.0, v, 2);
    const auto h2 = pair_potential(1, 0.0, v, 2);
    const auto rep = commutator_residual_report(h1, h2, probe2(), 0.02);
    // The residual converges to a strictly positive limit.
    CHECK(rep.limit > 1e-3);
    for (double r : rep.residual) CHECK(r > 1e-3);
    // And the h-dependence is mild: not a discretization artifact.
    CHECK(std::abs(rep.residual[2] - rep.limit) < 0.1 * rep.limit);
  }
}

TEST_CASE("commutator against the analytic value for the pair potential") {
  // [H_1, H_2] = -i v'(z1 - z2) (sigma3 (x) 1 + 1 (x) sigma3) for scalar
  // pair potentials of the difference.
  const auto h1 = pair_potential(0, 0.0, &smoothed_coulomb, 2);
  const auto h2 = pair_potential(1, 0.0, &smoothed_coulomb, 2);
  const auto f = probe2().function();
  const auto& [t, z] = probe2().base_points()[1];
  const Vec num = commutator_apply(h1, h2, 2, f, t, z, 5e-3);

  const double d = z[0] - z[1];
  const double vp = -d * std::pow(1.0 + d * d, -1.5);
  Vec expect = f(t, z);
  const double s3s3[4] = {2.0, 0.0, 0.0, -2.0};
  for (int c = 0; c < 4; ++c) expect(c) *= Complex(0, -1) * vp * s3s3[c];
  CHECK((num - expect).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("time-dependent potential exercises the i d_t pathway") {
  // V_2 = t_1 w(z_2): [i d_{t1} - H_1, i d_{t2} - H_2] f = -i w(z_2) f.
  const auto w = [](double z) { return std::cos(0.7 * z); };
  const auto h1 = free_dirac(0, 0.0);
  MultiTimeOperatorSpec h2{1, 0.0, nullptr};
  h2.potential = [w](const std::vector<double>& t, const std::vector<double>& z) -> Mat {
    return t[0] * w(z[1]) * Mat::Identity(4, 4);
  };
  const auto f = probe2().function();
  const auto& [t, z] = probe2().base_points()[0];
  const Vec num = commutator_apply(h1, h2, 2, f, t, z, 1e-3);
  const Vec expect = Complex(0, -1) * w(z[1]) * f(t, z);
  CHECK((num - expect).lpNorm<Eigen::Infinity>() < 1e-7);
}

TEST_CASE("commutator application is antisymmetric under operator swap") {
  const auto h1 = pair_potential(0, 0.3, &gaussian_pair, 2);
  const auto h2 = pair_potential(1, 0.3, &gaussian_pair, 2);
  const auto f = probe2().function();
  for (const auto& [t, z] : probe2().base_points()) {
    const Vec a = commutator_apply(h1, h2, 2, f, t, z, 0.01);
    const Vec b = commutator_apply(h2, h1, 2, f, t, z, 0.01);
    CHECK((a + b).lpNorm<Eigen::Infinity>() < 1e-13);
  }
}

TEST_CASE("same-slot commutator is rejected") {
  const auto h1 = free_dirac(0);
  CHECK_THROWS_AS(commutator_residual(h1, h1, probe2(), 1e-3), std::invalid_argument);
}

TEST_CASE("report carries the h-sweep") {
  const auto h1 = free_dirac(0);
  const auto h2 = pair_potential(1, 0.0, &smoothed_coulomb, 2);
  const auto rep = commutator_residual_report(h1, h2, probe2(), 0.02);
  CHECK(rep.h[1] == rep.h[0] / 2);
  CHECK(rep.h[2] == rep.h[0] / 4);
  CHECK(rep.limit > 0.0);
}
