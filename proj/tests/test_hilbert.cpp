#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pol/generators.hpp"
#include "pol/hilbert.hpp"
#include "pol/rng.hpp"

using namespace pol;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Vector random_vector(SplitMix64& rng, Eigen::Index dim) {
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.normal();
  return v;
}

// Two lines through the origin of R^2 at angle theta.
SubspaceSystem two_lines(double theta) {
  return SubspaceSystem::from_spanning(2, {{vec({1, 0})}, {vec({std::cos(theta), std::sin(theta)})}});
}

// Random subspaces that all contain a common random direction.
SubspaceSystem system_with_common_line(Eigen::Index dim, int count, SplitMix64& rng) {
  const Vector common = random_vector(rng, dim);
  std::vector<std::vector<Vector>> spanning;
  for (int n = 0; n < count; ++n) {
    std::vector<Vector> span{common};
    const auto extra = rng.uniform_int(1, dim - 2);
    for (std::int64_t i = 0; i < extra; ++i) span.push_back(random_vector(rng, dim));
    spanning.push_back(std::move(span));
  }
  return SubspaceSystem::from_spanning(dim, spanning);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::ParseError;
}

}  // namespace

TEST_CASE("orthonormalize examples") {
  const std::vector<Vector> dependent{vec({1, 1, 0}), vec({2, 2, 0}), vec({0, 0, 3})};
  const Matrix q = orthonormalize(dependent, 3);
  REQUIRE(q.cols() == 2);
  CHECK((q.transpose() * q - Matrix::Identity(2, 2)).norm() <= 1e-14);
  CHECK(q(0, 0) == doctest::Approx(1 / std::numbers::sqrt2));
  CHECK(std::abs(q(2, 1)) == doctest::Approx(1.0));
  CHECK(orthonormalize(std::vector<Vector>{Vector::Zero(3)}, 3).cols() == 0);
  CHECK(code_of([] { orthonormalize(std::vector<Vector>{vec({1, 0})}, 3); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("project examples") {
  const auto sys = SubspaceSystem::from_spanning(3, {{vec({1, 0, 0}), vec({0, 1, 0})}, {vec({1, 1, 1})}});
  CHECK((sys.project(1, vec({3, 4, 5})) - vec({3, 4, 0})).norm() <= 1e-14);
  CHECK((sys.project(2, vec({3, 0, 0})) - vec({1, 1, 1})).norm() <= 1e-14);
  CHECK(code_of([&] { sys.project(1, vec({1, 2})); }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([&] { sys.basis(3); }) == ErrorCode::InvalidSymbol);
}

TEST_CASE("intersection examples") {
  const auto planes = SubspaceSystem::from_spanning(
      3, {{vec({1, 0, 0}), vec({0, 1, 0})}, {vec({0, 1, 0}), vec({0, 0, 1})}});
  const Matrix cap = intersection_basis(planes);
  REQUIRE(cap.cols() == 1);
  CHECK(std::abs(cap(1, 0)) == doctest::Approx(1.0));
  CHECK(intersection_basis(two_lines(0.3)).cols() == 0);
  CHECK(intersection_basis(two_lines(0.0)).cols() == 1);
}

TEST_CASE("orthogonal axes converge after two projections") {
  const auto axes = SubspaceSystem::from_spanning(2, {{vec({1, 0})}, {vec({0, 1})}});
  const auto traj = run_map(axes, Sequence::periodic(Alphabet(2), {1, 2}), vec({3, 4}));
  CHECK(traj.reason == StopReason::Converged);
  CHECK(traj.steps == 2);
  CHECK(traj.final_iterate.norm() == 0.0);
  REQUIRE(traj.log.size() == 3);
  CHECK(traj.log[0].distance_to_target == doctest::Approx(5.0));
  CHECK(traj.log[1].distance_to_target == doctest::Approx(3.0));
  CHECK(traj.log[1].distance_to_current_set == doctest::Approx(4.0));
}

TEST_CASE("lines at 45 degrees halve the norm every sweep") {
  const auto lines = two_lines(std::numbers::pi / 4);
  StopRule stop;
  stop.max_iters = 40;
  stop.tol = 0.0;
  const auto traj = run_map(lines, Sequence::periodic(Alphabet(2), {1, 2}), vec({1, 0}), stop);
  CHECK(traj.reason == StopReason::IterationCap);
  REQUIRE(traj.log.size() == 41);  // step 0 included
  // The first projection fixes xi_0; afterwards each sweep halves the norm.
  for (std::size_t n = 0; n < 20; ++n) {
    const double expected = std::ldexp(1.0, -static_cast<int>(n));
    CHECK(std::abs(traj.log[2 * n + 1].distance_to_target - expected) <= 1e-12 * expected);
  }
  const auto report = convergence_report(traj, lines);
  REQUIRE(report.rate_per_sweep.has_value());
  CHECK(*report.rate_per_sweep == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(report.monotone);
}

TEST_CASE("an order that never visits a subspace stagnates") {
  const auto sys = SubspaceSystem::from_spanning(
      3, {{vec({1, 0, 0}), vec({0, 1, 0})}, {vec({1, 0, 0}), vec({0, 0, 1})}, {vec({0, 1, 0})}});
  // The first two planes share the first axis, which the third misses.
  const auto traj = run_map(sys, Sequence::periodic(Alphabet(3), {1, 2}), vec({1, 1, 1}));
  CHECK(traj.reason == StopReason::Stagnated);
  CHECK(traj.log.back().distance_to_target == doctest::Approx(1.0));
}

TEST_CASE("map input errors") {
  const auto lines = two_lines(0.5);
  CHECK(code_of([&] { run_map(lines, Sequence::periodic(Alphabet(3), {1, 2, 3}), vec({1, 0})); }) ==
        ErrorCode::AlphabetMismatch);
  CHECK(code_of([&] { run_map(lines, Sequence::prefix(Alphabet(2), {1, 2, 1}), vec({1, 0})); }) ==
        ErrorCode::OutOfHorizon);
  CHECK(code_of([&] { run_map(lines, Sequence::periodic(Alphabet(2), {1, 2}), vec({1, 0, 0})); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("projector laws on random systems") {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const auto sys = system_with_common_line(6, 3, rng);
    const Matrix cap = projector_matrix(intersection_basis(sys));
    CHECK(intersection_basis(sys).cols() >= 1);
    for (Symbol n = 1; n <= 3; ++n) {
      const Matrix p = projector_matrix(sys.basis(n));
      CHECK((p * p - p).norm() <= 1e-12);
      CHECK((p - p.transpose()).norm() <= 1e-12);
      CHECK((p * cap - cap).norm() <= 1e-9);
      const Vector u = random_vector(rng, 6);
      const Vector v = random_vector(rng, 6);
      CHECK((sys.project(n, u) - sys.project(n, v)).norm() <= (u - v).norm() + 1e-12);
    }
  }
}

TEST_CASE("cyclic orders converge to the projection onto the intersection") {
  SplitMix64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sys = system_with_common_line(5, 3, rng);
    const Vector xi0 = random_vector(rng, 5);
    const auto traj = run_map(sys, Sequence::periodic(Alphabet(3), {1, 2, 3}), xi0);
    CHECK(traj.reason == StopReason::Converged);
    CHECK((traj.final_iterate - traj.target).norm() <= 1e-9);
    CHECK(convergence_report(traj, sys).monotone);
  }
}

TEST_CASE("quasi-periodic orders converge on random systems") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto sys = random_system(4, 3, seed);
    const auto order = generate(QuasiPeriodicSpec{6, seed}, Alphabet(3));
    SplitMix64 rng(seed);
    const auto traj = run_map(sys, order, random_vector(rng, 4));
    CHECK(traj.reason == StopReason::Converged);
    CHECK(traj.max_increase <= 1e-12);
  }
}

TEST_CASE("random systems are reproducible") {
  const auto a = random_system(5, 3, 99);
  const auto b = random_system(5, 3, 99);
  for (Symbol n = 1; n <= 3; ++n) {
    CHECK(a.basis(n) == b.basis(n));
    CHECK(a.basis(n).cols() >= 1);
    CHECK(a.basis(n).cols() <= 4);
  }
}
