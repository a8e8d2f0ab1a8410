#pragma once

// Alternating projections onto linear subspaces of R^d, driven by a
// symbolic order sequence: xi_n = P_{x_n}(xi_{n-1}).

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pol/seqspace.hpp"

namespace pol {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Modified Gram-Schmidt in input order. A direction is dropped when its
/// residual norm is at most tol times the largest input norm. Returns a
/// dim x rank matrix with orthonormal columns.
Matrix orthonormalize(std::span<const Vector> spanning, Eigen::Index dim, double tol = 1e-12);

/// Orthogonal projection of v onto the span of the (orthonormal) columns.
Vector project(const Matrix& basis, const Vector& v);

Matrix projector_matrix(const Matrix& basis);

class SubspaceSystem {
 public:
  /// Bases must have `dim` rows and orthonormal columns.
  SubspaceSystem(Eigen::Index dim, std::vector<Matrix> bases);

  static SubspaceSystem from_spanning(Eigen::Index dim,
                                      const std::vector<std::vector<Vector>>& spanning,
                                      double tol = 1e-12);

  Eigen::Index dim() const noexcept { return dim_; }
  int size() const noexcept { return static_cast<int>(bases_.size()); }

  /// Basis of C_n, n in 1..size().
  const Matrix& basis(Symbol n) const;
  Vector project(Symbol n, const Vector& v) const;

 private:
  Eigen::Index dim_;
  std::vector<Matrix> bases_;
};

/// Orthonormal basis of C_1 cap ... cap C_N: eigenvectors of the averaged
/// projector with eigenvalue at least 1 - tol.
Matrix intersection_basis(const SubspaceSystem& system, double tol = 1e-10);

struct StopRule {
  double tol = 1e-10;
  std::size_t max_iters = 100'000;
  std::size_t log_stride = 1;
};

enum class StopReason { Converged, IterationCap, Stagnated };

std::string_view to_string(StopReason r);

struct TrajectoryPoint {
  std::size_t step = 0;
  double distance_to_target = 0.0;
  /// ||xi_{n-1} - xi_n||, the distance from xi_{n-1} to the set projected on.
  double distance_to_current_set = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryPoint> log;  // every log_stride steps, plus the last step
  Vector target;                     // P_cap xi_0
  Vector final_iterate;
  std::size_t steps = 0;
  StopReason reason = StopReason::IterationCap;
  double tol = 0.0;
  /// Largest single-step increase of the distance to the target.
  double max_increase = 0.0;
};

Trajectory run_map(const SubspaceSystem& system, const Sequence& order, const Vector& xi0,
                   const StopRule& stop = {});

struct ConvergenceReport {
  double final_distance = 0.0;
  std::size_t steps = 0;
  StopReason reason = StopReason::IterationCap;
  /// Geometric decay factor per projection and per N projections, from a
  /// log-distance regression over the second half of the log.
  std::optional<double> rate_per_step;
  std::optional<double> rate_per_sweep;
  bool monotone = true;  // within 1e-12 per step
};

ConvergenceReport convergence_report(const Trajectory& trajectory, const SubspaceSystem& system);

/// N subspaces of R^dim with dimensions uniform in 1..dim-1, each spanned by
/// standard normal vectors from a seeded generator.
SubspaceSystem random_system(Eigen::Index dim, int count, std::uint64_t seed);

}  // namespace pol
