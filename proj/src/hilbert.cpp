#include "pol/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "pol/rng.hpp"

namespace pol {

namespace {

constexpr double kMonotoneSlack = 1e-12;
constexpr double kStagnationRelative = 1e-14;

void require_dim(Eigen::Index expected, Eigen::Index got, const char* what) {
  if (expected != got) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has dimension " +
                                                  std::to_string(got) + ", expected " +
                                                  std::to_string(expected));
  }
}

}  // namespace

Matrix orthonormalize(std::span<const Vector> spanning, Eigen::Index dim, double tol) {
  double scale = 0.0;
  for (const auto& v : spanning) {
    require_dim(dim, v.size(), "spanning vector");
    scale = std::max(scale, v.norm());
  }
  std::vector<Vector> kept;
  for (const auto& v : spanning) {
    Vector r = v;
    for (const auto& q : kept) r -= q.dot(r) * q;
    // Second pass keeps orthogonality at the level of rounding.
    for (const auto& q : kept) r -= q.dot(r) * q;
    const double norm = r.norm();
    if (norm > tol * scale && norm > 0.0) kept.push_back(r / norm);
  }
  Matrix basis(dim, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) basis.col(static_cast<Eigen::Index>(i)) = kept[i];
  return basis;
}

Vector project(const Matrix& basis, const Vector& v) {
  require_dim(basis.rows(), v.size(), "vector");
  if (basis.cols() == 0) return Vector::Zero(v.size());
  return basis * (basis.transpose() * v);
}

Matrix projector_matrix(const Matrix& basis) { return basis * basis.transpose(); }

SubspaceSystem::SubspaceSystem(Eigen::Index dim, std::vector<Matrix> bases)
    : dim_(dim), bases_(std::move(bases)) {
  if (dim < 1) throw Error(ErrorCode::DimensionMismatch, "ambient dimension must be positive");
  if (bases_.empty()) throw Error(ErrorCode::DimensionMismatch, "a system needs at least one subspace");
  for (const auto& b : bases_) require_dim(dim, b.rows(), "basis");
}

SubspaceSystem SubspaceSystem::from_spanning(Eigen::Index dim,
                                             const std::vector<std::vector<Vector>>& spanning,
                                             double tol) {
  std::vector<Matrix> bases;
  bases.reserve(spanning.size());
  for (const auto& vs : spanning) bases.push_back(orthonormalize(vs, dim, tol));
  return SubspaceSystem(dim, std::move(bases));
}

const Matrix& SubspaceSystem::basis(Symbol n) const {
  if (n < 1 || n > size()) {
    throw Error(ErrorCode::InvalidSymbol, "no subspace with index " + std::to_string(n));
  }
  return bases_[static_cast<std::size_t>(n - 1)];
}

Vector SubspaceSystem::project(Symbol n, const Vector& v) const { return pol::project(basis(n), v); }

Matrix intersection_basis(const SubspaceSystem& system, double tol) {
  Matrix average = Matrix::Zero(system.dim(), system.dim());
  for (Symbol n = 1; n <= system.size(); ++n) average += projector_matrix(system.basis(n));
  average /= static_cast<double>(system.size());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(average);
  std::vector<Eigen::Index> fixed;
  for (Eigen::Index i = 0; i < average.rows(); ++i) {
    if (eig.eigenvalues()(i) >= 1.0 - tol) fixed.push_back(i);
  }
  Matrix basis(system.dim(), static_cast<Eigen::Index>(fixed.size()));
  for (std::size_t c = 0; c < fixed.size(); ++c) {
    basis.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(fixed[c]);
  }
  return basis;
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::Converged: return "Converged";
    case StopReason::IterationCap: return "IterationCap";
    case StopReason::Stagnated: return "Stagnated";
  }
  return "?";
}

Trajectory run_map(const SubspaceSystem& system, const Sequence& order, const Vector& xi0,
                   const StopRule& stop) {
  require_dim(system.dim(), xi0.size(), "xi0");
  if (order.alphabet().size() != system.size()) {
    throw Error(ErrorCode::AlphabetMismatch, "order alphabet has " +
                                                 std::to_string(order.alphabet().size()) +
                                                 " symbols for " + std::to_string(system.size()) +
                                                 " subspaces");
  }
  const std::size_t stride = std::max<std::size_t>(stop.log_stride, 1);
  const auto window = static_cast<std::size_t>(10 * system.size());

  Trajectory out;
  out.tol = stop.tol;
  out.target = project(intersection_basis(system), xi0);
  Vector xi = xi0;
  double distance = (xi - out.target).norm();
  out.log.push_back({0, distance, 0.0});
  std::deque<double> recent{distance};

  std::size_t step = 0;
  double last_move = 0.0;
  bool logged_last = true;
  while (true) {
    if (distance <= stop.tol) {
      out.reason = StopReason::Converged;
      break;
    }
    if (step >= stop.max_iters) {
      out.reason = StopReason::IterationCap;
      break;
    }
    if (recent.size() > window && recent.front() - distance < kStagnationRelative * recent.front()) {
      out.reason = StopReason::Stagnated;
      break;
    }
    ++step;
    if (const auto h = order.horizon(); h && static_cast<Position>(step) > *h) {
      throw Error(ErrorCode::OutOfHorizon, "order prefix exhausted after " + std::to_string(*h) +
                                               " projections before the stop rule was met");
    }
    Vector next = system.project(order.at(static_cast<Position>(step)), xi);
    last_move = (xi - next).norm();
    xi = std::move(next);
    const double d = (xi - out.target).norm();
    out.max_increase = std::max(out.max_increase, d - distance);
    distance = d;
    recent.push_back(distance);
    if (recent.size() > window + 1) recent.pop_front();
    logged_last = step % stride == 0;
    if (logged_last) out.log.push_back({step, distance, last_move});
  }
  if (!logged_last) out.log.push_back({step, distance, last_move});
  out.steps = step;
  out.final_iterate = xi;
  return out;
}

ConvergenceReport convergence_report(const Trajectory& trajectory, const SubspaceSystem& system) {
  ConvergenceReport out;
  out.final_distance = trajectory.log.back().distance_to_target;
  out.steps = trajectory.steps;
  out.reason = trajectory.reason;
  out.monotone = trajectory.max_increase <= kMonotoneSlack;

  // Least-squares slope of log distance against step over the tail.
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = trajectory.log.size() / 2; i < trajectory.log.size(); ++i) {
    const auto& p = trajectory.log[i];
    if (p.step > 0 && p.distance_to_target > 1e-300) {
      pts.emplace_back(static_cast<double>(p.step), std::log(p.distance_to_target));
    }
  }
  if (pts.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    const double denom = n * sxx - sx * sx;
    if (denom > 0) {
      const double slope = (n * sxy - sx * sy) / denom;
      out.rate_per_step = std::exp(slope);
      out.rate_per_sweep = std::exp(slope * system.size());
    }
  }
  return out;
}

SubspaceSystem random_system(Eigen::Index dim, int count, std::uint64_t seed) {
  if (dim < 2) throw Error(ErrorCode::DimensionMismatch, "random systems need dimension >= 2");
  if (count < 1) throw Error(ErrorCode::DomainError, "random systems need at least one subspace");
  SplitMix64 rng(seed);
  std::vector<Matrix> bases;
  for (int n = 0; n < count; ++n) {
    const auto k = rng.uniform_int(1, dim - 1);
    std::vector<Vector> spanning;
    for (std::int64_t i = 0; i < k; ++i) {
      Vector v(dim);
      for (Eigen::Index c = 0; c < dim; ++c) v(c) = rng.normal();
      spanning.push_back(std::move(v));
    }
    bases.push_back(orthonormalize(spanning, dim));
  }
  return SubspaceSystem(dim, std::move(bases));
}

}  // namespace pol
