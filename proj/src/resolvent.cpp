#include "boxlab/resolvent.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace boxlab {

namespace {

double spectral_distance(const Eigen::MatrixXd& m, double z, double norm_bound) {
  if (std::abs(z) > norm_bound + kProximity) return std::abs(z) - norm_bound;
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
  return (ev.array() - z).abs().minCoeff();
}

double row_sum_norm(const Eigen::MatrixXd& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

// Sites of Lambda(0) and the rest, in global order.
std::pair<std::vector<Index>, std::vector<Index>> split_origin(const BoxPartition& partition) {
  std::vector<Index> inner = partition.box_indices(origin_box(partition.dimension()));
  std::vector<char> mark(partition.size(), 0);
  for (Index i : inner) mark[i] = 1;
  std::vector<Index> outer;
  outer.reserve(partition.size() - inner.size());
  for (Index i = 0; i < partition.size(); ++i)
    if (!mark[i]) outer.push_back(i);
  return {std::move(inner), std::move(outer)};
}

template <typename Scalar>
Matrix<Scalar> take(const Eigen::MatrixXd& m, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  Matrix<Scalar> out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = Scalar(m(rows[i], cols[j]));
  return out;
}

}  // namespace

RestrictedResolvent restricted_resolvent(const LatticeOperator& h, double z, std::span<const int> p,
                                         std::span<const int> q) {
  const BoxPartition& part = h.partition;
  const std::vector<Index> rows = part.box_indices(p);
  const std::vector<Index> cols = part.box_indices(q);
  const Index n = part.size();

  const double dist = spectral_distance(h.matrix, z, row_sum_norm(h.matrix));
  if (dist < kProximity) throw SpectralProximityError(z, dist, 0.0);

  const Eigen::MatrixXd a = h.matrix - z * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) rhs(cols[j], static_cast<Index>(j)) = 1.0;

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::MatrixXd x = lu.solve(rhs);
  x += lu.solve(rhs - a * x);

  RestrictedResolvent out;
  out.p.assign(p.begin(), p.end());
  out.q.assign(q.begin(), q.end());
  out.z = z;
  const Eigen::MatrixXd res = a * x - rhs;
  for (Index j = 0; j < x.cols(); ++j) {
    const double rel = res.col(j).norm() / x.col(j).norm();
    out.max_residual = std::max(out.max_residual, rel);
    if (res.col(j).norm() > 1e-10 * (1.0 + std::abs(z)) * x.col(j).norm())
      throw SpectralProximityError(z, dist, rel);
  }
  out.block.resize(static_cast<Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.block.row(static_cast<Index>(i)) = x.row(rows[i]);
  return out;
}

template <typename Scalar>
SchurReducedT<Scalar> schur_reduced(const BoxPartition& partition, const DisorderSample& disorder,
                                    const Boosts& boosts, double r) {
  const LatticeOperator h = build_hamiltonian(partition, disorder, boosts);
  const auto [inner, outer] = split_origin(partition);

  const Eigen::MatrixXd hqq = take<double>(h.matrix, outer, outer);
  const double dist = spectral_distance(hqq, r, row_sum_norm(hqq));
  if (dist < kProximity) throw SpectralProximityError(r, dist, 0.0);

  Matrix<Scalar> shifted = take<Scalar>(h.matrix, outer, outer);
  for (Index i = 0; i < shifted.rows(); ++i) shifted(i, i) -= Scalar(r);
  const Matrix<Scalar> coupling = take<Scalar>(h.matrix, outer, inner);
  const Matrix<Scalar> solved = Eigen::PartialPivLU<Matrix<Scalar>>(shifted).solve(coupling);

  SchurReducedT<Scalar> out;
  out.r = r;
  out.omega0 = disorder.at(origin_box(partition.dimension()));
  out.matrix = interior_laplacian(partition).template cast<double>().template cast<Scalar>();
  out.matrix -= coupling.transpose() * solved;
  // exact symmetry; the product is symmetric only to rounding
  out.matrix = (out.matrix + out.matrix.transpose()) * Scalar(0.5);
  return out;
}

template SchurReducedT<double> schur_reduced<double>(const BoxPartition&, const DisorderSample&, const Boosts&,
                                                     double);
template SchurReducedT<DoubleDouble> schur_reduced<DoubleDouble>(const BoxPartition&, const DisorderSample&,
                                                                 const Boosts&, double);

Eigen::VectorXd resolvent_eigenvalues_from_schur(const SchurReduced& reduced) {
  const Eigen::VectorXd nu =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(reduced.matrix, Eigen::EigenvaluesOnly).eigenvalues();
  Eigen::VectorXd mu = (nu.array() + reduced.omega0 - reduced.r).inverse();
  std::sort(mu.data(), mu.data() + mu.size());
  return mu;
}

NeumannTruncation neumann_truncation(const BoxPartition& partition, const DisorderSample& disorder,
                                     const Boosts& boosts, double r) {
  if (!(r > 0.0)) throw LabError(ErrorKind::InvalidArgument, "r must be positive");
  if (partition.radius() < 2)
    throw LabError(ErrorKind::InsufficientVolume, "the third-order term needs radius >= 2");
  const int d = partition.dimension();
  if (!boosts.empty() && static_cast<int>(boosts.size()) != d)
    throw LabError(ErrorKind::InvalidArgument, "boosts need one value per axis");

  NeumannTruncation out;
  out.r = r;
  out.a_r = r * r * interior_laplacian(partition).cast<double>() + r * outer_coupling(partition).cast<double>();
  for (int axis = 0; axis < d; ++axis)
    for (int sign : {-1, 1}) {
      double weight = disorder.at(unit_box(d, axis, sign));
      if (sign > 0 && !boosts.empty()) weight += boosts[axis];
      out.a_r += weight * face_product(partition, axis, sign).product.cast<double>();
    }
  out.third_order = third_order_coupling(partition).cast<double>();
  return out;
}

std::vector<std::pair<double, double>> boundary_values(const BoxPartition& partition,
                                                       const DisorderSample& disorder, const Boosts& boosts) {
  const int d = partition.dimension();
  std::vector<std::pair<double, double>> ab;
  for (int axis = 0; axis < d; ++axis) {
    const double a = disorder.at(unit_box(d, axis, -1));
    double b = disorder.at(unit_box(d, axis, +1));
    if (!boosts.empty()) b += boosts.at(axis);
    ab.emplace_back(a, b);
  }
  return ab;
}

Eigen::MatrixXd tensor_truncation(const BoxPartition& partition, const DisorderSample& disorder,
                                  const Boosts& boosts, double r) {
  const auto ab = boundary_values(partition, disorder, boosts);
  const std::vector<int>& l = partition.lengths();
  std::vector<Eigen::MatrixXd> factors;
  for (std::size_t axis = 0; axis < l.size(); ++axis)
    factors.push_back(boundary_matrix<double>({l[axis], ab[axis].first, ab[axis].second, r}));
  return kronecker_sum(factors);
}

namespace {

template <typename Scalar>
double remainder_norm(const BoxPartition& partition, const DisorderSample& disorder, const Boosts& boosts,
                      double r, const NeumannTruncation& trunc) {
  const auto reduced = schur_reduced<Scalar>(partition, disorder, boosts, r);
  const Matrix<Scalar> diff =
      reduced.scaled() - trunc.a_r.cast<Scalar>() - trunc.third_order.cast<Scalar>();
  Eigen::MatrixXd rounded(diff.rows(), diff.cols());
  for (Index i = 0; i < diff.rows(); ++i)
    for (Index j = 0; j < diff.cols(); ++j) rounded(i, j) = to_double(diff(i, j));
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(rounded, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace

RemainderSample neumann_remainder(const BoxPartition& partition, const DisorderSample& disorder,
                                  const Boosts& boosts, double r) {
  const NeumannTruncation trunc = neumann_truncation(partition, disorder, boosts, r);
  RemainderSample s{r, remainder_norm<double>(partition, disorder, boosts, r, trunc), false};
  if (precision_guard_trips(r, s.norm)) {
    s.norm = remainder_norm<DoubleDouble>(partition, disorder, boosts, r, trunc);
    s.extended = true;
  }
  return s;
}

Eigen::MatrixXd boosted_resolvent_identity(const LatticeOperator& h, double z, std::span<const int> n, double lambda) {
  const auto origin = origin_box(h.partition.dimension());
  const Eigen::MatrixXd g00 = restricted_resolvent(h, z, origin, origin).block;
  const Eigen::MatrixXd g0n = restricted_resolvent(h, z, origin, n).block;
  const Eigen::MatrixXd gn0 = restricted_resolvent(h, z, n, origin).block;
  const Eigen::MatrixXd gnn = restricted_resolvent(h, z, n, n).block;
  const Index k = gnn.rows();
  const Eigen::MatrixXd inner = Eigen::MatrixXd::Identity(k, k) + lambda * gnn;
  return g00 - lambda * g0n * inner.partialPivLu().solve(gn0);
}

}  // namespace boxlab
