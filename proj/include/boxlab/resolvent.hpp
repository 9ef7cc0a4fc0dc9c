#pragma once

// Restricted resolvents P_p (H - z)^{-1} P_q, the Schur reduction of
// G_00 onto Lambda(0) and its large-r truncation A_r.

#include "boxlab/double_double.hpp"
#include "boxlab/lattice.hpp"
#include "boxlab/numerics.hpp"
#include "boxlab/tridiag.hpp"

#include <Eigen/Dense>

#include <span>

namespace boxlab {

/// Spectral parameters closer than this to the spectrum are rejected.
inline constexpr double kProximity = 1e-6;

struct RestrictedResolvent {
  BoxIndex p;
  BoxIndex q;
  double z = 0.0;
  Eigen::MatrixXd block;
  double max_residual = 0.0;  // max_j ||(H - z) x_j - e_j|| / ||x_j||
};

/// Solves (H - z) X = P_q by LU with one refinement pass and keeps the rows
/// of Lambda(p). Throws SpectralProximityError when z is within kProximity
/// of the spectrum or a column residual exceeds 1e-10 (1 + |z|) ||x_j||.
RestrictedResolvent restricted_resolvent(const LatticeOperator& h, double z, std::span<const int> p,
                                         std::span<const int> q);

/// P_0 H~ restricted to Lambda(0) is reduced to
///   matrix = P0 Delta P0 - P0 Delta Q (H~_QQ - r)^{-1} Q Delta P0,
/// so that G_00(r) = (matrix + (omega0 - r))^{-1}.
template <typename Scalar>
struct SchurReducedT {
  double r = 0.0;
  double omega0 = 0.0;
  Matrix<Scalar> matrix;

  Matrix<Scalar> scaled() const { return Scalar(r) * Scalar(r) * matrix; }
};

using SchurReduced = SchurReducedT<double>;

template <typename Scalar>
SchurReducedT<Scalar> schur_reduced(const BoxPartition& partition, const DisorderSample& disorder,
                                    const Boosts& boosts, double r);

/// Eigenvalues of G_00(r) predicted from the reduced matrix: 1/(nu + omega0 - r), ascending.
Eigen::VectorXd resolvent_eigenvalues_from_schur(const SchurReduced& reduced);

struct NeumannTruncation {
  double r = 0.0;
  Eigen::MatrixXd a_r;          // r^2 P0 Delta P0 + r P0 Delta Q Delta P0 + potential faces
  Eigen::MatrixXd third_order;  // P0 Delta Q Delta Q Delta P0
};

/// Assembled from the lattice operators. Throws InsufficientVolume for radius < 2.
NeumannTruncation neumann_truncation(const BoxPartition& partition, const DisorderSample& disorder,
                                     const Boosts& boosts, double r);

/// Per-axis boundary values of the tensor form: a_i = omega_{-e_i}, b_i = omega_{e_i} + lambda_i.
std::vector<std::pair<double, double>> boundary_values(const BoxPartition& partition,
                                                       const DisorderSample& disorder, const Boosts& boosts);

/// The same A_r as the Kronecker sum sum_i I x D_r^{a_i, b_i} x I (first axis outermost).
Eigen::MatrixXd tensor_truncation(const BoxPartition& partition, const DisorderSample& disorder,
                                  const Boosts& boosts, double r);

struct RemainderSample {
  double r;
  double norm;    // spectral norm of r^2 H_r - A_r - third_order
  bool extended;  // recomputed in double-double
};

/// ||r^2 H_r - A_r - third_order||_2 with the precision guard applied to the norm.
RemainderSample neumann_remainder(const BoxPartition& partition, const DisorderSample& disorder,
                                  const Boosts& boosts, double r);

/// G^lambda_00 for H + lambda P_n through
///   G^0_00 - lambda G^0_0n (I + lambda G^0_nn)^{-1} G^0_n0.
Eigen::MatrixXd boosted_resolvent_identity(const LatticeOperator& h, double z, std::span<const int> n, double lambda);

}  // namespace boxlab
