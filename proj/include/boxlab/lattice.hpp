#pragma once

// Finite-volume geometry of the block Anderson model: lattice sites grouped
// into rectangular boxes Lambda(n) = {x : n_i l_i < x_i <= (n_i + 1) l_i},
// the nearest-neighbour Laplacian with Dirichlet truncation, box projections
// and the Hamiltonian Delta + sum_n omega_n P_n (+ boosts on the boxes e_i).

#include "boxlab/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace boxlab {

using Index = Eigen::Index;
using Site = std::vector<int>;
using BoxIndex = std::vector<int>;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntSparse = Eigen::SparseMatrix<std::int64_t>;

/// Per-axis boost lambda_i added on box e_i. Empty means no boosts.
using Boosts = std::vector<double>;

struct PartitionLimits {
  Index max_sites = 4096;
  int max_radius = 4;
};

/// Truncated volume: every box n with all |n_i| <= radius is materialized.
/// Sites are ordered lexicographically (first coordinate most significant).
class BoxPartition {
 public:
  int dimension() const { return static_cast<int>(lengths_.size()); }
  const std::vector<int>& lengths() const { return lengths_; }
  int radius() const { return radius_; }

  Index size() const { return static_cast<Index>(sites_.size()); }
  /// Number of sites in a single box, prod l_i.
  Index box_volume() const { return box_volume_; }
  const std::vector<Site>& sites() const { return sites_; }

  bool contains(std::span<const int> x) const;
  /// Position of site x in the global ordering; throws OutOfVolume.
  Index index_of(std::span<const int> x) const;
  BoxIndex box_of(std::span<const int> x) const;

  bool has_box(std::span<const int> n) const;
  /// All materialized boxes, lexicographic.
  std::vector<BoxIndex> boxes() const;
  /// Global indices of the sites of Lambda(n), in Lambda(n)'s own lexicographic order.
  std::vector<Index> box_indices(std::span<const int> n) const;

  friend BoxPartition build_partition(int d, const std::vector<int>& lengths, int radius,
                                      const PartitionLimits& limits);

 private:
  std::vector<int> lengths_;
  int radius_ = 0;
  Index box_volume_ = 1;
  std::vector<int> lower_;   // smallest coordinate per axis
  std::vector<int> extent_;  // (2B+1) l_i
  std::vector<Site> sites_;
};

BoxPartition build_partition(int d, const std::vector<int>& lengths, int radius,
                             const PartitionLimits& limits = {});

/// Sites of Lambda(n), sorted lexicographically; throws OutOfVolume outside the radius.
std::vector<Site> box_sites(const BoxPartition& partition, std::span<const int> n);

BoxIndex origin_box(int d);
/// The box sign * e_axis (axis is zero based).
BoxIndex unit_box(int d, int axis, int sign);

struct UniformLaw {
  double lower = -1.0;
  double upper = 1.0;
};

/// One realization of the box potentials omega_n.
struct DisorderSample {
  std::map<BoxIndex, double> values;
  UniformLaw law;
  std::uint64_t seed = 0;

  /// Throws IncompleteSample when n has no value.
  double at(const BoxIndex& n) const;
  double max_abs() const;
};

/// Reproducible uniform draws: mt19937_64 words mapped to [lower, upper] with
/// 53-bit resolution. Identical (seed, count, law) give bit-identical output.
std::vector<double> uniform_draws(std::uint64_t seed, std::size_t count, UniformLaw law);

/// Draws one value per materialized box in lexicographic box order.
DisorderSample sample_disorder(const BoxPartition& partition, UniformLaw law, std::uint64_t seed);
DisorderSample constant_disorder(const BoxPartition& partition, double value);

/// A real symmetric matrix over the sites of a partition.
struct LatticeOperator {
  BoxPartition partition;
  Eigen::MatrixXd matrix;

  const std::vector<Site>& sites() const { return partition.sites(); }
  /// P_p H P_q as a |Lambda(p)| x |Lambda(q)| matrix.
  Eigen::MatrixXd block(std::span<const int> p, std::span<const int> q) const;
};

LatticeOperator build_laplacian(const BoxPartition& partition);
LatticeOperator build_hamiltonian(const BoxPartition& partition, const DisorderSample& disorder,
                                  const Boosts& boosts = {});
/// Triangle-inequality bound 2d + max|omega| + max|lambda| on the operator norm.
double hamiltonian_norm_bound(const BoxPartition& partition, const DisorderSample& disorder,
                              const Boosts& boosts = {});

// ---- exact integer structure ------------------------------------------------

/// 0/1 adjacency of nearest neighbours inside the truncated volume.
IntSparse laplacian_pattern(const BoxPartition& partition);
/// N x |Lambda(n)| column selector onto the sites of Lambda(n).
IntSparse box_selector(const BoxPartition& partition, std::span<const int> n);
/// N x N diagonal projection P_n.
IntSparse box_projector(const BoxPartition& partition, std::span<const int> n);
/// sum_n P_n over all materialized boxes.
IntSparse projector_sum(const BoxPartition& partition);

/// P_0 Delta P_0 on Lambda(0).
IntMatrix interior_laplacian(const BoxPartition& partition);
/// P_0 Delta (I - P_0) Delta P_0 on Lambda(0), through the complement projector.
IntMatrix outer_coupling(const BoxPartition& partition);
/// sum over |n|_1 = 1 of P_0 Delta P_n Delta P_0 on Lambda(0).
IntMatrix neighbor_coupling_sum(const BoxPartition& partition);
/// P_0 Delta (I - P_0) Delta (I - P_0) Delta P_0 on Lambda(0); needs radius >= 2.
IntMatrix third_order_coupling(const BoxPartition& partition);

struct FaceProduct {
  IntMatrix product;    // P_0 Delta P_{sign e_axis} Delta P_0 on Lambda(0)
  IntMatrix indicator;  // diagonal 0/1 indicator of the matching face of Lambda(0)
};

/// Requires radius >= 1. sign is +1 or -1, axis zero based.
FaceProduct face_product(const BoxPartition& partition, int axis, int sign);

}  // namespace boxlab
