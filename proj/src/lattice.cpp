#include "boxlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace boxlab {

namespace {

std::string describe(std::span<const int> v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out + ")";
}

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Dense restriction S_p^T M S_q of a sparse integer matrix.
IntMatrix restrict_dense(const IntSparse& m, const IntSparse& rows, const IntSparse& cols) {
  const IntSparse r = IntSparse(rows.transpose()) * m * cols;
  return IntMatrix(r);
}

}  // namespace

// ---- BoxPartition -------------------------------------------------------------

BoxPartition build_partition(int d, const std::vector<int>& lengths, int radius,
                             const PartitionLimits& limits) {
  if (d < 1) throw LabError(ErrorKind::InvalidArgument, "dimension must be >= 1");
  if (static_cast<int>(lengths.size()) != d)
    throw LabError(ErrorKind::InvalidArgument,
                   "expected " + std::to_string(d) + " box lengths, got " + std::to_string(lengths.size()));
  for (int l : lengths)
    if (l < 1) throw LabError(ErrorKind::InvalidArgument, "box lengths must be >= 1");
  if (radius < 0) throw LabError(ErrorKind::InvalidArgument, "radius must be >= 0");
  if (radius > limits.max_radius)
    throw LabError(ErrorKind::InvalidArgument,
                   "radius " + std::to_string(radius) + " exceeds cap " + std::to_string(limits.max_radius));

  std::int64_t count = 1;
  std::int64_t volume = 1;
  for (int l : lengths) {
    volume *= l;
    count *= static_cast<std::int64_t>(l) * (2 * radius + 1);
    if (count > limits.max_sites) throw SizeOverflowError(count, limits.max_sites);
  }

  BoxPartition p;
  p.lengths_ = lengths;
  p.radius_ = radius;
  p.box_volume_ = volume;
  p.lower_.resize(d);
  p.extent_.resize(d);
  for (int i = 0; i < d; ++i) {
    p.lower_[i] = -radius * lengths[i] + 1;
    p.extent_[i] = (2 * radius + 1) * lengths[i];
  }
  p.sites_.reserve(static_cast<std::size_t>(count));
  Site x(p.lower_);
  for (std::int64_t k = 0; k < count; ++k) {
    p.sites_.push_back(x);
    for (int i = d - 1; i >= 0; --i) {
      if (++x[i] < p.lower_[i] + p.extent_[i]) break;
      x[i] = p.lower_[i];
    }
  }
  return p;
}

bool BoxPartition::contains(std::span<const int> x) const {
  if (static_cast<int>(x.size()) != dimension()) return false;
  for (int i = 0; i < dimension(); ++i)
    if (x[i] < lower_[i] || x[i] >= lower_[i] + extent_[i]) return false;
  return true;
}

Index BoxPartition::index_of(std::span<const int> x) const {
  if (!contains(x)) throw LabError(ErrorKind::OutOfVolume, "site " + describe(x) + " outside the volume");
  Index idx = 0;
  for (int i = 0; i < dimension(); ++i) idx = idx * extent_[i] + (x[i] - lower_[i]);
  return idx;
}

BoxIndex BoxPartition::box_of(std::span<const int> x) const {
  BoxIndex n(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) n[i] = floor_div(x[i] - 1, lengths_[i]);
  return n;
}

bool BoxPartition::has_box(std::span<const int> n) const {
  if (static_cast<int>(n.size()) != dimension()) return false;
  return std::all_of(n.begin(), n.end(), [&](int v) { return std::abs(v) <= radius_; });
}

std::vector<BoxIndex> BoxPartition::boxes() const {
  const int d = dimension();
  std::vector<BoxIndex> out;
  BoxIndex n(d, -radius_);
  while (true) {
    out.push_back(n);
    int i = d - 1;
    for (; i >= 0; --i) {
      if (++n[i] <= radius_) break;
      n[i] = -radius_;
    }
    if (i < 0) break;
  }
  return out;
}

std::vector<Index> BoxPartition::box_indices(std::span<const int> n) const {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(box_volume_));
  for (const Site& x : box_sites(*this, n)) out.push_back(index_of(x));
  return out;
}

std::vector<Site> box_sites(const BoxPartition& partition, std::span<const int> n) {
  if (!partition.has_box(n))
    throw LabError(ErrorKind::OutOfVolume, "box " + describe(n) + " outside radius " +
                                               std::to_string(partition.radius()));
  const int d = partition.dimension();
  const auto& l = partition.lengths();
  Site lo(d);
  for (int i = 0; i < d; ++i) lo[i] = n[i] * l[i] + 1;
  std::vector<Site> out;
  out.reserve(static_cast<std::size_t>(partition.box_volume()));
  Site x(lo);
  for (Index k = 0; k < partition.box_volume(); ++k) {
    out.push_back(x);
    for (int i = d - 1; i >= 0; --i) {
      if (++x[i] < lo[i] + l[i]) break;
      x[i] = lo[i];
    }
  }
  return out;
}

BoxIndex origin_box(int d) { return BoxIndex(d, 0); }

BoxIndex unit_box(int d, int axis, int sign) {
  BoxIndex n(d, 0);
  n.at(axis) = sign;
  return n;
}

// ---- disorder -----------------------------------------------------------------

double DisorderSample::at(const BoxIndex& n) const {
  auto it = values.find(n);
  if (it == values.end())
    throw LabError(ErrorKind::IncompleteSample, "no disorder value for box " + describe(n));
  return it->second;
}

double DisorderSample::max_abs() const {
  double m = 0.0;
  for (const auto& [n, v] : values) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> uniform_draws(std::uint64_t seed, std::size_t count, UniformLaw law) {
  std::mt19937_64 engine(seed);
  std::vector<double> out(count);
  const double width = law.upper - law.lower;
  for (auto& v : out) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    v = law.lower + width * u;
  }
  return out;
}

DisorderSample sample_disorder(const BoxPartition& partition, UniformLaw law, std::uint64_t seed) {
  if (!(law.lower <= law.upper)) throw LabError(ErrorKind::InvalidArgument, "disorder lower > upper");
  const auto boxes = partition.boxes();
  const auto draws = uniform_draws(seed, boxes.size(), law);
  DisorderSample s;
  s.law = law;
  s.seed = seed;
  for (std::size_t k = 0; k < boxes.size(); ++k) s.values.emplace(boxes[k], draws[k]);
  return s;
}

DisorderSample constant_disorder(const BoxPartition& partition, double value) {
  DisorderSample s;
  s.law = {value, value};
  for (const auto& n : partition.boxes()) s.values.emplace(n, value);
  return s;
}

// ---- operators ----------------------------------------------------------------

Eigen::MatrixXd LatticeOperator::block(std::span<const int> p, std::span<const int> q) const {
  const auto rows = partition.box_indices(p);
  const auto cols = partition.box_indices(q);
  return matrix(rows, cols);
}

IntSparse laplacian_pattern(const BoxPartition& partition) {
  const Index n = partition.size();
  const int d = partition.dimension();
  std::vector<Eigen::Triplet<std::int64_t>> trips;
  trips.reserve(static_cast<std::size_t>(n) * 2 * d);
  Site y;
  for (Index k = 0; k < n; ++k) {
    y = partition.sites()[k];
    for (int i = 0; i < d; ++i) {
      for (int step : {-1, 1}) {
        y[i] += step;
        if (partition.contains(y)) trips.emplace_back(k, partition.index_of(y), 1);
        y[i] -= step;
      }
    }
  }
  IntSparse m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

LatticeOperator build_laplacian(const BoxPartition& partition) {
  LatticeOperator op{partition, Eigen::MatrixXd(laplacian_pattern(partition).cast<double>())};
  return op;
}

LatticeOperator build_hamiltonian(const BoxPartition& partition, const DisorderSample& disorder,
                                  const Boosts& boosts) {
  const int d = partition.dimension();
  if (!boosts.empty() && static_cast<int>(boosts.size()) != d)
    throw LabError(ErrorKind::InvalidArgument, "boosts must have one entry per axis");
  LatticeOperator op = build_laplacian(partition);
  if (!boosts.empty() && partition.radius() < 1)
    throw LabError(ErrorKind::OutOfVolume, "boosts need the boxes e_i (radius >= 1)");

  std::map<BoxIndex, double> potential;
  for (const auto& n : partition.boxes()) potential[n] = disorder.at(n);
  for (int i = 0; i < static_cast<int>(boosts.size()); ++i) potential[unit_box(d, i, +1)] += boosts[i];

  for (Index k = 0; k < partition.size(); ++k)
    op.matrix(k, k) = potential.at(partition.box_of(partition.sites()[k]));
  return op;
}

double hamiltonian_norm_bound(const BoxPartition& partition, const DisorderSample& disorder,
                              const Boosts& boosts) {
  double lam = 0.0;
  for (double b : boosts) lam = std::max(lam, std::abs(b));
  return 2.0 * partition.dimension() + disorder.max_abs() + lam;
}

// ---- exact integer structure ----------------------------------------------------

IntSparse box_selector(const BoxPartition& partition, std::span<const int> n) {
  const auto idx = partition.box_indices(n);
  IntSparse s(partition.size(), static_cast<Index>(idx.size()));
  std::vector<Eigen::Triplet<std::int64_t>> trips;
  for (std::size_t k = 0; k < idx.size(); ++k) trips.emplace_back(idx[k], static_cast<Index>(k), 1);
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

IntSparse box_projector(const BoxPartition& partition, std::span<const int> n) {
  const IntSparse s = box_selector(partition, n);
  return IntSparse(s * s.transpose());
}

IntSparse projector_sum(const BoxPartition& partition) {
  IntSparse sum(partition.size(), partition.size());
  for (const auto& n : partition.boxes()) sum += box_projector(partition, n);
  return sum;
}

IntMatrix interior_laplacian(const BoxPartition& partition) {
  const IntSparse s0 = box_selector(partition, origin_box(partition.dimension()));
  return restrict_dense(laplacian_pattern(partition), s0, s0);
}

IntMatrix outer_coupling(const BoxPartition& partition) {
  const IntSparse lap = laplacian_pattern(partition);
  const IntSparse p0 = box_projector(partition, origin_box(partition.dimension()));
  IntSparse id(partition.size(), partition.size());
  id.setIdentity();
  const IntSparse complement = id - p0;
  const IntSparse s0 = box_selector(partition, origin_box(partition.dimension()));
  const IntSparse m = lap * complement * lap;
  return restrict_dense(m, s0, s0);
}

IntMatrix neighbor_coupling_sum(const BoxPartition& partition) {
  const int d = partition.dimension();
  if (partition.radius() < 1) throw LabError(ErrorKind::OutOfVolume, "neighbour boxes need radius >= 1");
  const IntSparse lap = laplacian_pattern(partition);
  const IntSparse s0 = box_selector(partition, origin_box(d));
  const Index v = partition.box_volume();
  IntMatrix sum = IntMatrix::Zero(v, v);
  for (int i = 0; i < d; ++i) {
    for (int sign : {-1, 1}) {
      const IntSparse sn = box_selector(partition, unit_box(d, i, sign));
      const IntSparse half = IntSparse(s0.transpose()) * lap * sn;  // P_0 Delta P_n
      sum += IntMatrix(half * IntSparse(half.transpose()));
    }
  }
  return sum;
}

IntMatrix third_order_coupling(const BoxPartition& partition) {
  if (partition.radius() < 2)
    throw LabError(ErrorKind::InsufficientVolume, "third-order coupling needs radius >= 2");
  const IntSparse lap = laplacian_pattern(partition);
  const IntSparse p0 = box_projector(partition, origin_box(partition.dimension()));
  IntSparse id(partition.size(), partition.size());
  id.setIdentity();
  const IntSparse q = id - p0;
  const IntSparse s0 = box_selector(partition, origin_box(partition.dimension()));
  const IntSparse m = lap * q * lap * q * lap;
  return restrict_dense(m, s0, s0);
}

FaceProduct face_product(const BoxPartition& partition, int axis, int sign) {
  const int d = partition.dimension();
  if (axis < 0 || axis >= d || (sign != 1 && sign != -1))
    throw LabError(ErrorKind::InvalidArgument, "face direction must be +-e_i with 0 <= i < d");
  if (partition.radius() < 1) throw LabError(ErrorKind::OutOfVolume, "face products need radius >= 1");

  const IntSparse lap = laplacian_pattern(partition);
  const IntSparse s0 = box_selector(partition, origin_box(d));
  const IntSparse sn = box_selector(partition, unit_box(d, axis, sign));
  const IntSparse p0_lap_pn = IntSparse(s0.transpose()) * lap * sn;

  FaceProduct out;
  out.product = IntMatrix(p0_lap_pn * IntSparse(p0_lap_pn.transpose()));

  const auto sites = box_sites(partition, origin_box(d));
  const int face = sign > 0 ? partition.lengths()[axis] : 1;
  const Index v = partition.box_volume();
  out.indicator = IntMatrix::Zero(v, v);
  for (Index k = 0; k < v; ++k)
    if (sites[k][axis] == face) out.indicator(k, k) = 1;
  return out;
}

}  // namespace boxlab
