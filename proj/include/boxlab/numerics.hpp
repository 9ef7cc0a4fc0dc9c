#pragma once

#include <Eigen/Core>

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace boxlab {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Least-squares slope of log(y) against log(x). Requires positive data.
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// r^2 * 2^-52 > 1e-3 * quantity: double rounding of O(r^2) terms would
/// swamp the quantity under test.
inline bool precision_guard_trips(double r, double quantity) {
  return r * r * 0x1.0p-52 > 1e-3 * std::abs(quantity);
}

/// sum_i I x f_i x I with the first factor outermost (lexicographic site order).
template <typename Scalar>
Matrix<Scalar> kronecker_sum(const std::vector<Matrix<Scalar>>& factors) {
  Eigen::Index total = 1;
  for (const auto& f : factors) total *= f.rows();
  Matrix<Scalar> out = Matrix<Scalar>::Zero(total, total);
  Eigen::Index outer = 1;
  for (const auto& f : factors) {
    const Eigen::Index l = f.rows();
    const Eigen::Index inner = total / (outer * l);
    for (Eigen::Index o = 0; o < outer; ++o)
      for (Eigen::Index i = 0; i < l; ++i)
        for (Eigen::Index j = 0; j < l; ++j) {
          if (f(i, j) == Scalar(0)) continue;
          for (Eigen::Index k = 0; k < inner; ++k) out((o * l + i) * inner + k, (o * l + j) * inner + k) += f(i, j);
        }
    outer *= l;
  }
  return out;
}

/// Sizes of the maximal chains of ascending `values` whose consecutive gaps
/// are <= tol.
inline std::vector<int> cluster_sizes(std::span<const double> values, double tol) {
  std::vector<int> sizes;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == 0 || values[i] - values[i - 1] > tol)
      sizes.push_back(1);
    else
      ++sizes.back();
  }
  return sizes;
}

}  // namespace boxlab
