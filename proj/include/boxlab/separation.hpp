#pragma once

// Coefficient design that keeps every weighted selection sum
// F = sum_i a_i x_{i, pi(i)} at pairwise distance > 1/delta.

#include <optional>
#include <utility>
#include <vector>

namespace boxlab {

using PointSet = std::vector<double>;

struct Interval {
  double lower;
  double upper;
  double midpoint() const { return 0.5 * (lower + upper); }
};

struct SeparationDesign {
  std::vector<PointSet> sets;
  double epsilon = 0.0;
  double delta = 0.0;
  std::vector<Interval> intervals;
  std::optional<double> cross_set_gap;  // reported only
};

/// Set i holds sin^2(pi j/(l_i+1))/(l_i+1) for 1 <= j <= (l_i+1)/2, ascending.
std::vector<PointSet> sine_system(const std::vector<int>& lengths);

/// epsilon = min over all elements and all within-set gaps. delta is the hint
/// when 0 < hint < min(1/2, 1/(1+epsilon)), else 0.9 of that bound.
std::pair<double, double> epsilon_delta(const std::vector<PointSet>& sets, std::optional<double> delta_hint = {});

/// Smallest distance between points of different sets, if any.
std::optional<double> cross_set_gap(const std::vector<PointSet>& sets);

/// Interval i (1-based) is ((1/2) q^i, q^i) with q = 2/(epsilon delta); needs
/// q > 2 so the intervals are disjoint and increasing. Throws
/// Magnitude when q^d is not finite or too large for double rounding to stay
/// well below 1/delta.
std::vector<Interval> design_intervals(double epsilon, double delta, int d);

SeparationDesign design_separation(const std::vector<PointSet>& sets, std::optional<double> delta_hint = {});

struct SeparationCheck {
  std::optional<double> min_gap;  // empty with fewer than two selections
  double threshold = 0.0;         // 1/delta
  bool passed = false;
  long long selections = 0;
};

/// Brute force over all selections; the pair count is capped at 1e6.
SeparationCheck verify_separation(const std::vector<PointSet>& sets, const std::vector<double>& a, double delta);

}  // namespace boxlab
