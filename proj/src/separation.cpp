#include "boxlab/separation.hpp"

#include "boxlab/double_double.hpp"
#include "boxlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace boxlab {

namespace {

void check_sets(const std::vector<PointSet>& sets) {
  if (sets.empty()) throw LabError(ErrorKind::InvalidArgument, "need at least one point set");
  for (const auto& s : sets) {
    if (s.empty()) throw LabError(ErrorKind::InvalidArgument, "point sets must be nonempty");
    for (double x : s)
      if (!(x > 0.0 && x < 1.0)) throw LabError(ErrorKind::InvalidArgument, "points must lie in (0, 1)");
  }
}

}  // namespace

std::vector<PointSet> sine_system(const std::vector<int>& lengths) {
  std::vector<PointSet> out;
  for (int l : lengths) {
    if (l < 1) throw LabError(ErrorKind::InvalidArgument, "lengths must be >= 1");
    PointSet s;
    for (int j = 1; 2 * j <= l + 1; ++j) {
      const double v = sin_pi_fraction<double>(j, l + 1);
      s.push_back(v * v / (l + 1));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::pair<double, double> epsilon_delta(const std::vector<PointSet>& sets, std::optional<double> delta_hint) {
  check_sets(sets);
  double eps = std::numeric_limits<double>::infinity();
  for (const auto& s : sets) {
    PointSet sorted = s;
    std::sort(sorted.begin(), sorted.end());
    eps = std::min(eps, sorted.front());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      const double gap = sorted[i] - sorted[i - 1];
      if (gap == 0.0) throw LabError(ErrorKind::DegenerateInput, "a point set contains coincident points");
      eps = std::min(eps, gap);
    }
  }
  const double sup = std::min(0.5, 1.0 / (1.0 + eps));
  const double delta = (delta_hint && *delta_hint > 0.0 && *delta_hint < sup) ? *delta_hint : 0.9 * sup;
  return {eps, delta};
}

std::optional<double> cross_set_gap(const std::vector<PointSet>& sets) {
  std::optional<double> best;
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j)
      for (double x : sets[i])
        for (double y : sets[j])
          if (!best || std::abs(x - y) < *best) best = std::abs(x - y);
  return best;
}

std::vector<Interval> design_intervals(double epsilon, double delta, int d) {
  if (d < 1) throw LabError(ErrorKind::InvalidArgument, "need d >= 1");
  if (!(epsilon > 0.0) || !(delta > 0.0)) throw LabError(ErrorKind::InvalidArgument, "need epsilon, delta > 0");
  const double q = 2.0 / (epsilon * delta);
  if (!(q > 2.0)) throw LabError(ErrorKind::InvalidArgument, "intervals overlap unless epsilon delta < 1");
  const double top = std::pow(q, d);
  if (!std::isfinite(top) || top * 0x1.0p-52 > 1e-3 / delta)
    throw LabError(ErrorKind::Magnitude, "coefficient magnitude " + std::to_string(top) +
                                             " is beyond double precision; use extended precision");
  std::vector<Interval> out;
  double power = 1.0;
  for (int i = 1; i <= d; ++i) {
    power *= q;
    out.push_back({0.5 * power, power});
  }
  return out;
}

SeparationDesign design_separation(const std::vector<PointSet>& sets, std::optional<double> delta_hint) {
  SeparationDesign design;
  design.sets = sets;
  std::tie(design.epsilon, design.delta) = epsilon_delta(sets, delta_hint);
  design.intervals = design_intervals(design.epsilon, design.delta, static_cast<int>(sets.size()));
  design.cross_set_gap = cross_set_gap(sets);
  return design;
}

SeparationCheck verify_separation(const std::vector<PointSet>& sets, const std::vector<double>& a, double delta) {
  check_sets(sets);
  if (a.size() != sets.size()) throw LabError(ErrorKind::InvalidArgument, "need one coefficient per set");
  if (!(delta > 0.0)) throw LabError(ErrorKind::InvalidArgument, "delta must be positive");

  double count = 1.0;
  for (const auto& s : sets) count *= static_cast<double>(s.size());
  if (count * (count - 1.0) / 2.0 > 1e6)
    throw LabError(ErrorKind::CombinatorialLimit, "selection pairs exceed 1e6");

  std::vector<double> sums{0.0};
  for (std::size_t i = 0; i < sets.size(); ++i) {
    std::vector<double> next;
    for (double s : sums)
      for (double x : sets[i]) next.push_back(s + a[i] * x);
    sums = std::move(next);
  }
  std::sort(sums.begin(), sums.end());

  SeparationCheck out;
  out.selections = static_cast<long long>(sums.size());
  out.threshold = 1.0 / delta;
  // the minimum over pairs of a sorted list is attained by neighbours
  for (std::size_t i = 1; i < sums.size(); ++i) {
    const double gap = sums[i] - sums[i - 1];
    if (!out.min_gap || gap < *out.min_gap) out.min_gap = gap;
  }
  out.passed = !out.min_gap || *out.min_gap > out.threshold;
  return out;
}

}  // namespace boxlab
