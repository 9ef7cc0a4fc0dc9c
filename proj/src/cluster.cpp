#include "boxlab/cluster.hpp"

#include "boxlab/double_double.hpp"
#include "boxlab/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace boxlab {

namespace {

void check_modes(const std::vector<int>& lengths, const Modes& modes) {
  if (modes.size() != lengths.size()) throw LabError(ErrorKind::InvalidArgument, "mode tuple has the wrong length");
  for (std::size_t i = 0; i < modes.size(); ++i)
    if (modes[i] < 1 || modes[i] > lengths[i])
      throw LabError(ErrorKind::InvalidArgument, "mode " + std::to_string(modes[i]) + " out of range 1.." +
                                                     std::to_string(lengths[i]));
}

double sin2_weight(int l, int n) {
  const double s = sin_pi_fraction<double>(n, l + 1);
  return s * s / (l + 1);
}

std::string modes_text(const Modes& m) {
  std::string s = "(";
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + std::to_string(m[i]);
  return s + ")";
}

}  // namespace

FacePotentials FacePotentials::from(const BoxPartition& partition, const DisorderSample& disorder,
                                    const Boosts& boosts) {
  const int d = partition.dimension();
  FacePotentials f;
  for (int i = 0; i < d; ++i) {
    f.minus.push_back(disorder.at(unit_box(d, i, -1)));
    f.plus.push_back(disorder.at(unit_box(d, i, +1)));
    f.lambda.push_back(boosts.empty() ? 0.0 : boosts.at(i));
  }
  return f;
}

FacePotentials FacePotentials::zero(int d) {
  return {std::vector<double>(d, 0.0), std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
}

double FacePotentials::sum(int axis) const { return minus.at(axis) + plus.at(axis) + lambda.at(axis); }

ClusterPrediction predicted_cluster_energy(const std::vector<int>& lengths, const Modes& modes,
                                           const FacePotentials& potentials, double r) {
  check_modes(lengths, modes);
  ClusterPrediction p;
  p.modes = modes;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const int l = lengths[i];
    const int n = modes[i];
    const double c = cos_pi_fraction<double>(n, l + 1);
    const double s = sin_pi_fraction<double>(n, l + 1);
    const double s2 = s * s;
    p.r2_term += 2.0 * r * r * c;
    p.r1_term += 4.0 * r * s2 / (l + 1);
    p.potential_term += 2.0 * potentials.sum(static_cast<int>(i)) * s2 / (l + 1);
    p.constant_term -= 4.0 * c_coefficient(l, n);
  }
  p.predicted = p.r2_term + p.r1_term + p.potential_term + p.constant_term;
  return p;
}

std::vector<Modes> all_modes(const std::vector<int>& lengths) {
  std::vector<Modes> out;
  Modes m(lengths.size(), 1);
  if (lengths.empty()) return out;
  while (true) {
    out.push_back(m);
    int k = static_cast<int>(m.size()) - 1;
    while (k >= 0 && m[k] == lengths[k]) m[k--] = 1;
    if (k < 0) break;
    ++m[k];
  }
  return out;
}

std::vector<ClusterPrediction> all_predictions(const std::vector<int>& lengths, const FacePotentials& potentials,
                                               double r) {
  std::vector<ClusterPrediction> out;
  for (const auto& m : all_modes(lengths)) out.push_back(predicted_cluster_energy(lengths, m, potentials, r));
  return out;
}

double cos_sum(const std::vector<int>& lengths, const Modes& modes) {
  double s = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) s += cos_pi_fraction<double>(modes[i], lengths[i] + 1);
  return s;
}

double sine_sum(const std::vector<int>& lengths, const Modes& modes) {
  double s = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) s += sin2_weight(lengths[i], modes[i]);
  return s;
}

MinGaps min_nonzero_gaps(const std::vector<int>& lengths) {
  double count = 1.0;
  for (int l : lengths) count *= l;
  if (count > 1e4)
    throw LabError(ErrorKind::CombinatorialLimit, "prod l_i = " + std::to_string(static_cast<long long>(count)) +
                                                      " exceeds 1e4 mode tuples");
  std::vector<double> cs, ss;
  for (const auto& m : all_modes(lengths)) {
    cs.push_back(cos_sum(lengths, m));
    ss.push_back(sine_sum(lengths, m));
  }
  const auto min_gap = [](std::vector<double> v) -> std::optional<double> {
    std::sort(v.begin(), v.end());
    std::optional<double> best;
    for (std::size_t i = 1; i < v.size(); ++i) {
      const double g = v[i] - v[i - 1];
      if (g > kSumTolerance && (!best || g < *best)) best = g;
    }
    return best;
  };
  return {min_gap(cs), min_gap(ss)};
}

const char* to_string(PairClass c) {
  switch (c) {
    case PairClass::CosSeparated: return "cos_separated";
    case PairClass::SineSeparated: return "sine_separated";
    case PairClass::SameCluster: return "same_cluster";
    case PairClass::PotentialSeparated: return "potential_separated";
  }
  return "unknown";
}

bool in_reflection_cluster(const std::vector<int>& lengths, const Modes& n, const Modes& m) {
  for (std::size_t i = 0; i < n.size(); ++i)
    if (m[i] != n[i] && m[i] != lengths[i] + 1 - n[i]) return false;
  return true;
}

PairClass classify_pair(const Modes& n, const Modes& m, const std::vector<int>& lengths) {
  check_modes(lengths, n);
  check_modes(lengths, m);
  if (std::abs(cos_sum(lengths, n) - cos_sum(lengths, m)) > kSumTolerance) return PairClass::CosSeparated;
  if (std::abs(sine_sum(lengths, n) - sine_sum(lengths, m)) > kSumTolerance) return PairClass::SineSeparated;
  return in_reflection_cluster(lengths, n, m) ? PairClass::SameCluster : PairClass::PotentialSeparated;
}

std::vector<Index> match_spectrum(std::span<const double> exact, std::vector<ClusterPrediction>& predictions) {
  const std::size_t n = predictions.size();
  if (exact.size() != n)
    throw LabError(ErrorKind::MatchingFailure, "exact spectrum has " + std::to_string(exact.size()) +
                                                   " values for " + std::to_string(n) + " predictions");
  std::vector<Index> by_energy(n);
  std::iota(by_energy.begin(), by_energy.end(), 0);
  std::stable_sort(by_energy.begin(), by_energy.end(),
                   [&](Index a, Index b) { return predictions[a].predicted < predictions[b].predicted; });
  std::vector<Index> exact_order(n);
  std::iota(exact_order.begin(), exact_order.end(), 0);
  std::stable_sort(exact_order.begin(), exact_order.end(), [&](Index a, Index b) { return exact[a] < exact[b]; });

  // slot k pairs prediction by_energy[k] with exact exact_order[k]
  const auto err = [&](std::size_t pred_slot, std::size_t exact_slot) {
    return std::abs(predictions[by_energy[pred_slot]].predicted - exact[exact_order[exact_slot]]);
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double now = std::max(err(k, k), err(k + 1, k + 1));
      const double swapped = std::max(err(k + 1, k), err(k, k + 1));
      if (swapped < now) {
        std::swap(by_energy[k], by_energy[k + 1]);
        changed = true;
      }
    }
  }

  std::vector<Index> assignment(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Index p = by_energy[k];
    const double value = exact[exact_order[k]];
    const double own = std::abs(predictions[p].predicted - value);
    for (std::size_t j = 0; j < n; ++j) {
      const double other = predictions[j].predicted;
      if (std::abs(other - predictions[p].predicted) <= kSumTolerance * std::max(1.0, std::abs(other))) continue;
      if (std::abs(other - value) < own)
        throw LabError(ErrorKind::MatchingFailure,
                       "exact index " + std::to_string(exact_order[k]) + " is closer to prediction " +
                           modes_text(predictions[j].modes) + " than to its match " +
                           modes_text(predictions[p].modes));
    }
    assignment[p] = exact_order[k];
    predictions[p].matched_exact = value;
  }
  return assignment;
}

std::vector<GapReport> verify_gaps(std::span<const double> exact, std::vector<ClusterPrediction>& predictions,
                                   const std::vector<int>& lengths, double r, GapMargins margins) {
  match_spectrum(exact, predictions);
  const MinGaps mg = min_nonzero_gaps(lengths);
  std::vector<GapReport> out;
  for (std::size_t i = 0; i < predictions.size(); ++i)
    for (std::size_t j = i + 1; j < predictions.size(); ++j) {
      const auto& a = predictions[i];
      const auto& b = predictions[j];
      GapReport g{a.modes, b.modes, classify_pair(a.modes, b.modes, lengths),
                  std::abs(*a.matched_exact - *b.matched_exact), 0.0, false, true};
      if (g.cls == PairClass::CosSeparated) {
        g.required = 2.0 * *mg.c_tilde * r * r * (1.0 - margins.margin);
        g.asserted = true;
      } else if (g.cls == PairClass::SineSeparated) {
        g.required = 4.0 * *mg.s_tilde * r * (1.0 - margins.margin);
        g.asserted = true;
      }
      if (g.asserted) g.passed = g.gap >= g.required;
      out.push_back(std::move(g));
    }
  return out;
}

AdmissibilityReport admissibility(const std::vector<int>& lengths) {
  AdmissibilityReport rep;
  rep.lengths = lengths;
  std::vector<int> big;
  for (int l : lengths) {
    if (l < 1) throw LabError(ErrorKind::InvalidArgument, "lengths must be >= 1");
    if (l > 1) big.push_back(l + 1);
  }
  rep.s = static_cast<int>(big.size());
  if (rep.s <= 1) {
    rep.simple = true;
    rep.reasons.push_back("at most one length exceeds 1");
  } else if (rep.s == 2) {
    const int g = std::gcd(big[0], big[1]);
    rep.simple = g == 1;
    rep.reasons.push_back("gcd(" + std::to_string(big[0]) + ", " + std::to_string(big[1]) + ") = " + std::to_string(g));
  } else {
    rep.simple = true;
    for (std::size_t i = 0; i < big.size(); ++i) {
      if (big[i] % 2 == 0 || big[i] % 3 == 0) {
        rep.simple = false;
        rep.reasons.push_back(std::to_string(big[i]) + " is divisible by " + (big[i] % 2 == 0 ? "2" : "3"));
      }
      for (std::size_t j = i + 1; j < big.size(); ++j)
        if (std::gcd(big[i], big[j]) != 1) {
          rep.simple = false;
          rep.reasons.push_back(std::to_string(big[i]) + " and " + std::to_string(big[j]) + " share a factor");
        }
    }
    if (rep.simple) rep.reasons.push_back("l_i + 1 pairwise coprime and prime to 6");
  }
  rep.bound = rep.simple ? 1 : (1LL << rep.s) - rep.s;
  return rep;
}

std::vector<double> factor_sum_spectrum(const std::vector<std::vector<double>>& factor_spectra) {
  std::vector<double> sums{0.0};
  for (const auto& f : factor_spectra) {
    std::vector<double> next;
    next.reserve(sums.size() * f.size());
    for (double s : sums)
      for (double e : f) next.push_back(s + e);
    sums = std::move(next);
  }
  std::sort(sums.begin(), sums.end());
  return sums;
}

}  // namespace boxlab
