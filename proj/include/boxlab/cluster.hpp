#pragma once

// Mode-tuple predictions for the Kronecker-sum spectrum of A_r, pair
// classification and gap checks, and the admissibility rules for simple
// spectrum.

#include "boxlab/lattice.hpp"

#include <optional>
#include <string>
#include <vector>

namespace boxlab {

using Modes = std::vector<int>;

/// omega_{-e_i}, omega_{e_i} and lambda_i per axis.
struct FacePotentials {
  std::vector<double> minus;
  std::vector<double> plus;
  std::vector<double> lambda;

  static FacePotentials from(const BoxPartition& partition, const DisorderSample& disorder, const Boosts& boosts);
  static FacePotentials zero(int d);
  /// omega_{e_i} + omega_{-e_i} + lambda_i
  double sum(int axis) const;
};

struct ClusterPrediction {
  Modes modes;
  double r2_term = 0.0;         // 2 r^2 sum cos(pi n_i/(l_i+1))
  double r1_term = 0.0;         // 4 r sum sin^2(pi n_i/(l_i+1)) / (l_i+1)
  double potential_term = 0.0;  // 2 sum (omega_{e_i} + omega_{-e_i} + lambda_i) sin^2 / (l_i+1)
  double constant_term = 0.0;   // -4 sum C_{l_i, n_i}
  double predicted = 0.0;
  std::optional<double> matched_exact;
};

ClusterPrediction predicted_cluster_energy(const std::vector<int>& lengths, const Modes& modes,
                                           const FacePotentials& potentials, double r);

/// Every mode tuple in lexicographic order.
std::vector<Modes> all_modes(const std::vector<int>& lengths);
std::vector<ClusterPrediction> all_predictions(const std::vector<int>& lengths, const FacePotentials& potentials,
                                               double r);

/// Sums differing by at most this much are treated as equal.
inline constexpr double kSumTolerance = 1e-12;

double cos_sum(const std::vector<int>& lengths, const Modes& modes);
double sine_sum(const std::vector<int>& lengths, const Modes& modes);

struct MinGaps {
  std::optional<double> c_tilde;
  std::optional<double> s_tilde;
};

/// Minimal nonzero differences of cosine sums and weighted sine sums over all
/// mode tuples. Rejects prod l_i > 1e4.
MinGaps min_nonzero_gaps(const std::vector<int>& lengths);

enum class PairClass {
  CosSeparated,
  SineSeparated,
  SameCluster,         // all m_i in {n_i, l_i + 1 - n_i}
  PotentialSeparated,  // both sums coincide without a reflection relation
};

const char* to_string(PairClass c);
bool in_reflection_cluster(const std::vector<int>& lengths, const Modes& n, const Modes& m);
PairClass classify_pair(const Modes& n, const Modes& m, const std::vector<int>& lengths);

/// Sorted pairing of exact eigenvalues with predictions, then adjacent swaps
/// while they lower the larger of the two errors. Fills matched_exact and
/// returns the exact index for each prediction. Throws MatchingFailure when an
/// exact value sits strictly closer to a prediction with a different energy.
std::vector<Index> match_spectrum(std::span<const double> exact, std::vector<ClusterPrediction>& predictions);

struct GapReport {
  Modes n;
  Modes m;
  PairClass cls;
  double gap;
  double required;  // 0 when not asserted
  bool asserted;
  bool passed;
};

struct GapMargins {
  double margin = 0.25;
};

/// Gap checks over all pairs of matched predictions. Cos-separated pairs need
/// gap >= 2 c~ r^2 (1 - margin), sine-separated pairs gap >= 4 s~ r (1 - margin);
/// the other classes are reported only.
std::vector<GapReport> verify_gaps(std::span<const double> exact, std::vector<ClusterPrediction>& predictions,
                                   const std::vector<int>& lengths, double r, GapMargins margins = {});

struct AdmissibilityReport {
  std::vector<int> lengths;
  int s = 0;
  bool simple = false;
  long long bound = 1;
  std::vector<std::string> reasons;
};

AdmissibilityReport admissibility(const std::vector<int>& lengths);

/// All sums of one eigenvalue from each factor, ascending.
std::vector<double> factor_sum_spectrum(const std::vector<std::vector<double>>& factor_spectra);

}  // namespace boxlab
