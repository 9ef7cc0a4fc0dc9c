#pragma once

// Experiment driver: configuration, disorder sampling, the multiplicity,
// constancy, cyclic-rank and gap-growth scans, and report serialization.

#include "boxlab/cluster.hpp"
#include "boxlab/lattice.hpp"
#include "boxlab/tridiag.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace boxlab {

enum class Precision { Standard, Extended };

struct LambdaSpec {
  bool from_separation = false;  // from_lem4:<delta>
  double delta = 0.0;
  std::vector<double> values;  // explicit per-axis boosts
};

struct ExperimentConfig {
  int d = 0;
  std::vector<int> lengths;
  int radius = 2;
  UniformLaw law;
  int seeds = 1;
  std::uint64_t base_seed = 0;
  std::vector<double> r_values;
  std::optional<LambdaSpec> lambda;
  std::vector<double> z_values;
  int threads = 1;
  double degeneracy = 1e-6;
  double solver = 1e-10;
  double margin = 0.25;
  Precision precision = Precision::Standard;
  std::string output_dir = "results";

  // subcommand keys
  std::vector<double> expansion_a{0.0};
  std::vector<double> expansion_b{0.0};
  ExpansionOrder expansion_order = ExpansionOrder::Constant;
  std::optional<BoxIndex> constancy_box;  // default e_1
  std::vector<double> constancy_lambda{0.0, 1.0, 2.5};
  std::optional<BoxIndex> rank_n;  // default origin
  std::optional<BoxIndex> rank_m;  // default (1, ..., 1)
  std::optional<int> rank_k;       // default lattice diameter
  std::optional<std::pair<Modes, Modes>> gap_pair;  // empty means all pairs
  std::optional<double> separation_delta;
  std::vector<int> cossum_p;

  std::string source;  // raw text, hashed into reports
};

/// Flat "key = value" lines; '#' starts a comment; lists are comma separated.
/// Throws ConfigError naming the line and field.
ExperimentConfig parse_config(std::string_view text, bool require_geometry = true);
ExperimentConfig load_config(const std::string& path, bool require_geometry = true);

/// FNV-1a 64 of the config text, as 16 hex digits.
std::string config_hash(std::string_view text);

BoxPartition config_partition(const ExperimentConfig& config);
/// Seed base_seed + index over the configured partition.
DisorderSample sample_disorder(const ExperimentConfig& config, int index);
/// Per-axis boosts for one sample (explicit list, or separation midpoints minus face potentials).
Boosts resolve_boosts(const ExperimentConfig& config, const BoxPartition& partition, const DisorderSample& disorder);

/// Runs f(0..count-1) on up to `threads` workers; results keep index order.
template <typename T>
std::vector<T> parallel_map(int count, int threads, const std::function<T(int)>& f) {
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  const int workers = std::max(1, std::min(threads, count));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) {
        try {
          slots[i].emplace(f(i));
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Degeneracy tolerance tau = tol * max(1, spectral diameter).
double degeneracy_tolerance(std::span<const double> ascending, double tol);

// ---- multiplicity -------------------------------------------------------------

struct MultiplicityRow {
  std::uint64_t seed;
  double r;
  bool extended;
  std::map<int, int> histogram;  // cluster size -> count
  int max_multiplicity;
  int total() const;
};

struct MultiplicityProfile {
  std::vector<MultiplicityRow> rows;
  int s = 0;
  long long bound = 1;
  bool simple_expected = false;
  bool pass = true;
  std::vector<std::string> failures;
};

/// Clusters the spectrum of r^2 H_r for every (seed, r).
MultiplicityProfile multiplicity_scan(const ExperimentConfig& config);

// ---- constancy ----------------------------------------------------------------

struct ConstancyPoint {
  double z;
  double lambda;
  std::optional<int> multiplicity;  // empty when z was too close to the spectrum
  std::string note;
};

struct ConstancyReport {
  std::uint64_t seed;
  BoxIndex box;
  std::vector<ConstancyPoint> points;
  std::optional<int> value;
  bool pass = true;
  std::vector<std::string> failures;
};

/// Max multiplicity of the G_00 block for H + lambda P_box over the z x lambda grid.
ConstancyReport constancy_scan(const ExperimentConfig& config, std::optional<BoxIndex> box = {}, int sample = 0);

/// Max cluster size of a symmetric matrix's spectrum at tolerance tol * max(1, diameter).
int max_multiplicity(const Eigen::MatrixXd& symmetric, double tol);

// ---- cyclic rank --------------------------------------------------------------

struct RankResult {
  int rank = 0;
  int target = 0;  // rank of P_m
  int k = 0;
  bool pass = false;
};

/// Numerical rank (singular values > 1e-8 of the largest) of P_m restricted to
/// span{H^k P_n : k = 0..K}, built as an orthonormal block-Krylov basis.
RankResult cyclic_rank_check(const LatticeOperator& h, std::span<const int> n, std::span<const int> m,
                             std::optional<int> k = {});

/// Graph diameter of the truncated volume.
int lattice_diameter(const BoxPartition& partition);

struct RankScan {
  std::vector<std::pair<std::uint64_t, RankResult>> runs;
  bool pass = true;
  std::vector<std::string> failures;
};

RankScan rank_scan(const ExperimentConfig& config);

// ---- gap growth -----------------------------------------------------------------

struct GapSeries {
  std::string label;  // class name, "pair" or "min_all"
  std::optional<PairClass> cls;
  std::vector<double> r;
  std::vector<double> gap;
  std::vector<bool> floor_limited;
  std::optional<double> slope;
  bool asserted = false;
  bool passed = true;
  std::string expectation;
};

struct GapGrowthReport {
  std::uint64_t seed = 0;
  std::vector<GapSeries> series;
  bool pass = true;
  std::vector<std::string> failures;
};

/// Gaps of r^2 H_r between matched mode tuples over config.r_values.
GapGrowthReport gap_growth_probe(const ExperimentConfig& config, const std::optional<std::pair<Modes, Modes>>& pair);

// ---- serialization ------------------------------------------------------------

/// %.17g
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string render() const;
};

}  // namespace boxlab
