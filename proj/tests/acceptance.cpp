// Acceptance run: one PASS/FAIL line per criterion, each with its runtime bound.

#include "boxlab/cluster.hpp"
#include "boxlab/cyclotomic.hpp"
#include "boxlab/harness.hpp"
#include "boxlab/resolvent.hpp"
#include "boxlab/separation.hpp"
#include "boxlab/tridiag.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

using namespace boxlab;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << what;
      pass = false;
    }
  }
};

int threads() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

std::vector<double> eigenvalues(const Eigen::MatrixXd& m) {
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<double> doubling(double start, int count) {
  std::vector<double> r;
  for (int k = 0; k < count; ++k) r.push_back(start * std::pow(2.0, k));
  return r;
}

void exact_small_cases(Verdict& v) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ab(-5.0, 5.0), lr(std::log(6.0), std::log(1e6));
  double worst1 = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const TridiagSpec spec{1, ab(rng), ab(rng), std::exp(lr(rng))};
    const double exact = exact_spectrum<double>(spec)[0];
    const double closed = spec.a + spec.b + 2.0 * spec.r;
    worst1 = std::max({worst1, rel(predicted_eigenvalue<double>(spec, 1, ExpansionOrder::Constant), exact),
                       rel(closed, exact)});
  }
  v.require(worst1 <= 1e-12, "l=1 relative error " + format_double(worst1));
  double worst2 = 0.0;
  for (double r : {2.0, 10.0, 100.0, 1e3, 1e5}) {
    const TridiagSpec spec{2, 0.0, 0.0, r};
    const auto exact = exact_spectrum<double>(spec);
    std::vector<double> pred{predicted_eigenvalue<double>(spec, 1, ExpansionOrder::Constant),
                             predicted_eigenvalue<double>(spec, 2, ExpansionOrder::Constant)};
    std::sort(pred.begin(), pred.end());
    worst2 = std::max({worst2, rel(pred[0], exact[0]), rel(pred[1], exact[1]), rel(pred[0], -r * r + r),
                       rel(pred[1], r * r + r)});
  }
  v.require(worst2 <= 1e-9, "l=2 relative error " + format_double(worst2));
  v.detail << "l=1 max rel " << worst1 << ", l=2 max rel " << worst2;
}

void expansion_residual_grid(Verdict& v) {
  const auto rs = doubling(50.0, 7);
  const std::vector<double> coeffs{-1.0, 0.0, 0.5, 1.0};
  int cells = 0, fits = 0, exact_cells = 0;
  double worst_ratio = 0.0, worst_slope = -INFINITY;
  for (int l = 2; l <= 8; ++l)
    for (double a : coeffs)
      for (double b : coeffs) {
        const double num = 40.0 * (l + 1) * std::abs(a + b) + 16.0 * std::pow(l + 1, 3) + 1.0;
        for (double r : rs) {
          const auto s = expansion_residual({l, a, b, r});
          worst_ratio = std::max(worst_ratio, s.residual * r / num);
          v.require(s.residual <= num / r, "bound violated at l=" + std::to_string(l) + " a=" + format_double(a) +
                                               " b=" + format_double(b) + " r=" + format_double(r));
          ++cells;
        }
        const auto fit = residual_order(l, a, b, rs);
        if (fit.exact_to_precision) {
          ++exact_cells;
          continue;
        }
        ++fits;
        worst_slope = std::max(worst_slope, *fit.slope);
        v.require(*fit.slope <= -0.7, "slope " + format_double(*fit.slope) + " at l=" + std::to_string(l) +
                                          " a=" + format_double(a) + " b=" + format_double(b));
      }
  v.detail << cells << " cells, max residual/bound " << worst_ratio << ", " << fits << " fits with max slope "
           << worst_slope << ", " << exact_cells << " exact to precision";
}

void c_bound(Verdict& v) {
  double worst = 0.0;
  for (int l = 1; l <= 12; ++l)
    for (int n = 1; n <= l; ++n) {
      const double c = std::abs(c_coefficient(l, n));
      worst = std::max(worst, c / (10.0 * (l + 1)));
      v.require(c < 10.0 * (l + 1), "|C| too large at l=" + std::to_string(l) + " n=" + std::to_string(n));
    }
  v.detail << "max |C|/(10(l+1)) = " << worst;
}

void structural_identities(Verdict& v) {
  int configs = 0;
  std::vector<std::vector<int>> all;
  for (int d = 1; d <= 3; ++d) {
    std::vector<int> l(d, 1);
    while (true) {
      all.push_back(l);
      int i = d - 1;
      while (i >= 0 && l[i] == 5) l[i--] = 1;
      if (i < 0) break;
      ++l[i];
    }
  }
  for (const auto& l : all) {
    const int d = static_cast<int>(l.size());
    const auto p = build_partition(d, l, 1);
    const IntSparse sum = projector_sum(p);
    bool unity = sum.nonZeros() == p.size();
    for (int k = 0; k < sum.outerSize(); ++k)
      for (IntSparse::InnerIterator it(sum, k); it; ++it) unity = unity && it.row() == it.col() && it.value() == 1;
    bool faces = true;
    for (int axis = 0; axis < d; ++axis)
      for (int sign : {-1, 1}) {
        const auto f = face_product(p, axis, sign);
        faces = faces && f.product == f.indicator;
      }
    const bool coupling = outer_coupling(p) == neighbor_coupling_sum(p);
    std::ostringstream tag;
    for (int x : l) tag << x << ' ';
    v.require(unity && faces && coupling, "identity fails for l = " + tag.str());
    ++configs;
  }
  v.detail << configs << " length tuples, integer arithmetic";
}

void neumann_consistency(Verdict& v) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  double worst = 0.0;
  for (const auto& l : std::vector<std::vector<int>>{{1}, {4}, {2, 3}, {3, 2}, {1, 4}, {2, 2, 2}, {3, 1, 2}}) {
    const int d = static_cast<int>(l.size());
    const auto p = build_partition(d, l, 2, {20000, 4});
    const auto w = sample_disorder(p, {-1, 1}, 7);
    Boosts boosts;
    for (int i = 0; i < d; ++i) boosts.push_back(u(rng));
    for (double r : {3.0, 100.0, 1600.0}) {
      const Eigen::MatrixXd a = neumann_truncation(p, w, boosts, r).a_r;
      const Eigen::MatrixXd b = tensor_truncation(p, w, boosts, r);
      worst = std::max(worst, (a - b).cwiseAbs().maxCoeff() / a.cwiseAbs().maxCoeff());
    }
  }
  v.require(worst <= 1e-12, "assemblies differ by " + format_double(worst));
  const auto p = build_partition(2, {2, 3}, 2);
  const auto w = sample_disorder(p, {-1, 1}, 7);
  const auto rs = doubling(100.0, 5);
  std::vector<double> norms;
  for (double r : rs) norms.push_back(neumann_remainder(p, w, {}, r).norm);
  const double slope = loglog_slope(rs, norms);
  v.require(slope <= -0.8, "remainder slope " + format_double(slope));
  v.detail << "max relative difference " << worst << ", remainder slope " << slope;
}

PointSet spaced_points(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> u(0.01, 0.99);
  PointSet s;
  while (static_cast<int>(s.size()) < count) {
    const double x = u(rng);
    bool ok = true;
    for (double y : s) ok = ok && std::abs(x - y) >= 0.01;
    if (ok) s.push_back(x);
  }
  return s;
}

void separation_systems(Verdict& v) {
  std::mt19937_64 rng(4);
  int violations = 0;
  long long selections = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 4);
    std::vector<PointSet> sets;
    for (int i = 0; i < d; ++i) sets.push_back(spaced_points(rng, 1 + static_cast<int>(rng() % 4)));
    const auto design = design_separation(sets);
    std::vector<double> a;
    for (const auto& iv : design.intervals) a.push_back(std::uniform_real_distribution<double>(iv.lower, iv.upper)(rng));
    const auto check = verify_separation(sets, a, design.delta);
    selections += check.selections;
    if (!check.passed) ++violations;
  }
  v.require(violations == 0, std::to_string(violations) + " violations");
  v.detail << "1000 systems, " << selections << " selections, " << violations << " violations";
}

void cyclotomic_scans(Verdict& v) {
  long long tuples = 0;
  for (const auto& ps : std::vector<std::vector<int>>{{5, 7}, {5, 11}, {7, 11}, {5, 7, 11}}) {
    const auto rep = verify_lemma5(ps, threads());
    tuples += rep.tuples;
    v.require(rep.admissible && rep.zeros == 0, "vanishing sum for a coprime tuple");
  }
  const bool c1 = cos_sum_is_zero({2}, {1});
  const bool c2 = cos_sum_is_zero({3, 3}, {1, 2});
  v.require(c1 && c2, "control case not an exact zero");
  v.detail << tuples << " tuples scanned, zero vanishing sums, controls exact zero";
}

void cluster_gaps(Verdict& v) {
  const std::vector<int> l{2, 4};
  const auto part = build_partition(2, l, 2);
  const auto w = sample_disorder(part, {-1, 1}, 11);
  const Boosts boosts{2.0, 3.0};
  const double r = 500.0, margin = 0.25;
  const auto mg = min_nonzero_gaps(l);
  const double c_tilde = (std::sqrt(5.0) - 2.0) / 2.0;
  v.require(mg.c_tilde && std::abs(*mg.c_tilde - c_tilde) <= 1e-12, "c_tilde differs from (sqrt5-2)/2");
  const auto exact = eigenvalues(tensor_truncation(part, w, boosts, r));
  auto preds = all_predictions(l, FacePotentials::from(part, w, boosts), r);
  int cos_pairs = 0, sine_pairs = 0;
  double worst = INFINITY;
  for (const auto& g : verify_gaps(exact, preds, l, r, {margin})) {
    if (g.cls == PairClass::CosSeparated) {
      ++cos_pairs;
      const double need = 2.0 * c_tilde * r * r * (1.0 - margin);
      worst = std::min(worst, g.gap / need);
      v.require(g.gap >= need, "cos_separated gap " + format_double(g.gap) + " below " + format_double(need));
    } else if (g.cls == PairClass::SineSeparated) {
      ++sine_pairs;
      const double need = 4.0 * *mg.s_tilde * r * (1.0 - margin);
      worst = std::min(worst, g.gap / need);
      v.require(g.gap >= need, "sine_separated gap " + format_double(g.gap) + " below " + format_double(need));
    }
    v.require(g.passed, "verify_gaps flagged a pair");
  }
  v.detail << cos_pairs << " cos_separated, " << sine_pairs << " sine_separated pairs, min gap/required " << worst;
}

ExperimentConfig config(const std::string& text) { return parse_config(text + "run.threads = " + std::to_string(threads()) + "\n"); }

void coprime_contrast(Verdict& v) {
  auto c = config("geometry.d = 2\ngeometry.lengths = 2,2\ndisorder.base_seed = 3\nrun.r = 100,200,400,800,1600\n"
                  "gapgrowth.pair = 1,2/2,1\n");
  const auto same = gap_growth_probe(c, c.gap_pair);
  const auto& s = same.series.front();
  v.require(s.cls == PairClass::SameCluster, "(1,2)/(2,1) is not a same-cluster pair");
  v.require(s.slope && *s.slope <= 0.1, "same_cluster slope " + format_double(s.slope.value_or(NAN)));
  c = config("geometry.d = 2\ngeometry.lengths = 2,4\ndisorder.base_seed = 3\nrun.r = 100,200,400,800,1600\n");
  const auto all = gap_growth_probe(c, std::nullopt);
  const auto& m = all.series.back();
  v.require(m.label == "min_all" && m.slope && *m.slope >= 0.8, "min-pair slope " + format_double(m.slope.value_or(NAN)));
  v.detail << "l=(2,2) same_cluster slope " << *s.slope << ", l=(2,4) min-pair slope " << m.slope.value_or(NAN);
}

void multiplicity_bound(Verdict& v) {
  const auto check = [&](const std::string& geometry, int seeds, int bound, bool exact_one) {
    const auto prof = multiplicity_scan(config(geometry + "disorder.seeds = " + std::to_string(seeds) + "\nrun.r = 300\n"));
    int worst = 0;
    for (const auto& row : prof.rows) worst = std::max(worst, row.max_multiplicity);
    v.require(prof.rows.size() == static_cast<std::size_t>(seeds), "missing runs");
    v.require(exact_one ? worst == 1 : worst <= bound, geometry + " max multiplicity " + std::to_string(worst));
    v.require(prof.pass, prof.failures.empty() ? "scan failed" : prof.failures.front());
    return worst;
  };
  const int a = check("geometry.d = 2\ngeometry.lengths = 2,2\n", 100, 2, false);
  const int b = check("geometry.d = 2\ngeometry.lengths = 2,4\n", 100, 1, true);
  const int c = check("geometry.d = 3\ngeometry.lengths = 2,2,2\n", 25, 5, false);
  v.detail << "max cluster sizes: (2,2) " << a << ", (2,4) " << b << ", (2,2,2) " << c;
}

void constancy(Verdict& v) {
  const auto rep = constancy_scan(config("geometry.d = 2\ngeometry.lengths = 2,2\ndisorder.base_seed = 1\n"
                                         "run.z = -9,-8,8,9,10\nconstancy.lambda = 0,1,2.5\n"));
  int measured = 0;
  for (const auto& pt : rep.points) measured += pt.multiplicity.has_value();
  v.require(rep.points.size() == 15 && measured == 15, "grid incomplete");
  v.require(rep.pass, rep.failures.empty() ? "not constant" : rep.failures.front());
  v.detail << measured << " grid points, multiplicity " << (rep.value ? *rep.value : -1);
}

void cyclic_rank(Verdict& v) {
  const auto scan = rank_scan(config("geometry.d = 2\ngeometry.lengths = 2,2\ndisorder.seeds = 50\n"
                                     "rankcheck.n = 0,0\nrankcheck.m = 1,1\nrankcheck.k = 10\n"));
  int full = 0;
  for (const auto& [seed, r] : scan.runs) full += r.pass;
  v.require(scan.runs.size() == 50 && full == 50, std::to_string(full) + "/50 runs at full rank");
  v.detail << full << "/" << scan.runs.size() << " runs at full rank";
}

struct Criterion {
  const char* name;
  double seconds;
  std::function<void(Verdict&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"exact small cases", 1, exact_small_cases},
      {"expansion residual grid", 30, expansion_residual_grid},
      {"C coefficient bound", 1, c_bound},
      {"structural identities", 5, structural_identities},
      {"Kronecker and Neumann consistency", 60, neumann_consistency},
      {"separation systems", 30, separation_systems},
      {"cyclotomic non-vanishing", 120, cyclotomic_scans},
      {"cluster gaps", 10, cluster_gaps},
      {"coprime contrast", 60, coprime_contrast},
      {"multiplicity bound", 300, multiplicity_bound},
      {"constancy", 30, constancy},
      {"cyclic rank", 60, cyclic_rank},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.seconds;
    const bool ok = v.pass && in_time;
    failed += !ok;
    std::printf("%s %2zu %s (%.2fs of %.0fs)%s: %s\n", ok ? "PASS" : "FAIL", i + 1, c.name, secs, c.seconds,
                in_time ? "" : " over time", v.detail.str().c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
