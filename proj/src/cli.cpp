#include "boxlab/cli.hpp"

#include "boxlab/cluster.hpp"
#include "boxlab/cyclotomic.hpp"
#include "boxlab/harness.hpp"
#include "boxlab/resolvent.hpp"
#include "boxlab/separation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <filesystem>
#include <fstream>
#include <random>

namespace boxlab {

namespace {

using nlohmann::json;

struct Outcome {
  CsvTable table;
  json details = json::object();
  std::vector<std::string> failures;
  std::map<std::string, CsvTable> extra_tables;
};

std::string join_ints(const std::vector<int>& v, const char* sep = ";") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

std::string fmt(double v) { return format_double(v); }

std::vector<std::string> indexed(const std::string& stem, int d) {
  std::vector<std::string> out;
  for (int i = 1; i <= d; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

bool is_config_kind(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config:
    case ErrorKind::InvalidArgument:
    case ErrorKind::InsufficientVolume:
    case ErrorKind::SizeOverflow:
    case ErrorKind::OutOfVolume:
    case ErrorKind::InvalidOrder:
    case ErrorKind::DegenerateInput:
    case ErrorKind::ModulusCap:
    case ErrorKind::CombinatorialLimit:
    case ErrorKind::Embedding:
    case ErrorKind::Magnitude:
      return true;
    default:
      return false;
  }
}

// ---- subcommands --------------------------------------------------------------

Outcome run_partition(const ExperimentConfig& c) {
  Outcome o;
  const auto p = config_partition(c);
  const auto w = sample_disorder(c, 0);
  o.table.columns = {"index"};
  for (const auto& s : indexed("x_", c.d)) o.table.columns.push_back(s);
  for (const auto& s : indexed("n_", c.d)) o.table.columns.push_back(s);
  o.table.columns.push_back("omega");
  for (Index i = 0; i < p.size(); ++i) {
    const auto& x = p.sites()[i];
    std::vector<std::string> row{std::to_string(i)};
    for (int v : x) row.push_back(std::to_string(v));
    const auto n = p.box_of(x);
    for (int v : n) row.push_back(std::to_string(v));
    row.push_back(fmt(w.at(n)));
    o.table.rows.push_back(std::move(row));
  }
  const IntSparse sum = projector_sum(p);
  const bool unity = IntMatrix(sum) == IntMatrix::Identity(p.size(), p.size());
  if (!unity) o.failures.push_back("sum of box projections is not the identity");
  o.details["sites"] = p.size();
  o.details["boxes"] = p.boxes().size();
  o.details["box_volume"] = p.box_volume();
  o.details["partition_of_unity"] = unity;
  if (c.radius >= 1) {
    const bool coupling = outer_coupling(p) == neighbor_coupling_sum(p);
    bool faces = true;
    for (int axis = 0; axis < c.d; ++axis)
      for (int sign : {-1, 1}) {
        const auto f = face_product(p, axis, sign);
        faces = faces && f.product == f.indicator;
      }
    if (!coupling) o.failures.push_back("outer coupling differs from the neighbour sum");
    if (!faces) o.failures.push_back("a face product differs from its face indicator");
    o.details["coupling_identity"] = coupling;
    o.details["face_identities"] = faces;
  }
  return o;
}

Outcome run_expansion(const ExperimentConfig& c) {
  if (c.r_values.empty()) throw ConfigError("run.r", 0, "expansion needs r values");
  Outcome o;
  o.table.columns = {"l", "a", "b", "r", "n", "exact", "predicted", "residual"};
  json fits = json::array();
  std::set<int> ls(c.lengths.begin(), c.lengths.end());
  for (int l : ls)
    for (double a : c.expansion_a)
      for (double b : c.expansion_b) {
        const double bound_num = 40.0 * (l + 1) * std::abs(a + b) + 16.0 * std::pow(l + 1, 3) + 1.0;
        for (double r : c.r_values) {
          const TridiagSpec spec{l, a, b, r};
          const auto exact = exact_spectrum<double>(spec);
          std::vector<std::pair<double, int>> pred;
          for (int n = 1; n <= l; ++n) pred.emplace_back(predicted_eigenvalue<double>(spec, n, c.expansion_order), n);
          std::sort(pred.begin(), pred.end());
          for (int k = 0; k < l; ++k)
            o.table.rows.push_back({std::to_string(l), fmt(a), fmt(b), fmt(r), std::to_string(pred[k].second),
                                    fmt(exact[k]), fmt(pred[k].first), fmt(std::abs(exact[k] - pred[k].first))});
          if (c.expansion_order == ExpansionOrder::Constant || c.expansion_order == ExpansionOrder::COverR) {
            const auto s = expansion_residual(spec, c.expansion_order);
            if (s.residual > bound_num / r)
              o.failures.push_back("residual " + fmt(s.residual) + " above " + fmt(bound_num / r) + " at l=" +
                                   std::to_string(l) + " a=" + fmt(a) + " b=" + fmt(b) + " r=" + fmt(r));
          }
        }
        const auto [lo, hi] = std::minmax_element(c.r_values.begin(), c.r_values.end());
        if (c.r_values.size() >= 4 && *hi >= 8 * *lo &&
            (c.expansion_order == ExpansionOrder::Constant || c.expansion_order == ExpansionOrder::COverR)) {
          const auto fit = residual_order(l, a, b, c.r_values, c.expansion_order);
          json f{{"l", l}, {"a", a}, {"b", b}, {"exact_to_precision", fit.exact_to_precision}};
          if (fit.slope) f["slope"] = *fit.slope;
          fits.push_back(f);
          if (fit.slope && *fit.slope > -0.7)
            o.failures.push_back("residual slope " + fmt(*fit.slope) + " above -0.7 at l=" + std::to_string(l) +
                                 " a=" + fmt(a) + " b=" + fmt(b));
        }
      }
  o.details["order"] = to_string(c.expansion_order);
  o.details["fits"] = fits;
  return o;
}

Outcome run_cluster(const ExperimentConfig& c) {
  if (c.r_values.empty()) throw ConfigError("run.r", 0, "cluster needs r values");
  if (c.radius < 1) throw LabError(ErrorKind::InsufficientVolume, "cluster needs geometry.radius >= 1");
  Outcome o;
  const auto p = config_partition(c);
  const MinGaps mg = min_nonzero_gaps(c.lengths);
  o.table.columns = {"seed", "r", "n", "m", "class", "gap", "required", "asserted", "passed"};
  CsvTable preds_table{{"seed", "r", "modes", "r2_term", "r1_term", "potential_term", "constant_term", "predicted",
                        "matched_exact"},
                       {}};
  for (int i = 0; i < c.seeds; ++i) {
    const auto w = sample_disorder(c, i);
    const Boosts boosts = resolve_boosts(c, p, w);
    for (double r : c.r_values) {
      const Eigen::VectorXd ev =
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(tensor_truncation(p, w, boosts, r), Eigen::EigenvaluesOnly)
              .eigenvalues();
      const std::vector<double> exact(ev.data(), ev.data() + ev.size());
      auto preds = all_predictions(c.lengths, FacePotentials::from(p, w, boosts), r);
      const std::string seed = std::to_string(c.base_seed + i);
      for (const auto& g : verify_gaps(exact, preds, c.lengths, r, {c.margin})) {
        o.table.rows.push_back({seed, fmt(r), join_ints(g.n), join_ints(g.m), to_string(g.cls), fmt(g.gap),
                                fmt(g.required), g.asserted ? "1" : "0", g.passed ? "1" : "0"});
        if (!g.passed)
          o.failures.push_back(std::string(to_string(g.cls)) + " gap " + fmt(g.gap) + " below " + fmt(g.required) +
                               " for (" + join_ints(g.n, ",") + ")/(" + join_ints(g.m, ",") + ") seed=" + seed +
                               " r=" + fmt(r) + " margin=" + fmt(c.margin));
      }
      for (const auto& pr : preds)
        preds_table.rows.push_back({seed, fmt(r), join_ints(pr.modes), fmt(pr.r2_term), fmt(pr.r1_term),
                                    fmt(pr.potential_term), fmt(pr.constant_term), fmt(pr.predicted),
                                    fmt(*pr.matched_exact)});
    }
  }
  const auto adm = admissibility(c.lengths);
  o.details["c_tilde"] = mg.c_tilde ? json(*mg.c_tilde) : json(nullptr);
  o.details["s_tilde"] = mg.s_tilde ? json(*mg.s_tilde) : json(nullptr);
  o.details["admissibility"] = {{"s", adm.s}, {"simple", adm.simple}, {"bound", adm.bound}, {"reasons", adm.reasons}};
  o.extra_tables["cluster_predictions"] = std::move(preds_table);
  return o;
}

Outcome run_separation(const ExperimentConfig& c) {
  Outcome o;
  const auto sets = sine_system(c.lengths);
  const auto design = design_separation(sets, c.separation_delta);
  o.table.columns = {"seed"};
  for (const auto& s : indexed("a_", c.d)) o.table.columns.push_back(s);
  for (const char* s : {"min_gap", "threshold", "passed"}) o.table.columns.push_back(s);
  for (int i = 0; i < c.seeds; ++i) {
    std::mt19937_64 rng(c.base_seed + i);
    std::vector<double> a;
    for (const auto& iv : design.intervals) a.push_back(std::uniform_real_distribution<double>(iv.lower, iv.upper)(rng));
    const auto check = verify_separation(sets, a, design.delta);
    std::vector<std::string> row{std::to_string(c.base_seed + i)};
    for (double v : a) row.push_back(fmt(v));
    row.push_back(check.min_gap ? fmt(*check.min_gap) : "");
    row.push_back(fmt(check.threshold));
    row.push_back(check.passed ? "1" : "0");
    o.table.rows.push_back(std::move(row));
    if (!check.passed)
      o.failures.push_back("min gap " + fmt(*check.min_gap) + " not above " + fmt(check.threshold) + " for seed " +
                           std::to_string(c.base_seed + i));
  }
  json intervals = json::array();
  for (const auto& iv : design.intervals) intervals.push_back({iv.lower, iv.upper});
  o.details["sets"] = sets;
  o.details["epsilon"] = design.epsilon;
  o.details["delta"] = design.delta;
  o.details["intervals"] = intervals;
  o.details["cross_set_gap"] = design.cross_set_gap ? json(*design.cross_set_gap) : json(nullptr);
  return o;
}

Outcome run_cossum(const std::vector<int>& ps, int threads) {
  Outcome o;
  const auto rep = verify_lemma5(ps, threads);
  o.table.columns = indexed("n_", static_cast<int>(ps.size()));
  for (const auto& w : rep.witnesses) {
    std::vector<std::string> row;
    for (int v : w) row.push_back(std::to_string(v));
    o.table.rows.push_back(std::move(row));
  }
  o.details["p"] = ps;
  o.details["admissible"] = rep.admissible;
  o.details["pairwise_coprime"] = rep.pairwise_coprime;
  o.details["avoids_2N_3N"] = rep.excluded_residues_avoided;
  o.details["tuples"] = rep.tuples;
  o.details["zeros"] = rep.zeros;
  // vanishing sums are only a failure when the inputs are admissible
  if (rep.admissible && rep.zeros > 0)
    o.failures.push_back(std::to_string(rep.zeros) + " vanishing cosine sums for admissible p=(" +
                         join_ints(ps, ",") + ")");
  return o;
}

Outcome run_multiplicity(const ExperimentConfig& c) {
  Outcome o;
  const auto prof = multiplicity_scan(c);
  o.table.columns = {"seed", "r", "extended", "max_multiplicity", "histogram"};
  for (const auto& row : prof.rows) {
    std::string hist;
    for (const auto& [size, count] : row.histogram) hist += (hist.empty() ? "" : ";") + std::to_string(size) + ":" + std::to_string(count);
    o.table.rows.push_back({std::to_string(row.seed), fmt(row.r), row.extended ? "1" : "0",
                            std::to_string(row.max_multiplicity), hist});
  }
  o.details["s"] = prof.s;
  o.details["bound"] = prof.bound;
  o.details["simple_expected"] = prof.simple_expected;
  o.failures = prof.failures;
  return o;
}

Outcome run_constancy(const ExperimentConfig& c) {
  Outcome o;
  const auto rep = constancy_scan(c);
  o.table.columns = {"seed", "z", "lambda", "multiplicity", "note"};
  for (const auto& pt : rep.points)
    o.table.rows.push_back({std::to_string(rep.seed), fmt(pt.z), fmt(pt.lambda),
                            pt.multiplicity ? std::to_string(*pt.multiplicity) : "", pt.note});
  o.details["box"] = rep.box;
  o.details["value"] = rep.value ? json(*rep.value) : json(nullptr);
  o.failures = rep.failures;
  return o;
}

Outcome run_rankcheck(const ExperimentConfig& c) {
  Outcome o;
  const auto scan = rank_scan(c);
  o.table.columns = {"seed", "k", "rank", "target", "passed"};
  for (const auto& [seed, res] : scan.runs)
    o.table.rows.push_back({std::to_string(seed), std::to_string(res.k), std::to_string(res.rank),
                            std::to_string(res.target), res.pass ? "1" : "0"});
  o.failures = scan.failures;
  return o;
}

Outcome run_gapgrowth(const ExperimentConfig& c) {
  Outcome o;
  const auto rep = gap_growth_probe(c, c.gap_pair);
  o.table.columns = {"series", "r", "gap", "floor_limited"};
  json series = json::array();
  for (const auto& s : rep.series) {
    for (std::size_t k = 0; k < s.r.size(); ++k)
      o.table.rows.push_back({s.label, fmt(s.r[k]), fmt(s.gap[k]), s.floor_limited[k] ? "1" : "0"});
    json j{{"series", s.label}, {"asserted", s.asserted}, {"passed", s.passed}, {"expectation", s.expectation}};
    j["slope"] = s.slope ? json(*s.slope) : json(nullptr);
    series.push_back(j);
  }
  o.details["seed"] = rep.seed;
  o.details["series"] = series;
  o.failures = rep.failures;
  return o;
}

void write_outputs(const std::string& dir, const std::string& name, const std::string& hash, const Outcome& o) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(std::filesystem::path(dir) / (name + ".csv"), std::ios::binary);
    csv << o.table.render();
  }
  for (const auto& [extra, table] : o.extra_tables) {
    std::ofstream csv(std::filesystem::path(dir) / (extra + ".csv"), std::ios::binary);
    csv << table.render();
  }
  json verdict = o.details;
  verdict["subcommand"] = name;
  verdict["config_hash"] = hash;
  verdict["pass"] = o.failures.empty();
  verdict["failures"] = o.failures;
  std::ofstream js(std::filesystem::path(dir) / (name + ".json"), std::ios::binary);
  js << verdict.dump(2) << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-volume checks for the block Anderson model"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::vector<int> cossum_p;

  const std::vector<std::string> names{"partition",    "expansion", "cluster",   "separation", "cossum",
                                       "multiplicity", "constancy", "rankcheck", "gapgrowth"};
  for (const auto& name : names) {
    auto* sub = app.add_subcommand(name);
    auto* cfg = sub->add_option("--config", config_path, "experiment config file");
    if (name != "cossum") cfg->required();
    sub->add_option("--out", out_dir, "output directory (default: output.dir from the config)");
    if (name == "cossum") sub->add_option("--p", cossum_p, "comma separated moduli")->delimiter(',');
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 2;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  try {
    ExperimentConfig c;
    if (!config_path.empty()) c = load_config(config_path, name != "cossum");
    if (out_dir.empty()) out_dir = c.output_dir;

    Outcome o;
    if (name == "partition") o = run_partition(c);
    else if (name == "expansion") o = run_expansion(c);
    else if (name == "cluster") o = run_cluster(c);
    else if (name == "separation") o = run_separation(c);
    else if (name == "cossum") {
      const auto ps = cossum_p.empty() ? c.cossum_p : cossum_p;
      if (ps.empty()) throw ConfigError("cossum.p", 0, "give --p or cossum.p");
      o = run_cossum(ps, c.threads);
    } else if (name == "multiplicity") o = run_multiplicity(c);
    else if (name == "constancy") o = run_constancy(c);
    else if (name == "rankcheck") o = run_rankcheck(c);
    else o = run_gapgrowth(c);

    write_outputs(out_dir, name, config_hash(c.source), o);
    out << name << ": " << (o.failures.empty() ? "pass" : "FAIL") << " (" << o.table.rows.size() << " rows -> "
        << out_dir << ")\n";
    for (const auto& f : o.failures) err << "  " << f << "\n";
    return o.failures.empty() ? 0 : 1;
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const LabError& e) {
    err << to_string(e.kind()) << ": " << e.what() << "\n";
    return is_config_kind(e.kind()) ? 2 : 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << e.what() << "\n";
    return 2;
  }
}

}  // namespace boxlab
