#include "doctest.h"

#include "boxlab/harness.hpp"
#include "boxlab/resolvent.hpp"

#include <cmath>

using namespace boxlab;

namespace {

ExperimentConfig cfg(const std::string& text) { return parse_config(text); }

}  // namespace

TEST_CASE("config parsing") {
  const auto c = cfg(
      "# sample\n"
      "geometry.d = 2\n"
      "geometry.lengths = 2,4\n"
      "geometry.radius = 2\n"
      "disorder.lower = -1\n"
      "disorder.upper = 1\n"
      "disorder.seeds = 100\n"
      "disorder.base_seed = 42\n"
      "run.r = 100,200,400,800,1600\n"
      "run.lambda = from_lem4:0.4\n"
      "tol.degeneracy = 1e-6\n"
      "precision = extended\n");
  CHECK(c.d == 2);
  CHECK(c.lengths == std::vector<int>{2, 4});
  CHECK(c.seeds == 100);
  CHECK(c.base_seed == 42);
  CHECK(c.r_values.size() == 5);
  CHECK(c.lambda->from_separation);
  CHECK(c.lambda->delta == 0.4);
  CHECK(c.precision == Precision::Extended);
  CHECK(cfg("geometry.d = 2\ngeometry.lengths = 2,4\nrun.lambda = 2.0, 3.0\n").lambda->values ==
        std::vector<double>{2.0, 3.0});
}

TEST_CASE("config errors name the line and field") {
  const auto expect = [](const std::string& text, const std::string& field, int line) {
    try {
      parse_config(text);
      FAIL("expected a config error for: " << text);
    } catch (const ConfigError& e) {
      CHECK(e.field() == field);
      CHECK(e.line() == line);
      CHECK(std::string(e.what()).find(field) != std::string::npos);
    }
  };
  expect("geometry.d = 2\n", "geometry.lengths", 0);
  expect("geometry.d = 2\ngeometry.lengths = 2\n", "geometry.lengths", 2);
  expect("geometry.d = x\n", "geometry.d", 1);
  expect("geometry.d = 1\ngeometry.lengths = 2\ngeometry.colour = red\n", "geometry.colour", 3);
  expect("geometry.d = 1\ngeometry.lengths = 2\nprecision = quad\n", "precision", 3);
  expect("geometry.d = 3\ngeometry.lengths = 6,6,6\ngeometry.radius = 2\n", "geometry.lengths", 2);
  expect("geometry.d = 1\ngeometry.lengths = 2\nrun.lambda = 1,2\n", "run.lambda", 3);
}

TEST_CASE("config hash is stable") {
  CHECK(config_hash("") == "cbf29ce484222325");
  CHECK(config_hash("a") == "af63dc4c8601ec8c");
}

TEST_CASE("disorder samples are reproducible") {
  const auto c = cfg("geometry.d = 2\ngeometry.lengths = 1,1\ngeometry.radius = 4\ndisorder.lower = -0.5\ndisorder.upper = 2\n");
  CHECK(sample_disorder(c, 3).values == sample_disorder(c, 3).values);
  CHECK(sample_disorder(c, 3).values != sample_disorder(c, 4).values);
  const auto draws = uniform_draws(77, 10000, {-0.5, 2.0});
  double mean = 0;
  for (double x : draws) {
    CHECK((x >= -0.5 && x <= 2.0));
    mean += x / draws.size();
  }
  const double sigma = 2.5 / std::sqrt(12.0) / std::sqrt(10000.0);
  CHECK(std::abs(mean - 0.75) <= 3 * sigma);
}

TEST_CASE("parallel map keeps order") {
  const auto v = parallel_map<int>(50, 7, [](int i) { return i * i; });
  for (int i = 0; i < 50; ++i) CHECK(v[i] == i * i);
}

TEST_CASE("separation-derived boosts land on interval midpoints") {
  const auto c = cfg("geometry.d = 2\ngeometry.lengths = 2,4\nrun.lambda = from_lem4:0.4\n");
  const auto p = config_partition(c);
  const auto w = sample_disorder(c, 0);
  const Boosts b = resolve_boosts(c, p, w);
  const auto f = FacePotentials::from(p, w, b);
  CHECK(f.sum(0) == doctest::Approx(0.75 * (1.0 / (0.0690983 * 0.4) * 2.0)).epsilon(1e-5));
}

TEST_CASE("multiplicity scans") {
  auto c = cfg("geometry.d = 2\ngeometry.lengths = 2,2\ndisorder.seeds = 20\nrun.r = 300\nrun.threads = 4\n");
  auto prof = multiplicity_scan(c);
  CHECK(prof.pass);
  for (const auto& row : prof.rows) {
    CHECK(row.max_multiplicity <= 2);
    CHECK(row.total() == 4);
  }

  c = cfg("geometry.d = 2\ngeometry.lengths = 2,4\ndisorder.seeds = 20\nrun.r = 300\nrun.threads = 4\n");
  prof = multiplicity_scan(c);
  CHECK(prof.pass);
  for (const auto& row : prof.rows) CHECK(row.max_multiplicity == 1);

  c = cfg("geometry.d = 1\ngeometry.lengths = 3\ndisorder.seeds = 5\nrun.r = 50,300\n");
  prof = multiplicity_scan(c);
  CHECK(prof.pass);
  for (const auto& row : prof.rows) CHECK(row.max_multiplicity == 1);

  CHECK_THROWS_AS(multiplicity_scan(cfg("geometry.d = 1\ngeometry.lengths = 3\ngeometry.radius = 1\nrun.r = 50\n")),
                  LabError);
}

TEST_CASE("constancy scans") {
  const auto c = cfg("geometry.d = 2\ngeometry.lengths = 2,2\ndisorder.base_seed = 1\nrun.z = 30,37.5,45,52.5,60\n");
  const auto rep = constancy_scan(c);
  CHECK(rep.pass);
  CHECK(rep.points.size() == 15);

  // the lambda = 0 column is the plain restricted resolvent
  const auto p = config_partition(c);
  const auto h = build_hamiltonian(p, sample_disorder(c, 0));
  const auto o = origin_box(2);
  for (const auto& pt : rep.points)
    if (pt.lambda == 0.0)
      CHECK(*pt.multiplicity == max_multiplicity(restricted_resolvent(h, pt.z, o, o).block, c.degeneracy));

  const auto one = constancy_scan(cfg("geometry.d = 1\ngeometry.lengths = 2\nrun.z = 10,20,30\n"));
  CHECK(one.pass);
  CHECK(*one.value == 1);

  const auto skipped = constancy_scan(cfg("geometry.d = 1\ngeometry.lengths = 1\ngeometry.radius = 0\n"
                                          "disorder.lower = 0\ndisorder.upper = 1e-9\nrun.z = 0.5e-9, 5\n"
                                          "constancy.lambda = 0\nconstancy.box = 0\n"));
  CHECK_FALSE(skipped.points[0].multiplicity.has_value());
  CHECK(skipped.pass);
}

TEST_CASE("cyclic rank") {
  const auto c = cfg("geometry.d = 1\ngeometry.lengths = 2\ndisorder.base_seed = 5\n");
  const auto p = config_partition(c);
  const auto h = build_hamiltonian(p, sample_disorder(c, 0));
  const std::vector<int> zero{0}, one{1};
  const auto same = cyclic_rank_check(h, zero, zero, 0);
  CHECK(same.pass);
  CHECK(same.rank == 2);
  CHECK(cyclic_rank_check(h, zero, one, 6).pass);
  CHECK_FALSE(cyclic_rank_check(h, zero, one, 0).pass);
  CHECK(lattice_diameter(p) == 9);

  const auto scan = rank_scan(cfg("geometry.d = 2\ngeometry.lengths = 2,2\ndisorder.seeds = 10\nrankcheck.k = 10\n"));
  CHECK(scan.pass);
}

TEST_CASE("gap growth contrasts") {
  auto c = cfg("geometry.d = 2\ngeometry.lengths = 2,2\ndisorder.base_seed = 3\nrun.r = 100,200,400,800,1600\n"
               "gapgrowth.pair = 1,2/2,1\nrun.threads = 4\n");
  auto rep = gap_growth_probe(c, c.gap_pair);
  CHECK(rep.pass);
  REQUIRE(rep.series.size() == 1);
  CHECK(*rep.series[0].cls == PairClass::SameCluster);
  CHECK(*rep.series[0].slope <= 0.1);

  rep = gap_growth_probe(c, std::make_pair(Modes{1, 1}, Modes{2, 2}));
  CHECK(rep.pass);
  CHECK(*rep.series[0].slope >= 1.8);

  c = cfg("geometry.d = 2\ngeometry.lengths = 2,4\ndisorder.base_seed = 3\nrun.r = 100,200,400,800,1600\nrun.threads = 4\n");
  rep = gap_growth_probe(c, std::nullopt);
  CHECK(rep.pass);
  for (const auto& s : rep.series) MESSAGE(s.label << " slope " << (s.slope ? *s.slope : NAN));
  CHECK(*rep.series.back().slope >= 0.8);
}

TEST_CASE("csv formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CsvTable t{{"a", "b"}, {{"1", "2"}}};
  CHECK(t.render() == "a,b\n1,2\n");
}
