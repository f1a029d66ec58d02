#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include <unistd.h>

#include "pfml/evaluation.hpp"
#include "test_support.hpp"

using namespace pfml;
namespace fs = std::filesystem;

namespace {

ExperimentGrid one_cell_grid() {
  ExperimentGrid grid;
  grid.alphas = {0.8};
  grid.epsilons = {0.1};
  grid.lambdas = {5.0};
  grid.notions = {FairnessNotion::EqualizedOdds};
  grid.variants = {AttackVariant::AS};
  grid.repeats = 1;
  grid.base_seed = 7;
  grid.victim_hyper = TrainHyper{0.001, 300};
  return grid;
}

int count_rows(const ExperimentResult& r, const std::string& id) {
  int n = 0;
  for (const EvalReport& row : r.rows) n += row.attack_id == id;
  return n;
}

}  // namespace

TEST_CASE("evaluate on the tiny dataset") {
  const Dataset d = testing::tiny_dataset();
  const ModelParams theta{{1.0, -1.0}, 0.0};
  const EvalReport r = evaluate(theta, d);
  CHECK(r.accuracy == doctest::Approx(0.75));
  CHECK(r.dp_gap == doctest::Approx(0.5));
  CHECK(r.eo_gap == doctest::Approx(1.0));
}

TEST_CASE("evaluate accuracy endpoints") {
  Dataset d;
  d.feature_names = {"x"};
  d.samples = {{{1.0}, 0, 1}, {{-1.0}, 0, 0}, {{2.0}, 1, 1}, {{-2.0}, 1, 0}};
  CHECK(evaluate(ModelParams{{1.0}, 0.0}, d).accuracy == doctest::Approx(1.0));
  CHECK(evaluate(ModelParams{{-1.0}, -0.5}, d).accuracy == doctest::Approx(0.0));
}

TEST_CASE("concat preserves order and metadata") {
  const Dataset a = testing::tiny_dataset();
  Dataset b = testing::tiny_dataset();
  b.samples.resize(2);
  const Dataset c = concat(a, b);
  REQUIRE(c.size() == 6);
  CHECK(c.feature_names == a.feature_names);
  CHECK(c.samples[4].features == b.samples[0].features);
  CHECK(c.samples[0].features == a.samples[0].features);
}

TEST_CASE("victim training with a penalty reduces the targeted gap") {
  const testing::Fixture f = testing::make_fixture(101);
  const TrainHyper hyper{0.001, 2000};
  const ModelParams plain = train_victim(f.d_c, FairnessNotion::DemographicParity, 0.0, hyper);
  const ModelParams fair = train_victim(f.d_c, FairnessNotion::DemographicParity, 5.0, hyper);
  CHECK(std::abs(dp_relaxed(fair, f.d_c)) <= std::abs(dp_relaxed(plain, f.d_c)) + 1e-9);
}

TEST_CASE("a one-cell grid yields one benign, three baseline, and one attack row") {
  const testing::Fixture f = testing::make_fixture(7);
  const ExperimentResult r =
      run_experiment(f.d_c, f.d_k, f.d_test, f.hard_flags, one_cell_grid());
  CHECK(r.rows.size() == 5);
  CHECK(count_rows(r, "Benign") == 1);
  CHECK(count_rows(r, "RS") == 1);
  CHECK(count_rows(r, "LF") == 1);
  CHECK(count_rows(r, "HE") == 1);
  CHECK(count_rows(r, "PFML-AS") == 1);
  CHECK(r.aggregates.size() == 5);
  // benign rows carry no attack knobs
  for (const EvalReport& row : r.rows) {
    if (row.attack_id == "Benign") {
      CHECK(std::isnan(row.alpha));
      CHECK(std::isnan(row.epsilon));
    }
  }
}

TEST_CASE("row counts scale with the grid") {
  ExperimentGrid grid = one_cell_grid();
  grid.alphas = {0.2, 0.8};
  grid.epsilons = {0.05, 0.1};
  grid.variants = {AttackVariant::AS, AttackVariant::AF};
  grid.repeats = 2;
  const testing::Fixture f = testing::make_fixture(8);
  const ExperimentResult r = run_experiment(f.d_c, f.d_k, f.d_test, f.hard_flags, grid);
  // 1 benign + per (eps, repeat): 3 baselines + 2 variants * 2 alphas
  CHECK(r.rows.size() == 1 + 2 * 2 * (3 + 2 * 2));
  CHECK(count_rows(r, "Benign") == 1);
  CHECK(count_rows(r, "PFML-AS") == 8);
  CHECK(count_rows(r, "PFML-AF") == 8);
}

TEST_CASE("aggregates average over repeats") {
  ExperimentGrid grid = one_cell_grid();
  grid.repeats = 3;
  const testing::Fixture f = testing::make_fixture(9);
  const ExperimentResult r = run_experiment(f.d_c, f.d_k, f.d_test, f.hard_flags, grid);
  for (const AggregateReport& agg : r.aggregates) {
    const int expected = agg.attack_id == "Benign" ? 1 : 3;
    CHECK(agg.repeats == expected);
    double mean = 0.0;
    int n = 0;
    for (const EvalReport& row : r.rows) {
      if (row.attack_id == agg.attack_id) {
        mean += row.accuracy;
        ++n;
      }
    }
    REQUIRE(n == expected);
    CHECK(agg.mean_accuracy == doctest::Approx(mean / n).epsilon(1e-12));
    CHECK(agg.std_accuracy >= 0.0);
  }
}

TEST_CASE("benign rows do not depend on the attack grid") {
  const testing::Fixture f = testing::make_fixture(10);
  ExperimentGrid a = one_cell_grid();
  ExperimentGrid b = one_cell_grid();
  b.alphas = {0.2};
  b.epsilons = {0.05};
  const ExperimentResult ra = run_experiment(f.d_c, f.d_k, f.d_test, f.hard_flags, a);
  const ExperimentResult rb = run_experiment(f.d_c, f.d_k, f.d_test, f.hard_flags, b);
  auto benign = [](const ExperimentResult& r) {
    for (const EvalReport& row : r.rows) {
      if (row.attack_id == "Benign") return row;
    }
    FAIL("no benign row");
    return EvalReport{};
  };
  CHECK(benign(ra).accuracy == benign(rb).accuracy);
  CHECK(benign(ra).eo_gap == benign(rb).eo_gap);
}

TEST_CASE("experiment runs are deterministic") {
  const testing::Fixture f = testing::make_fixture(11);
  const ExperimentGrid grid = one_cell_grid();
  const ExperimentResult a = run_experiment(f.d_c, f.d_k, f.d_test, f.hard_flags, grid);
  const ExperimentResult b = run_experiment(f.d_c, f.d_k, f.d_test, f.hard_flags, grid);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].attack_id == b.rows[i].attack_id);
    CHECK(a.rows[i].accuracy == b.rows[i].accuracy);
    CHECK(a.rows[i].dp_gap == b.rows[i].dp_gap);
    CHECK(a.rows[i].eo_gap == b.rows[i].eo_gap);
  }
}

TEST_CASE("grid validation rejects empty or out-of-range axes") {
  ExperimentGrid grid = one_cell_grid();
  grid.alphas.clear();
  CHECK_THROWS_AS(grid.validate(), Error);
  grid = one_cell_grid();
  grid.epsilons = {1.5};
  CHECK_THROWS_AS(grid.validate(), Error);
  grid = one_cell_grid();
  grid.repeats = 0;
  CHECK_THROWS_AS(grid.validate(), Error);
}

TEST_CASE("grid json parsing") {
  const fs::path p = fs::temp_directory_path() /
                     ("pfml_grid_" + std::to_string(::getpid()) + ".json");
  {
    std::ofstream out(p);
    out << R"({"alphas":[0.2,0.8],"epsilons":[0.1],"lambdas":[0.0,5.0],)"
        << R"("notions":["dp","eo"],"variants":["AS","AM"],"repeats":2,)"
        << R"("base_seed":42,"eta":0.002,"pretrain_iters":100,"flip_fraction":0.2})";
  }
  const ExperimentGrid grid = grid_from_json_file(p);
  fs::remove(p);
  CHECK(grid.alphas == std::vector<double>{0.2, 0.8});
  CHECK(grid.lambdas == std::vector<double>{0.0, 5.0});
  REQUIRE(grid.notions.size() == 2);
  CHECK(grid.notions[0] == FairnessNotion::DemographicParity);
  CHECK(grid.variants[1] == AttackVariant::AM);
  CHECK(grid.repeats == 2);
  CHECK(grid.base_seed == 42);
  CHECK(grid.victim_hyper.eta == doctest::Approx(0.002));
  CHECK(grid.victim_hyper.iters == 100);
  CHECK(grid.flip_fraction == doctest::Approx(0.2));
}

TEST_CASE("report writers produce byte-identical files for the same result") {
  const testing::Fixture f = testing::make_fixture(12);
  const ExperimentResult r =
      run_experiment(f.d_c, f.d_k, f.d_test, f.hard_flags, one_cell_grid());
  const fs::path base = fs::temp_directory_path() /
                        ("pfml_report_" + std::to_string(::getpid()));
  fs::create_directories(base);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  write_report_csv(base / "a.csv", r);
  write_report_csv(base / "b.csv", r);
  write_report_json(base / "a.json", r);
  write_report_json(base / "b.json", r);
  CHECK(slurp(base / "a.csv") == slurp(base / "b.csv"));
  CHECK(slurp(base / "a.json") == slurp(base / "b.json"));
  // report files never mention runtime; that lives in the timings file
  CHECK(slurp(base / "a.csv").find("runtime") == std::string::npos);
  CHECK(slurp(base / "a.json").find("runtime") == std::string::npos);
  write_timings_csv(base / "t.csv", r);
  CHECK(slurp(base / "t.csv").find("runtime_seconds") != std::string::npos);
  fs::remove_all(base);
}
