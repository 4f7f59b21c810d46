#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ompx/bench.hpp"

using namespace ompx;
using namespace ompx::bench;

namespace {

SweepConfig small_config() {
  SweepConfig cfg;
  cfg.n = 16;
  cfg.m_list = {8};
  cfg.k_min = 4;
  cfg.k_max = 4;
  cfg.trials = 3;
  cfg.seed = RngSeed{123};
  cfg.algo = Algo::both;
  cfg.check_equivalence = true;
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("run_trial produces paired equivalent records") {
  const SweepConfig cfg = small_config();
  const auto recs = run_trial(16, 8, 4, 0, cfg);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].algo == "1d");
  CHECK(recs[1].algo == "2d");
  for (const BenchRecord& r : recs) {
    CHECK(r.wall_time_ns > 0);
    REQUIRE(r.equivalent.has_value());
    CHECK(*r.equivalent);
  }
}

TEST_CASE("run_trial is deterministic modulo wall time") {
  const SweepConfig cfg = small_config();
  const auto a = run_trial(16, 8, 4, 1, cfg);
  const auto b = run_trial(16, 8, 4, 1, cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].selected == b[i].selected);
    CHECK(a[i].project_flops == b[i].project_flops);
    CHECK(a[i].weights_flops == b[i].weights_flops);
    CHECK(a[i].residual_flops == b[i].residual_flops);
    CHECK(a[i].recovery_error_rel == b[i].recovery_error_rel);
  }
}

TEST_CASE("2d-only trial never allocates Omega") {
  SweepConfig cfg = small_config();
  cfg.algo = Algo::twoD;
  alloc_probe::reset();
  const auto recs = run_trial(16, 8, 4, 0, cfg);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].algo == "2d");
  // Largest block must stay below the 8*m^2*n^2 Omega footprint.
  CHECK(alloc_probe::peak_block_bytes() <
        sizeof(double) * 8 * 8 * 16 * 16);
}

TEST_CASE("Omega over the memory cap skips the 1D leg") {
  SweepConfig cfg = small_config();
  cfg.memory_cap_bytes = 1024;
  const auto recs = run_trial(16, 8, 4, 0, cfg);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].skipped);
  CHECK(!recs[0].skip_reason.empty());
  CHECK(!recs[1].skipped);
}

TEST_CASE("flop ratio tracks the dominant-cost model") {
  const SweepConfig cfg = small_config();
  SweepConfig big = cfg;
  big.n = 64;
  big.m_list = {8};
  const auto recs = run_trial(64, 8, 4, 0, big);
  REQUIRE(recs.size() == 2);
  const double ratio = static_cast<double>(recs[0].project_flops) /
                       static_cast<double>(recs[1].project_flops);
  CHECK(ratio >= 8.0 / 2.0);  // >= m/2 for n >= 4m
}

TEST_CASE("run_sweep shapes and single-trial speedup") {
  SweepConfig cfg = small_config();
  cfg.k_min = 3;
  cfg.k_max = 4;
  cfg.trials = 2;
  const SweepOutput out = run_sweep(cfg);
  CHECK(out.records.size() == 2 * 2 * 2);
  REQUIRE(out.summary.size() == 2);

  SweepConfig single = small_config();
  single.trials = 1;
  const SweepOutput one = run_sweep(single);
  REQUIRE(one.summary.size() == 1);
  REQUIRE(one.records.size() == 2);
  const double expect = static_cast<double>(one.records[0].wall_time_ns) /
                        static_cast<double>(one.records[1].wall_time_ns);
  CHECK(one.summary[0].speedup == doctest::Approx(expect));
}

TEST_CASE("run_sweep rejects invalid ranges") {
  SweepConfig cfg = small_config();
  cfg.k_min = 9;
  cfg.k_max = 8;
  CHECK_THROWS_AS(run_sweep(cfg), ShapeError);
}

TEST_CASE("emit_csv writes headers even with no records") {
  const auto dir = std::filesystem::temp_directory_path() / "ompx_csv_empty";
  std::filesystem::create_directories(dir);
  const std::string out = (dir / "empty").string();
  emit_csv({}, {}, out);
  const auto trial_lines = lines_of(slurp(out + ".trials.csv"));
  REQUIRE(trial_lines.size() == 1);
  CHECK(trial_lines[0] ==
        "n,m,k,trial,algo,wall_time_ns,project_flops,weights_flops,"
        "residual_flops,iterations,final_residual_rel,recovery_error_rel,"
        "equivalent");
  const auto summary_lines = lines_of(slurp(out + ".summary.csv"));
  REQUIRE(summary_lines.size() == 1);
  CHECK(summary_lines[0] ==
        "n,m,k,trials,mean_time_1d_ns,mean_time_2d_ns,speedup");
  std::filesystem::remove_all(dir);
}

TEST_CASE("emit_csv summary speedup is recomputable from trial rows") {
  SweepConfig cfg = small_config();
  cfg.trials = 4;
  const SweepOutput out = run_sweep(cfg);
  const auto dir = std::filesystem::temp_directory_path() / "ompx_csv_rows";
  std::filesystem::create_directories(dir);
  const std::string prefix = (dir / "sweep").string();
  emit_csv(out.records, out.summary, prefix);

  const auto trial_lines = lines_of(slurp(prefix + ".trials.csv"));
  REQUIRE(trial_lines.size() == 1 + 2 * 4);
  double total_1d = 0.0, total_2d = 0.0;
  for (std::size_t i = 1; i < trial_lines.size(); ++i) {
    std::stringstream row(trial_lines[i]);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() >= 12);
    const double t = std::stod(fields[5]);
    if (fields[4] == "1d") total_1d += t;
    else total_2d += t;
  }
  const auto summary_lines = lines_of(slurp(prefix + ".summary.csv"));
  REQUIRE(summary_lines.size() == 2);
  const auto last_comma = summary_lines[1].rfind(',');
  const double speedup = std::stod(summary_lines[1].substr(last_comma + 1));
  CHECK(speedup == doctest::Approx(total_1d / total_2d).epsilon(1e-9));
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweeps with the same config emit identical CSVs modulo time") {
  SweepConfig cfg = small_config();
  cfg.trials = 2;
  const SweepOutput a = run_sweep(cfg);
  const SweepOutput b = run_sweep(cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].selected == b.records[i].selected);
    CHECK(a.records[i].project_flops == b.records[i].project_flops);
    CHECK(a.records[i].iterations == b.records[i].iterations);
    CHECK(a.records[i].final_residual_rel == b.records[i].final_residual_rel);
  }
}
