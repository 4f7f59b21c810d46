#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ompx/recovery.hpp"
#include "ompx/signal.hpp"

namespace ompx {
namespace bench {

enum class Algo { oneD, twoD, both };

struct SweepConfig {
  std::size_t n = 128;
  std::vector<std::size_t> m_list;
  std::size_t k_min = 8;
  std::size_t k_max = 16;
  std::size_t trials = 100;
  RngSeed seed{0};
  Algo algo = Algo::both;
  double tol = 1e-12;
  bool check_equivalence = false;
  std::string out_path;
  std::size_t memory_cap_bytes = 2ull << 30;

  void validate() const;  // throws ShapeError on bad ranges
};

struct BenchRecord {
  std::size_t n = 0, m = 0, k = 0, trial = 0;
  std::string algo;  // "1d" or "2d"
  std::uint64_t wall_time_ns = 0;
  std::uint64_t project_flops = 0, weights_flops = 0, residual_flops = 0;
  std::size_t iterations = 0;
  double final_residual_rel = 0.0;
  double recovery_error_rel = 0.0;
  std::optional<bool> equivalent;
  bool skipped = false;
  std::string skip_reason;
  std::vector<std::size_t> selected;  // not serialized; for determinism checks
};

struct CellSummary {
  std::size_t n = 0, m = 0, k = 0, trials = 0;
  double mean_time_1d_ns = 0.0;
  double mean_time_2d_ns = 0.0;
  double speedup = 0.0;  // sum(time_1d) / sum(time_2d)
};

// One trial: derives a sub-seed from (seed, n, m, k, trial), builds the
// instance, runs the requested algorithms (one untimed warm-up each, then
// one timed run; steady_clock, ns resolution). Omega construction is
// excluded from the 1D wall time.
std::vector<BenchRecord> run_trial(std::size_t n, std::size_t m, std::size_t k,
                                   std::size_t trial, const SweepConfig& cfg);

struct SweepOutput {
  std::vector<BenchRecord> records;
  std::vector<CellSummary> summary;
};

SweepOutput run_sweep(const SweepConfig& cfg);

// <out>.trials.csv and <out>.summary.csv; reals with 12 significant digits.
void emit_csv(const std::vector<BenchRecord>& records,
              const std::vector<CellSummary>& summary,
              const std::string& out_path);

int cli_main(int argc, char** argv);

}  // namespace bench
}  // namespace ompx
