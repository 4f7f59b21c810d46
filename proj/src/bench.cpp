#include "ompx/bench.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace ompx {
namespace bench {

namespace {

std::uint64_t trial_seed(const SweepConfig& cfg, std::size_t n, std::size_t m,
                         std::size_t k, std::size_t trial) {
  std::uint64_t s = cfg.seed.value;
  s = mix_seed(s, n);
  s = mix_seed(s, m);
  s = mix_seed(s, k);
  s = mix_seed(s, trial);
  return s;
}

double recovery_error(const OmpResult& res, const DenseVector& z_true) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < z_true.size(); ++i) {
    const double d = res.coefficients[i] - z_true[i];
    num += d * d;
    den += z_true[i] * z_true[i];
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
  return std::sqrt(num / den);
}

BenchRecord base_record(std::size_t n, std::size_t m, std::size_t k,
                        std::size_t trial, const char* algo) {
  BenchRecord rec;
  rec.n = n;
  rec.m = m;
  rec.k = k;
  rec.trial = trial;
  rec.algo = algo;
  return rec;
}

void fill_from_result(BenchRecord& rec, const OmpResult& res,
                      double input_norm, const DenseVector& z_true) {
  rec.project_flops = res.flops.project;
  rec.weights_flops = res.flops.weights;
  rec.residual_flops = res.flops.residual;
  rec.iterations = res.iterations;
  rec.final_residual_rel =
      res.residual_norms.empty() || input_norm == 0.0
          ? 0.0
          : res.residual_norms.back() / input_norm;
  rec.recovery_error_rel = recovery_error(res, z_true);
  rec.selected = res.selected;
}

// Per-thread CPU clock, ns resolution. On a shared single-CPU host,
// elapsed-time measurement is dominated by preemption (multi-ms slices
// against ms-scale runs); thread CPU time measures the same algorithmic
// cost without that noise.
std::uint64_t thread_clock_ns() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<std::uint64_t>(ts.tv_sec) * 1000000000ull +
         static_cast<std::uint64_t>(ts.tv_nsec);
}

template <typename F>
std::pair<OmpResult, std::uint64_t> time_run(F&& run) {
  run();  // warm-up, untimed
  const std::uint64_t start = thread_clock_ns();
  OmpResult res = run();
  const std::uint64_t stop = thread_clock_ns();
  return {std::move(res), std::max<std::uint64_t>(stop - start, 1)};
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

void SweepConfig::validate() const {
  if (n == 0) throw ShapeError("sweep: n must be >= 1");
  if (m_list.empty()) throw ShapeError("sweep: at least one m is required");
  for (std::size_t m : m_list) {
    if (m == 0 || m > n) {
      throw ShapeError("sweep: m = " + std::to_string(m) +
                       " outside [1, n] with n = " + std::to_string(n));
    }
  }
  if (k_min < 1 || k_min > k_max || k_max > n * n) {
    throw ShapeError("sweep: bad k range [" + std::to_string(k_min) + ", " +
                     std::to_string(k_max) + "] for n = " + std::to_string(n));
  }
  if (trials < 1) throw ShapeError("sweep: trials must be >= 1");
  if (tol < 0.0) throw ShapeError("sweep: tol must be >= 0");
}

std::vector<BenchRecord> run_trial(std::size_t n, std::size_t m, std::size_t k,
                                   std::size_t trial, const SweepConfig& cfg) {
  const RngSeed seed{trial_seed(cfg, n, m, k, trial)};
  const bool want_1d = cfg.algo != Algo::twoD;
  const bool want_2d = cfg.algo != Algo::oneD;
  const OmpConfig omp_cfg{k, cfg.tol};

  std::vector<BenchRecord> out;
  Instance inst;
  bool have_omega = false;
  std::string omega_skip_reason;
  if (want_1d) {
    try {
      inst = make_instance(n, m, k, seed, true, cfg.memory_cap_bytes);
      have_omega = true;
    } catch (const MemoryCapError& e) {
      inst = make_instance(n, m, k, seed, false);
      omega_skip_reason = e.what();
    }
  } else {
    inst = make_instance(n, m, k, seed, false);
  }
  const DenseVector z_true = stretch(inst.z_true.dense());

  OmpResult res_1d, res_2d;
  bool ran_1d = false, ran_2d = false;

  if (want_1d) {
    BenchRecord rec = base_record(n, m, k, trial, "1d");
    if (!have_omega) {
      rec.skipped = true;
      rec.skip_reason = omega_skip_reason;
    } else {
      // Omega, rho, and the stretched sample are inputs to Algorithm 1;
      // their construction stays outside the timer.
      const DenseVector rho = column_norms(*inst.omega);
      const DenseVector y = stretch(inst.Y);
      auto [res, ns] = time_run(
          [&] { return omp1d(*inst.omega, rho, y, omp_cfg); });
      rec.wall_time_ns = ns;
      fill_from_result(rec, res, norm2(y), z_true);
      res_1d = std::move(res);
      ran_1d = true;
    }
    out.push_back(std::move(rec));
  }

  if (want_2d) {
    BenchRecord rec = base_record(n, m, k, trial, "2d");
    auto [res, ns] =
        time_run([&] { return omp2d(inst.dict, inst.Y, omp_cfg); });
    rec.wall_time_ns = ns;
    fill_from_result(rec, res, frobenius_norm(inst.Y), z_true);
    res_2d = std::move(res);
    ran_2d = true;
    out.push_back(std::move(rec));
  }

  if (ran_1d && ran_2d && cfg.check_equivalence) {
    const bool eq = results_equivalent(res_1d, res_2d, 1e-9);
    for (BenchRecord& rec : out)
      if (!rec.skipped) rec.equivalent = eq;
  }
  return out;
}

SweepOutput run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepOutput out;

  struct CellTotals {
    std::uint64_t total_1d = 0, total_2d = 0;
    std::size_t count_1d = 0, count_2d = 0;
  };
  const std::size_t k_count = cfg.k_max - cfg.k_min + 1;
  std::vector<CellTotals> totals(cfg.m_list.size() * k_count);

  // Trials are interleaved across cells (trial-outer loop) so that slow
  // drift in the host's effective speed hits every cell equally instead of
  // biasing whole cells that happen to run early or late. Results are
  // unaffected: trial seeds depend only on (n, m, k, trial).
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    for (std::size_t mi = 0; mi < cfg.m_list.size(); ++mi) {
      const std::size_t m = cfg.m_list[mi];
      for (std::size_t k = cfg.k_min; k <= cfg.k_max; ++k) {
        std::vector<BenchRecord> recs;
        try {
          recs = run_trial(cfg.n, m, k, trial, cfg);
        } catch (const std::exception& e) {
          std::cerr << "trial (" << m << "," << k << "," << trial
                    << ") failed: " << e.what() << "\n";
          continue;
        }
        CellTotals& cell = totals[mi * k_count + (k - cfg.k_min)];
        for (BenchRecord& rec : recs) {
          if (!rec.skipped) {
            if (rec.algo == "1d") {
              cell.total_1d += rec.wall_time_ns;
              ++cell.count_1d;
            } else {
              cell.total_2d += rec.wall_time_ns;
              ++cell.count_2d;
            }
          } else {
            std::cerr << "skipped 1d at (" << m << "," << k << "," << trial
                      << "): " << rec.skip_reason << "\n";
          }
          out.records.push_back(std::move(rec));
        }
      }
    }
  }

  for (std::size_t mi = 0; mi < cfg.m_list.size(); ++mi) {
    for (std::size_t k = cfg.k_min; k <= cfg.k_max; ++k) {
      const CellTotals& tot = totals[mi * k_count + (k - cfg.k_min)];
      CellSummary cell;
      cell.n = cfg.n;
      cell.m = cfg.m_list[mi];
      cell.k = k;
      cell.trials = cfg.trials;
      cell.mean_time_1d_ns =
          tot.count_1d ? static_cast<double>(tot.total_1d) / tot.count_1d : 0.0;
      cell.mean_time_2d_ns =
          tot.count_2d ? static_cast<double>(tot.total_2d) / tot.count_2d : 0.0;
      cell.speedup = (tot.total_2d && tot.total_1d)
                         ? static_cast<double>(tot.total_1d) / tot.total_2d
                         : 0.0;
      out.summary.push_back(cell);
    }
  }
  return out;
}

void emit_csv(const std::vector<BenchRecord>& records,
              const std::vector<CellSummary>& summary,
              const std::string& out_path) {
  std::vector<const BenchRecord*> sorted;
  sorted.reserve(records.size());
  for (const BenchRecord& r : records)
    if (!r.skipped) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const BenchRecord* a, const BenchRecord* b) {
                     return std::tie(a->m, a->k, a->trial) <
                            std::tie(b->m, b->k, b->trial);
                   });

  const std::string trials_path = out_path + ".trials.csv";
  std::ofstream tf(trials_path);
  if (!tf) throw std::runtime_error("cannot write " + trials_path);
  tf << "n,m,k,trial,algo,wall_time_ns,project_flops,weights_flops,"
        "residual_flops,iterations,final_residual_rel,recovery_error_rel,"
        "equivalent\n";
  for (const BenchRecord* r : sorted) {
    tf << r->n << ',' << r->m << ',' << r->k << ',' << r->trial << ','
       << r->algo << ',' << r->wall_time_ns << ',' << r->project_flops << ','
       << r->weights_flops << ',' << r->residual_flops << ',' << r->iterations
       << ',' << format_real(r->final_residual_rel) << ','
       << format_real(r->recovery_error_rel) << ',';
    if (r->equivalent) tf << (*r->equivalent ? "true" : "false");
    tf << '\n';
  }
  if (!tf) throw std::runtime_error("write failed: " + trials_path);

  const std::string summary_path = out_path + ".summary.csv";
  std::ofstream sf(summary_path);
  if (!sf) throw std::runtime_error("cannot write " + summary_path);
  sf << "n,m,k,trials,mean_time_1d_ns,mean_time_2d_ns,speedup\n";
  for (const CellSummary& c : summary) {
    sf << c.n << ',' << c.m << ',' << c.k << ',' << c.trials << ','
       << format_real(c.mean_time_1d_ns) << ','
       << format_real(c.mean_time_2d_ns) << ',' << format_real(c.speedup)
       << '\n';
  }
  if (!sf) throw std::runtime_error("write failed: " + summary_path);
}

}  // namespace bench
}  // namespace ompx
