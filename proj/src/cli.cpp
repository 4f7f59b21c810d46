#include <atomic>
#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "ompx/bench.hpp"

namespace ompx {
namespace bench {

namespace {

// OMPX_SEED, when set, wins over --seed.
std::uint64_t effective_seed(std::uint64_t flag_seed) {
  if (const char* env = std::getenv("OMPX_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return flag_seed;
}

int run_verify(std::size_t n, std::size_t m, std::size_t k, std::size_t trials,
               std::uint64_t seed, double tol, unsigned threads) {
  SweepConfig cfg;
  cfg.n = n;
  cfg.m_list = {m};
  cfg.k_min = cfg.k_max = k;
  cfg.trials = trials;
  cfg.seed = RngSeed{seed};
  cfg.tol = tol;
  cfg.algo = Algo::both;
  cfg.check_equivalence = true;
  cfg.validate();

  std::atomic<std::size_t> failures{0};
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t trial = next.fetch_add(1);
      if (trial >= trials) return;
      const auto recs = run_trial(n, m, k, trial, cfg);
      bool ok = !recs.empty();
      for (const BenchRecord& r : recs) {
        if (r.skipped || !r.equivalent || !*r.equivalent) ok = false;
      }
      if (!ok) {
        failures.fetch_add(1);
        std::cerr << "trial " << trial << ": NOT equivalent\n";
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  const std::size_t failed = failures.load();
  std::cout << "verify: " << (trials - failed) << "/" << trials
            << " trials equivalent (n=" << n << ", m=" << m << ", k=" << k
            << ")\n";
  if (failed) {
    std::cout << "FAIL\n";
    return 2;
  }
  std::cout << "PASS\n";
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"2D compressive-sampling recovery benchmark (1D-OMP vs 2D-OMP)"};
  app.require_subcommand(1);

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "Run the timing sweep and emit trial/summary CSVs");
  std::size_t n = 128, k_min = 8, k_max = 16, trials = 100;
  std::vector<std::size_t> m_list;
  std::uint64_t seed = 1;
  std::string algo_str = "both";
  double tol = 1e-12;
  bool check_eq = false;
  std::string out_path = "sweep";
  std::size_t memory_cap_mb = 2048;
  sweep->add_option("--n", n, "Signal side length");
  sweep->add_option("--m", m_list, "Sample side length (repeatable)");
  sweep->add_option("--k-min", k_min, "Smallest sparsity level");
  sweep->add_option("--k-max", k_max, "Largest sparsity level");
  sweep->add_option("--trials", trials, "Trials per (m, k) cell");
  sweep->add_option("--seed", seed, "Base RNG seed");
  sweep->add_option("--algo", algo_str, "Algorithms to run: 1d, 2d, or both")
      ->check(CLI::IsMember({"1d", "2d", "both"}));
  sweep->add_option("--tol", tol, "Early-stop residual tolerance");
  sweep->add_flag("--check-equivalence", check_eq,
                  "Verify 1D/2D equivalence on every trial");
  sweep->add_option("--out", out_path, "CSV output prefix");
  sweep->add_option("--memory-cap-mb", memory_cap_mb,
                    "Cap on the Omega allocation, in MiB");

  // verify
  auto* verify = app.add_subcommand(
      "verify", "Run the 1D/2D equivalence check on random instances");
  std::size_t vn = 16, vm = 8, vk = 4, vtrials = 50;
  std::uint64_t vseed = 1;
  double vtol = 1e-12;
  unsigned vthreads = 1;
  verify->add_option("--n", vn, "Signal side length");
  verify->add_option("--m", vm, "Sample side length");
  verify->add_option("--k", vk, "Sparsity level");
  verify->add_option("--trials", vtrials, "Number of random instances");
  verify->add_option("--seed", vseed, "Base RNG seed");
  verify->add_option("--tol", vtol, "Early-stop residual tolerance");
  verify->add_option("--parallel", vthreads,
                     "Worker threads (correctness only, no timing)");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance and write it to disk");
  std::size_t gn = 128, gm = 16, gk = 8;
  std::uint64_t gseed = 1;
  std::string gout = "instance";
  gen->add_option("--n", gn, "Signal side length");
  gen->add_option("--m", gm, "Sample side length");
  gen->add_option("--k", gk, "Sparsity level");
  gen->add_option("--seed", gseed, "RNG seed");
  gen->add_option("--out", gout, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // CLI11 exits 0 for --help; anything else is a usage error.
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sweep->parsed()) {
      SweepConfig cfg;
      cfg.n = n;
      cfg.m_list = m_list.empty() ? std::vector<std::size_t>{16, 32} : m_list;
      cfg.k_min = k_min;
      cfg.k_max = k_max;
      cfg.trials = trials;
      cfg.seed = RngSeed{effective_seed(seed)};
      cfg.algo = algo_str == "1d"   ? Algo::oneD
                 : algo_str == "2d" ? Algo::twoD
                                    : Algo::both;
      cfg.tol = tol;
      cfg.check_equivalence = check_eq;
      cfg.out_path = out_path;
      cfg.memory_cap_bytes = memory_cap_mb << 20;
      cfg.validate();

      const SweepOutput out = run_sweep(cfg);
      emit_csv(out.records, out.summary, cfg.out_path);
      for (const CellSummary& c : out.summary) {
        std::cout << "n=" << c.n << " m=" << c.m << " k=" << c.k
                  << " speedup=" << c.speedup << "\n";
      }
      if (cfg.check_equivalence) {
        for (const BenchRecord& r : out.records) {
          if (r.equivalent && !*r.equivalent) {
            std::cerr << "equivalence failure at m=" << r.m << " k=" << r.k
                      << " trial=" << r.trial << "\n";
            return 2;
          }
        }
      }
      return 0;
    }
    if (verify->parsed()) {
      return run_verify(vn, vm, vk, vtrials, effective_seed(vseed), vtol,
                        vthreads);
    }
    if (gen->parsed()) {
      const Instance inst =
          make_instance(gn, gm, gk, RngSeed{effective_seed(gseed)}, false);
      save_instance(gout, inst);
      std::cout << "wrote instance to " << gout << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace bench
}  // namespace ompx
