#include "ompx/signal.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace ompx {

namespace {
constexpr std::uint64_t kPhiTag = 0x5068u;  // Phi stream
constexpr std::uint64_t kSigTag = 0x5a00u;  // Z stream
}  // namespace

DenseMatrix SparseSignal2D::dense() const {
  DenseMatrix z(n, n);
  for (const Spike& s : spikes) z(s.row - 1, s.col - 1) = s.value;
  return z;
}

SparseSignal2D sparse_signal(std::size_t n, std::size_t k, RngSeed seed) {
  const std::size_t total = n * n;
  if (k > total) {
    throw ShapeError("sparse_signal: k = " + std::to_string(k) + " exceeds n^2 = " +
                     std::to_string(total));
  }
  GaussianStream g(seed);

  // Partial Fisher-Yates over flat positions gives k distinct draws.
  std::vector<std::size_t> positions(total);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  SparseSignal2D sig;
  sig.n = n;
  sig.spikes.reserve(k);
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t pick =
        t + static_cast<std::size_t>(g.next_below(total - t));
    std::swap(positions[t], positions[pick]);
    double value = g.next();
    while (value == 0.0) value = g.next();
    const std::size_t flat = positions[t];
    sig.spikes.push_back(Spike{flat / n + 1, flat % n + 1, value});
  }
  return sig;
}

Instance make_instance(std::size_t n, std::size_t m, std::size_t k,
                       RngSeed seed, bool with_omega,
                       std::size_t omega_cap_bytes) {
  if (m == 0 || m > n) {
    throw ShapeError("make_instance: need 1 <= m <= n, got m = " +
                     std::to_string(m) + ", n = " + std::to_string(n));
  }
  Instance inst;
  inst.config = InstanceConfig{n, m, k, seed};
  const DenseMatrix psi = dct_matrix(n);
  const DenseMatrix phi =
      gaussian_matrix(m, n, RngSeed{mix_seed(seed.value, kPhiTag)});
  inst.dict = build_dictionary(phi, psi);
  inst.z_true = sparse_signal(n, k, RngSeed{mix_seed(seed.value, kSigTag)});
  inst.Y = sample_separable(inst.dict, inst.z_true.dense());
  if (with_omega) inst.omega = build_omega(inst.dict, omega_cap_bytes);
  return inst;
}

Instance make_instance_custom(const DenseMatrix& phi, const DenseMatrix& psi,
                              SparseSignal2D z, bool with_omega) {
  Instance inst;
  inst.config = InstanceConfig{z.n, phi.rows(), z.k(), RngSeed{0}};
  inst.dict = build_dictionary(phi, psi);
  inst.Y = sample_separable(inst.dict, z.dense());
  inst.z_true = std::move(z);
  if (with_omega) inst.omega = build_omega(inst.dict);
  return inst;
}

void save_instance(const std::string& dir, const Instance& inst) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream cfg(fs::path(dir) / "config.txt");
    if (!cfg) throw std::runtime_error("cannot write config in " + dir);
    cfg << "n=" << inst.config.n << "\n"
        << "m=" << inst.config.m << "\n"
        << "k=" << inst.config.k << "\n"
        << "seed=" << inst.config.seed.value << "\n";
  }
  save_matrix((fs::path(dir) / "A.txt").string(), inst.dict.A);
  save_matrix((fs::path(dir) / "Y.txt").string(), inst.Y);
  {
    std::ofstream csv(fs::path(dir) / "spikes.csv");
    if (!csv) throw std::runtime_error("cannot write spikes in " + dir);
    csv << "row,col,value\n";
    char buf[64];
    for (const Spike& s : inst.z_true.spikes) {
      std::snprintf(buf, sizeof(buf), "%.17g", s.value);
      csv << s.row << "," << s.col << "," << buf << "\n";
    }
  }
}

Instance load_instance(const std::string& dir) {
  namespace fs = std::filesystem;
  Instance inst;
  {
    std::ifstream cfg(fs::path(dir) / "config.txt");
    if (!cfg) throw std::runtime_error("cannot read config in " + dir);
    std::string line;
    while (std::getline(cfg, line)) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(0, eq);
      const std::string val = line.substr(eq + 1);
      if (key == "n") inst.config.n = std::stoull(val);
      else if (key == "m") inst.config.m = std::stoull(val);
      else if (key == "k") inst.config.k = std::stoull(val);
      else if (key == "seed") inst.config.seed.value = std::stoull(val);
    }
  }
  inst.dict = dictionary_from_matrix(load_matrix((fs::path(dir) / "A.txt").string()));
  inst.Y = load_matrix((fs::path(dir) / "Y.txt").string());
  {
    std::ifstream csv(fs::path(dir) / "spikes.csv");
    if (!csv) throw std::runtime_error("cannot read spikes in " + dir);
    std::string line;
    std::getline(csv, line);  // header
    inst.z_true.n = inst.config.n;
    while (std::getline(csv, line)) {
      if (line.empty()) continue;
      std::istringstream row(line);
      Spike s;
      char comma = 0;
      row >> s.row >> comma >> s.col >> comma >> s.value;
      inst.z_true.spikes.push_back(s);
    }
  }
  return inst;
}

}  // namespace ompx
