#pragma once

// Benchmark runner. A spec file uses a small TOML subset:
//
//   seed = 7                        # optional; default 1 or $GUESSVI_SEED
//   epsilon = 1e-3
//   algorithms = ["vi", "ivi", "gvi"]
//   timeout_s = 10
//   max_updates = 100000000         # optional
//   epsilon_exponents = [0.25, 0.5] # optional; epsilon = (1e6)^-x each
//   oracle = true                   # fill oracle_error when feasible
//   threads = 2
//   collapse_mecs = false           # default true
//
//   [[instance]]
//   name = "slow"
//   generator = "slow-mc"           # slow-mc | slow-mdp | random
//   n = 12
//   p = 0.5
//
//   [[instance]]
//   name = "from-disk"
//   file = "model.txt"              # relative to the spec file
//
// Random instances accept n, branch, kind (mc|mdp), objective (reach|ssp),
// targets and seed; without a seed they use the global seed plus their
// position in the file.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "guessvi/model.hpp"
#include "guessvi/pipeline.hpp"

namespace guessvi {

inline constexpr std::uint64_t kDefaultSeed = 1;
inline constexpr const char* kCsvHeader =
    "instance,algorithm,epsilon,bellman_updates,wall_time_s,final_width,oracle_error,seed";

struct BenchInstance {
  std::string name;
  Model model;
  std::uint64_t seed = 0;
};

struct BenchSpec {
  std::uint64_t seed = kDefaultSeed;
  std::vector<double> epsilons{1e-3};
  std::vector<Algorithm> algorithms{Algorithm::Vi, Algorithm::Ivi, Algorithm::Gvi};
  double timeout_s = 60.0;
  std::optional<std::uint64_t> max_updates;
  bool oracle = false;
  unsigned threads = 1;
  GuessConfig guess;
  bool collapse = true;
  std::vector<BenchInstance> instances;
};

/// Parses spec text; relative model paths resolve against base_dir. The
/// seed falls back to env_seed (if given) and then kDefaultSeed.
BenchSpec parse_bench_spec(const std::string& text, const std::string& base_dir = ".",
                           std::optional<std::uint64_t> env_seed = std::nullopt);

/// Reads a spec file; GUESSVI_SEED supplies the default seed.
BenchSpec load_bench_spec(const std::string& path);

/// (1e6)^-x.
double epsilon_from_exponent(double x);

struct BenchRow {
  std::string instance;
  std::string algorithm;
  /// Position of the epsilon in the spec's list.
  std::size_t epsilon_index = 0;
  double epsilon = 0.0;
  std::uint64_t bellman_updates = 0;
  double wall_time_s = 0.0;
  double final_width = 0.0;
  std::optional<double> oracle_error;
  std::uint64_t seed = 0;
  bool converged = false;
  bool timed_out = false;
  std::string error;
};

/// One row per (instance, algorithm, epsilon), sorted by instance name,
/// algorithm and epsilon position regardless of completion order.
std::vector<BenchRow> run_bench(const BenchSpec& spec);

/// Header plus rows. Unconverged rows carry "+timeout" (limit hit) or
/// "+stalled" in the algorithm column, failed runs "+error".
void write_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace guessvi
