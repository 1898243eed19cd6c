#include "guessvi/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>

#include "guessvi/bench.hpp"
#include "guessvi/generators.hpp"
#include "guessvi/io.hpp"
#include "guessvi/oracle.hpp"
#include "guessvi/pipeline.hpp"

namespace guessvi {

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("GUESSVI_SEED"); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::runtime_error("GUESSVI_SEED must be a non-negative integer");
    }
  }
  return kDefaultSeed;
}

void emit_model(const Model& m, const std::string& path, std::ostream& out) {
  if (path.empty()) out << serialize_model(m);
  else write_model_file(path, m);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Value iteration solvers for Markov chains and MDPs"};
  app.name("guessvi");
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Approximate the value of a model");
  std::string model_path;
  std::string algo_name = "gvi";
  double epsilon = 1e-3;
  GuessConfig guess;
  bool no_collapse = false;
  bool gauss_seidel = false;
  double timeout = 0.0;
  std::uint64_t max_updates = 0;
  solve_cmd->add_option("--model", model_path, "Model file")->required();
  solve_cmd->add_option("--algo", algo_name, "vi, ivi, gvi or gvi-mc")
      ->check(CLI::IsMember({"vi", "ivi", "gvi", "gvi-mc"}));
  solve_cmd->add_option("--epsilon", epsilon, "Absolute precision")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--k1", guess.k1, "Rounds of the state-picking walk")->check(CLI::Range(1u, 1u << 30));
  solve_cmd->add_option("--k2", guess.k2, "Sweep limit per verification")->check(CLI::Range(1u, 1u << 30));
  solve_cmd->add_option("--max-depth", guess.max_depth, "Guess recursion limit");
  solve_cmd->add_flag("--conservative-bounds", guess.conservative_bounds,
                      "Restart each verification from the initial vectors");
  solve_cmd->add_flag("--no-collapse-mecs", no_collapse, "Skip end-component collapsing");
  solve_cmd->add_flag("--gauss-seidel", gauss_seidel, "In-place sweeps for ivi");
  solve_cmd->add_option("--timeout", timeout, "Seconds before giving up (0 = none)")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--max-updates", max_updates, "Bellman update budget (0 = none)");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact values by linear solves");
  std::string oracle_model;
  oracle_cmd->add_option("--model", oracle_model, "Model file")->required();

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Write a generated model");
  gen_cmd->require_subcommand(1);
  std::string gen_out;
  std::size_t gen_n = 12;
  double gen_p = 0.5;
  auto* gen_mc = gen_cmd->add_subcommand("slow-mc", "Chain that resets to its start");
  gen_mc->add_option("--n", gen_n, "Transient states")->check(CLI::Range(2, 1 << 26));
  gen_mc->add_option("--p", gen_p, "Advance probability")->check(CLI::Range(0.0, 1.0));
  gen_mc->add_option("--out", gen_out, "Output file (default stdout)");
  auto* gen_mdp = gen_cmd->add_subcommand("slow-mdp", "Decision chain with a coin side exit");
  gen_mdp->add_option("--n", gen_n, "Decision/probabilistic pairs")->check(CLI::Range(2, 1 << 26));
  gen_mdp->add_option("--out", gen_out, "Output file (default stdout)");
  auto* gen_rand = gen_cmd->add_subcommand("random", "Random model where every state reaches a target");
  RandomModelParams rp;
  std::string rp_kind = "mc", rp_objective = "reach";
  std::optional<std::uint64_t> rp_seed;
  gen_rand->add_option("--n", rp.n, "States")->check(CLI::Range(2, 1 << 26));
  gen_rand->add_option("--branch", rp.branch, "Maximum successors")->check(CLI::Range(1, 1 << 16));
  gen_rand->add_option("--targets", rp.num_targets, "Number of targets")->check(CLI::Range(1, 1 << 26));
  gen_rand->add_option("--seed", rp_seed, "Seed (default $GUESSVI_SEED or 1)");
  gen_rand->add_option("--kind", rp_kind, "mc or mdp")->check(CLI::IsMember({"mc", "mdp"}));
  gen_rand->add_option("--objective", rp_objective, "reach or ssp")->check(CLI::IsMember({"reach", "ssp"}));
  gen_rand->add_option("--out", gen_out, "Output file (default stdout)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark spec and write CSV rows");
  std::string spec_path, csv_path;
  std::vector<double> exponents;
  unsigned threads = 0;
  bench_cmd->add_option("--spec", spec_path, "Spec file")->required();
  bench_cmd->add_option("--out", csv_path, "CSV output (default stdout)");
  bench_cmd->add_option("--epsilon-exponents", exponents,
                        "Override epsilons with (1e6)^-x for each x")
      ->delimiter(',');
  bench_cmd->add_option("--threads", threads, "Worker threads (default from spec)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (solve_cmd->parsed()) {
      Model m = read_model_file(model_path);
      SolveOptions opt;
      opt.algorithm = *parse_algorithm(algo_name);
      opt.epsilon = epsilon;
      opt.guess = guess;
      opt.collapse = !no_collapse;
      opt.gauss_seidel = gauss_seidel;
      if (max_updates > 0) opt.limits.max_updates = max_updates;
      if (timeout > 0)
        opt.limits.deadline = std::chrono::steady_clock::now() +
                              std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                  std::chrono::duration<double>(timeout));
      SolveReport rep = solve(m, opt);
      out << "# algorithm " << rep.algorithm << '\n'
          << "# converged " << (rep.converged ? "true" : "false") << '\n'
          << "# bellman_updates " << rep.bellman_updates << '\n'
          << "# sweeps " << rep.sweeps << '\n'
          << "# width " << format_double(width(rep.bounds)) << '\n'
          << "# wall_time_s " << rep.wall_time_s << '\n'
          << "state lower upper\n";
      for (StateId s = 0; s < m.num_states(); ++s)
        out << s << ' ' << format_double(rep.bounds.lower[s]) << ' '
            << format_double(rep.bounds.upper[s]) << '\n';
      if (!rep.converged) {
        err << "guessvi: did not reach epsilon "
            << (opt.limits.exhausted(rep.bellman_updates) ? "(limit reached)" : "(stalled)") << '\n';
        return 2;
      }
      return 0;
    }
    if (oracle_cmd->parsed()) {
      Model m = read_model_file(oracle_model);
      ExactSolution sol = m.kind() == ModelKind::Mc ? exact_mc_value(m) : exact_mdp_value(m);
      out << "# residual " << format_double(sol.residual) << '\n' << "state value";
      if (sol.strategy) out << " choice";
      out << '\n';
      for (StateId s = 0; s < m.num_states(); ++s) {
        out << s << ' ' << format_double(sol.values[s]);
        if (sol.strategy) {
          StateId c = sol.strategy->choice[s];
          if (c == kNoState) out << " -";
          else out << ' ' << c;
        }
        out << '\n';
      }
      return 0;
    }
    if (gen_mc->parsed()) {
      if (!(gen_p > 0.0 && gen_p < 1.0)) throw std::invalid_argument("--p must lie strictly between 0 and 1");
      emit_model(gen_slow_mc(gen_n, gen_p), gen_out, out);
      return 0;
    }
    if (gen_mdp->parsed()) {
      emit_model(gen_slow_mdp(gen_n), gen_out, out);
      return 0;
    }
    if (gen_rand->parsed()) {
      rp.seed = rp_seed.value_or(default_seed());
      rp.kind = rp_kind == "mc" ? ModelKind::Mc : ModelKind::Mdp;
      rp.objective = rp_objective == "reach" ? ObjectiveKind::Reach : ObjectiveKind::Ssp;
      emit_model(gen_random(rp), gen_out, out);
      return 0;
    }
    if (bench_cmd->parsed()) {
      BenchSpec spec = load_bench_spec(spec_path);
      if (!exponents.empty()) {
        spec.epsilons.clear();
        for (double x : exponents) spec.epsilons.push_back(epsilon_from_exponent(x));
      }
      if (threads > 0) spec.threads = threads;
      auto rows = run_bench(spec);
      if (csv_path.empty()) {
        write_csv(out, rows);
      } else {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + csv_path);
        write_csv(f, rows);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    err << "guessvi: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace guessvi
