#include <cfloat>
#include <chrono>
#include <cmath>
#include <span>

#include "guess_internal.hpp"

namespace guessvi {

void GuessConfig::check() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (k1 < 1 || k2 < 1) throw std::invalid_argument("k1 and k2 must be at least 1");
  if (!(slack_floor > 0.0 && slack_floor <= 1.0))
    throw std::invalid_argument("slack_floor must lie in (0, 1]");
}

double guess_slack(const Model& model, double slack_floor) {
  const double log_p = std::log(p_min(model));
  const double exponent = static_cast<double>(model.num_states()) * log_p;
  if (-exponent > 700.0) return 1e-9;
  return std::max(std::exp(exponent), slack_floor);
}

LemmaCheck verify_lemma_check(const Model& model, StateId s, double gamma,
                              const ValueVector& f, double tolerance) {
  double g = bellman_update_state(model, f, s);
  LemmaVerdict v = std::abs(g - gamma) <= tolerance ? LemmaVerdict::Tight
                   : g > gamma                       ? LemmaVerdict::Above
                                                     : LemmaVerdict::Below;
  return {v, g};
}

namespace {

struct ChainSolver {
  const GuessConfig& cfg;
  GuessContext& ctx;

  Bounds solve(const Model& m, double eps, std::span<const StateId> guesses, std::uint32_t depth) {
    if (depth > cfg.max_depth) throw GuessError("guessing recursion deeper than max_depth");
    ctx.deepest = std::max(ctx.deepest, depth);
    Bounds init = detail::initial_bounds(m);
    if (guesses.empty()) {
      SolveReport rep = interval_iteration(m, std::move(init), eps, detail::remaining(ctx));
      ctx.updates += rep.bellman_updates;
      ctx.sweeps += rep.sweeps;
      return std::move(rep.bounds);
    }

    const StateId s = guesses.front();
    const auto rest = guesses.subspan(1);
    const double slack = guess_slack(m, cfg.slack_floor);
    double lo = init.lower[s];
    double hi = init.upper[s];
    while (hi - lo > eps / 2 && !ctx.exhausted()) {
      const double gamma = lo + (hi - lo) / 2;
      const double floor = 4 * DBL_EPSILON * std::max(1.0, std::abs(gamma));
      Bounds sub = solve(reduce(m, s, gamma), std::max(eps * slack / 4, floor), rest, depth + 1);
      const double g_lo = bellman_update_state(m, sub.lower, s);
      const double g_hi = bellman_update_state(m, sub.upper, s);
      ctx.updates += 2;
      // On the reduced model, gamma -> update(s) - gamma has slope in
      // [-1, -slack], so val(s) - gamma lies between d and d / slack for
      // d = update(s) - gamma. This contains the plain bisection step.
      const double d_lo = g_lo - gamma;
      const double d_hi = g_hi - gamma;
      const double new_lo = std::max(lo, gamma + (d_lo >= 0 ? d_lo : d_lo / slack));
      const double new_hi = std::min(hi, gamma + (d_hi >= 0 ? d_hi / slack : d_hi));
      if (new_lo == lo && new_hi == hi) break;
      lo = std::min(new_lo, new_hi);
      hi = std::max(new_lo, new_hi);
    }

    Bounds below = solve(reduce(m, s, lo), eps / 4, rest, depth + 1);
    if (hi == lo) return below;
    Bounds above = solve(reduce(m, s, hi), eps / 4, rest, depth + 1);
    return {std::move(below.lower), std::move(above.upper)};
  }
};

}  // namespace

SolveReport solve_with_guessing_set(const Model& mc, double epsilon, const GuessSet& guesses,
                                    const GuessConfig& cfg, const Limits& limits) {
  cfg.check();
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  GuessContext ctx;
  ctx.limits = limits;
  ChainSolver solver{cfg, ctx};
  SolveReport rep;
  rep.algorithm = "gvi-mc";
  rep.bounds = solver.solve(mc, epsilon, guesses.states, 0);
  rep.bellman_updates = ctx.updates;
  rep.sweeps = ctx.sweeps;
  // Reduced solves that stall at rounding precision still return sound bounds.
  rep.converged = width(rep.bounds) <= epsilon;
  rep.certified = true;
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

SolveReport solve_mc(const Model& mc, double epsilon, const GuessConfig& cfg,
                     const Limits& limits) {
  if (mc.kind() != ModelKind::Mc) throw std::invalid_argument("solve_mc: chain required");
  return solve_with_guessing_set(mc, epsilon, mark_to_guess(mc), cfg, limits);
}

}  // namespace guessvi
