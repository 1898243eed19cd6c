#include <cfloat>
#include <chrono>
#include <cmath>

#include "guess_internal.hpp"

namespace guessvi {

StateId pick_state(const Model& model, const Bounds& b, std::uint32_t k1) {
  const std::size_t n = model.num_states();
  ValueVector w(n), eta(n, 0.0);
  StateId widest = kNoState;
  for (StateId s = 0; s < n; ++s) {
    w[s] = b.upper[s] - b.lower[s];
    if (!model.is_target(s) && w[s] > 0.0 && (widest == kNoState || w[s] > w[widest]))
      widest = s;
  }
  if (widest == kNoState) throw GuessError("pick_state: every interval is empty");

  for (std::uint32_t round = 0; round < k1; ++round) {
    ValueVector next(n, 0.0);
    for (StateId s = 0; s < n; ++s) {
      if (w[s] == 0.0) continue;
      auto succ = model.successors(s);
      const double share = w[s] / static_cast<double>(succ.size());
      for (const Transition& t : succ)
        next[t.target] += model.is_decision(s) ? share : t.probability * w[s];
    }
    w = std::move(next);
    for (StateId s = 0; s < n; ++s) eta[s] += w[s];
  }

  StateId best = kNoState;
  for (StateId s = 0; s < n; ++s) {
    if (model.is_target(s)) continue;
    if (best == kNoState || eta[s] > eta[best]) best = s;
  }
  if (best == kNoState || !(eta[best] > 0.0)) return widest;
  return best;
}

VerifyOutcome verify_guess(const Model& model, const Bounds& b, StateId s, double gamma,
                           double epsilon, std::uint32_t iterations, double slack,
                           GuessContext& ctx) {
  const Model reduced = reduce(model, s, gamma);
  Bounds cur = b;
  cur.lower[s] = cur.upper[s] = gamma;
  const double close = epsilon * slack / (2 * (1 + slack));
  const double widen = epsilon / (2 * (1 + slack));
  for (std::uint32_t k = 1; k <= iterations; ++k) {
    detail::clamped_sweep(reduced, cur, ctx);
    const double g_lo = bellman_update_state(model, cur.lower, s);
    const double g_hi = bellman_update_state(model, cur.upper, s);
    ctx.updates += 2;
    if (gamma <= g_lo) return LowerCertified{std::move(cur.lower), k};
    if (g_hi <= gamma) return UpperCertified{std::move(cur.upper), k};
    if (width(cur) <= close) {
      for (std::size_t i = 0; i < cur.lower.size(); ++i) {
        cur.lower[i] -= widen;
        cur.upper[i] += widen;
      }
      return BoundsFound{std::move(cur), k};
    }
    if (ctx.exhausted()) break;
  }
  return Inconclusive{std::move(cur)};
}

namespace {

struct PracticalSolver {
  const GuessConfig& cfg;
  GuessContext& ctx;

  // Bounds for model[s = gamma] derived from bounds b on model: moving the
  // weight of s by at most h moves every value by at most h.
  Bounds reduced_start(const Model& reduced, const Bounds& b, StateId s, double gamma) const {
    Bounds init = detail::initial_bounds(reduced);
    if (cfg.conservative_bounds) return init;
    const double h = std::max(gamma - b.lower[s], b.upper[s] - gamma);
    Bounds out = b;
    for (std::size_t i = 0; i < out.lower.size(); ++i) {
      out.lower[i] = std::max(init.lower[i], b.lower[i] - h);
      out.upper[i] = std::min(init.upper[i], b.upper[i] + h);
    }
    out.lower[s] = out.upper[s] = gamma;
    return out;
  }

  // Applies a one-sided certificate and advances the other side.
  void apply(const Model& m, Bounds& b, const VerifyOutcome& out) {
    if (auto* lo = std::get_if<LowerCertified>(&out)) {
      detail::intersect(b, lo->lower, b.upper);
      detail::advance_side(m, b.upper, true, lo->iterations, ctx);
    } else if (auto* hi = std::get_if<UpperCertified>(&out)) {
      detail::intersect(b, b.lower, hi->upper);
      detail::advance_side(m, b.lower, false, hi->iterations, ctx);
    }
  }

  // Returns whether the bounds reached width eps.
  bool solve(const Model& m, Bounds& b, double eps, std::uint32_t depth) {
    if (depth > cfg.max_depth) throw GuessError("guessing recursion deeper than max_depth");
    ctx.deepest = std::max(ctx.deepest, depth);
    const double slack = guess_slack(m, cfg.slack_floor);
    {
      Bounds init = detail::initial_bounds(m);
      detail::intersect(b, init.lower, init.upper);
    }

    while (width(b) > eps) {
      if (ctx.exhausted()) return false;
      const Bounds before = b;
      const StateId s = pick_state(m, b, cfg.k1);
      const double gamma = b.lower[s] + (b.upper[s] - b.lower[s]) / 2;
      const Model reduced = reduce(m, s, gamma);
      VerifyOutcome out =
          verify_guess(m, reduced_start(reduced, b, s, gamma), s, gamma, eps, cfg.k2, slack, ctx);

      if (auto* found = std::get_if<BoundsFound>(&out)) {
        detail::intersect(b, found->bounds.lower, found->bounds.upper);
      } else if (auto* open = std::get_if<Inconclusive>(&out)) {
        const double floor = 4 * DBL_EPSILON * std::max(1.0, std::abs(gamma));
        const double sub_eps = std::max(eps * slack / (4 + 6 * slack), floor);
        Bounds sub = std::move(open->bounds);
        solve(reduced, sub, sub_eps, depth + 1);
        VerifyOutcome check = verify_guess(m, sub, s, gamma, 0.0, 1, slack, ctx);
        if (std::holds_alternative<LowerCertified>(check) ||
            std::holds_alternative<UpperCertified>(check)) {
          apply(m, b, check);
        } else {
          // |val(s) - gamma| <= r / slack bounds how far the reduced value
          // can sit from the value of m.
          const double r = std::max(gamma - bellman_update_state(m, sub.lower, s),
                                    bellman_update_state(m, sub.upper, s) - gamma);
          ctx.updates += 2;
          const double pad =
              std::max((1 + slack) * eps / (4 + 6 * slack), std::max(r, 0.0) / slack);
          ValueVector lo = sub.lower, hi = sub.upper;
          for (std::size_t i = 0; i < lo.size(); ++i) {
            lo[i] -= pad;
            hi[i] += pad;
          }
          detail::intersect(b, lo, hi);
        }
      } else {
        apply(m, b, out);
      }

      if (b.lower == before.lower && b.upper == before.upper) {
        // No progress from guessing; fall back to plain interval sweeps.
        bool moved = false;
        for (std::uint32_t i = 0; i < cfg.k2 && !ctx.exhausted(); ++i)
          moved |= detail::clamped_sweep(m, b, ctx);
        if (!moved) return width(b) <= eps;
      }
    }
    return true;
  }
};

}  // namespace

SolveReport pick_verify(const Model& model, const Bounds& b, const GuessConfig& cfg,
                        const Limits& limits) {
  cfg.check();
  if (!well_ordered(b)) throw std::invalid_argument("pick_verify: lower > upper");
  const auto t0 = std::chrono::steady_clock::now();
  GuessContext ctx;
  ctx.limits = limits;
  PracticalSolver solver{cfg, ctx};
  SolveReport rep;
  rep.algorithm = "gvi";
  rep.bounds = b;
  rep.converged = solver.solve(model, rep.bounds, cfg.epsilon, 0);
  rep.bellman_updates = ctx.updates;
  rep.sweeps = ctx.sweeps;
  rep.certified = true;
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace guessvi
