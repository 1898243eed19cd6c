#include "guessvi/pipeline.hpp"

#include <stdexcept>

#include "guessvi/graph.hpp"

namespace guessvi {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Vi: return "vi";
    case Algorithm::Ivi: return "ivi";
    case Algorithm::Gvi: return "gvi";
    case Algorithm::GviMc: return "gvi-mc";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "vi") return Algorithm::Vi;
  if (name == "ivi") return Algorithm::Ivi;
  if (name == "gvi") return Algorithm::Gvi;
  if (name == "gvi-mc") return Algorithm::GviMc;
  return std::nullopt;
}

SolveReport solve(const Model& model, const SolveOptions& options) {
  const std::size_t n = model.num_states();
  std::vector<StateId> image(n);
  for (StateId s = 0; s < n; ++s) image[s] = s;

  Model work;
  if (model.objective().kind() == ObjectiveKind::Reach && options.collapse) {
    CollapseResult c = collapse_mecs(model);
    work = std::move(c.model);
    image = std::move(c.image);
  } else {
    if (model.objective().kind() == ObjectiveKind::Ssp) {
      auto lost = qualitative_zero(model);
      if (!lost.empty())
        throw ModelError(ModelErrc::BadState, "state " + std::to_string(lost.front()) +
                                                  " cannot reach a target (infinite cost)");
    }
    work = model;
  }

  Bounds b0 = initial_vectors(work, compute_levels(work));
  SolveReport rep;
  switch (options.algorithm) {
    case Algorithm::Vi:
      rep = value_iteration(work, b0.lower, options.epsilon, options.limits);
      break;
    case Algorithm::Ivi: {
      IntervalOptions io;
      io.gauss_seidel = options.gauss_seidel;
      rep = interval_iteration(work, std::move(b0), options.epsilon, options.limits, io);
      break;
    }
    case Algorithm::Gvi: {
      GuessConfig cfg = options.guess;
      cfg.epsilon = options.epsilon;
      rep = pick_verify(work, b0, cfg, options.limits);
      break;
    }
    case Algorithm::GviMc:
      if (work.kind() != ModelKind::Mc)
        throw std::invalid_argument("gvi-mc needs a Markov chain");
      rep = solve_mc(work, options.epsilon, options.guess, options.limits);
      break;
  }

  Bounds mapped;
  mapped.lower.resize(n);
  mapped.upper.resize(n);
  for (StateId s = 0; s < n; ++s) {
    mapped.lower[s] = rep.bounds.lower[image[s]];
    mapped.upper[s] = rep.bounds.upper[image[s]];
  }
  rep.bounds = std::move(mapped);
  return rep;
}

}  // namespace guessvi
