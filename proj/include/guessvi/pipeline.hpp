#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "guessvi/guess.hpp"
#include "guessvi/model.hpp"
#include "guessvi/vi.hpp"

namespace guessvi {

enum class Algorithm { Vi, Ivi, Gvi, GviMc };

const char* to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct SolveOptions {
  Algorithm algorithm = Algorithm::Gvi;
  double epsilon = 1e-3;
  /// epsilon inside is overwritten by the field above.
  GuessConfig guess;
  bool collapse = true;
  bool gauss_seidel = false;
  Limits limits;
};

/// Preprocesses (MEC collapse for Reach, reachability check for SSP), runs
/// the chosen algorithm and maps the bounds back to the states of `model`.
SolveReport solve(const Model& model, const SolveOptions& options);

}  // namespace guessvi
