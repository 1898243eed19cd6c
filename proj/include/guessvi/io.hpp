#pragma once

// Line-oriented model format. '#' starts a comment.
//
//   MODEL mc|mdp
//   OBJECTIVE reach|ssp
//   STATES n
//   KIND i d|p          one per state, before any EDGE from i
//   EDGE i j [prob]     prob required iff state i is probabilistic
//   TARGET i weight     targets need an explicit EDGE i i
//   COST i w            ssp only, non-target states
//
// The three headers come first. Numbers are decimal; probabilities are kept
// bit-exact as parsed.

#include <stdexcept>
#include <string>
#include <string_view>

#include "guessvi/model.hpp"

namespace guessvi {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Throws ParseError on malformed text and ModelError when the described
/// model violates a model invariant.
Model parse_model(std::string_view text);

/// Canonical text; parse_model(serialize_model(m)) == m.
std::string serialize_model(const Model& model);

Model read_model_file(const std::string& path);
void write_model_file(const std::string& path, const Model& model);

/// Shortest decimal text that reads back to exactly `x`.
std::string format_double(double x);

}  // namespace guessvi
