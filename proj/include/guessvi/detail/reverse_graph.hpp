#pragma once

#include <span>
#include <vector>

#include "guessvi/model.hpp"

namespace guessvi::detail {

/// Predecessor lists in CSR form. A state appears once per incoming edge.
class ReverseGraph {
 public:
  explicit ReverseGraph(const Model& model) : offsets_(model.num_states() + 1, 0) {
    const std::size_t n = model.num_states();
    for (StateId s = 0; s < n; ++s)
      for (const Transition& t : model.successors(s)) ++offsets_[t.target + 1];
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
    preds_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (StateId s = 0; s < n; ++s)
      for (const Transition& t : model.successors(s)) preds_[fill[t.target]++] = s;
  }

  std::span<const StateId> predecessors(StateId s) const {
    return {preds_.data() + offsets_[s], preds_.data() + offsets_[s + 1]};
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<StateId> preds_;
};

}  // namespace guessvi::detail
