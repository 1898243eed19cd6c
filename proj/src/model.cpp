#include "guessvi/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace guessvi {

const char* to_string(ModelErrc code) {
  switch (code) {
    case ModelErrc::EmptySuccessors: return "empty successor list";
    case ModelErrc::RowSum: return "row sum";
    case ModelErrc::NonPositiveProbability: return "zero probability";
    case ModelErrc::NonAbsorbingTarget: return "non-absorbing target";
    case ModelErrc::NonPositiveCost: return "non-positive cost";
    case ModelErrc::BranchingDecisionInMc: return "branching decision state in mc";
    case ModelErrc::NegativeWeight: return "negative weight";
    case ModelErrc::BadState: return "state out of range";
    case ModelErrc::DuplicateEdge: return "duplicate edge";
    case ModelErrc::ProbabilityOnDecisionEdge: return "prob on decision edge";
    case ModelErrc::AlreadyTarget: return "already a target";
    case ModelErrc::InvalidStrategy: return "invalid strategy";
  }
  return "unknown";
}

namespace {

[[noreturn]] void fail(ModelErrc code, StateId s, const std::string& detail = {}) {
  std::string msg = to_string(code);
  msg += " at state ";
  msg += std::to_string(s);
  if (!detail.empty()) {
    msg += ": ";
    msg += detail;
  }
  throw ModelError(code, msg);
}

}  // namespace

Objective::Objective(ObjectiveKind kind, std::vector<std::uint8_t> target_mask,
                     std::vector<double> weights)
    : kind_(kind),
      target_mask_(std::move(target_mask)),
      weights_(std::move(weights)) {
  refresh();
}

void Objective::refresh() {
  targets_.clear();
  for (std::size_t s = 0; s < target_mask_.size(); ++s)
    if (target_mask_[s]) targets_.push_back(static_cast<StateId>(s));

  w_min_ = 0.0;
  w_max_ = 0.0;
  bool first = true;
  auto take = [&](double w) {
    if (first) {
      w_min_ = w_max_ = w;
      first = false;
    } else {
      w_min_ = std::min(w_min_, w);
      w_max_ = std::max(w_max_, w);
    }
  };
  if (kind_ == ObjectiveKind::Reach) {
    for (StateId t : targets_) take(weights_[t]);
  } else {
    for (double w : weights_) take(w);
  }
}

bool operator==(const Model& a, const Model& b) {
  if (a.kind_ != b.kind_ || a.state_kind_ != b.state_kind_ ||
      a.row_offsets_ != b.row_offsets_)
    return false;
  if (a.objective_.kind() != b.objective_.kind()) return false;
  if (!std::equal(a.objective_.target_mask().begin(),
                  a.objective_.target_mask().end(),
                  b.objective_.target_mask().begin(),
                  b.objective_.target_mask().end()))
    return false;
  if (!std::equal(a.objective_.weights().begin(), a.objective_.weights().end(),
                  b.objective_.weights().begin(), b.objective_.weights().end()))
    return false;
  return std::equal(a.transitions_.begin(), a.transitions_.end(),
                    b.transitions_.begin(), b.transitions_.end(),
                    [](const Transition& x, const Transition& y) {
                      return x.target == y.target &&
                             x.probability == y.probability;
                    });
}

ModelBuilder::ModelBuilder(ModelKind kind, ObjectiveKind objective,
                           std::size_t num_states)
    : kind_(kind),
      objective_(objective),
      kinds_(num_states, StateKind::Decision),
      rows_(num_states),
      target_mask_(num_states, 0),
      weights_(num_states, 0.0) {}

void ModelBuilder::check_state(StateId s) const {
  if (s >= kinds_.size()) fail(ModelErrc::BadState, s);
}

ModelBuilder& ModelBuilder::set_kind(StateId s, StateKind kind) {
  check_state(s);
  kinds_[s] = kind;
  return *this;
}

ModelBuilder& ModelBuilder::add_edge(StateId from, StateId to,
                                     double probability) {
  check_state(from);
  check_state(to);
  for (const Transition& t : rows_[from])
    if (t.target == to)
      fail(ModelErrc::DuplicateEdge, from, "to " + std::to_string(to));
  rows_[from].push_back({to, probability});
  return *this;
}

ModelBuilder& ModelBuilder::set_target(StateId s, double weight) {
  check_state(s);
  target_mask_[s] = 1;
  weights_[s] = weight;
  return *this;
}

ModelBuilder& ModelBuilder::set_cost(StateId s, double cost) {
  check_state(s);
  weights_[s] = cost;
  return *this;
}

Model ModelBuilder::build_unchecked() const {
  Model m;
  m.kind_ = kind_;
  m.state_kind_ = kinds_;
  m.row_offsets_.assign(1, 0);
  m.row_offsets_.reserve(kinds_.size() + 1);
  for (std::size_t s = 0; s < rows_.size(); ++s) {
    for (const Transition& t : rows_[s]) {
      double p = kinds_[s] == StateKind::Probabilistic ? t.probability : 0.0;
      m.transitions_.push_back({t.target, p});
    }
    m.row_offsets_.push_back(m.transitions_.size());
  }
  m.objective_ = Objective(objective_, target_mask_, weights_);
  return m;
}

Model ModelBuilder::build() const {
  for (std::size_t s = 0; s < rows_.size(); ++s)
    if (kinds_[s] == StateKind::Decision)
      for (const Transition& t : rows_[s])
        if (t.probability != 0.0)
          fail(ModelErrc::ProbabilityOnDecisionEdge, static_cast<StateId>(s));
  Model m = build_unchecked();
  validate(m);
  return m;
}

void validate(const Model& model) {
  const std::size_t n = model.num_states();
  const Objective& obj = model.objective();
  for (StateId s = 0; s < n; ++s) {
    auto succ = model.successors(s);
    if (succ.empty()) fail(ModelErrc::EmptySuccessors, s);
    for (const Transition& t : succ)
      if (t.target >= n) fail(ModelErrc::BadState, s);
    if (model.is_decision(s)) {
      if (model.kind() == ModelKind::Mc && succ.size() != 1)
        fail(ModelErrc::BranchingDecisionInMc, s);
    } else {
      double sum = 0.0;
      for (const Transition& t : succ) {
        if (!(t.probability > 0.0))
          fail(ModelErrc::NonPositiveProbability, s);
        sum += t.probability;
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance)
        fail(ModelErrc::RowSum, s, "sum " + std::to_string(sum));
    }
    if (model.is_target(s)) {
      if (succ.size() != 1 || succ[0].target != s)
        fail(ModelErrc::NonAbsorbingTarget, s);
    }
    double w = obj.weight(s);
    if (obj.kind() == ObjectiveKind::Ssp) {
      if (!(w > 0.0) || !std::isfinite(w)) fail(ModelErrc::NonPositiveCost, s);
    } else if (model.is_target(s) && (!(w >= 0.0) || !std::isfinite(w))) {
      fail(ModelErrc::NegativeWeight, s);
    }
  }
}

double p_min(const Model& model) {
  double p = 1.0;
  for (StateId s = 0; s < model.num_states(); ++s) {
    if (model.is_decision(s)) continue;
    for (const Transition& t : model.successors(s)) p = std::min(p, t.probability);
  }
  return p;
}

Model reduce(const Model& model, StateId s, double gamma) {
  const StateId one[] = {s};
  return reduce_many(model, one, gamma);
}

Model reduce_many(const Model& model, std::span<const StateId> states,
                  double gamma) {
  const std::size_t n = model.num_states();
  std::vector<std::uint8_t> mask(model.objective().target_mask().begin(),
                                 model.objective().target_mask().end());
  std::vector<double> weights(model.objective().weights().begin(),
                              model.objective().weights().end());
  for (StateId s : states) {
    if (s >= n) fail(ModelErrc::BadState, s);
    if (mask[s]) fail(ModelErrc::AlreadyTarget, s);
    mask[s] = 1;
    weights[s] = gamma;
  }

  Model out;
  out.kind_ = model.kind_;
  out.state_kind_ = model.state_kind_;
  out.row_offsets_.assign(1, 0);
  out.row_offsets_.reserve(n + 1);
  out.transitions_.reserve(model.transitions_.size());
  for (StateId s = 0; s < n; ++s) {
    if (mask[s] && !model.is_target(s)) {
      // The new target keeps its kind; a probabilistic target gets a
      // probability-one self-loop.
      double p = model.is_decision(s) ? 0.0 : 1.0;
      out.transitions_.push_back({s, p});
    } else {
      auto succ = model.successors(s);
      out.transitions_.insert(out.transitions_.end(), succ.begin(), succ.end());
    }
    out.row_offsets_.push_back(out.transitions_.size());
  }
  out.objective_ = Objective(model.objective().kind(), std::move(mask),
                             std::move(weights));
  return out;
}

Model induced_mc(const Model& mdp, const Strategy& strategy) {
  const std::size_t n = mdp.num_states();
  if (strategy.choice.size() != n)
    throw ModelError(ModelErrc::InvalidStrategy, "strategy size mismatch");
  Model out;
  out.kind_ = ModelKind::Mc;
  out.state_kind_ = mdp.state_kind_;
  out.objective_ = mdp.objective_;
  out.row_offsets_.assign(1, 0);
  out.row_offsets_.reserve(n + 1);
  for (StateId s = 0; s < n; ++s) {
    auto succ = mdp.successors(s);
    if (mdp.is_decision(s)) {
      StateId c = strategy.choice[s];
      auto it = std::find_if(succ.begin(), succ.end(),
                             [c](const Transition& t) { return t.target == c; });
      if (it == succ.end()) fail(ModelErrc::InvalidStrategy, s);
      out.transitions_.push_back(*it);
    } else {
      out.transitions_.insert(out.transitions_.end(), succ.begin(), succ.end());
    }
    out.row_offsets_.push_back(out.transitions_.size());
  }
  return out;
}

Strategy first_choice_strategy(const Model& model) {
  Strategy st;
  st.choice.assign(model.num_states(), kNoState);
  for (StateId s = 0; s < model.num_states(); ++s)
    if (model.is_decision(s)) st.choice[s] = model.successors(s)[0].target;
  return st;
}

}  // namespace guessvi
