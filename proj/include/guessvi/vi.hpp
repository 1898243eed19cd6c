#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "guessvi/bounds.hpp"
#include "guessvi/model.hpp"

namespace guessvi {

/// One Bellman update at s from vector v. Targets return v[s].
double bellman_update_state(const Model& model, const ValueVector& v, StateId s);

/// Jacobi sweep over every non-target state. Adds |S \ T| to *updates when
/// given.
ValueVector bellman_sweep(const Model& model, const ValueVector& v,
                          std::uint64_t* updates = nullptr);

/// Shared resource limits. A solve stops, unconverged, once the update
/// budget is spent or the deadline has passed.
struct Limits {
  std::uint64_t max_updates = std::numeric_limits<std::uint64_t>::max();
  std::optional<std::chrono::steady_clock::time_point> deadline;

  bool exhausted(std::uint64_t updates) const;
};

struct SolveReport {
  Bounds bounds;
  std::uint64_t bellman_updates = 0;
  std::uint64_t sweeps = 0;
  double wall_time_s = 0.0;
  std::string algorithm;
  bool converged = false;
  /// Whether bounds are a certified bracket of the value. Plain VI reports
  /// its single vector on both sides and leaves this false.
  bool certified = false;
};

/// Plain VI from `start`; stops when no entry moves by more than epsilon
/// in one sweep.
SolveReport value_iteration(const Model& model, const ValueVector& start,
                            double epsilon, const Limits& limits = {});

struct IntervalOptions {
  /// In-place updates instead of Jacobi sweeps.
  bool gauss_seidel = false;
  /// Stop when a sweep changes nothing even though width > epsilon.
  bool stop_on_stall = true;
  /// Called after every sweep with the sweep count and current bounds.
  std::function<void(std::uint64_t, const Bounds&)> observer;
};

/// Interval iteration from b0 until the width is at most epsilon. The lower
/// vector is clamped to be nondecreasing and the upper nonincreasing. Throws
/// std::invalid_argument if b0 is not well ordered.
SolveReport interval_iteration(const Model& model, Bounds b0, double epsilon,
                               const Limits& limits = {},
                               const IntervalOptions& options = {});

}  // namespace guessvi
