#pragma once

#include <vector>

namespace guessvi {

using ValueVector = std::vector<double>;

/// Pointwise lower and upper estimates of the value vector.
struct Bounds {
  ValueVector lower;
  ValueVector upper;
};

/// max_s (upper[s] - lower[s]).
double width(const Bounds& b);

/// Pointwise midpoint.
ValueVector midpoint(const Bounds& b);

/// True iff lower <= upper everywhere.
bool well_ordered(const Bounds& b);

}  // namespace guessvi
