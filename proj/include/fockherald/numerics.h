#pragma once

#include <functional>

namespace fockherald {

struct RootResult {
    double root = 0.0;
    int iterations = 0;
};

/// Bisection on a bracketing interval [lo, hi] (f(lo) and f(hi) of opposite
/// sign, or one of them zero). Runs until the bracket stops shrinking in
/// floating point or its width drops below x_tolerance.
/// Throws std::invalid_argument if the interval does not bracket a root.
RootResult bisect_root(const std::function<double(double)> &f, double lo, double hi, double x_tolerance = 0.0);

struct MaximumResult {
    double argmax = 0.0;
    double value = 0.0;
    int evaluations = 0;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
/// Stops once the bracket is narrower than x_tolerance. The returned point is
/// the best one evaluated, so value is always an actual f(argmax).
MaximumResult golden_section_maximize(
    const std::function<double(double)> &f, double lo, double hi, double x_tolerance);

}  // namespace fockherald
