#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fockherald/fock_state.h"
#include "fockherald/mode.h"

namespace fockherald {

/// Exact photon counts registered on a subset of modes.
struct DetectionPattern {
    std::map<ModeLabel, int> assignments;

    std::string str() const;
    friend bool operator==(const DetectionPattern &, const DetectionPattern &) = default;
};

struct HeraldOutcome {
    /// Normalized state on the undetected modes; has no terms when probability is zero.
    PureState conditional_state;
    /// Squared norm of the projected, unnormalized component.
    double probability = 0.0;
    /// Leaked norm of the state before projection; bounds the error of probability.
    double leaked_norm = 0.0;
};

struct PatternProbability {
    DetectionPattern pattern;
    double probability = 0.0;
};

/// Number-resolving projection onto `pattern`. Detected modes are removed
/// from the conditional state. A pattern no term matches yields a
/// zero-probability outcome rather than an error.
HeraldOutcome project(const PureState &state, const DetectionPattern &pattern);

/// Every detection pattern on `detected` with nonzero weight, in lexicographic
/// order of the counts (modes taken in canonical order).
std::vector<PatternProbability> outcome_distribution(const PureState &state, std::span<const ModeLabel> detected);

}  // namespace fockherald
