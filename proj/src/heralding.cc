#include "fockherald/heralding.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fockherald {

namespace {

std::vector<std::size_t> detected_indices(const ModeSet &modes, std::span<const ModeLabel> detected) {
    std::vector<std::size_t> indices;
    indices.reserve(detected.size());
    for (const auto &label : detected) {
        indices.push_back(modes.index_of(label));
    }
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
        throw std::invalid_argument("a mode is listed twice among the detected modes");
    }
    if (indices.size() >= modes.size()) {
        throw std::invalid_argument("detected modes must be a strict subset of the state's modes");
    }
    return indices;
}

}  // namespace

std::string DetectionPattern::str() const {
    std::string out = "{";
    bool first = true;
    for (const auto &[label, count] : assignments) {
        if (!first) out += ",";
        first = false;
        out += label.str() + ":" + std::to_string(count);
    }
    return out + "}";
}

HeraldOutcome project(const PureState &state, const DetectionPattern &pattern) {
    std::vector<ModeLabel> detected;
    for (const auto &[label, count] : pattern.assignments) {
        if (count < 0 || count > state.cutoff()) {
            throw std::invalid_argument(
                "detection count " + std::to_string(count) + " on mode " + label.str() + " is outside [0, cutoff]");
        }
        detected.push_back(label);
    }
    auto indices = detected_indices(state.modes(), detected);

    std::vector<ModeLabel> remaining_labels;
    std::vector<std::size_t> remaining;
    std::vector<int> wanted(state.modes().size(), -1);
    for (std::size_t i = 0; i < state.modes().size(); ++i) {
        if (std::binary_search(indices.begin(), indices.end(), i)) {
            wanted[i] = pattern.assignments.at(state.modes()[i]);
        } else {
            remaining_labels.push_back(state.modes()[i]);
            remaining.push_back(i);
        }
    }
    ModeSet remaining_modes(remaining_labels);

    PureState::TermMap kept;
    double probability = 0.0;
    OccupationVector reduced(remaining.size());
    for (const auto &[occupation, amplitude] : state.terms()) {
        bool match = true;
        for (std::size_t i : indices) {
            if (occupation[i] != wanted[i]) {
                match = false;
                break;
            }
        }
        if (!match) {
            continue;
        }
        for (std::size_t r = 0; r < remaining.size(); ++r) {
            reduced[r] = occupation[remaining[r]];
        }
        // Distinct full occupations with equal detected counts reduce to distinct vectors.
        kept.emplace(reduced, amplitude);
        probability += std::norm(amplitude);
    }

    if (probability == 0.0) {
        return HeraldOutcome{
            PureState::zero(remaining_modes, state.cutoff(), state.drop_threshold()),
            0.0,
            state.leaked_norm(),
        };
    }
    const double scale = 1.0 / std::sqrt(probability);
    for (auto &[occupation, amplitude] : kept) {
        amplitude *= scale;
    }
    return HeraldOutcome{
        PureState::from_terms(remaining_modes, state.cutoff(), std::move(kept), 0.0, state.drop_threshold()),
        probability,
        state.leaked_norm(),
    };
}

std::vector<PatternProbability> outcome_distribution(const PureState &state, std::span<const ModeLabel> detected) {
    auto indices = detected_indices(state.modes(), detected);

    std::map<std::vector<int>, double> weights;
    std::vector<int> counts(indices.size());
    for (const auto &[occupation, amplitude] : state.terms()) {
        for (std::size_t d = 0; d < indices.size(); ++d) {
            counts[d] = occupation[indices[d]];
        }
        weights[counts] += std::norm(amplitude);
    }

    std::vector<PatternProbability> out;
    out.reserve(weights.size());
    for (const auto &[pattern_counts, weight] : weights) {
        if (weight == 0.0) {
            continue;
        }
        DetectionPattern pattern;
        for (std::size_t d = 0; d < indices.size(); ++d) {
            pattern.assignments.emplace(state.modes()[indices[d]], pattern_counts[d]);
        }
        out.push_back({std::move(pattern), weight});
    }
    return out;
}

}  // namespace fockherald
