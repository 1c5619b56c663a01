#include "fockherald/fock_state.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fockherald {

namespace {

void check_cutoff(int cutoff) {
    if (cutoff < 0) {
        throw std::invalid_argument("cutoff must be nonnegative, got " + std::to_string(cutoff));
    }
}

void check_drop_threshold(double drop) {
    if (!(drop >= 0.0) || !std::isfinite(drop)) {
        throw std::invalid_argument("drop threshold must be finite and nonnegative");
    }
}

void check_occupation(const ModeSet &modes, int cutoff, const OccupationVector &occupation) {
    if (occupation.size() != modes.size()) {
        throw std::invalid_argument(
            "occupation vector has " + std::to_string(occupation.size()) + " entries but mode set " + modes.str() +
            " has " + std::to_string(modes.size()));
    }
    for (std::size_t i = 0; i < occupation.size(); ++i) {
        if (occupation[i] < 0) {
            throw std::invalid_argument("negative photon count on mode " + modes[i].str());
        }
        if (occupation[i] > cutoff) {
            throw std::invalid_argument(
                "photon count " + std::to_string(occupation[i]) + " on mode " + modes[i].str() +
                " exceeds cutoff " + std::to_string(cutoff));
        }
    }
}

void require_compatible(const PureState &a, const PureState &b, const char *what) {
    if (a.modes() != b.modes()) {
        throw std::invalid_argument(
            std::string(what) + ": mode sets differ (" + a.modes().str() + " vs " + b.modes().str() + ")");
    }
}

}  // namespace

PureState::PureState(ModeSet modes, int cutoff, TermMap terms, double leaked_norm, double drop_threshold)
    : modes_(std::move(modes)),
      cutoff_(cutoff),
      terms_(std::move(terms)),
      leaked_norm_(leaked_norm),
      drop_threshold_(drop_threshold) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        double weight = std::norm(it->second);
        if (it->second == Amplitude{} || weight < drop_threshold_) {
            leaked_norm_ += weight;
            it = terms_.erase(it);
        } else {
            ++it;
        }
    }
}

PureState PureState::basis(ModeSet modes, OccupationVector occupation, int cutoff, double drop_threshold) {
    check_cutoff(cutoff);
    check_drop_threshold(drop_threshold);
    check_occupation(modes, cutoff, occupation);
    TermMap terms;
    terms.emplace(std::move(occupation), Amplitude{1.0, 0.0});
    return PureState(std::move(modes), cutoff, std::move(terms), 0.0, drop_threshold);
}

PureState PureState::from_terms(ModeSet modes, int cutoff, TermMap terms, double leaked_norm, double drop_threshold) {
    check_cutoff(cutoff);
    check_drop_threshold(drop_threshold);
    if (!(leaked_norm >= 0.0)) {
        throw std::invalid_argument("leaked norm must be nonnegative");
    }
    for (const auto &[occupation, amplitude] : terms) {
        check_occupation(modes, cutoff, occupation);
        if (!std::isfinite(amplitude.real()) || !std::isfinite(amplitude.imag())) {
            throw std::invalid_argument("non-finite amplitude");
        }
    }
    return PureState(std::move(modes), cutoff, std::move(terms), leaked_norm, drop_threshold);
}

PureState PureState::zero(ModeSet modes, int cutoff, double drop_threshold) {
    check_cutoff(cutoff);
    check_drop_threshold(drop_threshold);
    return PureState(std::move(modes), cutoff, {}, 0.0, drop_threshold);
}

Amplitude PureState::amplitude(const OccupationVector &occupation) const {
    auto it = terms_.find(occupation);
    return it == terms_.end() ? Amplitude{} : it->second;
}

double PureState::norm_squared() const {
    double total = 0.0;
    for (const auto &[occupation, amplitude] : terms_) {
        total += std::norm(amplitude);
    }
    return total;
}

double PureState::norm() const { return std::sqrt(norm_squared()); }

PureState PureState::scaled(Amplitude factor) const {
    TermMap out;
    for (const auto &[occupation, amplitude] : terms_) {
        out.emplace_hint(out.end(), occupation, amplitude * factor);
    }
    return PureState(modes_, cutoff_, std::move(out), leaked_norm_ * std::norm(factor), drop_threshold_);
}

PureState PureState::with_leaked_norm(double leaked_norm) const {
    PureState copy = *this;
    copy.leaked_norm_ = leaked_norm;
    return copy;
}

PureState superpose(std::span<const std::pair<Amplitude, PureState>> terms) {
    if (terms.empty()) {
        throw std::invalid_argument("superpose needs at least one term");
    }
    const PureState &first = terms.front().second;
    PureState::TermMap merged;
    // Triangle-inequality bound on the leaked amplitude of the combination.
    double leaked_amplitude = 0.0;
    double drop = first.drop_threshold();
    for (const auto &[coefficient, state] : terms) {
        require_compatible(first, state, "superpose");
        if (state.cutoff() != first.cutoff()) {
            throw std::invalid_argument("superpose: cutoffs differ");
        }
        drop = std::min(drop, state.drop_threshold());
        leaked_amplitude += std::abs(coefficient) * std::sqrt(state.leaked_norm());
        for (const auto &[occupation, amplitude] : state.terms()) {
            merged[occupation] += coefficient * amplitude;
        }
    }
    return PureState::from_terms(
        first.modes(), first.cutoff(), std::move(merged), leaked_amplitude * leaked_amplitude, drop);
}

PureState tensor(const PureState &a, const PureState &b) {
    if (a.cutoff() != b.cutoff()) {
        throw std::invalid_argument("tensor: cutoffs differ");
    }
    std::vector<ModeLabel> labels(a.modes().labels().begin(), a.modes().labels().end());
    for (const auto &label : b.modes().labels()) {
        if (a.modes().contains(label)) {
            throw std::invalid_argument("tensor: mode " + label.str() + " appears in both factors");
        }
        labels.push_back(label);
    }
    ModeSet combined(labels);

    // Position of each concatenated entry in the canonical combined ordering.
    std::vector<std::size_t> slot(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        slot[i] = combined.index_of(labels[i]);
    }

    PureState::TermMap terms;
    OccupationVector occupation(labels.size());
    for (const auto &[occ_a, amp_a] : a.terms()) {
        for (std::size_t i = 0; i < occ_a.size(); ++i) {
            occupation[slot[i]] = occ_a[i];
        }
        for (const auto &[occ_b, amp_b] : b.terms()) {
            for (std::size_t i = 0; i < occ_b.size(); ++i) {
                occupation[slot[occ_a.size() + i]] = occ_b[i];
            }
            terms[occupation] += amp_a * amp_b;
        }
    }
    return PureState::from_terms(
        std::move(combined),
        a.cutoff(),
        std::move(terms),
        a.leaked_norm() + b.leaked_norm(),
        std::min(a.drop_threshold(), b.drop_threshold()));
}

Amplitude inner_product(const PureState &a, const PureState &b) {
    require_compatible(a, b, "inner_product");
    Amplitude total{};
    const auto &small = a.size() <= b.size() ? a.terms() : b.terms();
    const auto &large = a.size() <= b.size() ? b.terms() : a.terms();
    bool a_is_small = a.size() <= b.size();
    for (const auto &[occupation, amplitude] : small) {
        auto it = large.find(occupation);
        if (it == large.end()) {
            continue;
        }
        total += a_is_small ? std::conj(amplitude) * it->second : std::conj(it->second) * amplitude;
    }
    return total;
}

std::pair<PureState, double> normalize(const PureState &state, double zero_threshold) {
    double norm = state.norm();
    if (!(norm > zero_threshold)) {
        throw std::invalid_argument("cannot normalize a zero-norm state");
    }
    if (norm == 1.0) {
        return {state, norm};
    }
    return {state.scaled(1.0 / norm), norm};
}

}  // namespace fockherald
