#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "fockherald/mode.h"

namespace fockherald {

using Amplitude = std::complex<double>;

/// Photon counts, one per mode, in the canonical order of the enclosing ModeSet.
using OccupationVector = std::vector<int>;

/// Squared amplitudes below this are pruned into the leaked-norm ledger.
inline constexpr double kDefaultDropThreshold = 1e-16;
/// Norms at or below this are treated as zero.
inline constexpr double kZeroNormThreshold = 1e-12;
/// Accumulated floating-point budget for one protocol run.
inline constexpr double kNumericalTolerance = 1e-10;

/// Sparse pure state over a truncated multi-mode Fock space.
///
/// Terms are kept in a std::map so iteration is lexicographic in the
/// occupation vector; every operation that accumulates amplitudes walks its
/// inputs in that order, which makes results bit-reproducible.
///
/// leaked_norm() is the squared amplitude discarded so far, either because a
/// term was pushed above the cutoff or because it fell below the drop
/// threshold.
class PureState {
   public:
    using TermMap = std::map<OccupationVector, Amplitude>;

    /// Zero state over no modes.
    PureState() = default;

    /// Single-term state with amplitude 1.
    static PureState basis(
        ModeSet modes, OccupationVector occupation, int cutoff, double drop_threshold = kDefaultDropThreshold);

    /// Validates every occupation against the mode set and cutoff, then prunes.
    static PureState from_terms(
        ModeSet modes,
        int cutoff,
        TermMap terms,
        double leaked_norm = 0.0,
        double drop_threshold = kDefaultDropThreshold);

    /// The zero vector (no terms).
    static PureState zero(ModeSet modes, int cutoff, double drop_threshold = kDefaultDropThreshold);

    const ModeSet &modes() const { return modes_; }
    int cutoff() const { return cutoff_; }
    double leaked_norm() const { return leaked_norm_; }
    double drop_threshold() const { return drop_threshold_; }
    const TermMap &terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    /// Zero when the occupation is not stored.
    Amplitude amplitude(const OccupationVector &occupation) const;
    double norm_squared() const;
    double norm() const;

    PureState scaled(Amplitude factor) const;
    PureState with_leaked_norm(double leaked_norm) const;

   private:
    PureState(ModeSet modes, int cutoff, TermMap terms, double leaked_norm, double drop_threshold);

    ModeSet modes_;
    int cutoff_ = 0;
    TermMap terms_;
    double leaked_norm_ = 0.0;
    double drop_threshold_ = kDefaultDropThreshold;
};

/// Linear combination; duplicate occupations merge by amplitude addition.
PureState superpose(std::span<const std::pair<Amplitude, PureState>> terms);

/// Product state on the union of two disjoint mode sets (re-sorted canonically).
PureState tensor(const PureState &a, const PureState &b);

/// <a|b>, conjugate-linear in a.
Amplitude inner_product(const PureState &a, const PureState &b);

/// Returns the unit-norm state and the original norm.
std::pair<PureState, double> normalize(const PureState &state, double zero_threshold = kZeroNormThreshold);

}  // namespace fockherald
