#pragma once

#include "fockherald/fock_state.h"
#include "fockherald/squeezer.h"

namespace fockherald {

struct TaylorOracleResult {
    PureState state;
    /// Bound on the discarded Taylor remainder summed over all substeps, plus
    /// the largest amplitude that reached the top of the workspace.
    double tail_bound = 0.0;
    int substeps = 0;
    /// Per-mode cutoff of the internal space the generator acts on.
    int workspace_cutoff = 0;
};

/// Slow verification path: exponentiates theta (a^dag b^dag - a b) by its
/// power series, with no use of the disentangled factorization.
///
/// The generator is unbounded, so the exponential is taken in an enlarged
/// workspace (amplitudes near its edge are below ~1e-20 for the requested
/// coupling) and split into substeps short enough that each one converges.
/// theta_terms caps the series order per substep. The result is truncated
/// back to the state's cutoff. Intended for cutoffs up to about 16.
TaylorOracleResult apply_squeezer_taylor_oracle(
    const PureState &state, const SqueezerSpec &spec, int theta_terms = 80);

/// max over occupations of |a(occ) - b(occ)|; both states must share a mode set.
double max_amplitude_deviation(const PureState &a, const PureState &b);

}  // namespace fockherald
