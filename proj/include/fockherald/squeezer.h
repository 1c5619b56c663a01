#pragma once

#include "fockherald/fock_state.h"
#include "fockherald/mode.h"

namespace fockherald {

/// Non-degenerate two-mode squeezer exp[theta (a^dag b^dag - a b)] with
/// coupling gamma = tanh^2(theta), theta >= 0.
struct SqueezerSpec {
    ModeLabel mode_a;
    ModeLabel mode_b;
    double gamma = 0.0;

    /// Throws std::invalid_argument unless mode_a != mode_b and gamma in [0, 1).
    void validate() const;
    double theta() const;
};

/// Type-II down-conversion between two polarized paths: pairs (H_a, V_b) and
/// (V_a, H_b) are squeezed with the same coupling.
struct PdcSpec {
    int path_a = 0;
    int path_b = 0;
    double gamma = 0.0;

    void validate() const;
    SqueezerSpec hv_pair() const { return {h_mode(path_a), v_mode(path_b), gamma}; }
    SqueezerSpec vh_pair() const { return {v_mode(path_a), h_mode(path_b), gamma}; }
};

/// gamma = tanh^2(theta).
double gamma_from_theta(double theta);

/// Applies the squeezer through its disentangled form
///
///     exp(s a^dag b^dag) (1 - gamma)^{(n_a + n_b + 1)/2} exp(-s a b),  s = sqrt(gamma),
///
/// factor by factor, right to left. The lowering series terminates on its own;
/// the raising series stops at the cutoff, and the weight it would have put
/// above the cutoff is added to leaked_norm. Retained amplitudes are the exact
/// matrix elements of the untruncated operator.
PureState apply_two_mode_squeezer(const PureState &state, const SqueezerSpec &spec);

/// <mp, np| S(gamma) |m, n> evaluated as a finite sum over the lowering order.
/// Exactly zero when mp - np != m - n.
double squeezer_matrix_element(int m, int n, int mp, int np, double gamma);

/// The two crossed-polarization squeezers commute, so they are applied in turn.
PureState apply_type2_pdc(const PureState &state, const PdcSpec &spec);

}  // namespace fockherald
